"""Command-line interface: outputs, exit codes, cache behavior, determinism."""

import json

from reflfact.cli import main
from reflfact.errors import (
    EXIT_CONSISTENCY,
    EXIT_OK,
    EXIT_RESOURCE,
    EXIT_USAGE,
    EXIT_VALIDATION,
)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_json(capsys, *argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == EXIT_OK, err
    return json.loads(out)


def test_count_example(capsys):
    payload = run_json(
        capsys,
        "count",
        "--r", "1", "--s", "1", "--n", "3",
        "--omega", '{"perm":[2,3,1],"exps":[0,0,0]}',
        "--m", "2",
    )
    assert payload == {"count": "3"}


def test_count_m0_identity(capsys):
    payload = run_json(
        capsys,
        "count",
        "--r", "2", "--s", "1", "--n", "2",
        "--omega", '{"perm":[1,2],"exps":[0,0]}',
        "--m", "0",
    )
    assert payload == {"count": "1"}


def test_count_refined_and_connected(capsys):
    omega = '{"perm":[2,1],"exps":[0,1]}'
    base = ["--r", "2", "--s", "1", "--n", "2", "--omega", omega]
    assert run_json(capsys, "count-refined", *base, "--m1", "1", "--m2", "1") == {
        "count": "4"
    }
    for method in ("enum", "comparison"):
        payload = run_json(
            capsys, "count-connected", *base, "--m1", "1", "--m2", "1",
            "--method", method,
        )
        assert payload["count"] == "4"
    payload = run_json(
        capsys, "count-connected", *base, "--m", "2", "--method", "inversion"
    )
    assert payload["count"] == "4"


def test_walks_reference(capsys, reference_graph):
    payload = run_json(capsys, "walks", "--graph", json.dumps(reference_graph.to_json()))
    walks = {w["vertex"]: w for w in payload["walks"]}
    assert walks[3]["end"] == 1 and walks[3]["weight"] == 4
    assert walks[4]["end"] == 3 and walks[4]["weight"] == -2
    assert payload["element"]["perm"] == [2, 4, 1, 3]
    assert payload["element"]["exps"] == [1, 3, 4, 4]
    assert payload["connected"] is True


def test_reflections_counts(capsys):
    payload = run_json(capsys, "reflections", "--r", "6", "--s", "2", "--n", "4")
    assert payload["count"] == 44
    assert payload["reflections"][0] == {"swap": [1, 2, 0]}
    assert payload["reflections"][-1] == {"diag": [4, 2]}


def test_verify_comparison(capsys):
    payload = run_json(
        capsys, "verify-comparison", "--r", "2", "--s", "1", "--n", "2", "--max-m", "5"
    )
    assert payload["mismatches"] == []
    assert payload["checked"] == 8 * 21  # |G| elements x splits with m <= 5


def test_series_kinds(capsys):
    payload = run_json(capsys, "series", "--kind", "cyclic", "--q", "2", "--t", "0",
                       "--order", "6")
    assert payload["counts"] == ["1", "0", "1", "0", "1", "0", "1"]
    payload = run_json(capsys, "series", "--kind", "sn-long-cycle", "--n", "3",
                       "--order", "4")
    assert payload["counts"] == ["0", "0", "3", "0", "27"]
    payload = run_json(
        capsys, "series", "--kind", "long-cycle",
        "--r", "2", "--s", "2", "--n", "2", "--t", "0", "--order", "5",
    )
    assert payload["counts"] == ["0", "1", "0", "4", "0", "16"]
    payload = run_json(
        capsys, "series", "--kind", "connected",
        "--r", "2", "--s", "1", "--n", "2",
        "--omega", '{"perm":[2,1],"exps":[0,1]}', "--order", "4",
    )
    assert payload["counts"] == ["0", "0", "4", "0", "64"]


def test_fit_command(capsys):
    payload = run_json(
        capsys, "fit", "--g", "1", "--ell", "1", "--n-values", "2,3",
    )
    poly = payload["fit"]["polynomial"]
    assert poly["terms"] == [
        {"exponents": [0], "coefficient": "-1/24"},
        {"exponents": [1], "coefficient": "1/24"},
    ]
    assert payload["fit"]["window_ok"] is True

    verdict = run_json(
        capsys, "fit", "--g", "0", "--ell", "1", "--r", "2", "--s", "1",
        "--normalization", "verdict", "--n-values", "2,3,4",
    )
    assert verdict["verdict"]["winners"] == ["derived"]


def test_exit_codes(capsys):
    # usage: unknown flag
    code, _, _ = run_cli(capsys, "count", "--bogus")
    assert code == EXIT_USAGE
    # usage: inconsistent flag combination
    code, _, err = run_cli(
        capsys, "count-connected", "--r", "1", "--s", "1", "--n", "2",
        "--omega", '{"perm":[1,2],"exps":[0,0]}', "--m1", "1",
    )
    assert code == EXIT_USAGE and "m2" in err
    # validation: s does not divide r
    code, _, err = run_cli(
        capsys, "count", "--r", "2", "--s", "3", "--n", "2",
        "--omega", '{"perm":[1,2],"exps":[0,0]}', "--m", "1",
    )
    assert code == EXIT_VALIDATION and "divide" in err
    # validation: malformed element JSON
    code, _, err = run_cli(
        capsys, "count", "--r", "2", "--s", "1", "--n", "2",
        "--omega", "{not json", "--m", "1",
    )
    assert code == EXIT_VALIDATION
    # resource refusal
    code, _, err = run_cli(
        capsys, "count", "--r", "6", "--s", "1", "--n", "4",
        "--omega", '{"perm":[1,2,3,4],"exps":[0,0,0,0]}', "--m", "3",
        "--max-dp-cells", "10",
    )
    assert code == EXIT_RESOURCE


def test_cache_roundtrip(capsys, tmp_path):
    cache = tmp_path / "counts.jsonl"
    args = (
        "count", "--r", "1", "--s", "1", "--n", "3",
        "--omega", '{"perm":[2,3,1],"exps":[0,0,0]}',
        "--m", "2", "--cache", str(cache),
    )
    assert run_json(capsys, *args) == {"count": "3"}
    first = cache.read_text()
    assert run_json(capsys, *args) == {"count": "3"}  # served from cache
    assert cache.read_text() == first
    record = json.loads(first.splitlines()[0])
    assert record["value"] == "3" and record["provenance"] == "dp"


def test_cache_conflict_exit(capsys, tmp_path):
    cache = tmp_path / "counts.jsonl"
    args = (
        "count", "--r", "1", "--s", "1", "--n", "3",
        "--omega", '{"perm":[2,3,1],"exps":[0,0,0]}',
        "--m", "2", "--cache", str(cache),
    )
    run_json(capsys, *args)
    line = json.loads(cache.read_text().splitlines()[0])
    line["value"] = "99"
    line["provenance"] = "enumeration"
    with open(cache, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(line) + "\n")
    code, _, err = run_cli(capsys, *args)
    assert code == EXIT_CONSISTENCY and "conflict" in err.lower()


def test_omega_from_file(capsys, tmp_path):
    path = tmp_path / "omega.json"
    path.write_text('{"perm":[2,3,1],"exps":[0,0,0]}')
    payload = run_json(
        capsys, "count", "--r", "1", "--s", "1", "--n", "3",
        "--omega", f"@{path}", "--m", "2",
    )
    assert payload == {"count": "3"}


def test_big_count_through_json(capsys):
    payload = run_json(
        capsys, "count", "--r", "2", "--s", "1", "--n", "2",
        "--omega", '{"perm":[1,2],"exps":[0,0]}', "--m", "80",
    )
    assert int(payload["count"]) > 2**63


def test_fit_half_integer_genus(capsys):
    payload = run_json(
        capsys, "fit", "--g", "1/2", "--ell", "1", "--r", "2", "--s", "1",
        "--trivial-product", "0", "--normalization", "derived",
        "--n-values", "2,3,4",
    )
    terms = payload["fit"]["polynomial"]["terms"]
    assert terms == [{"exponents": [-1], "coefficient": "1/2"}]


def test_deterministic_output(capsys):
    args = (
        "verify-comparison", "--r", "2", "--s", "2", "--n", "2", "--max-m", "4",
    )
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert out1 == out2
    # sorted keys
    payload = json.loads(out1)
    assert list(payload.keys()) == sorted(payload.keys())
