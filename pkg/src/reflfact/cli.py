"""Command-line front end.

Every subcommand prints exactly one JSON document (sorted keys) on
stdout; diagnostics go to stderr.  Exit codes: 0 success, 2 usage
error, 3 validation error, 4 resource refusal, 5 internal consistency
failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .counting import (
    CountingLimits,
    CountKey,
    CountTable,
    Options,
    all_from_connected,
    connected_from_all,
    count_all,
    count_connected_enum,
    count_connected_total_enum,
    count_refined,
)
from .errors import ReflFactError, UsageError, ValidationError
from .graphs import DecoratedGraph, all_walks, evaluate, is_connected, walk_weight
from .groups import (
    GroupElement,
    GroupParams,
    cycle_type,
    entry_product,
    is_trivial_product,
    permutation_part,
    reflections,
)
from .polyfit import (
    CycleType,
    collect_samples,
    fit_grsn_polynomial,
    fit_sn_polynomial,
    normalization_verdict,
)
from .series import (
    comparison_mismatches,
    comparison_refined,
    comparison_total,
    connected_series,
    cyclic_series,
    long_cycle_series,
    sn_long_cycle_series,
)


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


def _load_json_arg(text: str):
    """Parse inline JSON, or @path to read it from a file."""
    if text.startswith("@"):
        try:
            with open(text[1:], "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read {text[1:]}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON argument: {exc}") from exc


def _params(args) -> GroupParams:
    return GroupParams(args.r, args.s, args.n)


def _element(args, params: GroupParams) -> GroupElement:
    return GroupElement.from_json(_load_json_arg(args.omega), params)


def _options(args) -> Options:
    limits = CountingLimits(
        max_enum_tuples=args.max_enum_tuples, max_dp_cells=args.max_dp_cells
    )
    return Options(limits=limits, backend=args.backend, threads=args.threads)


def _with_cache(args, compute):
    """Run compute(table) with an optional persistent JSON-lines cache."""
    if args.cache:
        table = CountTable.load(args.cache) if os.path.exists(args.cache) else CountTable()
    else:
        table = CountTable()
    result = compute(table)
    if args.cache:
        table.save(args.cache)
    return result


def _add_common(parser: argparse.ArgumentParser, with_params=True) -> None:
    if with_params:
        parser.add_argument("--r", type=int, required=True)
        parser.add_argument("--s", type=int, required=True)
        parser.add_argument("--n", type=int, required=True)
    parser.add_argument(
        "--backend",
        choices=["pure", "compiled"],
        default=None,
        help="kernel backend (default: compiled when built)",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=os.cpu_count() or 1,
        help="worker threads for tuple enumeration",
    )
    parser.add_argument("--max-enum-tuples", type=int, default=10**9)
    parser.add_argument("--max-dp-cells", type=int, default=5 * 10**7)
    parser.add_argument("--cache", default=None, help="JSON-lines count cache path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reflfact",
        description="Exact reflection-factorization counts in G(r,s,n)",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reflections", help="list the reflection generating set")
    _add_common(p)

    p = sub.add_parser("count", help="total factorization count f_m")
    _add_common(p)
    p.add_argument("--omega", required=True, help="element JSON (inline or @file)")
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("count-refined", help="refined count by swap/diagonal split")
    _add_common(p)
    p.add_argument("--omega", required=True)
    p.add_argument("--m1", type=int, required=True)
    p.add_argument("--m2", type=int, required=True)

    p = sub.add_parser("count-connected", help="connected factorization count")
    _add_common(p)
    p.add_argument("--omega", required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--m1", type=int, default=None)
    p.add_argument("--m2", type=int, default=None)
    p.add_argument(
        "--method",
        choices=["enum", "inversion", "comparison"],
        default="inversion",
    )

    p = sub.add_parser(
        "verify-comparison",
        help="exhaustively check the comparison formula against enumeration",
    )
    _add_common(p)
    p.add_argument("--max-m", type=int, required=True)

    p = sub.add_parser("series", help="exact truncated generating series")
    _add_common(p, with_params=False)
    p.add_argument(
        "--kind",
        choices=["cyclic", "connected", "sn-long-cycle", "long-cycle"],
        required=True,
    )
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--q", type=int, help="cyclic group order (kind=cyclic)")
    p.add_argument("--t", type=int, default=0, help="target exponent")
    p.add_argument("--r", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--omega", help="element JSON (kind=connected)")

    p = sub.add_parser("fit", help="fit the symmetric polynomial behind connected counts")
    _add_common(p, with_params=False)
    p.add_argument("--g", required=True, help="genus parameter (integer or half-integer)")
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--s", type=int, default=1)
    p.add_argument(
        "--trivial-product",
        type=int,
        choices=[0, 1],
        default=1,
        help="entry-product class of the sampled elements",
    )
    p.add_argument(
        "--normalization", choices=["printed", "derived", "verdict"], default="derived"
    )
    p.add_argument(
        "--n-values",
        required=True,
        help="comma-separated n to sample, e.g. 2,3,4",
    )

    p = sub.add_parser("walks", help="ordered edge walks of a decorated graph")
    p.add_argument("--graph", required=True, help="graph JSON (inline or @file)")

    return parser


def _cmd_reflections(args) -> dict:
    params = _params(args)
    refs = reflections(params)
    return {
        "r": params.r,
        "s": params.s,
        "n": params.n,
        "count": len(refs),
        "reflections": [ref.to_json() for ref in refs],
    }


def _cmd_count(args) -> dict:
    params = _params(args)
    w = _element(args, params)
    opts = _options(args)

    def compute(table: CountTable) -> int:
        key = CountKey.of(w, m1=args.m, m2=None, connected=False)
        cached = table.get(key)
        if cached is not None:
            return cached
        value = count_all(w, args.m, opts)
        table.insert(key, value, "dp")
        return value

    return {"count": str(_with_cache(args, compute))}


def _cmd_count_refined(args) -> dict:
    params = _params(args)
    w = _element(args, params)
    opts = _options(args)

    def compute(table: CountTable) -> int:
        key = CountKey.of(w, m1=args.m1, m2=args.m2, connected=False)
        cached = table.get(key)
        if cached is not None:
            return cached
        value = count_refined(w, args.m1, args.m2, opts)
        table.insert(key, value, "dp")
        return value

    return {"count": str(_with_cache(args, compute))}


def _cmd_count_connected(args) -> dict:
    params = _params(args)
    w = _element(args, params)
    opts = _options(args)
    split = args.m1 is not None or args.m2 is not None
    if split and (args.m1 is None or args.m2 is None):
        raise UsageError("--m1 and --m2 must be given together")
    if split and args.m is not None:
        raise UsageError("give either --m or --m1/--m2, not both")
    if not split and args.m is None:
        raise UsageError("one of --m or --m1/--m2 is required")
    if args.method == "inversion" and split:
        raise UsageError("--method inversion computes totals; use --m")

    def compute(table: CountTable) -> int:
        if split:
            key = CountKey.of(w, m1=args.m1, m2=args.m2, connected=True)
        else:
            key = CountKey.of(w, m1=args.m, m2=None, connected=True)
        cached = table.get(key)
        if cached is not None:
            return cached
        if args.method == "enum":
            value = (
                count_connected_enum(w, args.m1, args.m2, opts)
                if split
                else count_connected_total_enum(w, args.m, opts)
            )
            provenance = "enumeration"
        elif args.method == "comparison":
            value = (
                comparison_refined(w, args.m1, args.m2, opts)
                if split
                else comparison_total(w, args.m, opts)
            )
            provenance = "closed-form"
        else:
            value = connected_from_all(w, args.m, opts)
            provenance = "inversion"
        table.insert(key, value, provenance)
        return value

    return {"count": str(_with_cache(args, compute)), "method": args.method}


def _cmd_verify_comparison(args) -> dict:
    params = _params(args)
    opts = _options(args)
    checks, mismatches = comparison_mismatches(params, args.max_m, opts)
    payload = {
        "r": params.r,
        "s": params.s,
        "n": params.n,
        "max_m": args.max_m,
        "checked": checks,
        "mismatches": [
            {
                "omega": bad.element.to_json(),
                "m1": bad.m1,
                "m2": bad.m2,
                "formula": str(bad.formula),
                "enumeration": str(bad.enumeration),
            }
            for bad in mismatches
        ],
    }
    if mismatches:
        raise CliConsistencyFailure(payload)
    return payload


class CliConsistencyFailure(ReflFactError):
    """Verification-style subcommand found mismatches; payload still printed."""

    def __init__(self, payload: dict):
        super().__init__("consistency check failed")
        self.payload = payload


def _cmd_series(args) -> dict:
    opts = _options(args)
    if args.kind == "cyclic":
        q = args.q
        if q is None:
            if args.r is None or args.s is None:
                raise UsageError("kind=cyclic needs --q or both --r and --s")
            q = GroupParams(args.r, args.s, 1).q
        series = cyclic_series(q, args.t, args.order)
        meta = {"q": q, "t": args.t}
    elif args.kind == "sn-long-cycle":
        if args.n is None:
            raise UsageError("kind=sn-long-cycle needs --n")
        series = sn_long_cycle_series(args.n, args.order)
        meta = {"n": args.n}
    elif args.kind == "long-cycle":
        if args.r is None or args.s is None or args.n is None:
            raise UsageError("kind=long-cycle needs --r, --s, --n")
        params = GroupParams(args.r, args.s, args.n)
        series = long_cycle_series(params, args.t, args.order)
        meta = {"r": args.r, "s": args.s, "n": args.n, "t": args.t}
    else:
        if args.r is None or args.s is None or args.n is None or args.omega is None:
            raise UsageError("kind=connected needs --r, --s, --n, --omega")
        params = GroupParams(args.r, args.s, args.n)
        w = GroupElement.from_json(_load_json_arg(args.omega), params)
        series = connected_series(w, args.order, opts)
        meta = {"r": args.r, "s": args.s, "n": args.n}
    payload = {"kind": args.kind, **meta, **series.to_json()}
    return payload


def _parse_genus(text: str) -> Fraction:
    try:
        g = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad genus {text!r}: {exc}") from exc
    if g < 0 or (2 * g).denominator != 1:
        raise ValidationError("genus must be a nonnegative integer or half-integer")
    return g


def _cmd_fit(args) -> dict:
    opts = _options(args)
    g = _parse_genus(args.g)
    try:
        n_values = [int(x) for x in args.n_values.split(",") if x]
    except ValueError as exc:
        raise ValidationError(f"bad --n-values: {exc}") from exc
    if not n_values:
        raise ValidationError("--n-values is empty")
    if args.normalization == "verdict":
        verdict = normalization_verdict(g, args.ell, args.r, args.s, n_values, opts)
        return {"verdict": verdict.to_json()}
    trivial = bool(args.trivial_product)
    samples = collect_samples(args.r, args.s, g, args.ell, trivial, n_values, opts)
    if args.r == 1 and args.s == 1:
        report = fit_sn_polynomial(g, args.ell, [(c, v) for c, _, v in samples])
    else:
        report = fit_grsn_polynomial(
            g, args.ell, trivial, args.r, args.s, args.normalization, samples
        )
    return {"fit": report.to_json()}


def _cmd_walks(args) -> dict:
    graph = DecoratedGraph.from_json(_load_json_arg(args.graph))
    walks = all_walks(graph)
    element = evaluate(graph)
    return {
        "r": graph.params.r,
        "s": graph.params.s,
        "n": graph.params.n,
        "connected": is_connected(graph),
        "element": element.to_json(),
        "walks": [
            {
                "vertex": walk.start,
                "end": walk.end,
                "weight": walk_weight(graph, walk),
                "steps": [
                    {"edge": idx + 1, "tail": tail, "head": head}
                    for idx, tail, head in walk.steps
                ],
            }
            for walk in walks
        ],
    }


_HANDLERS = {
    "reflections": _cmd_reflections,
    "count": _cmd_count,
    "count-refined": _cmd_count_refined,
    "count-connected": _cmd_count_connected,
    "verify-comparison": _cmd_verify_comparison,
    "series": _cmd_series,
    "fit": _cmd_fit,
    "walks": _cmd_walks,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        payload = _HANDLERS[args.command](args)
    except CliConsistencyFailure as exc:
        _emit(exc.payload)
        print(f"reflfact: {exc}", file=sys.stderr)
        return exc.exit_code
    except ReflFactError as exc:
        print(f"reflfact: {exc}", file=sys.stderr)
        return exc.exit_code
    _emit(payload)
    return 0


if __name__ == "__main__":
    sys.exit(main())
