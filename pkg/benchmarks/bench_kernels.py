#!/usr/bin/env python3
"""Benchmark the pure-Python kernels against the compiled extension.

Usage:
    python benchmarks/bench_kernels.py [--quick] [--threads N]

Covers the two hot loops (group-algebra DP and tuple enumeration) on
desk-scale groups, and thread scaling for the enumeration (effective
only for the compiled backend, which releases the GIL).
"""

from __future__ import annotations

import argparse
import time

from reflfact.counting import Options, clear_caches, count_connected_total_enum
from reflfact.groups import GroupParams, identity
from reflfact.kernels import available_backends, encode_reflections, get_backend


def time_call(fn, *args, repeat: int = 1):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_case(name, params: GroupParams, m: int, kind: str):
    refl = encode_reflections(params)
    args = (params.r, params.s, params.n, refl, m)
    rows = []
    reference = None
    for backend_name in available_backends():
        backend = get_backend(backend_name)
        if kind == "dp":
            seconds, result = time_call(backend.dp_total, *args)
        else:
            seconds, result = time_call(backend.enum_bucketed, *args, 0, len(refl))
        if reference is None:
            reference = result
        elif kind == "dp":
            assert result == reference, "backend disagreement"
        else:
            assert tuple(result) == tuple(reference), "backend disagreement"
        rows.append((backend_name, seconds))
    base = dict(rows).get("pure")
    print(f"\n{name}  (|G|={params.group_order()}, |R|={len(refl)}, m={m})")
    for backend_name, seconds in rows:
        speedup = f"  ({base / seconds:6.1f}x)" if base and backend_name != "pure" else ""
        print(f"  {backend_name:9s} {seconds * 1000:10.1f} ms{speedup}")


def bench_threads(params: GroupParams, m: int, threads: int):
    if "compiled" not in available_backends():
        print("\nthread scaling: skipped (compiled backend not built)")
        return
    w = identity(params)
    print(f"\nthread scaling, enumeration over {params} at m={m} (compiled)")
    for t in (1, threads):
        clear_caches()
        opts = Options(backend="compiled", threads=t)
        seconds, _ = time_call(count_connected_total_enum, w, m, opts)
        print(f"  threads={t:<2d} {seconds * 1000:10.1f} ms")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller workloads")
    parser.add_argument("--threads", type=int, default=4)
    args = parser.parse_args()

    print("backends available:", ", ".join(available_backends()))
    if args.quick:
        bench_case("DP over G(6,2,2)", GroupParams(6, 2, 2), 6, "dp")
        bench_case("enumeration over G(6,2,2)", GroupParams(6, 2, 2), 4, "enum")
        bench_threads(GroupParams(6, 2, 2), 5, args.threads)
    else:
        bench_case("DP over G(6,2,3)", GroupParams(6, 2, 3), 6, "dp")
        bench_case("DP over G(3,1,4)", GroupParams(3, 1, 4), 5, "dp")
        bench_case("enumeration over G(6,2,2)", GroupParams(6, 2, 2), 5, "enum")
        bench_case("enumeration over G(6,2,3)", GroupParams(6, 2, 3), 4, "enum")
        bench_threads(GroupParams(6, 2, 3), 5, args.threads)


if __name__ == "__main__":
    main()
