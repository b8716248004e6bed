"""Exact factorization counts: total, refined by diagonal-factor count,
and connected.

Three independent routes are implemented and cross-checked in tests:

* dynamic programming by convolving the reflection indicator over the
  whole group (total and refined counts);
* direct enumeration of reflection tuples with an incremental
  union-find (the trusted oracle for connected counts);
* recursive inversion of the disjoint-block product formula, which
  expresses total counts as multinomial convolutions of connected
  counts over partitions of the element.

All counts are arbitrary-precision integers.
"""

from __future__ import annotations

import json
import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from . import __version__ as _tool_version
from .errors import (
    CacheConflictError,
    ConsistencyError,
    MissingCountError,
    ResourceLimitError,
    ValidationError,
)
from .groups import (
    GroupElement,
    GroupParams,
    partitions,
    relabel_to_dense,
)
from .indexing import GroupIndexer
from .kernels import encode_reflections, get_backend

DEFAULT_MAX_ENUM_TUPLES = 10**9
DEFAULT_MAX_DP_CELLS = 5 * 10**7


@dataclass(frozen=True)
class CountingLimits:
    """Budgets above which computations are refused instead of attempted."""

    max_enum_tuples: int = DEFAULT_MAX_ENUM_TUPLES
    max_dp_cells: int = DEFAULT_MAX_DP_CELLS


DEFAULT_LIMITS = CountingLimits()


@dataclass(frozen=True)
class Options:
    """Execution knobs shared by the counting entry points."""

    limits: CountingLimits = DEFAULT_LIMITS
    backend: Optional[str] = None
    threads: int = 1


DEFAULT_OPTIONS = Options()


def _check_dp(params: GroupParams, m: int, limits: CountingLimits) -> None:
    cells = params.group_order() * (m + 1)
    if cells > limits.max_dp_cells:
        raise ResourceLimitError(
            f"DP over {params} up to m={m} needs {cells} cells "
            f"(limit {limits.max_dp_cells})"
        )


def _check_enum(params: GroupParams, m: int, limits: CountingLimits) -> None:
    tuples = params.reflection_count() ** m
    if tuples > limits.max_enum_tuples:
        raise ResourceLimitError(
            f"enumeration over {params} at m={m} needs {tuples} tuples "
            f"(limit {limits.max_enum_tuples})"
        )


def _int64_safe(params: GroupParams, m: int) -> bool:
    # every DP/enumeration count is bounded by the number of m-tuples
    return max(params.reflection_count(), 2) ** m < 2**62


def _pick_backend(params: GroupParams, m: int, name: Optional[str]):
    backend = get_backend(name)
    if backend.BACKEND_NAME != "pure" and not _int64_safe(params, m):
        if name is not None:
            raise ResourceLimitError(
                f"compiled kernels cannot hold counts for m={m} over {params} "
                "in 64-bit integers; use the pure backend"
            )
        backend = get_backend("pure")
    return backend


_dp_cache: dict = {}
_enum_cache: dict = {}
_connected_cache: dict = {}
_CACHE_SLOTS = 16


def clear_caches() -> None:
    _dp_cache.clear()
    _enum_cache.clear()
    _connected_cache.clear()


def _cache_put(cache: dict, key, value):
    if len(cache) >= _CACHE_SLOTS:
        cache.pop(next(iter(cache)))
    cache[key] = value
    return value


def _dp_tables(params: GroupParams, m: int, kind: str, opts: Options):
    """kind 'total': rounds[j][g] for j<=m; kind 'refined': [m2][g] at round m."""
    _check_dp(params, m, opts.limits)
    backend = _pick_backend(params, m, opts.backend)
    key = (params, m, kind, backend.BACKEND_NAME)
    if key in _dp_cache:
        return _dp_cache[key]
    refl = encode_reflections(params)
    fn = backend.dp_total if kind == "total" else backend.dp_refined
    return _cache_put(_dp_cache, key, fn(params.r, params.s, params.n, refl, m))


def _enum_tables(params: GroupParams, m: int, opts: Options):
    """(total[m2][g], conn[m2][g]) over all m-tuples, split across threads
    by the choice of first factor."""
    _check_enum(params, m, opts.limits)
    _check_dp(params, m, opts.limits)  # result tables are dense over the group
    backend = _pick_backend(params, m, opts.backend)
    key = (params, m, backend.BACKEND_NAME)
    if key in _enum_cache:
        return _enum_cache[key]
    refl = encode_reflections(params)
    nrefl = len(refl)
    threads = max(1, opts.threads)
    args = (params.r, params.s, params.n, refl, m)
    if threads == 1 or m == 0 or nrefl < 2:
        result = backend.enum_bucketed(*args, 0, nrefl)
    else:
        bounds = [nrefl * t // threads for t in range(threads + 1)]
        slices = [
            (bounds[t], bounds[t + 1])
            for t in range(threads)
            if bounds[t] < bounds[t + 1]
        ]
        with ThreadPoolExecutor(max_workers=len(slices)) as pool:
            parts = list(
                pool.map(lambda se: backend.enum_bucketed(*args, *se), slices)
            )
        total, conn = parts[0]
        for ptotal, pconn in parts[1:]:
            for m2 in range(m + 1):
                trow, crow = total[m2], conn[m2]
                ptrow, pcrow = ptotal[m2], pconn[m2]
                for g in range(len(trow)):
                    trow[g] += ptrow[g]
                    crow[g] += pcrow[g]
        result = (total, conn)
    return _cache_put(_enum_cache, key, result)


def count_all(w: GroupElement, m: int, opts: Options = DEFAULT_OPTIONS) -> int:
    """Number of m-tuples of reflections multiplying to w."""
    if m < 0:
        raise ValidationError("m must be nonnegative")
    rounds = _dp_tables(w.params, m, "total", opts)
    return rounds[m][GroupIndexer(w.params).index_of(w)]


def count_refined(
    w: GroupElement, m1: int, m2: int, opts: Options = DEFAULT_OPTIONS
) -> int:
    """Number of (m1+m2)-tuples multiplying to w with exactly m2 diagonal
    factors (and m1 swap factors)."""
    if m1 < 0 or m2 < 0:
        raise ValidationError("m1 and m2 must be nonnegative")
    table = _dp_tables(w.params, m1 + m2, "refined", opts)
    return table[m2][GroupIndexer(w.params).index_of(w)]


def count_all_by_enum(w: GroupElement, m: int, opts: Options = DEFAULT_OPTIONS) -> int:
    """count_all recomputed by raw enumeration (cross-check path)."""
    total, _ = _enum_tables(w.params, m, opts)
    g = GroupIndexer(w.params).index_of(w)
    return sum(total[m2][g] for m2 in range(m + 1))


def count_connected_enum(
    w: GroupElement, m1: int, m2: int, opts: Options = DEFAULT_OPTIONS
) -> int:
    """Connected refined count by direct enumeration: the trusted oracle."""
    if m1 < 0 or m2 < 0:
        raise ValidationError("m1 and m2 must be nonnegative")
    _, conn = _enum_tables(w.params, m1 + m2, opts)
    return conn[m2][GroupIndexer(w.params).index_of(w)]


def count_connected_total_enum(
    w: GroupElement, m: int, opts: Options = DEFAULT_OPTIONS
) -> int:
    """Connected count over all diagonal/swap splits, by enumeration."""
    _, conn = _enum_tables(w.params, m, opts)
    g = GroupIndexer(w.params).index_of(w)
    return sum(conn[m2][g] for m2 in range(m + 1))


def _binomial_convolve(a: list[int], b: list[int], m: int) -> list[int]:
    """c[j] = sum over j1 of C(j, j1) a[j1] b[j-j1], truncated at m."""
    out = [0] * (m + 1)
    for j in range(m + 1):
        out[j] = sum(
            math.comb(j, j1) * a[j1] * b[j - j1]
            for j1 in range(j + 1)
            if a[j1] and b[j - j1]
        )
    return out


def _canonical_key(w: GroupElement, m: int):
    return (w.params, w.perm, w.exps, m)


def connected_from_all(
    w: GroupElement,
    m: int,
    opts: Options = DEFAULT_OPTIONS,
    table: "CountTable | None" = None,
) -> int:
    """Connected count obtained by inverting the partition product formula:
    subtract, from the total count, every way of splitting the element into
    two or more independent blocks with connected factorizations."""
    if m < 0:
        raise ValidationError("m must be nonnegative")

    def f_tilde(elem: GroupElement, mm: int) -> int:
        key = _canonical_key(elem, mm)
        if key in _connected_cache:
            return _connected_cache[key]
        parts = partitions(elem)
        value = count_all(elem, mm, opts)
        for part in parts:
            if len(part.blocks) < 2:
                continue
            acc = [1 if j == 0 else 0 for j in range(mm + 1)]
            for block in part.blocks:
                sub = relabel_to_dense(elem, block)
                vec = [f_tilde(sub, j) for j in range(mm + 1)]
                acc = _binomial_convolve(acc, vec, mm)
            value -= acc[mm]
        _cache_put_connected(key, value)
        return value

    result = f_tilde(w, m)
    if table is not None:
        table.insert(CountKey.of(w, m1=m, m2=None, connected=True), result, "inversion")
    return result


def _cache_put_connected(key, value):
    if len(_connected_cache) > 200000:
        _connected_cache.clear()
    _connected_cache[key] = value


def all_from_connected(
    w: GroupElement,
    m: int,
    table: "CountTable",
    opts: Options = DEFAULT_OPTIONS,
) -> int:
    """Reassemble the total count from connected counts: sum over all
    partitions of w and all factor-count splits across blocks, weighted by
    the multinomial number of interleavings."""
    result = 0
    for part in partitions(w):
        acc = [1 if j == 0 else 0 for j in range(m + 1)]
        for block in part.blocks:
            sub = relabel_to_dense(w, block)
            vec = []
            for j in range(m + 1):
                key = CountKey.of(sub, m1=j, m2=None, connected=True)
                value = table.get(key)
                if value is None:
                    raise MissingCountError(f"table missing {key}")
                vec.append(value)
            acc = _binomial_convolve(acc, vec, m)
        result += acc[m]
    return result


def populate_connected_table(
    w: GroupElement, max_m: int, opts: Options = DEFAULT_OPTIONS
) -> "CountTable":
    """Connected counts for every dense sub-block of w up to max_m, as
    needed by all_from_connected."""
    table = CountTable()
    seen = set()
    for part in partitions(w):
        for block in part.blocks:
            sub = relabel_to_dense(w, block)
            if sub in seen:
                continue
            seen.add(sub)
            for j in range(max_m + 1):
                table.insert(
                    CountKey.of(sub, m1=j, m2=None, connected=True),
                    connected_from_all(sub, j, opts),
                    "inversion",
                )
    return table


# ---------------------------------------------------------------------------
# Persistent count table


@dataclass(frozen=True)
class CountKey:
    """Identifies one cached count.  m2 is None for totals over all splits
    (the key then means: m1 factors of any kind)."""

    r: int
    s: int
    n: int
    perm: tuple[int, ...]
    exps: tuple[int, ...]
    m1: int
    m2: Optional[int]
    connected: bool

    @classmethod
    def of(
        cls, w: GroupElement, m1: int, m2: Optional[int], connected: bool
    ) -> "CountKey":
        return cls(
            w.params.r, w.params.s, w.params.n, w.perm, w.exps, m1, m2, connected
        )

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "s": self.s,
            "n": self.n,
            "perm": list(self.perm),
            "exps": list(self.exps),
            "m1": self.m1,
            "m2": self.m2,
            "connected": self.connected,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CountKey":
        try:
            return cls(
                int(data["r"]),
                int(data["s"]),
                int(data["n"]),
                tuple(int(x) for x in data["perm"]),
                tuple(int(x) for x in data["exps"]),
                int(data["m1"]),
                None if data["m2"] is None else int(data["m2"]),
                bool(data["connected"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed count key: {exc}") from exc


@dataclass
class CountTable:
    """In-memory count store with provenance tracking and JSON-lines
    persistence.  Conflicting values for one key are rejected.  Inserts
    are serialized through a lock; readers see plain dict snapshots."""

    entries: dict = field(default_factory=dict)  # CountKey -> (int, set[str])
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def insert(self, key: CountKey, value: int, provenance: str) -> None:
        if value < 0:
            raise ValidationError(f"counts are nonnegative, got {value}")
        with self._lock:
            if key in self.entries:
                old_value, provs = self.entries[key]
                if old_value != value:
                    raise ConsistencyError(
                        f"conflicting counts for {key}: {old_value} ({sorted(provs)}) "
                        f"vs {value} ({provenance})"
                    )
                provs.add(provenance)
            else:
                self.entries[key] = (value, {provenance})

    def get(self, key: CountKey) -> Optional[int]:
        entry = self.entries.get(key)
        return entry[0] if entry else None

    def provenances(self, key: CountKey) -> set[str]:
        entry = self.entries.get(key)
        return set(entry[1]) if entry else set()

    def __len__(self) -> int:
        return len(self.entries)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for key in sorted(self.entries, key=lambda k: json.dumps(k.to_json())):
                value, provs = self.entries[key]
                for prov in sorted(provs):
                    record = {
                        "key": key.to_json(),
                        "value": str(value),
                        "provenance": prov,
                        "tool_version": _tool_version,
                    }
                    fh.write(json.dumps(record, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> "CountTable":
        table = cls()
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    key = CountKey.from_json(record["key"])
                    value = int(record["value"])
                    prov = str(record["provenance"])
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise ValidationError(f"{path}:{lineno}: bad record: {exc}") from exc
                try:
                    table.insert(key, value, prov)
                except ConsistencyError as exc:
                    raise CacheConflictError(f"{path}:{lineno}: {exc}") from exc
        return table
