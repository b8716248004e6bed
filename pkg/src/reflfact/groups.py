"""Exact arithmetic for the wreath-like reflection groups G(r,s,n).

An element is a generalized permutation matrix: it sends basis vector
v_i to zeta^(exps[i]) * v_(perm[i]), where zeta = exp(2*pi*i/r).  We
never touch complex numbers; everything is the permutation plus the
integer exponent vector reduced mod r, subject to sum(exps) = 0 mod s.

Vertex indices are 1-based everywhere in the public API (including
JSON); internal helpers use 0-based tuples.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ValidationError


@dataclass(frozen=True)
class GroupParams:
    """The triple (r, s, n) with s | r; fixes one group G(r,s,n)."""

    r: int
    s: int
    n: int

    def __post_init__(self):
        if self.r < 1 or self.s < 1 or self.n < 1:
            raise ValidationError(f"r, s, n must be positive, got {self}")
        if self.r % self.s != 0:
            raise ValidationError(f"s must divide r, got r={self.r}, s={self.s}")

    @property
    def q(self) -> int:
        """Order r/s of the cyclic group the entry product lands in."""
        return self.r // self.s

    def group_order(self) -> int:
        return math.factorial(self.n) * self.r**self.n // self.s

    def reflection_count(self) -> int:
        return (self.n * (self.n - 1) // 2) * self.r + self.n * (self.q - 1)


@dataclass(frozen=True)
class GroupElement:
    """A group element as (perm, exps): v_i -> zeta^exps[i] v_perm[i]."""

    params: GroupParams
    perm: tuple[int, ...]  # 1-based images
    exps: tuple[int, ...]

    def __post_init__(self):
        n, r, s = self.params.n, self.params.r, self.params.s
        if len(self.perm) != n or len(self.exps) != n:
            raise ValidationError(f"perm/exps must have length n={n}")
        if sorted(self.perm) != list(range(1, n + 1)):
            raise ValidationError(f"perm is not a bijection of 1..{n}: {self.perm}")
        if any(not 0 <= e < r for e in self.exps):
            raise ValidationError(f"exponents must lie in [0,{r}): {self.exps}")
        if sum(self.exps) % s != 0:
            raise ValidationError(
                f"exponent sum {sum(self.exps)} not divisible by s={s}"
            )

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def apply(self, i: int) -> tuple[int, int]:
        """Image of basis vector i: the pair (perm[i], exps[i])."""
        if not 1 <= i <= self.params.n:
            raise ValidationError(f"vertex index {i} out of range 1..{self.params.n}")
        return self.perm[i - 1], self.exps[i - 1]

    def inverse(self) -> "GroupElement":
        n, r = self.params.n, self.params.r
        perm = [0] * n
        exps = [0] * n
        for i in range(n):
            j = self.perm[i] - 1
            perm[j] = i + 1
            exps[j] = (-self.exps[i]) % r
        return GroupElement(self.params, tuple(perm), tuple(exps))

    def is_identity(self) -> bool:
        return all(self.perm[i] == i + 1 for i in range(self.params.n)) and not any(
            self.exps
        )

    def to_json(self) -> dict:
        return {
            "r": self.params.r,
            "s": self.params.s,
            "n": self.params.n,
            "perm": list(self.perm),
            "exps": list(self.exps),
        }

    @classmethod
    def from_json(cls, data: dict, params: GroupParams | None = None) -> "GroupElement":
        """Parse {"perm": ..., "exps": ...}, with r/s/n from `params` or the JSON itself."""
        if not isinstance(data, dict):
            raise ValidationError(f"element JSON must be an object, got {type(data)}")
        if params is None:
            try:
                params = GroupParams(data["r"], data["s"], data["n"])
            except KeyError as exc:
                raise ValidationError(f"element JSON missing field {exc}") from exc
        else:
            for name, want in (("r", params.r), ("s", params.s), ("n", params.n)):
                if name in data and data[name] != want:
                    raise ValidationError(
                        f"element JSON has {name}={data[name]} but expected {want}"
                    )
        try:
            perm = tuple(int(x) for x in data["perm"])
            exps = tuple(int(x) for x in data["exps"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed element JSON: {exc}") from exc
        return cls(params, perm, exps)


def identity(params: GroupParams) -> GroupElement:
    return GroupElement(params, tuple(range(1, params.n + 1)), (0,) * params.n)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    """Composition acting as v_i -> a(b(v_i)); b is applied first."""
    if a.params != b.params:
        raise ValidationError(f"parameter mismatch: {a.params} vs {b.params}")
    n, r = a.params.n, a.params.r
    perm = tuple(a.perm[b.perm[i] - 1] for i in range(n))
    exps = tuple((b.exps[i] + a.exps[b.perm[i] - 1]) % r for i in range(n))
    return GroupElement(a.params, perm, exps)


def product(factors: Iterable[GroupElement], params: GroupParams) -> GroupElement:
    """Evaluate a word (f_1, ..., f_m) as f_m * ... * f_1 (rightmost applied first)."""
    acc = identity(params)
    for f in factors:
        acc = multiply(f, acc)
    return acc


def permutation_part(w: GroupElement) -> GroupElement:
    """Forget the root-of-unity entries: the image in G(1,1,n) = S_n."""
    params = GroupParams(1, 1, w.params.n)
    return GroupElement(params, w.perm, (0,) * w.params.n)


def entry_product(w: GroupElement) -> int:
    """Exponent t in [0, r/s) such that the product of the nonzero
    entries equals the t-th power of the primitive (r/s)-th root of unity."""
    s, q = w.params.s, w.params.q
    return (sum(w.exps) // s) % q


def is_trivial_product(w: GroupElement) -> bool:
    """Whether the product of the nonzero entries equals 1."""
    return entry_product(w) == 0


@dataclass(frozen=True)
class CycleType:
    """Multiset of cycle lengths of the underlying permutation."""

    parts: tuple[int, ...]

    def __post_init__(self):
        if any(p < 1 for p in self.parts):
            raise ValidationError(f"cycle lengths must be positive: {self.parts}")
        if tuple(sorted(self.parts, reverse=True)) != self.parts:
            raise ValidationError(f"parts must be sorted descending: {self.parts}")

    @property
    def ell(self) -> int:
        """Number of cycles."""
        return len(self.parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @classmethod
    def of(cls, parts: Iterable[int]) -> "CycleType":
        return cls(tuple(sorted(parts, reverse=True)))


def permutation_cycles(w: GroupElement) -> list[tuple[int, ...]]:
    """Cycles of the underlying permutation, each starting at its minimal
    vertex, ordered by that minimum."""
    n = w.params.n
    seen = [False] * n
    cycles = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = []
        i = start
        while not seen[i]:
            seen[i] = True
            cyc.append(i + 1)
            i = w.perm[i] - 1
        cycles.append(tuple(cyc))
    return cycles


def cycle_type(w: GroupElement) -> CycleType:
    return CycleType.of(len(c) for c in permutation_cycles(w))


@dataclass(frozen=True)
class Reflection:
    """One reflection generator.

    A swap (i < j) transposes coordinates i and j with twist k,
    0 <= k < r: v_i -> zeta^k v_j, v_j -> zeta^(-k) v_i.  A diagonal
    (i == j) scales coordinate i by zeta^(s*k), 0 < k < r/s; these
    exist only when s < r.
    """

    params: GroupParams
    i: int
    j: int  # j == i marks a diagonal reflection
    k: int

    def __post_init__(self):
        p = self.params
        if not 1 <= self.i <= p.n or not 1 <= self.j <= p.n:
            raise ValidationError(f"reflection vertices out of range: {self}")
        if self.i == self.j:
            if not 0 < self.k < p.q:
                raise ValidationError(
                    f"diagonal label must satisfy 0 < k < r/s={p.q}: {self}"
                )
        else:
            if self.i > self.j:
                raise ValidationError(f"swap must have i < j: {self}")
            if not 0 <= self.k < p.r:
                raise ValidationError(f"swap label must satisfy 0 <= k < r={p.r}: {self}")

    @property
    def is_diagonal(self) -> bool:
        return self.i == self.j

    def to_element(self) -> GroupElement:
        p = self.params
        perm = list(range(1, p.n + 1))
        exps = [0] * p.n
        if self.is_diagonal:
            exps[self.i - 1] = (p.s * self.k) % p.r
        else:
            perm[self.i - 1], perm[self.j - 1] = self.j, self.i
            exps[self.i - 1] = self.k
            exps[self.j - 1] = (-self.k) % p.r
        return GroupElement(p, tuple(perm), tuple(exps))

    def to_json(self) -> dict:
        if self.is_diagonal:
            return {"diag": [self.i, self.k]}
        return {"swap": [self.i, self.j, self.k]}

    @classmethod
    def from_json(cls, data: dict, params: GroupParams) -> "Reflection":
        if not isinstance(data, dict):
            raise ValidationError(f"reflection JSON must be an object: {data!r}")
        if "swap" in data:
            i, j, k = (int(x) for x in data["swap"])
            return cls(params, i, j, k)
        if "diag" in data:
            i, k = (int(x) for x in data["diag"])
            return cls(params, i, i, k)
        raise ValidationError(f"reflection JSON needs 'swap' or 'diag': {data!r}")


def reflections(params: GroupParams) -> list[Reflection]:
    """The full generating set, swaps first (by i, j, k) then diagonals (by i, k)."""
    out = [
        Reflection(params, i, j, k)
        for i in range(1, params.n + 1)
        for j in range(i + 1, params.n + 1)
        for k in range(params.r)
    ]
    out.extend(
        Reflection(params, i, i, k)
        for i in range(1, params.n + 1)
        for k in range(1, params.q)
    )
    return out


@dataclass(frozen=True)
class ElementPartition:
    """A set partition of the vertices into unions of cycles, together with
    the restriction of the element to each block (identity off-block)."""

    blocks: tuple[tuple[int, ...], ...]
    restrictions: tuple[GroupElement, ...]


def restrict_to_block(w: GroupElement, block: Sequence[int]) -> GroupElement:
    """The element acting as w on `block` and as the identity elsewhere.

    `block` must be closed under the underlying permutation."""
    n = w.params.n
    inside = set(block)
    perm = []
    exps = []
    for i in range(1, n + 1):
        if i in inside:
            if w.perm[i - 1] not in inside:
                raise ValidationError(f"block {block} not invariant at vertex {i}")
            perm.append(w.perm[i - 1])
            exps.append(w.exps[i - 1])
        else:
            perm.append(i)
            exps.append(0)
    return GroupElement(w.params, tuple(perm), tuple(exps))


def relabel_to_dense(w: GroupElement, block: Sequence[int]) -> GroupElement:
    """Restrict w to an invariant block and relabel its vertices to 1..|block|
    in increasing order, producing an element of G(r, s, |block|)."""
    block_sorted = sorted(block)
    new_index = {v: i + 1 for i, v in enumerate(block_sorted)}
    params = GroupParams(w.params.r, w.params.s, len(block_sorted))
    perm = []
    exps = []
    for v in block_sorted:
        img = w.perm[v - 1]
        if img not in new_index:
            raise ValidationError(f"block {block} not invariant at vertex {v}")
        perm.append(new_index[img])
        exps.append(w.exps[v - 1])
    return GroupElement(params, tuple(perm), tuple(exps))


def _set_partitions(items: Sequence) -> Iterator[list[list]]:
    """All set partitions, blocks ordered by first appearance."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _set_partitions(rest):
        yield [[first]] + [list(b) for b in sub]
        for i in range(len(sub)):
            yield [list(b) if j != i else [first] + list(b) for j, b in enumerate(sub)]


def partitions(w: GroupElement) -> list[ElementPartition]:
    """All partitions of w: groupings of its cycles whose block restrictions
    each satisfy the mod-s exponent condition on their own support."""
    s = w.params.s
    cycles = permutation_cycles(w)
    out = []
    for grouping in _set_partitions(cycles):
        blocks = []
        ok = True
        for group in grouping:
            verts = tuple(sorted(itertools.chain.from_iterable(group)))
            if sum(w.exps[v - 1] for v in verts) % s != 0:
                ok = False
                break
            blocks.append(verts)
        if not ok:
            continue
        blocks.sort()
        restrictions = tuple(restrict_to_block(w, b) for b in blocks)
        out.append(ElementPartition(tuple(blocks), restrictions))
    return out
