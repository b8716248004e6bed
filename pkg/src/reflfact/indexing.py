"""Perfect rank/unrank of G(r,s,n) onto 0..|G|-1 for dense DP vectors.

The index is perm_rank * E + exps_rank, where perm_rank is the Lehmer
rank of the permutation and E = r^(n-1) * (r/s) counts the admissible
exponent vectors: the first n-1 exponents are free digits base r and
the last is determined mod s by the zero-sum constraint, leaving a free
quotient digit in [0, r/s).
"""

from __future__ import annotations

import math

from .groups import GroupElement, GroupParams


def perm_rank(perm0: list[int]) -> int:
    """Lehmer rank of a 0-based permutation (lexicographic)."""
    n = len(perm0)
    rank = 0
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if perm0[j] < perm0[i])
        rank = rank * (n - i) + smaller
    return rank


def perm_unrank(rank: int, n: int) -> list[int]:
    digits = []
    for base in range(1, n + 1):
        digits.append(rank % base)
        rank //= base
    digits.reverse()
    pool = list(range(n))
    return [pool.pop(d) for d in digits]


class GroupIndexer:
    """Bijection between G(r,s,n) and range(group order)."""

    def __init__(self, params: GroupParams):
        self.params = params
        self.q = params.q
        self.exp_block = params.r ** (params.n - 1) * self.q
        self.size = math.factorial(params.n) * self.exp_block

    def _exps_rank(self, exps) -> int:
        r, q = self.params.r, self.q
        x = 0
        for e in reversed(exps[:-1]):
            x = x * r + e
        return x * q + exps[-1] // self.params.s

    def _exps_unrank(self, rank: int) -> list[int]:
        r, s, q, n = self.params.r, self.params.s, self.q, self.params.n
        c = rank % q
        rank //= q
        exps = []
        for _ in range(n - 1):
            exps.append(rank % r)
            rank //= r
        exps.append(c * s + (-sum(exps)) % s)
        return exps

    def index_of(self, element: GroupElement) -> int:
        perm0 = [p - 1 for p in element.perm]
        return perm_rank(perm0) * self.exp_block + self._exps_rank(element.exps)

    def element_at(self, index: int) -> GroupElement:
        pr, er = divmod(index, self.exp_block)
        perm0 = perm_unrank(pr, self.params.n)
        exps = self._exps_unrank(er)
        return GroupElement(
            self.params, tuple(p + 1 for p in perm0), tuple(exps)
        )

    def identity_index(self) -> int:
        return 0

    def __iter__(self):
        return (self.element_at(i) for i in range(self.size))
