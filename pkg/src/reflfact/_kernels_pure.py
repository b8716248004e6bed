"""Pure-Python kernels for the two hot loops: the group-algebra
convolution DP and the exhaustive tuple enumeration.

The compiled extension (_ckernels) implements the same three functions
with identical semantics; `reflfact.kernels` picks one at import time.
Counts here are Python ints, so this backend never overflows; the
compiled backend is only used when its int64 bound is provably safe.

Reflections are passed as (is_diag, a, b, k) with 0-based a <= b.
Group elements are indexed exactly as in `reflfact.indexing`.
"""

from __future__ import annotations

from math import factorial

from .unionfind import RollbackUnionFind

BACKEND_NAME = "pure"


def _sizes(r: int, s: int, n: int) -> tuple[int, int, int]:
    q = r // s
    exp_block = r ** (n - 1) * q
    return q, exp_block, factorial(n) * exp_block


def _encode(perm0, exps, r, s, q, exp_block, n) -> int:
    rank = 0
    for i in range(n):
        pi = perm0[i]
        smaller = 0
        for j in range(i + 1, n):
            if perm0[j] < pi:
                smaller += 1
        rank = rank * (n - i) + smaller
    x = 0
    for i in range(n - 2, -1, -1):
        x = x * r + exps[i]
    return rank * exp_block + x * q + exps[n - 1] // s


def _decode(index, r, s, q, exp_block, n) -> tuple[list[int], list[int]]:
    pr, er = divmod(index, exp_block)
    c = er % q
    er //= q
    exps = []
    for _ in range(n - 1):
        exps.append(er % r)
        er //= r
    exps.append(c * s + (-sum(exps)) % s)
    digits = []
    for base in range(1, n + 1):
        digits.append(pr % base)
        pr //= base
    digits.reverse()
    pool = list(range(n))
    perm0 = [pool.pop(d) for d in digits]
    return perm0, exps


def _actions(refl, r: int, s: int, n: int):
    """Each reflection as its full (perm0, exps) action."""
    acts = []
    for (is_diag, a, b, k) in refl:
        perm0 = list(range(n))
        exps = [0] * n
        if is_diag:
            exps[a] = (s * k) % r
        else:
            perm0[a], perm0[b] = b, a
            exps[a] = k
            exps[b] = (-k) % r
        acts.append((perm0, exps))
    return acts


def dp_total(r, s, n, refl, m):
    """rounds[j][g] = number of j-tuples of reflections whose product
    (rightmost factor applied first) is group element g."""
    q, exp_block, size = _sizes(r, s, n)
    acts = _actions(refl, r, s, n)
    rounds = [[0] * size for _ in range(m + 1)]
    rounds[0][0] = 1
    for j in range(1, m + 1):
        cur, nxt = rounds[j - 1], rounds[j]
        for g in range(size):
            c = cur[g]
            if not c:
                continue
            perm0, exps = _decode(g, r, s, q, exp_block, n)
            for (rp, re) in acts:
                nperm = [rp[v] for v in perm0]
                nexps = [(exps[i] + re[perm0[i]]) % r for i in range(n)]
                nxt[_encode(nperm, nexps, r, s, q, exp_block, n)] += c
    return rounds


def dp_refined(r, s, n, refl, m):
    """table[m2][g] at round m, where m2 counts the diagonal factors used."""
    q, exp_block, size = _sizes(r, s, n)
    acts = _actions(refl, r, s, n)
    diag_flags = [t[0] for t in refl]
    cur = [[0] * size for _ in range(m + 1)]
    cur[0][0] = 1
    for _ in range(m):
        nxt = [[0] * size for _ in range(m + 1)]
        for m2 in range(m + 1):
            row = cur[m2]
            for g in range(size):
                c = row[g]
                if not c:
                    continue
                perm0, exps = _decode(g, r, s, q, exp_block, n)
                for t, (rp, re) in enumerate(acts):
                    m2n = m2 + diag_flags[t]
                    if m2n > m:
                        continue
                    nperm = [rp[v] for v in perm0]
                    nexps = [(exps[i] + re[perm0[i]]) % r for i in range(n)]
                    nxt[m2n][_encode(nperm, nexps, r, s, q, exp_block, n)] += c
        cur = nxt
    return cur


def enum_bucketed(r, s, n, refl, m, lo, hi):
    """Enumerate all m-tuples whose first factor index lies in [lo, hi).

    Returns (total, conn): total[m2][g] counts tuples with product g and
    m2 diagonal factors; conn additionally requires the tuple's graph to
    be connected on all n vertices.  For m == 0 the empty tuple is
    attributed to the slice containing index 0.
    """
    q, exp_block, size = _sizes(r, s, n)
    total = [[0] * size for _ in range(m + 1)]
    conn = [[0] * size for _ in range(m + 1)]
    if m == 0:
        if lo == 0:
            total[0][0] = 1
            if n == 1:
                conn[0][0] = 1
        return total, conn

    uf = RollbackUnionFind(n)
    perm0 = list(range(n))
    invperm = list(range(n))
    exps = [0] * n

    def rec(level: int, m2: int) -> None:
        if level == m:
            g = _encode(perm0, exps, r, s, q, exp_block, n)
            total[m2][g] += 1
            if uf.components == 1:
                conn[m2][g] += 1
            return
        choices = range(lo, hi) if level == 0 else range(len(refl))
        for t in choices:
            is_diag, a, b, k = refl[t]
            if is_diag:
                ia = invperm[a]
                exps[ia] = (exps[ia] + s * k) % r
                rec(level + 1, m2 + 1)
                exps[ia] = (exps[ia] - s * k) % r
            else:
                ia, ib = invperm[a], invperm[b]
                perm0[ia], perm0[ib] = b, a
                invperm[a], invperm[b] = ib, ia
                exps[ia] = (exps[ia] + k) % r
                exps[ib] = (exps[ib] - k) % r
                uf.union(a, b)
                rec(level + 1, m2)
                uf.undo()
                exps[ib] = (exps[ib] + k) % r
                exps[ia] = (exps[ia] - k) % r
                invperm[a], invperm[b] = ia, ib
                perm0[ia], perm0[ib] = a, b
            # product and union-find state fully restored here

    rec(0, 0)
    return total, conn
