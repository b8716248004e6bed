"""Recovery of the symmetric polynomials behind connected counts, by
exact interpolation.

Fixing a genus parameter g and a cycle count ell, connected counts
across all groups G(r,s,n) and all cycle types with ell parts are a
fixed combinatorial prefactor times the evaluation of one symmetric
polynomial (one per value of the entry-product indicator) at the cycle
type.  This module normalizes measured counts, fits those polynomials
in the monomial symmetric basis over an exact rational linear system,
checks the degree window, and predicts counts at unseen group sizes.

Two candidate normalizations are implemented, because they differ in
whether the fitted coefficients can be independent of n:

* "printed":  count / ( m!/r^(n-1) * prod n_i^(n_i+1)/n_i! )
* "derived":  count / ( m! * r^(m-n+1) * prod n_i^(n_i+1)/n_i! )

The two agree at r = 1.  Which one actually yields n-independent
coefficients is decided empirically by `normalization_verdict`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .counting import DEFAULT_OPTIONS, Options, connected_from_all
from .errors import (
    ConsistencyError,
    FitInconsistencyError,
    UnderdeterminedFitError,
    ValidationError,
)
from .groups import CycleType, GroupElement, GroupParams
from .series import cyclic_count

NORMALIZATIONS = ("printed", "derived")

# Sentinel basis function: coefficient of 1/(x_1 + ... + x_ell), the
# standard convention for the (g, ell) = (0, 2) case where no Laurent
# polynomial has the required degree.
INV_SUM = "inv_sum"


@dataclass(frozen=True)
class SymmetricLaurentPoly:
    """Symmetric function stored in the monomial symmetric basis.

    `terms` maps sorted-descending exponent vectors (length nvars,
    possibly negative entries) to rational coefficients.  The optional
    `inv_sum_coeff` adds c/(x_1+...+x_nvars); it is used only by the
    unstable two-cycle convention.
    """

    nvars: int
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]
    inv_sum_coeff: Fraction = Fraction(0)

    @classmethod
    def from_dict(
        cls, nvars: int, terms: dict, inv_sum_coeff=Fraction(0)
    ) -> "SymmetricLaurentPoly":
        clean = []
        for exps, coeff in terms.items():
            coeff = Fraction(coeff)
            if not coeff:
                continue
            exps = tuple(exps)
            if len(exps) != nvars:
                raise ValidationError(f"exponent vector {exps} must have {nvars} entries")
            if tuple(sorted(exps, reverse=True)) != exps:
                raise ValidationError(f"exponent vector {exps} must be sorted descending")
            clean.append((exps, coeff))
        clean.sort()
        return cls(nvars, tuple(clean), Fraction(inv_sum_coeff))

    def term_dict(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms and not self.inv_sum_coeff

    def degrees(self) -> list[int]:
        degs = [sum(exps) for exps, _ in self.terms]
        if self.inv_sum_coeff:
            degs.append(-1)
        return degs

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValidationError(
                f"point has {len(point)} entries, polynomial has {self.nvars} variables"
            )
        xs = [Fraction(x) for x in point]
        if any(x == 0 for x in xs) and (
            self.inv_sum_coeff or any(e < 0 for exps, _ in self.terms for e in exps)
        ):
            raise ValidationError("cannot evaluate negative powers at zero")
        value = Fraction(0)
        for exps, coeff in self.terms:
            value += coeff * _monomial_value(exps, xs)
        if self.inv_sum_coeff:
            value += self.inv_sum_coeff / sum(xs)
        return value

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {"exponents": list(exps), "coefficient": str(coeff)}
                for exps, coeff in self.terms
            ],
            "inv_sum_coefficient": str(self.inv_sum_coeff),
        }


def _monomial_value(exps: tuple[int, ...], xs: list[Fraction]) -> Fraction:
    """Monomial symmetric function m_exps evaluated at xs: the sum of the
    distinct monomials with this exponent multiset."""
    total = Fraction(0)
    for assignment in set(itertools.permutations(exps)):
        term = Fraction(1)
        for x, e in zip(xs, assignment):
            term *= x**e
        total += term
    return total


def genus_window(g, ell: int) -> tuple[Fraction, Fraction]:
    """Closed interval of allowed total degrees: [2g-3+ell, 3g-3+ell]."""
    g = Fraction(g)
    return 2 * g - 3 + ell, 3 * g - 3 + ell


def degree_window_check(poly: SymmetricLaurentPoly, g, ell: int) -> bool:
    """Whether every nonzero term's total degree lies in the genus window."""
    lo, hi = genus_window(g, ell)
    return all(lo <= d <= hi for d in poly.degrees())


def tuple_length_for(g, n: int, ell: int) -> int:
    """The factorization length m with genus g on an n-element group with
    ell cycles: m = 2g + n + ell - 2."""
    m = Fraction(g) * 2 + n + ell - 2
    if m.denominator != 1 or m < 0:
        raise ValidationError(f"no valid tuple length for g={g}, n={n}, ell={ell}")
    return int(m)


def prefactor(m: int, r: int, n: int, normalization: str) -> Fraction:
    if normalization == "printed":
        return Fraction(math.factorial(m), r ** (n - 1))
    if normalization == "derived":
        return Fraction(math.factorial(m)) * Fraction(r) ** (m - n + 1)
    raise ValidationError(f"unknown normalization {normalization!r}")


def cycle_type_factor(ctype: CycleType) -> Fraction:
    value = Fraction(1)
    for part in ctype.parts:
        value *= Fraction(part ** (part + 1), math.factorial(part))
    return value


def elsv_normalize(
    count: int, m: int, ctype: CycleType, normalization: str, params: GroupParams
) -> Fraction:
    """Divide a connected count by its combinatorial prefactor, leaving the
    value of the symmetric polynomial at the cycle type."""
    if m < 0:
        raise ValidationError("m must be nonnegative")
    return Fraction(count) / (
        prefactor(m, params.r, ctype.n, normalization) * cycle_type_factor(ctype)
    )


# ---------------------------------------------------------------------------
# Basis construction and the exact linear solve


def _partitions_at_most(total: int, parts: int) -> list[tuple[int, ...]]:
    """Partitions of `total` into at most `parts` parts, as descending
    tuples padded with zeros to length `parts`."""
    out = []

    def rec(remaining, maxpart, acc):
        if len(acc) == parts:
            if remaining == 0:
                out.append(tuple(acc))
            return
        if remaining == 0:
            out.append(tuple(acc) + (0,) * (parts - len(acc)))
            return
        for p in range(min(remaining, maxpart), 0, -1):
            rec(remaining - p, p, acc + [p])

    rec(total, total if total else 1, [])
    return out


def basis_functions(g, ell: int):
    """Basis in which the degree-window polynomial is fitted: monomial
    symmetric functions for stable windows, Laurent monomials for
    one-variable negative windows, and the inverse-sum convention for
    the (0,2) case."""
    g = Fraction(g)
    lo_f, hi_f = genus_window(g, ell)
    lo = math.ceil(lo_f)
    hi = math.floor(hi_f)
    if hi < lo:
        raise ValidationError(f"empty degree window for g={g}, ell={ell}")
    if hi < 0:
        if ell == 1:
            return [(d,) for d in range(lo, hi + 1)]
        if (g, ell) == (Fraction(0), 2):
            return [INV_SUM]
        raise ValidationError(
            f"negative degree window for g={g}, ell={ell} has no convention"
        )
    basis = []
    for d in range(max(lo, 0), hi + 1):
        basis.extend(_partitions_at_most(d, ell))
    return basis


def _basis_value(fn, point: Sequence) -> Fraction:
    xs = [Fraction(x) for x in point]
    if fn == INV_SUM:
        return Fraction(1) / sum(xs)
    return _monomial_value(fn, xs)


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Solve an overdetermined exact linear system.

    Returns (solution, training_rows, holdout_residuals).  Raises
    UnderdeterminedFitError when the rows do not pin down every
    coefficient and FitInconsistencyError when no solution exists.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    aug = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    order = list(range(nrows))
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot = next(
            (i for i in range(rank, nrows) if aug[order[i]][col] != 0), None
        )
        if pivot is None:
            continue
        order[rank], order[pivot] = order[pivot], order[rank]
        prow = aug[order[rank]]
        for i in range(nrows):
            if i == rank:
                continue
            row = aug[order[i]]
            if row[col] != 0:
                factor = row[col] / prow[col]
                for c in range(col, ncols + 1):
                    row[c] -= factor * prow[c]
        pivots.append(col)
        rank += 1
        if rank == min(nrows, ncols):
            break
    if rank < ncols:
        raise UnderdeterminedFitError(
            f"system of {nrows} samples determines only {rank} of {ncols} coefficients"
        )
    solution = [Fraction(0)] * ncols
    for k, col in enumerate(pivots):
        prow = aug[order[k]]
        solution[col] = prow[ncols] / prow[col]
    training = tuple(sorted(order[:rank]))
    residuals = []
    inconsistent = []
    for i in range(nrows):
        if i in training:
            continue
        res = sum(rows[i][c] * solution[c] for c in range(ncols)) - rhs[i]
        residuals.append(res)
        if res != 0:
            inconsistent.append((i, res))
    if inconsistent:
        detail = ", ".join(f"sample {i}: residual {res}" for i, res in inconsistent)
        raise FitInconsistencyError(f"no exact fit: {detail}")
    return solution, training, tuple(residuals)


def _poly_from_solution(ell: int, basis, solution) -> SymmetricLaurentPoly:
    terms = {}
    inv_sum = Fraction(0)
    for fn, coeff in zip(basis, solution):
        if fn == INV_SUM:
            inv_sum += coeff
        elif coeff:
            terms[fn] = coeff
    return SymmetricLaurentPoly.from_dict(ell, terms, inv_sum)


# ---------------------------------------------------------------------------
# Fit reports


@dataclass(frozen=True)
class FitSample:
    ctype: CycleType
    n: int
    m: int
    count: int
    normalized: Fraction

    def to_json(self) -> dict:
        return {
            "cycle_type": list(self.ctype.parts),
            "n": self.n,
            "m": self.m,
            "count": str(self.count),
            "normalized": str(self.normalized),
        }


@dataclass(frozen=True)
class FitReport:
    g: Fraction
    ell: int
    r: int
    s: int
    trivial_product: Optional[bool]  # None for plain S_n fits
    normalization: str
    polynomial: SymmetricLaurentPoly
    window: tuple[Fraction, Fraction]
    window_ok: bool
    samples: tuple[FitSample, ...]
    training_indices: tuple[int, ...]
    holdout_residuals: tuple[Fraction, ...]

    @property
    def n_values(self) -> tuple[int, ...]:
        return tuple(sorted({s.n for s in self.samples}))

    def to_json(self) -> dict:
        return {
            "g": str(self.g),
            "ell": self.ell,
            "r": self.r,
            "s": self.s,
            "trivial_product": self.trivial_product,
            "normalization": self.normalization,
            "polynomial": self.polynomial.to_json(),
            "window": [str(self.window[0]), str(self.window[1])],
            "window_ok": self.window_ok,
            "samples": [s.to_json() for s in self.samples],
            "training_indices": list(self.training_indices),
            "holdout_residuals": [str(x) for x in self.holdout_residuals],
            "n_values": list(self.n_values),
        }


def _prepare_samples(g, ell, r, normalization, samples) -> list[FitSample]:
    prepared = []
    for ctype, count in samples:
        if ctype.ell != ell:
            raise ValidationError(
                f"cycle type {ctype.parts} has {ctype.ell} parts, expected {ell}"
            )
        n = ctype.n
        m = tuple_length_for(g, n, ell)
        normalized = Fraction(count) / (
            prefactor(m, r, n, normalization) * cycle_type_factor(ctype)
        )
        prepared.append(FitSample(ctype, n, m, count, normalized))
    return prepared


def _fit(g, ell, r, s, trivial_product, normalization, prepared) -> FitReport:
    if not prepared:
        raise ValidationError("no samples to fit")
    basis = basis_functions(g, ell)
    rows = [
        [_basis_value(fn, sample.ctype.parts) for fn in basis] for sample in prepared
    ]
    rhs = [sample.normalized for sample in prepared]
    solution, training, residuals = _solve_exact(rows, rhs)
    poly = _poly_from_solution(ell, basis, solution)
    window = genus_window(g, ell)
    return FitReport(
        g=Fraction(g),
        ell=ell,
        r=r,
        s=s,
        trivial_product=trivial_product,
        normalization=normalization,
        polynomial=poly,
        window=window,
        window_ok=degree_window_check(poly, g, ell),
        samples=tuple(prepared),
        training_indices=training,
        holdout_residuals=residuals,
    )


def fit_sn_polynomial(g, ell: int, samples) -> FitReport:
    """Fit the symmetric-group polynomial from (CycleType, connected count)
    samples.  The two normalizations coincide at r = 1."""
    g = Fraction(g)
    if g.denominator != 1:
        raise ValidationError("symmetric-group fits need integer genus")
    prepared = _prepare_samples(g, ell, 1, "printed", samples)
    return _fit(g, ell, 1, 1, None, "printed", prepared)


def fit_grsn_polynomial(
    g,
    ell: int,
    trivial_product: bool,
    r: int,
    s: int,
    normalization: str,
    samples,
) -> FitReport:
    """Fit one of the two polynomials for G(r,s,n) under the chosen
    normalization from (CycleType, n, connected count) samples.

    Samples must span at least two distinct n; when per-n data is
    individually consistent but no single coefficient vector fits all n,
    the raised error says so explicitly (the normalization hides an
    n-dependence)."""
    g = Fraction(g)
    if g < 0 or (2 * g).denominator != 1:
        raise ValidationError("genus must be a nonnegative integer or half-integer")
    if normalization not in NORMALIZATIONS:
        raise ValidationError(f"unknown normalization {normalization!r}")
    GroupParams(r, s, 1)  # validates s | r
    triples = list(samples)
    pairs = []
    for ctype, n, count in triples:
        if ctype.n != n:
            raise ValidationError(f"cycle type {ctype.parts} does not sum to n={n}")
        pairs.append((ctype, count))
    n_seen = sorted({n for _, n, _ in triples})
    if len(n_seen) < 2:
        raise ValidationError(
            f"samples must span at least two distinct n, got n={n_seen}"
        )
    prepared = _prepare_samples(g, ell, r, normalization, pairs)
    try:
        return _fit(g, ell, r, s, trivial_product, normalization, prepared)
    except FitInconsistencyError as exc:
        if _consistent_per_n(g, ell, prepared):
            raise FitInconsistencyError(
                f"normalization {normalization!r} yields n-dependent coefficients "
                f"for g={g}, ell={ell}, (r,s)=({r},{s}): {exc}"
            ) from exc
        raise


def _consistent_per_n(g, ell, prepared) -> bool:
    basis = basis_functions(g, ell)
    by_n: dict[int, list[FitSample]] = {}
    for sample in prepared:
        by_n.setdefault(sample.n, []).append(sample)
    for group in by_n.values():
        rows = [[_basis_value(fn, s.ctype.parts) for fn in basis] for s in group]
        rhs = [s.normalized for s in group]
        try:
            _solve_exact(rows, rhs)
        except UnderdeterminedFitError:
            continue
        except FitInconsistencyError:
            return False
    return True


def predict_connected_count(
    report: FitReport, ctype: CycleType, params: GroupParams, trivial_product, m: int
) -> int:
    """Evaluate a fitted polynomial and restore the prefactor, yielding the
    predicted connected count; must come out a nonnegative integer."""
    if ctype.ell != report.ell:
        raise ValidationError(
            f"cycle type has {ctype.ell} parts, report is for ell={report.ell}"
        )
    if (params.r, params.s) != (report.r, report.s):
        raise ValidationError("group parameters do not match the report")
    if report.trivial_product is not None and bool(trivial_product) != report.trivial_product:
        raise ValidationError("entry-product class does not match the report")
    if m != tuple_length_for(report.g, ctype.n, report.ell):
        raise ValidationError(
            f"m={m} inconsistent with g={report.g}, n={ctype.n}, ell={report.ell}"
        )
    value = report.polynomial.evaluate(ctype.parts) * prefactor(
        m, report.r, ctype.n, report.normalization
    ) * cycle_type_factor(ctype)
    if value.denominator != 1 or value < 0:
        raise ConsistencyError(f"prediction is not a nonnegative integer: {value}")
    return value.numerator


# ---------------------------------------------------------------------------
# Sample generation straight from the counting machinery


def canonical_element(
    params: GroupParams, ctype: CycleType, trivial_product: bool
) -> GroupElement:
    """Deterministic representative with the given underlying cycle type and
    entry-product class: cycles laid out consecutively in increasing
    length, exponents zero except (for the nontrivial class) one s on the
    first vertex."""
    if ctype.n != params.n:
        raise ValidationError(f"cycle type sums to {ctype.n}, group has n={params.n}")
    perm = []
    start = 1
    for length in sorted(ctype.parts):
        block = list(range(start, start + length))
        perm.extend(block[1:] + block[:1])
        start += length
    exps = [0] * params.n
    if not trivial_product:
        if params.q < 2:
            raise ValidationError(
                "nontrivial entry product impossible when r == s"
            )
        exps[0] = params.s
    return GroupElement(params, tuple(perm), tuple(exps))


def partitions_into(n: int, parts: int) -> list[tuple[int, ...]]:
    """Partitions of n into exactly `parts` positive parts, descending."""
    if n < parts:
        return []
    return [
        tuple(x + 1 for x in p) for p in _partitions_at_most(n - parts, parts)
    ]


def collect_samples(
    r: int,
    s: int,
    g,
    ell: int,
    trivial_product: bool,
    n_values: Sequence[int],
    opts: Options = DEFAULT_OPTIONS,
) -> list[tuple[CycleType, int, int]]:
    """Measure connected counts for every cycle type with `ell` parts at each
    requested n, using the canonical representative of each class."""
    out = []
    for n in sorted(n_values):
        if n < ell:
            raise ValidationError(f"n={n} is smaller than ell={ell}")
        params = GroupParams(r, s, n)
        m = tuple_length_for(g, n, ell)
        for parts in partitions_into(n, ell):
            ctype = CycleType(parts)
            w = canonical_element(params, ctype, trivial_product)
            count = connected_from_all(w, m, opts)
            out.append((ctype, n, count))
    return out


@dataclass(frozen=True)
class NormalizationVerdict:
    """Outcome of fitting under both normalizations at several n."""

    g: Fraction
    ell: int
    r: int
    s: int
    n_values: tuple[int, ...]
    reports: dict  # (normalization, trivial_product) -> FitReport
    failures: dict  # (normalization, trivial_product) -> str
    winners: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "g": str(self.g),
            "ell": self.ell,
            "r": self.r,
            "s": self.s,
            "n_values": list(self.n_values),
            "fits": {
                f"{norm}/trivial={triv}": report.to_json()
                for (norm, triv), report in self.reports.items()
            },
            "failures": {
                f"{norm}/trivial={triv}": msg
                for (norm, triv), msg in self.failures.items()
            },
            "winners": list(self.winners),
        }


def normalization_verdict(
    g,
    ell: int,
    r: int,
    s: int,
    n_values: Sequence[int],
    opts: Options = DEFAULT_OPTIONS,
) -> NormalizationVerdict:
    """Decide empirically which prefactor yields n-independent coefficients:
    fit both product classes under both normalizations and record which
    normalizations fit all available data exactly."""
    n_values = tuple(sorted(n_values))
    q = r // s
    classes = [True] + ([False] if q >= 2 else [])
    reports: dict = {}
    failures: dict = {}
    for trivial in classes:
        samples = collect_samples(r, s, g, ell, trivial, n_values, opts)
        for norm in NORMALIZATIONS:
            try:
                reports[(norm, trivial)] = fit_grsn_polynomial(
                    g, ell, trivial, r, s, norm, samples
                )
            except (FitInconsistencyError, UnderdeterminedFitError, ValidationError) as exc:
                failures[(norm, trivial)] = str(exc)
    winners = tuple(
        norm
        for norm in NORMALIZATIONS
        if all((norm, trivial) in reports for trivial in classes)
    )
    return NormalizationVerdict(
        Fraction(g), ell, r, s, n_values, reports, failures, winners
    )


def grsn_pvalue_from_sn_expansion(
    g, ell: int, r: int, s: int, trivial_product: bool, sn_polys: dict, point
) -> Fraction:
    """Evaluate the predicted G(r,s,n) polynomial as the explicit linear
    combination of symmetric-group polynomials of lower genus: the sum over
    loop counts j of r^(-j) * (cyclic count at j)/j! * (sum of point)^j
    times the genus-(g - j/2) symmetric-group polynomial.

    `sn_polys` maps integer genus to fitted S_n polynomials.  Terms whose
    inner genus is negative or half-integer vanish (no symmetric-group data
    at that parity)."""
    g = Fraction(g)
    q = r // s
    t = 0 if trivial_product else 1
    if t == 1 and q < 2:
        raise ValidationError("nontrivial entry product impossible when r == s")
    xs = [Fraction(x) for x in point]
    xsum = sum(xs)
    total = Fraction(0)
    for j in range(int(2 * g) + 1):
        inner = g - Fraction(j, 2)
        if inner.denominator != 1 or inner < 0:
            continue
        inner_poly = sn_polys.get(int(inner))
        if inner_poly is None:
            raise ValidationError(f"missing symmetric-group polynomial for genus {inner}")
        term = (
            Fraction(1, r**j)
            * Fraction(cyclic_count(q, t, j), math.factorial(j))
            * xsum**j
            * inner_poly.evaluate(point)
        )
        total += term
    return total
