"""Exact rational linear algebra and the zeta(odd, odd) machinery.

``nontrivial_equations`` assembles relations that are exact modulo Q*zeta(k)
(stuffle, Euler, the odd sum formula, cyclic Tornheim relations), finds the
part of their span supported on zeta(odd, odd) alone, and solves for one
equation per distinguished odd index.  The zeta(k) multiple each equation
carries is reconstructed numerically and absorbed through the odd sum
formula so that every emitted equation has right-hand side 0.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Optional, Sequence

import config
from numeric import (
    ApproxReal,
    InsufficientPrecisionError,
    ReconstructionError,
    exact_residual,
    fit_quotient,
    get_evaluator,
    rational_reconstruct,
)
from reduction import engine_for, mf_dim, residual, slot_count
from relations import (
    cyclic,
    euler_top,
    gkz_sum,
    merge_even_products,
    stuffle,
)
from symbols import (
    DZVError,
    T,
    Z,
    FormalSum,
    PreconditionError,
    QuotientMode,
    Relation,
    Symbol,
    dz,
    zeta_product,
)

logger = logging.getLogger(__name__)


class DimensionMismatchError(DZVError):
    pass


class SolverError(DZVError):
    pass


# --- dense matrices ----------------------------------------------------------

class RationalMatrix:
    """Rows of exact rationals over an ordered column basis."""

    def __init__(self, rows: Sequence[Sequence], column_basis: Optional[Sequence[Symbol]] = None):
        self.rows = [[Fraction(x) for x in row] for row in rows]
        widths = {len(row) for row in self.rows}
        if column_basis is not None:
            widths.add(len(column_basis))
        if len(widths) > 1:
            raise DimensionMismatchError(f"rows and column basis disagree on width: {sorted(widths)}")
        self.column_basis = list(column_basis) if column_basis is not None else None
        self.ncols = widths.pop() if widths else 0

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def rref(self) -> tuple["RationalMatrix", list[int]]:
        m = [row[:] for row in self.rows]
        pivots: list[int] = []
        piv_r = 0
        for piv_c in range(self.ncols):
            i_row = next((i for i in range(piv_r, len(m)) if m[i][piv_c] != 0), None)
            if i_row is None:
                continue
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
            fp = m[piv_r][piv_c]
            m[piv_r] = [x / fp for x in m[piv_r]]
            for r in range(len(m)):
                fr = m[r][piv_c]
                if r == piv_r or fr == 0:
                    continue
                m[r] = [a - fr * b for a, b in zip(m[r], m[piv_r])]
            pivots.append(piv_c)
            piv_r += 1
            if piv_r == len(m):
                break
        return RationalMatrix(m, self.column_basis), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[list[Fraction]]:
        reduced, pivots = self.rref()
        free = [c for c in range(self.ncols) if c not in pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for i, pc in enumerate(pivots):
                v[pc] = -reduced.rows[i][f]
            lead = next(x for x in v if x != 0)
            basis.append([x / lead for x in v])
        return basis

    def solve(self, target: Sequence) -> Optional[list[Fraction]]:
        """y with sum_i y_i * row_i = target, or None if target is outside the row space."""
        if len(target) != self.ncols:
            raise DimensionMismatchError(f"target has length {len(target)}, matrix has {self.ncols} columns")
        n = self.nrows
        aug = [[self.rows[i][c] for i in range(n)] + [Fraction(target[c])] for c in range(self.ncols)]
        reduced, pivots = RationalMatrix(aug).rref()
        if n in pivots:
            return None
        y = [Fraction(0)] * n
        for i, pc in enumerate(pivots):
            y[pc] = reduced.rows[i][n]
        return y

    def apply(self, v: Sequence) -> list[Fraction]:
        if len(v) != self.ncols:
            raise DimensionMismatchError(f"vector has length {len(v)}, matrix has {self.ncols} columns")
        return [sum((a * b for a, b in zip(row, v)), Fraction(0)) for row in self.rows]


def rref(m: RationalMatrix) -> tuple[RationalMatrix, list[int]]:
    return m.rref()


def nullspace(m: RationalMatrix) -> list[list[Fraction]]:
    return m.nullspace()


def solve(m: RationalMatrix, target: Sequence) -> Optional[list[Fraction]]:
    return m.solve(target)


# --- sparse incremental echelon form ------------------------------------------

class EchelonBasis:
    """Semi-echelon rows stored as {column: value}; each row's pivot is its smallest column."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        row = {c: v for c, v in row.items() if v != 0}
        while True:
            hits = [c for c in row if c in self.pivots]
            if not hits:
                return row
            c = min(hits)
            f = row[c]
            for cc, vv in self.pivots[c].items():
                nv = row.get(cc, Fraction(0)) - f * vv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)

    def add(self, row: dict[int, Fraction]) -> bool:
        """Insert row; True when it raised the rank."""
        row = self.reduce(row)
        if not row:
            return False
        pivot = min(row)
        lead = row[pivot]
        self.pivots[pivot] = {c: v / lead for c, v in row.items()}
        return True

    def rows_with_pivot_from(self, start: int) -> list[dict[int, Fraction]]:
        return [self.pivots[c] for c in sorted(self.pivots) if c >= start]


# --- lifting -------------------------------------------------------------------

def lift_mod_relation_to_exact(rel: Relation, digits: int = config.DEFAULT_DIGITS) -> Relation:
    """Complete a quotient relation with exact Z/P terms found numerically."""
    if rel.mode == QuotientMode.EXACT:
        return rel
    if rel.weight is not None and rel.weight > config.MAX_WEIGHT:
        raise PreconditionError(f"weight {rel.weight} exceeds the configured maximum {config.MAX_WEIGHT}")
    dz_part = rel.double_zeta_part()
    tail, used = fit_quotient(dz_part, rel.mode, digits)
    logger.info("lifted %s at %d digits: tail %s", rel.label, used, tail)
    return Relation(dz_part - tail, QuotientMode.EXACT, rel.label, provenance="numerically-lifted")


# --- spanning sets ---------------------------------------------------------------

def _check_weight(k: int) -> None:
    if k % 2:
        raise PreconditionError(f"weight must be even, got {k}")
    if k < 4:
        raise PreconditionError(f"weight must be >= 4, got {k}")


def distinguished_indices(k: int) -> list[int]:
    """Odd i with floor((k+5)/3) <= i < k/2."""
    return [i for i in range((k + 5) // 3, k // 2) if i % 2 == 1]


def spanning_set_dz(k: int) -> list[FormalSum]:
    _check_weight(k)
    top = (k + 2) // 3
    first = [FormalSum.single(dz(j, k - j)) for j in range(3, top + 1) if j % 2]
    second = [FormalSum.single(dz(k - j, j)) for j in range(1, top + 1) if j % 2]
    third = [FormalSum([(dz(j, k - j), 1), (dz(k - j, j), 1)])
             for j in range((k + 5) // 3, k // 2 + 1) if j % 2]
    out = first + second + third
    expected = k // 2 - mf_dim(k)
    assert len(out) == expected, (k, len(out), expected)
    return out


# --- the exact system modulo Q*zeta(k) -------------------------------------------

@dataclass(frozen=True)
class OddOddEquation:
    """sum_j c_j zeta(j, k-j) = 0 over odd j.

    zeta_coefficient is the multiple of zeta(k) the relation carried before it
    was shifted by the odd sum formula.
    """

    k: int
    i: int
    coefficients: dict[int, int]
    zeta_coefficient: Fraction = Fraction(0)
    provenance: str = "exact"

    def as_formal_sum(self) -> FormalSum:
        return FormalSum((dz(j, self.k - j), c) for j, c in self.coefficients.items())

    def check_pattern(self) -> bool:
        c = self.coefficients
        if not any(c.values()):
            return False
        if c.get(self.i, 0) == c.get(self.k - self.i, 0):
            return False
        return all(c.get(j, 0) == c.get(self.k - j, 0)
                   for j in distinguished_indices(self.k) if j != self.i)


class _System:
    """Column layout: DZ(even j) and P(odd, odd) first, then the DZ(odd j) block W."""

    def __init__(self, k: int):
        self.k = k
        even = [dz(j, k - j) for j in range(k - 2, 1, -2)]
        products = [zeta_product(a, k - a) for a in range(3, k // 2 + 1, 2)]
        odd = [dz(j, k - j) for j in range(k - 1, 2, -2)]
        self.columns: list[Symbol] = even + products + odd
        self.w_start = len(even) + len(products)
        self.index = {s: n for n, s in enumerate(self.columns)}
        self.basis = EchelonBasis(len(self.columns))
        self.target_rank = len(self.columns) - (k // 2 - mf_dim(k) - 1)

    def row_of(self, x: FormalSum) -> dict[int, Fraction]:
        """Row for a combination known to lie in Q*zeta(k); Z and P(even, even) are dropped."""
        merged = merge_even_products(x)
        row = {}
        for sym, c in merged.items():
            if sym.kind == Z:
                continue
            if sym.kind == T:
                raise SolverError(f"unexpanded Tornheim symbol {sym} in an exact row")
            row[self.index[sym]] = c
        return row

    def add(self, x: FormalSum, label: str) -> bool:
        grew = self.basis.add(self.row_of(x))
        if grew:
            logger.debug("weight %d: %s raised the rank to %d", self.k, label, self.basis.rank)
        return grew

    @property
    def complete(self) -> bool:
        return self.basis.rank >= self.target_rank


def _exact_rows(k: int):
    yield euler_top(k)
    yield gkz_sum(k)
    for a in range(2, k // 2 + 1):
        yield stuffle(a, k - a)
    for r in range(1, k // 3 + 1):
        for q in range(r, (k - r) // 2 + 1):
            yield cyclic(r, q, k - r - q)


def _lifted_rows(k: int, digits: int):
    engine = engine_for(k, (1,) * slot_count(k))
    for res in engine.reduce_all():
        rest = residual(res)
        if not rest:
            continue
        tail, _ = fit_quotient(rest, QuotientMode.MOD_PZ, digits)
        yield f"lifted reduction of {res.input}", rest - tail


def _build_system(k: int, digits: int) -> _System:
    system = _System(k)
    for rel in _exact_rows(k):
        system.add(rel.lhs, rel.label)
        if system.complete:
            break
    if not system.complete:
        logger.info("weight %d: exact rows reach rank %d of %d, adding lifted reductions",
                    k, system.basis.rank, system.target_rank)
        for label, x in _lifted_rows(k, digits):
            system.add(x, label)
            if system.complete:
                break
    if not system.complete:
        raise SolverError(
            f"weight {k}: relation rank {system.basis.rank} stays below the proven {system.target_rank}")
    logger.info("weight %d: system of %d columns at rank %d", k, len(system.columns), system.basis.rank)
    return system


def _zeta_multiple(k: int, coeffs: dict[int, Fraction], digits: int) -> tuple[Fraction, int]:
    """The rational lam with sum c_j zeta(j,k-j) = lam * zeta(k), raising precision as needed."""
    x = FormalSum((dz(j, k - j), c) for j, c in coeffs.items())
    d = digits
    while d <= 16 * digits:
        ev = get_evaluator(d)
        value = ev.eval_formal(x)
        z = ev.zeta_single(k)
        err = value.error / z.value + abs(value.value) * z.error / z.value ** 2
        ratio = ApproxReal(value.value / z.value, err + ev.ctx.mpf(10) ** (-d))
        bound = 10 ** (d // 3)
        try:
            lam = rational_reconstruct(ratio, bound)
        except InsufficientPrecisionError as exc:
            logger.info("weight %d: %s, raising precision", k, exc)
            lam = None
        if lam is not None:
            absorbed = x - FormalSum((dz(j, k - j), 4 * lam) for j in range(3, k, 2))
            _, _, ok = exact_residual(absorbed, 2 * d)
            if ok:
                return lam, d
            logger.info("weight %d: zeta(k) multiple %s fails re-verification at %d digits", k, lam, 2 * d)
        d *= 2
    raise ReconstructionError(f"weight {k}: no zeta({k}) multiple reconstructed up to {16 * digits} digits")


def _normalize(values: dict[int, Fraction]) -> dict[int, int]:
    """Integer coprime coefficients; the lowest-j nonzero entry is positive."""
    nonzero = {j: v for j, v in values.items() if v != 0}
    den = reduce(lcm, (v.denominator for v in nonzero.values()), 1)
    ints = {j: int(v * den) for j, v in nonzero.items()}
    g = reduce(gcd, (abs(v) for v in ints.values()), 0) or 1
    sign = 1 if ints[min(ints)] > 0 else -1
    return {j: v * sign // g for j, v in ints.items()}


@lru_cache(maxsize=None)
def _equations(k: int, digits: int) -> tuple[OddOddEquation, ...]:
    indices = distinguished_indices(k)
    assert len(indices) == mf_dim(k) - 1, (k, indices)
    if not indices:
        return ()
    system = _build_system(k, digits)
    w_rows = system.basis.rows_with_pivot_from(system.w_start)
    col = system.index

    def phi(row: dict[int, Fraction]) -> list[Fraction]:
        return [row.get(col[dz(j, k - j)], Fraction(0)) - row.get(col[dz(k - j, j)], Fraction(0))
                for j in indices]

    images = RationalMatrix([phi(row) for row in w_rows]) if w_rows else None
    out = []
    for pos, i in enumerate(indices):
        target = [Fraction(int(n == pos)) for n in range(len(indices))]
        y = images.solve(target) if images is not None else None
        if y is None:
            raise SolverError(f"weight {k}: no zeta(odd, odd) relation isolates index {i}")
        raw: dict[int, Fraction] = {}
        for a, row in zip(y, w_rows):
            if a == 0:
                continue
            for c, v in row.items():
                j = system.columns[c].args[0]
                raw[j] = raw.get(j, Fraction(0)) + a * v
        coeffs = _normalize(raw)
        lam, used = _zeta_multiple(k, coeffs, digits)
        shifted = {j: Fraction(coeffs.get(j, 0)) - 4 * lam for j in range(3, k, 2)}
        final = _normalize(shifted)
        if lam:
            logger.info("weight %d, i=%d: relation carried %s*zeta(%d), absorbed via the odd sum formula",
                        k, i, lam, k)
        eq = OddOddEquation(k, i, dict(sorted(final.items())), zeta_coefficient=lam,
                            provenance=f"verified at {2 * used} digits")
        if not eq.check_pattern():
            raise SolverError(f"weight {k}: equation for i={i} violates the coefficient pattern")
        out.append(eq)
    return tuple(out)


def nontrivial_equations(k: int, digits: int = config.DEFAULT_DIGITS) -> list[OddOddEquation]:
    _check_weight(k)
    if k > config.MAX_WEIGHT:
        raise PreconditionError(f"weight {k} exceeds the configured maximum {config.MAX_WEIGHT}")
    return list(_equations(k, digits))


def span_expression(k: int, i: int, digits: int = config.DEFAULT_DIGITS) -> list[Fraction]:
    """Coefficients a with zeta(i, k-i) = sum a_n * spanning_set_dz(k)[n]."""
    eqs = {eq.i: eq for eq in nontrivial_equations(k, digits)}
    if i not in eqs:
        raise PreconditionError(f"i={i} is not a distinguished odd index for weight {k}: {sorted(eqs)}")
    c = eqs[i].coefficients
    d = Fraction(c.get(i, 0) - c.get(k - i, 0))
    out = []
    for element in spanning_set_dz(k):
        syms = sorted(element)
        if len(syms) == 2:
            # DZ(j) + DZ(k-j): the pair carries c_{k-j}, the difference stays on DZ(i)
            upper = max(s.args[0] for s in syms)
            out.append(-Fraction(c.get(upper, 0)) / d)
        else:
            (sym,) = syms
            out.append(-Fraction(c.get(sym.args[0], 0)) / element[sym] / d)
    return out


__all__ = [
    "RationalMatrix", "EchelonBasis", "rref", "nullspace", "solve",
    "DimensionMismatchError", "SolverError",
    "lift_mod_relation_to_exact", "spanning_set_dz", "distinguished_indices",
    "OddOddEquation", "nontrivial_equations", "span_expression",
]
