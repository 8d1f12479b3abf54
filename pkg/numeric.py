"""High-precision evaluation of zeta, double zeta and Tornheim values.

Every evaluator owns a private mpmath context, so evaluators at different
precisions never share global state.  Values come back as ``ApproxReal``:
an mpf together with a bound on its absolute error.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from mpmath.ctx_mp import MPContext

import config
from relations import bernoulli, tornheim_expand
from symbols import (
    DZ,
    T,
    Z,
    DZVError,
    FormalSum,
    PreconditionError,
    QuotientMode,
    Relation,
    Symbol,
    canonicalize,
    zeta,
    zeta_product,
)

logger = logging.getLogger(__name__)

GUARD_DIGITS = 15


class InsufficientPrecisionError(DZVError):
    pass


class ReconstructionError(DZVError):
    pass


class VerificationError(DZVError):
    pass


def _rising(s: int, m: int) -> int:
    return math.prod(range(s, s + m))


def _em_coefficient(i: int) -> Fraction:
    return bernoulli(2 * i) / math.factorial(2 * i)


def to_fraction(x) -> Fraction:
    """Exact value of a finite mpf."""
    man, exp = x.man_exp
    man = abs(int(man))
    if x < 0:
        man = -man
    return Fraction(man) * Fraction(2) ** exp


@dataclass(frozen=True)
class ApproxReal:
    value: object
    error: object

    def __add__(self, other: "ApproxReal") -> "ApproxReal":
        return ApproxReal(self.value + other.value, self.error + other.error)

    def __sub__(self, other: "ApproxReal") -> "ApproxReal":
        return ApproxReal(self.value - other.value, self.error + other.error)

    def __mul__(self, other: "ApproxReal") -> "ApproxReal":
        err = abs(self.value) * other.error + abs(other.value) * self.error + self.error * other.error
        return ApproxReal(self.value * other.value, err)

    def scale(self, c: Fraction) -> "ApproxReal":
        c = Fraction(c)
        factor = abs(c.numerator)
        v = self.value * c.numerator / c.denominator
        return ApproxReal(v, self.error * factor / c.denominator)

    def contains(self, x, slack=0) -> bool:
        return abs(self.value - x) <= self.error + slack

    def __float__(self) -> float:
        return float(self.value)


class ZetaEvaluator:
    """Evaluates symbols to within 10^-digits, with per-instance caches."""

    def __init__(self, digits: int = config.DEFAULT_DIGITS):
        if digits < config.MIN_DIGITS:
            raise PreconditionError(f"digits below minimum ({config.MIN_DIGITS})")
        self.digits = digits
        self.ctx = MPContext()
        self.ctx.dps = digits + GUARD_DIGITS
        self._target = self.ctx.mpf(10) ** (-(digits + 5))
        self._ulp = self.ctx.mpf(10) ** (-self.ctx.dps)
        self._em_terms = max(2, -(-digits // 3))
        self._cutoff = max(8, math.ceil(digits * math.log(10) / 2))
        self._tails: dict[tuple, ApproxReal] = {}
        self._values: dict[Symbol, ApproxReal] = {}

    def mpf(self, c: Fraction):
        c = Fraction(c)
        return self.ctx.mpf(c.numerator) / c.denominator

    def exact(self, c: Fraction) -> ApproxReal:
        v = self.mpf(c)
        return ApproxReal(v, abs(v) * self._ulp)

    def _remainder_bound(self, s: int, n: int):
        ctx, L = self.ctx, self._em_terms
        c = abs(self.mpf(_em_coefficient(L + 1))) * 2 * _rising(s, 2 * L + 1)
        return c * ctx.mpf(n) ** (-(s + 2 * L + 1))

    def power_tail(self, s: int, a: int, target=None) -> ApproxReal:
        """sum_{n >= a} n^-s by Euler-Maclaurin with an explicit remainder bound.

        The remainder is pushed below target (default 10^-(digits+5)); rounding
        is bounded relative to the positive sum.
        """
        if s < 2:
            raise PreconditionError(f"power tail needs s >= 2, got {s}")
        target = self._target if target is None else target
        key = (s, a, target)
        if key in self._tails:
            return self._tails[key]
        ctx = self.ctx
        n_cut = max(a, self._cutoff)
        bound = self._remainder_bound(s, n_cut)
        while bound > target:
            n_cut *= 2
            bound = self._remainder_bound(s, n_cut)
        total = ctx.fsum(ctx.mpf(n) ** (-s) for n in range(a, n_cut))
        big_n = ctx.mpf(n_cut)
        total += big_n ** (1 - s) / (s - 1) + big_n ** (-s) / 2
        for i in range(1, self._em_terms + 1):
            total += self.mpf(_em_coefficient(i)) * _rising(s, 2 * i - 1) * big_n ** (-s - 2 * i + 1)
        rounding = (n_cut - a + self._em_terms + 3) * self._ulp * abs(total)
        result = ApproxReal(total, bound + rounding)
        self._tails[key] = result
        return result

    def zeta_single(self, s: int) -> ApproxReal:
        sym = zeta(s)
        if sym not in self._values:
            self._values[sym] = self.power_tail(s, 1)
        return self._values[sym]

    def _double_tail_bound(self, q: int, k: int, m_cut: int):
        L = self._em_terms
        c = abs(self.mpf(_em_coefficient(L + 1))) * 2 * _rising(q, 2 * L + 1)
        return c * self.ctx.mpf(m_cut) ** (-(k + 2 * L)) / (k + 2 * L)

    def zeta_double(self, q: int, p: int) -> ApproxReal:
        sym = canonicalize(Symbol(DZ, (q, p)))
        if sym in self._values:
            return self._values[sym]
        ctx, k = self.ctx, q + p
        m_cut = self._cutoff
        bound = self._double_tail_bound(q, k, m_cut)
        while bound > self._target:
            m_cut *= 2
            bound = self._double_tail_bound(q, k, m_cut)

        zq = self.zeta_single(q)
        head_terms = []
        rest = zq.value
        for m in range(1, m_cut + 1):
            mm = ctx.mpf(m)
            rest -= mm ** (-q)
            head_terms.append(mm ** (-p) * rest)
        head = ctx.fsum(head_terms)
        harmonic = 1 + math.log(m_cut)
        # rest carries at most m_cut roundings of size ulp * zeta(q) <= 2 ulp
        head_err = zq.error * harmonic + 2 * m_cut * harmonic * self._ulp

        # sum_{m > M} m^-p R_q(m), with R_q(m) expanded asymptotically in 1/m
        tail = self.power_tail(k - 1, m_cut + 1).scale(Fraction(1, q - 1))
        tail = tail - self.power_tail(k, m_cut + 1).scale(Fraction(1, 2))
        for i in range(1, self._em_terms + 1):
            beta = _em_coefficient(i) * _rising(q, 2 * i - 1)
            # the remainder target is relative to |beta| so scaling keeps it below 10^-(digits+5)
            term_target = self._target / max(1, abs(self.mpf(beta)))
            tail = tail + self.power_tail(k + 2 * i - 1, m_cut + 1, term_target).scale(beta)

        result = ApproxReal(head + tail.value, head_err + tail.error + bound)
        self._values[sym] = result
        return result

    def tornheim(self, r: int, q: int, p: int) -> ApproxReal:
        sym = canonicalize(Symbol(T, (r, q, p)))
        if sym.kind == DZ:
            return self.zeta_double(*sym.args)
        if sym not in self._values:
            self._values[sym] = self.eval_formal(tornheim_expand(*sym.args))
        return self._values[sym]

    def symbol(self, sym: Symbol) -> ApproxReal:
        if sym.kind == Z:
            return self.zeta_single(sym.args[0])
        if sym.kind == DZ:
            return self.zeta_double(*sym.args)
        if sym.kind == T:
            return self.tornheim(*sym.args)
        a, b = sym.args
        return self.zeta_single(a) * self.zeta_single(b)

    def eval_formal(self, x: FormalSum) -> ApproxReal:
        if x.weight is not None and x.weight > config.MAX_WEIGHT:
            raise PreconditionError(f"weight {x.weight} exceeds the configured maximum {config.MAX_WEIGHT}")
        total = ApproxReal(self.ctx.mpf(0), self.ctx.mpf(0))
        for sym, c in x.items():
            total = total + self.symbol(sym).scale(c)
        return total

    def term_scale(self, x: FormalSum):
        """Largest |c * value| over the terms of x; 0 for the empty sum."""
        mags = [abs(self.symbol(sym).value * c.numerator / c.denominator) for sym, c in x.items()]
        return max(mags, default=self.ctx.mpf(0))


@lru_cache(maxsize=8)
def get_evaluator(digits: int) -> ZetaEvaluator:
    return ZetaEvaluator(digits)


def zeta_single(s: int, digits: int) -> ApproxReal:
    return get_evaluator(digits).zeta_single(s)


def zeta_double(q: int, p: int, digits: int) -> ApproxReal:
    return get_evaluator(digits).zeta_double(q, p)


def tornheim(r: int, q: int, p: int, digits: int) -> ApproxReal:
    return get_evaluator(digits).tornheim(r, q, p)


def eval_formal(x: FormalSum, digits: int) -> ApproxReal:
    return get_evaluator(digits).eval_formal(x)


def tornheim_direct(r: int, q: int, p: int, digits: int = 20) -> ApproxReal:
    """T(r,q,p) from the integral of t^(r-1) Li_q(e^-t) Li_p(e^-t) / Gamma(r)."""
    sym = canonicalize(Symbol(T, (r, q, p)))
    if sym.kind != T:
        raise PreconditionError(f"tornheim_direct needs q, p >= 1, got T({r},{q},{p})")
    ctx = MPContext()
    ctx.dps = digits + 5

    def li(s, t):
        if s == 1:
            return -ctx.log(-ctx.expm1(-t))
        return ctx.polylog(s, ctx.exp(-t))

    def integrand(t):
        return t ** (r - 1) * li(q, t) * li(p, t)

    value, err = ctx.quad(integrand, [0, 1, 10, ctx.inf], error=True)
    g = ctx.gamma(r)
    return ApproxReal(value / g, err / g)


def partial_double_sum(q: int, p: int, n_max: int = 20000) -> float:
    """Float oracle for zeta(q,p): summation up to n_max plus midpoint-rule integral tails."""
    if q < 2 or p < 1:
        raise PreconditionError(f"partial_double_sum needs q >= 2 and p >= 1, got ({q},{p})")
    k = q + p
    inv_q = [0.0] + [n ** -float(q) for n in range(1, n_max + 1)]
    # suffix[m] = sum_{m < n <= n_max} n^-q
    suffix = [0.0] * (n_max + 2)
    for n in range(n_max, 0, -1):
        suffix[n - 1] = suffix[n] + inv_q[n]
    edge = n_max + 0.5
    r_tail = edge ** (1 - q) / (q - 1)
    head = math.fsum(m ** -float(p) * (suffix[m] + r_tail) for m in range(1, n_max + 1))
    tail = edge ** (2 - k) / ((q - 1) * (k - 2))
    return head + tail


def partial_tornheim_sum(r: int, q: int, p: int, n_max: int = 1000) -> float:
    """Float oracle for T(r,q,p): sum over m + n = s <= n_max, plus a power-law tail from the last shell."""
    if r < 1 or q < 1 or p < 1:
        raise PreconditionError(f"partial_tornheim_sum needs r, q, p >= 1, got ({r},{q},{p})")
    inv_q = [0.0] + [m ** -float(q) for m in range(1, n_max)]
    inv_p = inv_q if p == q else [0.0] + [n ** -float(p) for n in range(1, n_max)]
    shells = [
        s ** -float(r) * math.fsum(inv_q[m] * inv_p[s - m] for m in range(1, s))
        for s in range(2, n_max + 1)
    ]
    # the shell at s decays like s^-(r + min(q, p))
    decay = r + min(q, p)
    tail = shells[-1] * n_max / (decay - 1)
    return math.fsum(shells) + tail


def partial_single_sum(s: int, n_max: int = 20000) -> float:
    if s < 2:
        raise PreconditionError(f"partial_single_sum needs s >= 2, got {s}")
    head = math.fsum(n ** -float(s) for n in range(1, n_max + 1))
    return head + (n_max + 0.5) ** (1 - s) / (s - 1)


def rational_reconstruct(x: ApproxReal, max_denominator: int) -> Optional[Fraction]:
    """The rational within x's error bound with denominator <= max_denominator, or None."""
    if to_fraction(x.error) >= Fraction(1, 2 * max_denominator ** 2):
        raise InsufficientPrecisionError(
            f"error bound {float(x.error):.3g} too large for denominators up to {max_denominator}")
    f = to_fraction(x.value)
    cand = f.limit_denominator(max_denominator)
    if abs(cand - f) <= to_fraction(x.error):
        return cand
    return None


def pz_basis(k: int) -> list[Symbol]:
    """Z(k) followed by the products not already rational multiples of Z(k)."""
    basis = [zeta(k)]
    for a in range(2, k // 2 + 1):
        if a % 2 == 0 and (k - a) % 2 == 0:
            continue
        basis.append(zeta_product(a, k - a))
    return basis


def exact_residual(lhs: FormalSum, digits: int) -> tuple[object, object, bool]:
    """(|value|, threshold, passed) for the claim lhs = 0 at the given precision."""
    ev = get_evaluator(digits)
    value = ev.eval_formal(lhs)
    scale = max(ev.term_scale(lhs), ev.ctx.mpf(1))
    threshold = ev.ctx.mpf(10) ** (-(digits - 10)) * scale
    residual = abs(value.value)
    return residual, threshold, bool(residual < threshold)


def _fit_once(dz_part: FormalSum, k: int, mode: QuotientMode, digits: int) -> FormalSum:
    ev = get_evaluator(digits)
    ctx = ev.ctx
    value = ev.eval_formal(dz_part)
    basis = [zeta(k)] if mode == QuotientMode.MOD_ZETA_K else pz_basis(k)
    scale = max(ev.term_scale(dz_part), ctx.mpf(1))
    tol = ctx.mpf(10) ** (-int(0.75 * digits))
    if abs(value.value) < tol * scale:
        return FormalSum()
    if len(basis) == 1:
        z = ev.symbol(basis[0])
        ratio_err = value.error / z.value + abs(value.value) * z.error / z.value ** 2
        ratio = ApproxReal(value.value / z.value, ratio_err + ctx.mpf(10) ** (-digits))
        c = rational_reconstruct(ratio, 10 ** (digits // 3))
        if c is None:
            raise ReconstructionError(
                f"no rational multiple of Z({k}) with denominator <= 10^{digits // 3} matches at {digits} digits")
        return FormalSum.single(basis[0], c)
    vec = [value.value] + [ev.symbol(b).value for b in basis]
    rel = ctx.pslq(vec, tol=tol * scale, maxcoeff=10 ** (digits // 3), maxsteps=10 ** 6)
    if rel is None or rel[0] == 0:
        raise ReconstructionError(
            f"no relation over the PZ_{k} basis with coefficients <= 10^{digits // 3} at {digits} digits")
    a0 = rel[0]
    return FormalSum((b, Fraction(-a, a0)) for b, a in zip(basis, rel[1:]))


def fit_quotient(lhs: FormalSum, mode: QuotientMode, digits: int,
                 max_digits: Optional[int] = None) -> tuple[FormalSum, int]:
    """Find the exact Z/P tail t with (double zeta part of lhs) = t.

    Precision is doubled until the fitted tail re-verifies at twice the digits
    used for the fit.  Returns (tail, digits used).
    """
    if mode == QuotientMode.EXACT:
        raise PreconditionError("fit_quotient needs a ModZetaK or ModPZ claim")
    dz_part = lhs.restrict(DZ, T)
    k = lhs.weight
    if k is None:
        return FormalSum(), digits
    max_digits = max_digits or 8 * digits
    d = digits
    last_error: Optional[DZVError] = None
    while d <= max_digits:
        try:
            tail = _fit_once(dz_part, k, mode, d)
        except (ReconstructionError, InsufficientPrecisionError) as exc:
            last_error = exc
            logger.info("fit at %d digits failed (%s), raising precision", d, exc)
            d *= 2
            continue
        residual, threshold, ok = exact_residual(dz_part - tail, 2 * d)
        if ok:
            return tail, d
        last_error = VerificationError(
            f"fitted tail fails re-verification at {2 * d} digits: residual {float(residual):.3g}")
        logger.info("%s, raising precision", last_error)
        d *= 2
    logger.warning("giving up fitting weight-%d relation at %d digits", k, max_digits)
    raise last_error


@dataclass
class VerifyReport:
    label: str
    mode: QuotientMode
    weight: Optional[int]
    residual: float
    passed: bool
    digits: int
    coefficients: dict[Symbol, Fraction] = field(default_factory=dict)
    recheck_residual: Optional[float] = None
    detail: str = ""


def verify_relation(rel: Relation, digits: int = config.DEFAULT_DIGITS) -> VerifyReport:
    if rel.weight is not None and rel.weight > config.MAX_WEIGHT:
        raise PreconditionError(f"weight {rel.weight} exceeds the configured maximum {config.MAX_WEIGHT}")
    if rel.mode == QuotientMode.EXACT:
        residual, threshold, ok = exact_residual(rel.lhs, digits)
        detail = "" if ok else f"residual {float(residual):.3g} above {float(threshold):.3g}"
        logger.debug("%s: residual %.3g (%s)", rel.label, float(residual), "pass" if ok else "FAIL")
        return VerifyReport(rel.label, rel.mode, rel.weight, float(residual), ok, digits, detail=detail)

    dz_part = rel.double_zeta_part()
    try:
        tail, used = fit_quotient(dz_part, rel.mode, digits)
    except DZVError as exc:
        residual = abs(get_evaluator(digits).eval_formal(dz_part).value)
        logger.warning("%s: %s", rel.label, exc)
        return VerifyReport(rel.label, rel.mode, rel.weight, float(residual), False, digits, detail=str(exc))
    residual, _, ok = exact_residual(dz_part - tail, used)
    recheck, _, ok2 = exact_residual(dz_part - tail, 2 * used)
    logger.debug("%s: fitted %s at %d digits", rel.label, tail, used)
    return VerifyReport(rel.label, rel.mode, rel.weight, float(residual), ok and ok2, used,
                        coefficients=dict(tail.items()), recheck_residual=float(recheck))


__all__ = [
    "ApproxReal", "ZetaEvaluator", "get_evaluator", "GUARD_DIGITS",
    "InsufficientPrecisionError", "ReconstructionError", "VerificationError",
    "zeta_single", "zeta_double", "tornheim", "tornheim_direct", "eval_formal",
    "partial_double_sum", "partial_tornheim_sum", "partial_single_sum", "rational_reconstruct", "to_fraction",
    "pz_basis", "exact_residual", "fit_quotient", "VerifyReport", "verify_relation",
]
