"""Primitive relations among double zeta values and Tornheim series.

Each generator returns a :class:`symbols.Relation`.  Exact relations are
identities in R; ModZetaK and ModPZ relations only assert membership of the
double-zeta part in Q*zeta(k) or in PZ_k, their Z/P content is left out.
"""
from __future__ import annotations

import logging
import threading
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from symbols import (
    DZ,
    P,
    T,
    Z,
    FormalSum,
    PreconditionError,
    QuotientMode,
    Relation,
    Symbol,
    dz,
    linear_combination,
    torn,
    zeta,
    zeta_product,
)

logger = logging.getLogger(__name__)

EXACT = QuotientMode.EXACT
MOD_ZETA_K = QuotientMode.MOD_ZETA_K
MOD_PZ = QuotientMode.MOD_PZ


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise PreconditionError(message)


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


def binomial(n: int, m: int) -> int:
    if m < 0 or n < 0 or m > n:
        return 0
    return comb(n, m)


# --- Bernoulli numbers -------------------------------------------------------

_even_bernoulli: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def _extend_even_bernoulli(m: int) -> None:
    # sum_{r=0}^{n} C(n+1, r) B_r = 0 with B_1 = -1/2, odd B_r = 0 for r >= 3
    with _bernoulli_lock:
        while len(_even_bernoulli) <= m:
            n = 2 * len(_even_bernoulli)
            s = Fraction(comb(n + 1, 1), 1) * Fraction(-1, 2)
            for j, b in enumerate(_even_bernoulli):
                s += comb(n + 1, 2 * j) * b
            _even_bernoulli.append(-s / (n + 1))


def bernoulli(n: int) -> Fraction:
    """B_n with the convention B_1 = -1/2."""
    _require(n >= 0, f"Bernoulli index must be >= 0, got {n}")
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    _extend_even_bernoulli(n // 2)
    return _even_bernoulli[n // 2]


def zeta_even_ratio(n: int) -> Fraction:
    """The rational zeta(2n) / pi^(2n)."""
    _require(n >= 1, f"zeta_even_ratio needs n >= 1, got {n}")
    b = bernoulli(2 * n)
    return _sign(n + 1) * b * 2 ** (2 * n) / (2 * factorial(2 * n))


def even_product_ratio(a: int, k: int) -> Fraction:
    _require(a % 2 == 0 and (k - a) % 2 == 0,
             f"even_product_ratio needs even arguments, got a={a}, k-a={k - a}")
    _require(a >= 2 and k - a >= 2, f"even_product_ratio needs a >= 2 and k-a >= 2, got a={a}, k={k}")
    num = zeta_even_ratio(a // 2) * zeta_even_ratio((k - a) // 2)
    return num / zeta_even_ratio(k // 2)


def merge_even_products(x: FormalSum) -> FormalSum:
    """Fold every P(even, even) into its rational multiple of Z(k)."""
    pairs = []
    for sym, c in x.items():
        if sym.kind == P and sym.args[0] % 2 == 0 and sym.args[1] % 2 == 0:
            a, b = sym.args
            pairs.append((c * even_product_ratio(a, a + b), FormalSum.single(zeta(a + b))))
        else:
            pairs.append((c, FormalSum.single(sym)))
    return linear_combination(pairs)


# --- Exact relations ---------------------------------------------------------

def euler_top(k: int) -> Relation:
    _require(k >= 3, f"euler_top needs k >= 3, got {k}")
    terms: dict[Symbol, Fraction] = {dz(k - 1, 1): Fraction(2), zeta(k): Fraction(-(k - 1))}
    for j in range(2, k - 1):
        sym = zeta_product(j, k - j)
        terms[sym] = terms.get(sym, Fraction(0)) + 1
    return Relation(FormalSum(terms), EXACT, f"euler_top({k})")


def stuffle(a: int, b: int) -> Relation:
    _require(a >= 2 and b >= 2, f"stuffle needs a, b >= 2, got ({a},{b})")
    lhs = FormalSum([
        (zeta_product(a, b), 1),
        (dz(a, b), -1),
        (dz(b, a), -1),
        (zeta(a + b), -1),
    ])
    return Relation(lhs, EXACT, f"stuffle({a},{b})")


def tornheim_recursion(r: int, q: int, p: int) -> Relation:
    _require(r >= 1, f"tornheim_recursion needs r >= 1, got {r}")
    _require(q >= 1 and p >= 1, f"tornheim_recursion needs q, p >= 1, got ({q},{p})")
    lhs = FormalSum([
        (torn(r, q, p), 1),
        (torn(r + 1, q - 1, p), -1),
        (torn(r + 1, q, p - 1), -1),
    ])
    return Relation(lhs, EXACT, f"tornheim_recursion({r},{q},{p})")


def torn_p1_rewrite(a: int, b: int) -> Relation:
    _require(a >= 2, f"torn_p1_rewrite needs a >= 2, got {a}")
    _require(b >= 1, f"torn_p1_rewrite needs b >= 1, got {b}")
    lhs = FormalSum([
        (torn(a, b, 1), 1),
        (torn(a - 1, b, 2), -1),
        (torn(a, b - 1, 2), 1),
    ])
    return Relation(lhs, EXACT, f"torn_p1_rewrite({a},{b})")


def gkz_sum(k: int) -> Relation:
    _require(k % 2 == 0 and k >= 4, f"gkz_sum needs even k >= 4, got {k}")
    terms = [(dz(j, k - j), 1) for j in range(3, k, 2)]
    terms.append((zeta(k), Fraction(-1, 4)))
    return Relation(FormalSum(terms), EXACT, f"gkz_sum({k})")


def sum_formula(k: int) -> Relation:
    _require(k >= 3, f"sum_formula needs k >= 3, got {k}")
    terms = [(dz(j, k - j), 1) for j in range(2, k)]
    terms.append((zeta(k), -1))
    return Relation(FormalSum(terms), EXACT, f"sum_formula({k})")


# --- Tornheim expansion ------------------------------------------------------

@lru_cache(maxsize=None)
def _expand(r: int, q: int, p: int) -> FormalSum:
    if p == 0:
        return FormalSum.single(dz(r, q))
    if q == 0:
        return FormalSum.single(dz(r, p))
    # symmetric in (q, p): keep the larger one first so the cache is shared
    if q < p:
        return _expand(r, p, q)
    return _expand(r + 1, q - 1, p) + _expand(r + 1, q, p - 1)


def tornheim_expand(r: int, q: int, p: int) -> FormalSum:
    _require(r >= 1, f"tornheim_expand needs r >= 1, got {r}")
    _require(q >= 0 and p >= 0 and q + p >= 1, f"tornheim_expand needs q, p >= 0 and q + p >= 1, got ({q},{p})")
    _require(q * p > 0 or r >= 2, f"T({r},{q},{p}) is a boundary case with r = 1, which diverges")
    return _expand(r, max(q, p), min(q, p))


def expand_tornheim_terms(x: FormalSum) -> FormalSum:
    """Replace every T symbol of ``x`` by its double zeta expansion."""
    pairs = []
    for sym, c in x.items():
        if sym.kind == T:
            pairs.append((c, tornheim_expand(*sym.args)))
        else:
            pairs.append((c, FormalSum.single(sym)))
    return linear_combination(pairs)


# --- Quotient relations ------------------------------------------------------

def cyclic_terms(r: int, q: int, p: int) -> FormalSum:
    _require(r >= 1 and q >= 1 and p >= 1, f"cyclic needs r, q, p >= 1, got ({r},{q},{p})")
    return FormalSum([
        (torn(r, q, p), _sign(r)),
        (torn(q, p, r), _sign(q)),
        (torn(p, r, q), _sign(p)),
    ])


def cyclic_unexpanded(r: int, q: int, p: int) -> Relation:
    return Relation(cyclic_terms(r, q, p), MOD_ZETA_K, f"cyclic({r},{q},{p})")


def cyclic(r: int, q: int, p: int) -> Relation:
    lhs = expand_tornheim_terms(cyclic_terms(r, q, p))
    return Relation(lhs, MOD_ZETA_K, f"cyclic({r},{q},{p})")


def boyadzhiev_mod(r: int, q: int, p: int) -> Relation:
    _require(p >= 2, f"boyadzhiev_mod needs p >= 2, got p={p}")
    _require(q >= 0, f"boyadzhiev_mod needs q >= 0, got q={q}")
    _require(r >= 1, f"boyadzhiev_mod needs r >= 1, got r={r}")
    _require(q + r >= 2, f"boyadzhiev_mod needs q + r >= 2, got q + r = {q + r}")
    k = r + q + p
    pairs = [(1, FormalSum.single(torn(r, q, p)))]
    s = _sign(p)
    for j in range(1, r):
        pairs.append((-s * binomial(p + r - j - 2, p - 1), FormalSum.single(dz(j + 1, k - j - 1))))
    return Relation(linear_combination(pairs), MOD_PZ, f"boyadzhiev_mod({r},{q},{p})")


def descent(r: int, k: int) -> Relation:
    _require(k % 2 == 0, f"descent needs even k, got {k}")
    _require(r % 2 == 1, f"descent needs odd r, got {r}")
    _require(3 <= r <= k - 3, f"descent needs 3 <= r <= k-3, got r={r}, k={k}")
    rel = boyadzhiev_mod(r, 0, k - r)
    return Relation(rel.lhs, MOD_PZ, f"descent({r},{k})")


# --- Suites ------------------------------------------------------------------

def exact_suite(k: int) -> list[Relation]:
    """Every exact relation instance of weight k."""
    rels = [euler_top(k)]
    rels += [stuffle(a, k - a) for a in range(2, k // 2 + 1) if k - a >= 2]
    for r in range(1, k - 1):
        for q in range(1, k - r):
            p = k - r - q
            if 1 <= p <= q:
                rels.append(tornheim_recursion(r, q, p))
    rels += [torn_p1_rewrite(a, k - 1 - a) for a in range(2, k - 1)]
    if k % 2 == 0 and k >= 4:
        rels.append(gkz_sum(k))
    rels.append(sum_formula(k))
    logger.debug("exact suite of weight %d: %d relations", k, len(rels))
    return rels


def mod_suite(k: int) -> list[Relation]:
    """Quotient relations of weight k: one cyclic per multiset, boyadzhiev_mod with r >= 2, descent.

    cyclic and descent are even-weight statements and are skipped for odd k.
    """
    rels = []
    if k % 2 == 0:
        for r in range(1, k // 3 + 1):
            for q in range(r, (k - r) // 2 + 1):
                rels.append(cyclic(r, q, k - r - q))
    for r in range(2, k - 1):
        for p in range(2, k - r + 1):
            rels.append(boyadzhiev_mod(r, k - r - p, p))
    if k % 2 == 0:
        rels += [descent(r, k) for r in range(3, k - 2, 2)]
    logger.debug("quotient suite of weight %d: %d relations", k, len(rels))
    return rels


__all__ = [
    "DZ", "T", "Z", "P",
    "binomial", "bernoulli", "zeta_even_ratio", "even_product_ratio", "merge_even_products",
    "euler_top", "stuffle", "tornheim_recursion", "torn_p1_rewrite", "gkz_sum", "sum_formula",
    "tornheim_expand", "expand_tornheim_terms",
    "cyclic_terms", "cyclic_unexpanded", "cyclic", "boyadzhiev_mod", "descent",
    "exact_suite", "mod_suite",
]
