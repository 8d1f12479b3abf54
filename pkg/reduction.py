"""Reduction of even-weight double zeta values onto epsilon-generator sets modulo PZ_k.

The engine walks the first index r of zeta(r, k-r) downward:

* r = k-1: the Euler formula puts zeta(k-1,1) in PZ_k.
* floor((k-1)/3) < r <= k-2: a cyclic relation trades T(r,q,p) for two
  Tornheim values with smaller first index; boyadzhiev_mod turns each of
  them back into double zetas, which are reduced recursively.
* r <= floor((k-1)/3): descent relations move the slot j = r//2 onto its
  chosen generator zeta(2j + eps_j, k - 2j - eps_j).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from relations import (
    boyadzhiev_mod,
    cyclic_unexpanded,
    descent,
    euler_top,
    torn_p1_rewrite,
)
from symbols import (
    DZ,
    DZVError,
    FormalSum,
    PreconditionError,
    QuotientMode,
    Relation,
    Symbol,
    dz,
    linear_combination,
    torn,
)

logger = logging.getLogger(__name__)

TraceEntry = tuple[str, Symbol]


def _check_even_weight(k: int) -> None:
    if k % 2:
        raise PreconditionError(f"weight must be even, got {k}")
    if k < 2:
        raise PreconditionError(f"weight must be >= 2, got {k}")


def slot_count(k: int) -> int:
    return max(0, (k - 2) // 6)


def mf_dim(k: int) -> int:
    """Dimension of level-one modular forms of even weight k >= 0."""
    if k % 2 or k < 0:
        raise PreconditionError(f"modular form weight must be even and >= 0, got {k}")
    if k % 12 == 2:
        return k // 12
    return k // 12 + 1


@dataclass(frozen=True)
class DimBounds:
    dm_bound: int
    pz_bound: int
    mf_dim: int
    dz_bound: int


def dim_bounds(k: int) -> DimBounds:
    _check_even_weight(k)
    bounds = DimBounds(
        dm_bound=slot_count(k),
        pz_bound=(k + 2) // 4,
        mf_dim=mf_dim(k),
        dz_bound=k // 2 - mf_dim(k),
    )
    assert bounds.dm_bound + bounds.pz_bound == bounds.dz_bound, bounds
    return bounds


def parse_epsilon(bits: str | Sequence[int] | None, k: int) -> tuple[int, ...]:
    """Bit string (or sequence) to a checked epsilon tuple; None means all zero."""
    n = slot_count(k)
    if bits is None:
        return (0,) * n
    if isinstance(bits, str):
        if any(ch not in "01" for ch in bits):
            raise PreconditionError(f"epsilon must be a string over {{0,1}}, got {bits!r}")
        eps = tuple(int(ch) for ch in bits)
    else:
        eps = tuple(int(b) for b in bits)
        if any(b not in (0, 1) for b in eps):
            raise PreconditionError(f"epsilon entries must be 0 or 1, got {list(bits)!r}")
    if len(eps) != n:
        raise PreconditionError(f"epsilon for weight {k} must have length floor((k-2)/6) = {n}, got {len(eps)}")
    return eps


def epsilon_bits(eps: Iterable[int]) -> str:
    return "".join(str(b) for b in eps)


@dataclass(frozen=True)
class GeneratorSet:
    weight: int
    epsilon: tuple[int, ...]

    @property
    def members(self) -> list[Symbol]:
        k = self.weight
        return [dz(2 * j + e, k - 2 * j - e) for j, e in enumerate(self.epsilon, start=1)]

    def __contains__(self, sym: Symbol) -> bool:
        return sym in self.members

    def __len__(self) -> int:
        return len(self.epsilon)


def generator_set(k: int, epsilon: str | Sequence[int] | None = None) -> GeneratorSet:
    _check_even_weight(k)
    return GeneratorSet(k, parse_epsilon(epsilon, k))


@dataclass(frozen=True)
class ReductionResult:
    input: Symbol
    epsilon: tuple[int, ...]
    coefficients: FormalSum
    trace: tuple[TraceEntry, ...]
    mode: QuotientMode = QuotientMode.MOD_PZ

    @property
    def weight(self) -> int:
        return self.input.weight

    @property
    def generators(self) -> GeneratorSet:
        return GeneratorSet(self.weight, self.epsilon)


def _merge_traces(*traces: Iterable[TraceEntry]) -> tuple[TraceEntry, ...]:
    seen: dict[TraceEntry, None] = {}
    for trace in traces:
        for entry in trace:
            seen.setdefault(entry, None)
    return tuple(seen)


class ReductionEngine:
    """Reduces every zeta(r, k-r) of one weight onto one generator set, memoized per r."""

    def __init__(self, k: int, epsilon: str | Sequence[int] | None = None):
        self.gens = generator_set(k, epsilon)
        self.k = k
        self._members = set(self.gens.members)
        self._memo: dict[int, tuple[FormalSum, tuple[TraceEntry, ...]]] = {}
        self._tornheim: dict[Symbol, tuple[FormalSum, tuple[TraceEntry, ...]]] = {}

    @property
    def epsilon(self) -> tuple[int, ...]:
        return self.gens.epsilon

    def reduce(self, q0: int, p0: int) -> ReductionResult:
        if q0 + p0 != self.k:
            raise PreconditionError(f"DZ({q0},{p0}) has weight {q0 + p0}, engine weight is {self.k}")
        sym = dz(q0, p0)
        coeffs, trace = self._reduce_index(q0)
        return ReductionResult(sym, self.epsilon, coeffs, trace)

    def reduce_all(self) -> list[ReductionResult]:
        return [self.reduce(j, self.k - j) for j in range(2, self.k)]

    def _reduce_index(self, r: int) -> tuple[FormalSum, tuple[TraceEntry, ...]]:
        if r in self._memo:
            return self._memo[r]
        k = self.k
        sym = dz(r, k - r)
        if sym in self._members:
            out = (FormalSum.single(sym), ())
        elif r == k - 1:
            out = (FormalSum(), ((euler_top(k).label, sym),))
        elif r > (k - 1) // 3:
            expr, trace = self._from_cyclic(r)
            out = self._compose(expr, trace)
        else:
            expr, trace = self._from_descent(r)
            out = self._compose(expr, trace)
        logger.debug("weight %d eps %s: %s -> %s", k, epsilon_bits(self.epsilon), sym, out[0])
        self._memo[r] = out
        return out

    def _compose(self, expr: FormalSum, trace: tuple[TraceEntry, ...]):
        pairs, traces = [], [trace]
        for s, c in expr.items():
            sub, sub_trace = self._reduce_index(s.args[0])
            pairs.append((c, sub))
            traces.append(sub_trace)
        return linear_combination(pairs), _merge_traces(*traces)

    def witness(self, r: int) -> tuple[int, int]:
        """The (q, p) with q + p = k - r used for the cyclic step at index r."""
        k, third = self.k, self.k // 3
        if k % 3 == 0 and r == k // 3:
            return r, r
        q = min(third, k - r - 1)
        p = k - r - q
        if not 1 <= p <= third:
            p, q = third, third + 1
        return q, p

    def tornheim_mod_pz(self, t: Symbol) -> tuple[FormalSum, tuple[TraceEntry, ...]]:
        """A double zeta combination congruent to the Tornheim symbol t modulo PZ_k."""
        if t.kind == DZ:
            return FormalSum.single(t), ()
        if t in self._tornheim:
            return self._tornheim[t]
        a, b, c = t.args
        if b >= 2:
            rel = boyadzhiev_mod(a, c, b)
            out = (FormalSum.single(t) - rel.lhs, ((rel.label, t),))
        else:
            # T(a,1,1) = T(a-1,2,1) - DZ(a,2)
            rel = torn_p1_rewrite(a, 1)
            inner, inner_trace = self.tornheim_mod_pz(torn(a - 1, 2, 1))
            out = (inner - FormalSum.single(dz(a, 2)), _merge_traces(((rel.label, t),), inner_trace))
        self._tornheim[t] = out
        return out

    def _from_cyclic(self, r: int) -> tuple[FormalSum, tuple[TraceEntry, ...]]:
        k = self.k
        target = dz(r, k - r)
        q, p = self.witness(r)
        cyc = cyclic_unexpanded(r, q, p)
        head = torn(r, q, p)
        c0 = cyc.lhs.coefficient(head)
        rest = [(c, t) for t, c in cyc.lhs.items() if t != head]

        head_expr, head_trace = self.tornheim_mod_pz(head)
        s = head_expr.coefficient(target)
        if s == 0 or c0 == 0:
            raise DZVError(f"cyclic step for {target} with witness ({q},{p}) is degenerate")
        lower_head = head_expr - FormalSum.single(target, s)

        traces = [((cyc.label, target),), head_trace]
        pairs = [(c0, lower_head)]
        for c, t in rest:
            expr, trace = self.tornheim_mod_pz(t)
            pairs.append((c, expr))
            traces.append(trace)
        # c0 * (s * target + lower_head) + rest = 0 modulo PZ_k
        solved = linear_combination(pairs) * (-1 / (c0 * s))
        for sym in solved:
            assert sym.args[0] < r, (target, sym)
        return solved, _merge_traces(*traces)

    def _from_descent(self, r: int) -> tuple[FormalSum, tuple[TraceEntry, ...]]:
        j = r // 2
        rel = descent(2 * j + 1, self.k)
        target = dz(r, self.k - r)
        c = rel.lhs.coefficient(target)
        solved = (FormalSum.single(target, c) - rel.lhs) * (Fraction(1) / c)
        return solved, ((rel.label, target),)


@lru_cache(maxsize=64)
def engine_for(k: int, epsilon: tuple[int, ...]) -> ReductionEngine:
    return ReductionEngine(k, epsilon)


def reduce_dz_mod_pz(q0: int, p0: int, epsilon: str | Sequence[int] | None = None) -> ReductionResult:
    if q0 < 2 or p0 < 1:
        raise PreconditionError(f"DZ({q0},{p0}) diverges: need q >= 2 and p >= 1")
    k = q0 + p0
    _check_even_weight(k)
    return engine_for(k, parse_epsilon(epsilon, k)).reduce(q0, p0)


def change_generators(res: ReductionResult, epsilon_new: str | Sequence[int]) -> ReductionResult:
    k = res.weight
    eps = tuple(int(b) for b in epsilon_new)
    if len(eps) != len(res.epsilon):
        raise PreconditionError(f"epsilon length mismatch: {len(res.epsilon)} vs {len(eps)}")
    eps = parse_epsilon(eps, k)
    engine = engine_for(k, eps)
    pairs, traces = [], [res.trace]
    for g, c in res.coefficients.items():
        sub = engine.reduce(*g.args)
        pairs.append((c, sub.coefficients))
        traces.append(sub.trace)
    return ReductionResult(res.input, eps, linear_combination(pairs), _merge_traces(*traces))


def residual(res: ReductionResult) -> FormalSum:
    """input - sum c*g; the reduction claims this lies in PZ_k."""
    return FormalSum.single(res.input) - res.coefficients


def as_relation(res: ReductionResult) -> Relation:
    """The reduction read as a ModPZ relation, for numeric certification."""
    label = f"reduce {res.input} eps={epsilon_bits(res.epsilon) or '-'}"
    return Relation(residual(res), QuotientMode.MOD_PZ, label)


__all__ = [
    "DimBounds", "dim_bounds", "mf_dim", "slot_count",
    "GeneratorSet", "generator_set", "parse_epsilon", "epsilon_bits",
    "ReductionResult", "ReductionEngine", "engine_for",
    "reduce_dz_mod_pz", "change_generators", "residual", "as_relation",
]
