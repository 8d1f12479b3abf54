"""Symbol alphabet, exact formal sums and canonical forms.

Every value the engine manipulates is a Q-linear combination of four kinds
of atoms: double zeta values DZ(q,p), Tornheim double series T(r,q,p),
single zeta values Z(k) and products P(a,b) = Z(a)Z(b).
"""
from __future__ import annotations

import logging
import re
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]

DZ = "DZ"
T = "T"
Z = "Z"
P = "P"

_ARITY = {DZ: 2, T: 3, Z: 1, P: 2}


class DZVError(ValueError):
    """Root of every domain error; the message names the violated constraint."""


class InvalidSymbolError(DZVError):
    pass


class WeightMismatchError(DZVError):
    pass


class PreconditionError(DZVError):
    pass


class QuotientMode(str, Enum):
    EXACT = "Exact"
    MOD_ZETA_K = "ModZetaK"
    MOD_PZ = "ModPZ"


@dataclass(frozen=True, order=True)
class Symbol:
    kind: str
    args: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in _ARITY:
            raise InvalidSymbolError(f"unknown symbol kind {self.kind!r}")
        if len(self.args) != _ARITY[self.kind]:
            raise InvalidSymbolError(
                f"{self.kind} takes {_ARITY[self.kind]} indices, got {len(self.args)}")
        if any(not isinstance(a, int) or isinstance(a, bool) for a in self.args):
            raise InvalidSymbolError(f"{self.kind} indices must be integers: {self.args!r}")
        if any(a < 0 for a in self.args):
            raise InvalidSymbolError(f"{self.kind} indices must be nonnegative: {self.args!r}")

    @property
    def weight(self) -> int:
        return sum(self.args)

    def __str__(self) -> str:
        return f"{self.kind}({','.join(str(a) for a in self.args)})"

    def __repr__(self) -> str:
        return str(self)


_SYMBOL_RE = re.compile(r"^\s*(DZ|T|Z|P)\(\s*(\d+(?:\s*,\s*\d+)*)\s*\)\s*$")


def parse_symbol(text: str) -> Symbol:
    match = _SYMBOL_RE.match(text)
    if not match:
        raise InvalidSymbolError(f"cannot parse symbol {text!r}")
    kind, args = match.groups()
    return Symbol(kind, tuple(int(a) for a in args.split(",")))


def canonicalize(sym: Symbol) -> Symbol:
    kind, args = sym.kind, sym.args
    if kind == DZ:
        q, p = args
        if q < 2 or p < 1:
            raise InvalidSymbolError(f"DZ({q},{p}) diverges: need q >= 2 and p >= 1")
        return sym
    if kind == Z:
        if args[0] < 2:
            raise InvalidSymbolError(f"Z({args[0]}) diverges: need k >= 2")
        return sym
    if kind == P:
        a, b = args
        if a < 2 or b < 2:
            raise InvalidSymbolError(f"P({a},{b}) involves a divergent zeta: need a, b >= 2")
        return sym if a <= b else Symbol(P, (b, a))
    r, q, p = args
    if r < 1:
        raise InvalidSymbolError(f"T({r},{q},{p}) needs r >= 1")
    if q + p < 1:
        raise InvalidSymbolError(f"T({r},{q},{p}) needs q + p >= 1")
    if q < p:
        q, p = p, q
    if p == 0:
        if r < 2:
            raise InvalidSymbolError(
                f"T({r},{q},0) is a boundary case with r = 1; the rewrite to DZ needs r >= 2")
        return Symbol(DZ, (r, q))
    return Symbol(T, (r, q, p))


def weight(sym: Symbol) -> int:
    return sym.weight


def dz(q: int, p: int) -> Symbol:
    return canonicalize(Symbol(DZ, (q, p)))


def torn(r: int, q: int, p: int) -> Symbol:
    return canonicalize(Symbol(T, (r, q, p)))


def zeta(k: int) -> Symbol:
    return canonicalize(Symbol(Z, (k,)))


def zeta_product(a: int, b: int) -> Symbol:
    return canonicalize(Symbol(P, (a, b)))


class FormalSum(Mapping):
    """Finite map Symbol -> Fraction, homogeneous in weight, zero terms dropped."""

    __slots__ = ("_terms", "_weight", "_hash")

    def __init__(self, terms: Optional[Union[Mapping, Iterable]] = None):
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        collected: dict[Symbol, Fraction] = {}
        for sym, coeff in items:
            if not isinstance(sym, Symbol):
                raise InvalidSymbolError(f"formal sums hold Symbols, got {sym!r}")
            collected[sym] = collected.get(sym, Fraction(0)) + Fraction(coeff)
        self._terms = {s: c for s, c in collected.items() if c != 0}
        weights = {s.weight for s in self._terms}
        if len(weights) > 1:
            raise WeightMismatchError(f"mixed weights {sorted(weights)} in one formal sum")
        self._weight = weights.pop() if weights else None
        self._hash = None

    @classmethod
    def single(cls, sym: Symbol, coeff: Scalar = 1) -> "FormalSum":
        return cls({sym: coeff})

    @property
    def weight(self) -> Optional[int]:
        return self._weight

    def __getitem__(self, sym: Symbol) -> Fraction:
        return self._terms[sym]

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def coefficient(self, sym: Symbol) -> Fraction:
        return self._terms.get(sym, Fraction(0))

    def restrict(self, *kinds: str) -> "FormalSum":
        return FormalSum({s: c for s, c in self._terms.items() if s.kind in kinds})

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return sum_add(self, other)

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return sum_add(self, sum_scale(-1, other))

    def __neg__(self) -> "FormalSum":
        return sum_scale(-1, self)

    def __mul__(self, c: Scalar) -> "FormalSum":
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return sum_scale(c, self)

    __rmul__ = __mul__

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for sym in sorted(self._terms):
            c = self._terms[sym]
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            body = str(sym) if mag == 1 else f"{mag}*{sym}"
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    def __repr__(self) -> str:
        return f"FormalSum({self})"


def _check_weights(x: FormalSum, y: FormalSum) -> None:
    if x.weight is not None and y.weight is not None and x.weight != y.weight:
        raise WeightMismatchError(f"cannot combine weight {x.weight} with weight {y.weight}")


def sum_add(x: FormalSum, y: FormalSum) -> FormalSum:
    _check_weights(x, y)
    terms = dict(x.items())
    for sym, c in y.items():
        terms[sym] = terms.get(sym, Fraction(0)) + c
    return FormalSum(terms)


def sum_scale(c: Scalar, x: FormalSum) -> FormalSum:
    c = Fraction(c)
    if c == 0:
        return FormalSum()
    return FormalSum({s: c * v for s, v in x.items()})


def substitute(x: FormalSum, sym: Symbol, repl: FormalSum) -> FormalSum:
    if repl and repl.weight != sym.weight:
        raise WeightMismatchError(
            f"replacement of weight {repl.weight} for {sym} of weight {sym.weight}")
    c = x.coefficient(sym)
    if c == 0:
        return x
    rest = FormalSum({s: v for s, v in x.items() if s != sym})
    return sum_add(rest, sum_scale(c, repl))


def linear_combination(pairs: Iterable[tuple[Scalar, FormalSum]]) -> FormalSum:
    terms: dict[Symbol, Fraction] = {}
    for c, x in pairs:
        c = Fraction(c)
        if c == 0:
            continue
        for sym, v in x.items():
            terms[sym] = terms.get(sym, Fraction(0)) + c * v
    return FormalSum(terms)


@dataclass(frozen=True)
class Relation:
    """A formal sum asserted to vanish in the quotient named by ``mode``.

    Exact: lhs = 0 in R.  ModZetaK: lhs lies in Q*zeta(k).  ModPZ: lhs lies in PZ_k.
    """

    lhs: FormalSum
    mode: QuotientMode
    label: str
    provenance: str = "symbolic"

    @property
    def weight(self) -> Optional[int]:
        return self.lhs.weight

    def double_zeta_part(self) -> FormalSum:
        return self.lhs.restrict(DZ, T)

    def as_mode(self, mode: QuotientMode) -> "Relation":
        """Read the relation in a coarser quotient; Z/P content is dropped."""
        lhs = self.lhs if mode == QuotientMode.EXACT else self.double_zeta_part()
        return Relation(lhs, mode, self.label, self.provenance)

    def __str__(self) -> str:
        tail = {
            QuotientMode.EXACT: "= 0",
            QuotientMode.MOD_ZETA_K: f"in Q*Z({self.weight})",
            QuotientMode.MOD_PZ: f"in PZ_{self.weight}",
        }[self.mode]
        return f"{self.label}: {self.lhs} {tail}"
