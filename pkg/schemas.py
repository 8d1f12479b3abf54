"""JSON wire models for results, relations and tables, plus the LaTeX emitter.

Rationals always travel as decimal strings {"num": ..., "den": ...}.
"""
from __future__ import annotations

from datetime import datetime
from fractions import Fraction
from typing import Iterable, Optional

from pydantic import BaseModel, ConfigDict, Field

import config
from exactsys import OddOddEquation
from numeric import VerifyReport
from reduction import DimBounds, ReductionResult, epsilon_bits, parse_epsilon
from symbols import (
    DZ,
    T,
    Z,
    FormalSum,
    InvalidSymbolError,
    QuotientMode,
    Relation,
    Symbol,
    canonicalize,
    dz,
    parse_symbol,
)

_INT = r"^-?\d+$"
_POSITIVE = r"^[1-9]\d*$"


class SymbolModel(BaseModel):
    sym: str
    args: list[int]


class RationalModel(BaseModel):
    num: str = Field(pattern=_INT)
    den: str = Field("1", pattern=_POSITIVE)


class TermModel(SymbolModel):
    num: str = Field(pattern=_INT)
    den: str = Field("1", pattern=_POSITIVE)


class ReductionEntry(BaseModel):
    input: SymbolModel
    coeffs: list[TermModel]
    mode: QuotientMode = QuotientMode.MOD_PZ
    trace: list[str] = []


class TableModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(config.TABLE_SCHEMA_VERSION, alias="schema")
    weight: int
    epsilon: str
    generators: list[SymbolModel] = []
    entries: list[ReductionEntry]


class ReduceOutput(ReductionEntry):
    weight: int
    epsilon: str
    note: Optional[str] = None
    verify: Optional["VerifyReportModel"] = None


class GeneratorsModel(BaseModel):
    weight: int
    epsilon: str
    generators: list[SymbolModel]


class SpanModel(BaseModel):
    weight: int
    elements: list[list[TermModel]]
    target: Optional[SymbolModel] = None
    expression: Optional[list[RationalModel]] = None


class RelationModel(BaseModel):
    label: str
    mode: QuotientMode
    provenance: str = "symbolic"
    terms: list[TermModel]


class EquationModel(BaseModel):
    k: int
    i: int
    coeffs: list[TermModel]
    zeta_coefficient: RationalModel = RationalModel(num="0")
    provenance: str = "exact"


class ExpandModel(BaseModel):
    symbol: str
    terms: list[TermModel]


class DimsModel(BaseModel):
    dm_bound: int
    pz_bound: int
    mf_dim: int
    dz_bound: int


class VerifyReportModel(BaseModel):
    label: str
    mode: QuotientMode
    weight: Optional[int] = None
    residual: float
    passed: bool
    digits: int
    coefficients: list[TermModel] = []
    recheck_residual: Optional[float] = None
    detail: str = ""


class HistoryRecordModel(BaseModel):
    model_config = ConfigDict(from_attributes=True)

    id: int
    timestamp: datetime
    weight: Optional[int] = None
    label: str
    mode: QuotientMode
    digits: int
    residual: float
    passed: bool
    coefficients: str = "[]"
    detail: str = ""


ReduceOutput.model_rebuild()


# --- domain -> wire ----------------------------------------------------------

def symbol_model(sym: Symbol) -> SymbolModel:
    return SymbolModel(sym=sym.kind, args=list(sym.args))


def symbol_from_model(m: SymbolModel) -> Symbol:
    return canonicalize(Symbol(m.sym, tuple(m.args)))


def rational_model(c: Fraction) -> RationalModel:
    c = Fraction(c)
    return RationalModel(num=str(c.numerator), den=str(c.denominator))


def terms_model(x: FormalSum) -> list[TermModel]:
    return [
        TermModel(sym=s.kind, args=list(s.args), num=str(c.numerator), den=str(c.denominator))
        for s, c in sorted(x.items())
    ]


def sum_from_terms(terms: Iterable[TermModel]) -> FormalSum:
    return FormalSum(
        (symbol_from_model(t), Fraction(int(t.num), int(t.den))) for t in terms
    )


def trace_line(label: str, sym: Symbol) -> str:
    return f"{label}: {sym}"


def parse_trace_line(line: str) -> tuple[str, Symbol]:
    label, sep, sym = line.rpartition(": ")
    if not sep:
        raise InvalidSymbolError(f"malformed trace entry {line!r}")
    return label, parse_symbol(sym)


def reduction_entry(res: ReductionResult) -> ReductionEntry:
    return ReductionEntry(
        input=symbol_model(res.input),
        coeffs=terms_model(res.coefficients),
        mode=res.mode,
        trace=[trace_line(label, sym) for label, sym in res.trace],
    )


def reduction_from_entry(entry: ReductionEntry, epsilon: str) -> ReductionResult:
    sym = symbol_from_model(entry.input)
    return ReductionResult(
        input=sym,
        epsilon=parse_epsilon(epsilon, sym.weight),
        coefficients=sum_from_terms(entry.coeffs),
        trace=tuple(parse_trace_line(line) for line in entry.trace),
        mode=entry.mode,
    )


def table_model(k: int, epsilon: tuple[int, ...], results: Iterable[ReductionResult]) -> TableModel:
    bits = epsilon_bits(epsilon)
    gens = [dz(2 * j + e, k - 2 * j - e) for j, e in enumerate(epsilon, start=1)]
    return TableModel(
        weight=k,
        epsilon=bits,
        generators=[symbol_model(g) for g in gens],
        entries=[reduction_entry(r) for r in results],
    )


def results_from_table(table: TableModel) -> list[ReductionResult]:
    return [reduction_from_entry(e, table.epsilon) for e in table.entries]


def dump_table(table: TableModel) -> str:
    return table.model_dump_json(by_alias=True, indent=2)


def load_table(text: str) -> TableModel:
    return TableModel.model_validate_json(text)


def relation_model(rel: Relation) -> RelationModel:
    return RelationModel(label=rel.label, mode=rel.mode, provenance=rel.provenance,
                         terms=terms_model(rel.lhs))


def relation_from_model(m: RelationModel) -> Relation:
    return Relation(sum_from_terms(m.terms), m.mode, m.label, m.provenance)


def equation_model(eq: OddOddEquation) -> EquationModel:
    return EquationModel(
        k=eq.k,
        i=eq.i,
        coeffs=terms_model(eq.as_formal_sum()),
        zeta_coefficient=rational_model(eq.zeta_coefficient),
        provenance=eq.provenance,
    )


def equation_from_model(m: EquationModel) -> OddOddEquation:
    coeffs = {}
    for t in m.coeffs:
        sym = symbol_from_model(t)
        if sym.kind != DZ or int(t.den) != 1:
            raise InvalidSymbolError(f"equation terms are integer multiples of DZ symbols, got {t}")
        coeffs[sym.args[0]] = int(t.num)
    lam = Fraction(int(m.zeta_coefficient.num), int(m.zeta_coefficient.den))
    return OddOddEquation(m.k, m.i, coeffs, zeta_coefficient=lam, provenance=m.provenance)


def dims_model(bounds: DimBounds) -> DimsModel:
    return DimsModel(dm_bound=bounds.dm_bound, pz_bound=bounds.pz_bound,
                     mf_dim=bounds.mf_dim, dz_bound=bounds.dz_bound)


def report_model(report: VerifyReport) -> VerifyReportModel:
    return VerifyReportModel(
        label=report.label,
        mode=report.mode,
        weight=report.weight,
        residual=report.residual,
        passed=report.passed,
        digits=report.digits,
        coefficients=terms_model(FormalSum(report.coefficients)),
        recheck_residual=report.recheck_residual,
        detail=report.detail,
    )


# --- LaTeX -------------------------------------------------------------------

def latex_symbol(sym: Symbol) -> str:
    args = ",".join(str(a) for a in sym.args)
    if sym.kind in (DZ, Z):
        return rf"\zeta({args})"
    if sym.kind == T:
        return rf"T({args})"
    a, b = sym.args
    return rf"\zeta({a})\zeta({b})"


def _latex_magnitude(c: Fraction) -> str:
    c = abs(c)
    if c.denominator == 1:
        return "" if c == 1 else str(c.numerator)
    return rf"\frac{{{c.numerator}}}{{{c.denominator}}}"


def latex_sum(x: FormalSum) -> str:
    if not x:
        return "0"
    out = []
    for n, (sym, c) in enumerate(sorted(x.items())):
        sign = "-" if c < 0 else "+"
        body = _latex_magnitude(c) + latex_symbol(sym)
        if n == 0:
            out.append(body if c > 0 else f"-{body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


def _latex_quotient(mode: QuotientMode, k: Optional[int]) -> str:
    if mode == QuotientMode.MOD_ZETA_K:
        return rf"\mathbb{{Q}}\zeta({k})"
    return rf"\mathcal{{PZ}}_{{{k}}}"


def latex_relation(rel: Relation, weight: Optional[int] = None) -> str:
    """weight names the quotient when the relation cancels to 0."""
    if rel.mode == QuotientMode.EXACT:
        return f"{latex_sum(rel.lhs)} = 0"
    k = rel.weight if rel.weight is not None else weight
    return rf"{latex_sum(rel.lhs)} \in {_latex_quotient(rel.mode, k)}"


def latex_reduction(res: ReductionResult) -> str:
    return (rf"{latex_symbol(res.input)} \equiv {latex_sum(res.coefficients)}"
            rf" \pmod{{{_latex_quotient(res.mode, res.weight)}}}")


def latex_equation(eq: OddOddEquation) -> str:
    return f"{latex_sum(eq.as_formal_sum())} = 0"


__all__ = [
    "SymbolModel", "RationalModel", "TermModel", "ReductionEntry", "TableModel", "ReduceOutput",
    "GeneratorsModel", "SpanModel", "ExpandModel", "RelationModel", "EquationModel", "DimsModel", "VerifyReportModel", "HistoryRecordModel",
    "symbol_model", "symbol_from_model", "rational_model", "terms_model", "sum_from_terms",
    "trace_line", "parse_trace_line", "reduction_entry", "reduction_from_entry",
    "table_model", "results_from_table", "dump_table", "load_table",
    "relation_model", "relation_from_model", "equation_model", "equation_from_model",
    "dims_model", "report_model",
    "latex_symbol", "latex_sum", "latex_relation", "latex_reduction", "latex_equation",
]
