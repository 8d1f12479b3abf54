from fractions import Fraction

import mpmath
import pytest

import config
from numeric import (
    ApproxReal,
    InsufficientPrecisionError,
    ReconstructionError,
    VerificationError,
    ZetaEvaluator,
    eval_formal,
    fit_quotient,
    partial_double_sum,
    partial_single_sum,
    partial_tornheim_sum,
    pz_basis,
    rational_reconstruct,
    to_fraction,
    tornheim_direct,
    verify_relation,
)
from relations import (
    boyadzhiev_mod,
    euler_top,
    exact_suite,
    gkz_sum,
    mod_suite,
    stuffle,
    torn_p1_rewrite,
    tornheim_recursion,
)
from symbols import (
    DZVError,
    FormalSum,
    PreconditionError,
    QuotientMode,
    Relation,
    T,
    canonicalize,
    dz,
    torn,
    zeta,
    zeta_product,
)


def test_error_classes_are_distinct():
    classes = {InsufficientPrecisionError, ReconstructionError, VerificationError}
    assert len(classes) == 3
    assert all(issubclass(c, DZVError) for c in classes)


def test_minimum_digits():
    with pytest.raises(PreconditionError, match=r"digits below minimum \(10\)"):
        ZetaEvaluator(config.MIN_DIGITS - 5)


@pytest.mark.parametrize("s", [2, 3, 4, 7, 12])
def test_single_zeta_matches_mpmath(evaluator, s):
    value = evaluator.zeta_single(s)
    with mpmath.workdps(50):
        assert abs(value.value - mpmath.zeta(s)) < mpmath.mpf(10) ** -38
    assert value.error < mpmath.mpf(10) ** -40


@pytest.mark.parametrize("q, p, ratio, k", [
    (2, 1, Fraction(1), 3),
    (3, 1, Fraction(1, 4), 4),
    (2, 2, Fraction(3, 4), 4),
])
def test_double_zeta_anchors(evaluator, q, p, ratio, k):
    value = evaluator.zeta_double(q, p)
    expected = evaluator.zeta_single(k).scale(ratio)
    assert abs(value.value - expected.value) < evaluator.ctx.mpf(10) ** -38


@pytest.mark.parametrize("q, p, ratio", [
    (2, 1, Fraction(1)),
    (3, 1, Fraction(1, 4)),
    (2, 2, Fraction(3, 4)),
])
def test_anchors_reconstruct_exactly(q, p, ratio):
    tail, used = fit_quotient(FormalSum.single(dz(q, p)), QuotientMode.MOD_ZETA_K, 40)
    assert tail == FormalSum.single(zeta(q + p), ratio)
    assert used == 40


@pytest.mark.parametrize("a, b, ratio", [
    (2, 2, Fraction(5, 2)),
    (2, 4, Fraction(7, 4)),
    (4, 4, Fraction(7, 6)),
])
def test_even_products_reconstruct_exactly(evaluator, a, b, ratio):
    prod = evaluator.symbol(zeta_product(a, b))
    z = evaluator.zeta_single(a + b)
    approx = ApproxReal(prod.value / z.value, evaluator.ctx.mpf(10) ** -35)
    assert rational_reconstruct(approx, 10 ** 6) == ratio


def test_rational_reconstruct_needs_precision():
    x = ApproxReal(mpmath.mpf(0.25), mpmath.mpf("1e-3"))
    with pytest.raises(InsufficientPrecisionError):
        rational_reconstruct(x, 1000)


def test_rational_reconstruct_none_outside_error():
    with mpmath.workdps(30):
        x = ApproxReal(mpmath.sqrt(2), mpmath.mpf(10) ** -25)
    assert rational_reconstruct(x, 1000) is None


def test_to_fraction_is_exact():
    assert to_fraction(mpmath.mpf(-0.375)) == Fraction(-3, 8)
    assert to_fraction(mpmath.mpf(0)) == 0


def test_pz_basis():
    assert pz_basis(12) == [zeta(12), zeta_product(3, 9), zeta_product(5, 7)]
    assert pz_basis(4) == [zeta(4)]
    assert len(pz_basis(12)) == (12 + 2) // 4


def test_tornheim_uses_expansion(evaluator):
    assert evaluator.tornheim(1, 1, 1).value == evaluator.eval_formal(FormalSum.single(dz(2, 1), 2)).value


def test_tornheim_integral_path():
    direct = tornheim_direct(1, 1, 1, digits=20)
    with mpmath.workdps(30):
        assert abs(direct.value - 2 * mpmath.zeta(3)) < mpmath.mpf(10) ** -15


@pytest.mark.slow
@pytest.mark.parametrize("r, q, p", [(1, 2, 1), (2, 1, 1), (1, 2, 2), (2, 2, 1), (3, 2, 1), (1, 3, 3), (2, 3, 2)])
def test_tornheim_integral_agrees_with_expansion(evaluator, r, q, p):
    direct = tornheim_direct(r, q, p, digits=20)
    assert abs(direct.value - evaluator.tornheim(r, q, p).value) < 1e-12


def _double_zetas(max_weight):
    return [(q, k - q) for k in range(3, max_weight + 1) for q in range(2, k)]


@pytest.mark.parametrize("q, p", [(2, 1), (3, 1), (2, 2)])
def test_brute_force_oracle(evaluator, q, p):
    assert abs(partial_double_sum(q, p) - float(evaluator.zeta_double(q, p))) < 1e-8


@pytest.mark.slow
def test_brute_force_oracle_up_to_weight_eight(evaluator):
    for q, p in _double_zetas(8):
        assert abs(partial_double_sum(q, p) - float(evaluator.zeta_double(q, p))) < 1e-8, (q, p)
    for s in range(2, 9):
        assert abs(partial_single_sum(s) - float(evaluator.zeta_single(s))) < 1e-8


def test_evaluation_rejects_weights_above_maximum(monkeypatch):
    monkeypatch.setattr(config, "MAX_WEIGHT", 10)
    with pytest.raises(PreconditionError):
        eval_formal(FormalSum.single(dz(3, 9)), 20)


@pytest.mark.parametrize("rel", [euler_top(6), stuffle(3, 5), gkz_sum(10), torn_p1_rewrite(3, 2),
                                 tornheim_recursion(2, 2, 2)], ids=lambda r: r.label)
def test_exact_relations_verify(rel):
    report = verify_relation(rel, 40)
    assert report.passed, report.detail
    assert report.residual < 1e-30


def test_false_relation_fails():
    rel = Relation(FormalSum([(dz(3, 1), 1), (zeta(4), Fraction(-1, 3))]), QuotientMode.EXACT, "wrong")
    report = verify_relation(rel, 40)
    assert not report.passed
    assert report.detail


def test_quotient_relation_reports_fitted_tail():
    rel = Relation(FormalSum.single(dz(3, 1)), QuotientMode.MOD_PZ, "euler at weight four")
    report = verify_relation(rel, 40)
    assert report.passed
    assert report.coefficients == {zeta(4): Fraction(1, 4)}


def test_tornheim_symbols_in_relations_verify():
    rel = Relation(FormalSum([(torn(1, 1, 1), 1), (zeta(3), -2)]), QuotientMode.EXACT, "T(1,1,1) = 2Z(3)")
    assert verify_relation(rel, 40).passed


@pytest.mark.slow
@pytest.mark.parametrize("k", range(3, 21))
def test_exact_suite_verifies_up_to_weight_twenty(k):
    for rel in exact_suite(k):
        report = verify_relation(rel, 40)
        assert report.passed, (rel.label, report.detail)
        assert report.residual < 1e-30


@pytest.mark.parametrize("q, p", [(2, 2), (23, 3), (13, 13), (3, 23), (51, 49), (97, 3), (2, 98)])
def test_double_zeta_error_bound_is_tight_and_sound(q, p):
    low, high = ZetaEvaluator(30).zeta_double(q, p), ZetaEvaluator(60).zeta_double(q, p)
    assert low.error < mpmath.mpf(10) ** -30
    assert high.error < mpmath.mpf(10) ** -60
    assert high.error <= low.error
    assert low.contains(high.value, slack=high.error)


def test_double_zeta_error_shrinks_at_high_precision():
    errors = [ZetaEvaluator(d).zeta_double(13, 13).error for d in (50, 100, 200)]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < mpmath.mpf(10) ** -200


def _tornheim_triples(max_weight):
    syms = {canonicalize(torn(r, q, p))
            for w in range(3, max_weight + 1)
            for r in range(1, w - 1)
            for q in range(1, w - r)
            for p in [w - r - q]}
    return sorted(sym.args for sym in syms if sym.kind == T)


def test_tornheim_triples_cover_small_weights():
    assert _tornheim_triples(4) == [(1, 1, 1), (1, 2, 1), (2, 1, 1)]


@pytest.mark.parametrize("r, q, p", [(1, 1, 1), (2, 1, 1), (1, 3, 2)])
def test_tornheim_brute_force_oracle(evaluator, r, q, p):
    expected = float(evaluator.tornheim(r, q, p))
    assert abs(partial_tornheim_sum(r, q, p) - expected) < 2e-3 * expected


@pytest.mark.slow
@pytest.mark.parametrize("r, q, p", _tornheim_triples(8))
def test_tornheim_brute_force_oracle_up_to_weight_eight(evaluator, r, q, p):
    expected = float(evaluator.tornheim(r, q, p))
    assert abs(partial_tornheim_sum(r, q, p) - expected) < 2e-3 * expected


def test_partial_tornheim_sum_rejects_zero_indices():
    with pytest.raises(PreconditionError):
        partial_tornheim_sum(1, 2, 0)


def test_boyadzhiev_with_unit_first_index_verifies():
    report = verify_relation(boyadzhiev_mod(1, 1, 2), 40)
    assert report.passed, report.detail
    assert report.residual < 1e-30


@pytest.mark.slow
@pytest.mark.parametrize("k", range(4, 21, 2))
def test_quotient_suite_verifies_up_to_weight_twenty(k):
    for rel in mod_suite(k):
        report = verify_relation(rel, 30)
        assert report.passed, (rel.label, report.detail)


@pytest.mark.slow
@pytest.mark.parametrize("k", [8, 12, 16, 20])
def test_boyadzhiev_unit_first_index_sweep(k):
    for q in range(1, k - 2):
        rel = boyadzhiev_mod(1, q, k - 1 - q)
        report = verify_relation(rel, 30)
        assert report.passed, (rel.label, report.detail)
