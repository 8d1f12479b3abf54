from fractions import Fraction
from itertools import product

import pytest

from numeric import verify_relation
from reduction import (
    DimBounds,
    ReductionEngine,
    as_relation,
    change_generators,
    dim_bounds,
    engine_for,
    generator_set,
    mf_dim,
    parse_epsilon,
    reduce_dz_mod_pz,
    residual,
    slot_count,
)
from symbols import FormalSum, PreconditionError, QuotientMode, dz


def test_dim_bounds_weight_twelve():
    assert dim_bounds(12) == DimBounds(dm_bound=1, pz_bound=3, mf_dim=2, dz_bound=4)


@pytest.mark.parametrize("k, expected", [(2, 0), (4, 1), (12, 2), (14, 1), (24, 3), (26, 2), (36, 4)])
def test_mf_dim(k, expected):
    assert mf_dim(k) == expected


def test_counting_identity():
    for k in range(4, 201, 2):
        b = dim_bounds(k)
        assert b.dm_bound + b.pz_bound == b.dz_bound == k // 2 - mf_dim(k)
        assert len(generator_set(k)) == slot_count(k) == (k - 2) // 6


def test_generator_sets():
    assert generator_set(12, "0").members == [dz(2, 10)]
    assert generator_set(12, "1").members == [dz(3, 9)]
    assert generator_set(24, "101").members == [dz(3, 21), dz(4, 20), dz(7, 17)]
    assert generator_set(6).members == []


@pytest.mark.parametrize("bits, k", [("01", 12), ("2", 12), ("", 12), ("1", 6)])
def test_parse_epsilon_rejects_bad_vectors(bits, k):
    with pytest.raises(PreconditionError):
        parse_epsilon(bits, k)


def test_reduce_by_descent():
    res = reduce_dz_mod_pz(3, 9, "0")
    assert res.coefficients == FormalSum.single(dz(2, 10), Fraction(-9, 2))
    assert ("descent(3,12)", dz(3, 9)) in res.trace
    assert res.mode == QuotientMode.MOD_PZ
    assert residual(res) == FormalSum([(dz(3, 9), 1), (dz(2, 10), Fraction(9, 2))])


def test_reduce_onto_odd_generator_inverts_descent():
    res = reduce_dz_mod_pz(2, 10, "1")
    assert res.coefficients == FormalSum.single(dz(3, 9), Fraction(-2, 9))


def test_top_index_lies_in_pz():
    res = reduce_dz_mod_pz(11, 1, "0")
    assert res.coefficients == FormalSum()
    assert res.trace == (("euler_top(12)", dz(11, 1)),)


def test_generator_reduces_to_itself():
    res = reduce_dz_mod_pz(2, 10, "0")
    assert res.coefficients == FormalSum.single(dz(2, 10))
    assert res.trace == ()


@pytest.mark.parametrize("k", [4, 6])
def test_small_weights_lie_entirely_in_pz(k):
    for res in ReductionEngine(k).reduce_all():
        assert res.coefficients == FormalSum()


@pytest.mark.parametrize("q, p", [(3, 10), (1, 11), (2, 0)])
def test_reduce_rejects_bad_input(q, p):
    with pytest.raises(PreconditionError):
        reduce_dz_mod_pz(q, p)


def test_odd_weight_message():
    with pytest.raises(PreconditionError, match="weight must be even"):
        reduce_dz_mod_pz(3, 10)


def test_engine_rejects_foreign_weight():
    with pytest.raises(PreconditionError):
        engine_for(12, (0,)).reduce(3, 7)


def _sweep(max_k):
    for k in range(4, max_k + 1, 2):
        n = slot_count(k)
        for eps in dict.fromkeys([(0,) * n, (1,) * n]):
            engine = engine_for(k, eps)
            members = set(engine.gens.members)
            for res in engine.reduce_all():
                yield k, eps, members, res


def test_reductions_land_on_generators():
    for k, eps, members, res in _sweep(30):
        assert set(res.coefficients) <= members, (k, eps, res.input)
        if res.input in members:
            assert res.coefficients == FormalSum.single(res.input)


@pytest.mark.slow
def test_reductions_land_on_generators_up_to_sixty():
    for k, eps, members, res in _sweep(60):
        assert set(res.coefficients) <= members, (k, eps, res.input)
        assert len(res.generators) == (k - 2) // 6


def _coherence(k):
    vectors = list(product((0, 1), repeat=slot_count(k)))
    for eps in vectors:
        for eps2 in vectors:
            for j in range(2, k):
                moved = change_generators(reduce_dz_mod_pz(j, k - j, eps), eps2)
                direct = reduce_dz_mod_pz(j, k - j, eps2)
                assert moved.coefficients == direct.coefficients, (k, eps, eps2, j)
                assert moved.epsilon == eps2


def test_change_generators_matches_direct_reduction():
    _coherence(20)


@pytest.mark.slow
@pytest.mark.parametrize("k", range(8, 31, 2))
def test_change_generators_exhaustive(k):
    _coherence(k)


def test_change_generators_length_mismatch():
    res = reduce_dz_mod_pz(3, 9, "0")
    with pytest.raises(PreconditionError):
        change_generators(res, "01")


def test_reduction_is_certified_numerically():
    report = verify_relation(as_relation(reduce_dz_mod_pz(3, 9, "0")), 40)
    assert report.passed, report.detail
    assert report.mode == QuotientMode.MOD_PZ


@pytest.mark.parametrize("eps", ["0", "1"])
def test_weight_eight_reductions_certify(eps):
    for res in engine_for(8, parse_epsilon(eps, 8)).reduce_all():
        report = verify_relation(as_relation(res), 40)
        assert report.passed, (str(res.input), report.detail)


@pytest.mark.slow
@pytest.mark.parametrize("k", range(4, 25, 2))
def test_reductions_certify_up_to_weight_24(k):
    for _, _, _, res in (item for item in _sweep(k) if item[0] == k):
        report = verify_relation(as_relation(res), 50)
        assert report.passed, (str(res.input), report.detail)
        assert report.residual < 1e-30
        assert report.recheck_residual is None or report.recheck_residual < 1e-30
