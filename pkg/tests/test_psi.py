import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from psiosc.errors import DomainError, InputError, ResourceError
from psiosc.psi import (
    MatrixTheta, count_changes, cf_convergents, form_value, psi_cf_1d, psi_form2_sweep, psi_naive,
    psi_simul_sweep, psi_sweep, sign_sequence, to_word,
)

unit = st.fractions(min_value=0, max_value=1, max_denominator=10**6)


def rand_dyadic(rng, bits):
    return F(rng.getrandbits(bits), 1 << bits)


# ------------------------------------------------------------------ examples


def test_naive_examples():
    r = psi_naive(MatrixTheta.scalar(F(1, 2)), 2)
    assert r.value == 0 and r.witness_x == (2,)
    r = psi_naive(MatrixTheta.form(F(1, 3), F(1, 4)), 1)
    assert r.value == F(1, 12) and r.witness_x == (1, -1)
    r = psi_naive(MatrixTheta.column([F(1, 3), F(1, 4)]), 3)
    assert r.value == F(1, 4) and r.witness_x == (3,)


@pytest.mark.parametrize("alpha, t, value, q", [(F(1, 2), 1, F(1, 2), 1), (F(5, 7), 3, F(1, 7), 3),
                                                 (F(2, 7), 7, F(0), 7)])
def test_cf_examples(alpha, t, value, q):
    r = psi_cf_1d(alpha, t)
    assert r.value == value and r.witness_x == (q,)


def test_form2_examples():
    r = psi_form2_sweep(F(1, 3), F(1, 3), 1)
    assert r[0].value == 0 and r[0].witness_x == (1, -1)
    r = psi_form2_sweep(F(1, 3), F(1, 4), 2)
    assert [x.value for x in r] == [F(1, 12), F(1, 12)]


def test_simul_examples():
    assert psi_simul_sweep([F(1, 2), F(1, 2)], 2)[-1].value == 0
    r = psi_simul_sweep([F(1, 3), F(1, 4)], 12)
    assert r[-1].value == 0 and r[-1].witness_x == (12,)
    assert r[2].value == F(1, 4)


def test_sign_example_by_hand():
    seq = sign_sequence(MatrixTheta.scalar(F(2, 7)), MatrixTheta.scalar(F(1, 3)), 3)
    assert [d for _, d in seq.values] == [F(-1, 21), F(-1, 21), F(1, 7)]
    assert seq.change_positions == [3]


def test_sign_identical_pair():
    th = MatrixTheta.form(F(2, 11), F(3, 13))
    seq = sign_sequence(th, th, 50)
    assert all(d == 0 for _, d in seq.values) and seq.changes == 0


def test_count_changes_skips_zeros():
    diffs = list(enumerate([F(1), F(0), F(0), F(-1), F(0), F(-2), F(3)], start=1))
    assert count_changes(diffs) == [4, 7]


# -------------------------------------------------------------------- errors


def test_errors():
    with pytest.raises(DomainError):
        psi_naive(MatrixTheta.scalar(F(1, 3)), 0)
    with pytest.raises(ResourceError):
        psi_naive(MatrixTheta(((F(1, 3), F(1, 5), F(1, 7)),)), 100, budget=1000)
    with pytest.raises(InputError):
        MatrixTheta(((F(3, 2),),))
    with pytest.raises(InputError):
        MatrixTheta(((F(1, 2), F(1, 3)), (F(1, 5),)))
    with pytest.raises(InputError):
        sign_sequence(MatrixTheta.scalar(F(1, 3)), MatrixTheta.form(F(1, 3), F(1, 5)), 3)


def test_regimes():
    assert MatrixTheta.scalar(F(1, 3)).regime == "1x1"
    assert MatrixTheta.form(0, 1).regime == "1x2"
    assert MatrixTheta.column([0, 1, F(1, 2)]).regime == "mx1"
    assert MatrixTheta(((0, 1), (1, 0))).regime == "general"


# ---------------------------------------------------------------- properties


@given(unit, st.integers(1, 200))
def test_cf_equals_naive(alpha, t):
    assert psi_cf_1d(alpha, t).value == psi_naive(MatrixTheta.scalar(alpha), t).value


@given(unit)
def test_convergents_reach_alpha(alpha):
    p, q = cf_convergents(alpha)[-1]
    assert F(p, q) == alpha


@given(unit, unit, st.integers(1, 15))
def test_form2_sweep_equals_naive(a, b, T):
    theta = MatrixTheta.form(a, b)
    sweep = psi_form2_sweep(a, b, T)
    for t in (1, T // 2 + 1, T):
        naive = psi_naive(theta, t)
        assert sweep[t - 1].value == naive.value
        assert sweep[t - 1].witness_x == naive.witness_x


@given(st.lists(unit, min_size=2, max_size=4), st.integers(1, 40))
def test_simul_sweep_equals_naive(alphas, T):
    theta = MatrixTheta.column(alphas)
    assert psi_simul_sweep(alphas, T)[-1].value == psi_naive(theta, T).value


@given(unit, unit, st.integers(1, 60))
def test_sweep_invariants(a, b, T):
    theta = MatrixTheta.form(a, b)
    recs = psi_sweep(theta, T)
    vals = [r.value for r in recs]
    assert all(x >= y for x, y in zip(vals, vals[1:]))
    for r in recs:
        assert 0 <= r.value <= F(1, 2)
        assert 1 <= max(abs(v) for v in r.witness_x) <= r.t
        assert form_value(theta, r.witness_x) == r.value
        assert r.value <= F(1, r.t * r.t + 2 * r.t)


@given(unit, unit, st.integers(1, 30))
def test_negated_matrix_same_psi(a, b, T):
    theta = MatrixTheta.form(a, b)
    one = [r.value for r in psi_sweep(theta, T)]
    two = [r.value for r in psi_sweep(theta.negated(), T)]
    assert one == two


@given(st.lists(unit, min_size=2, max_size=3), st.integers(1, 6))
def test_simul_dirichlet(alphas, Q):
    m = len(alphas)
    assert psi_simul_sweep(alphas, Q**m)[-1].value <= F(1, Q)


def test_form2_sweep_on_long_random_inputs():
    rng = random.Random(7)
    for _ in range(5):
        a, b = rand_dyadic(rng, 128), rand_dyadic(rng, 128)
        sweep = psi_form2_sweep(a, b, 60)
        for t in (1, 7, 30, 60):
            assert sweep[t - 1].value == psi_naive(MatrixTheta.form(a, b), t).value


def test_form2_sweep_backends_agree():
    rng = random.Random(3)
    for _ in range(5):
        a, b = rand_dyadic(rng, 100), rand_dyadic(rng, 100)
        x = psi_form2_sweep(a, b, 300, backend="numba")
        y = psi_form2_sweep(a, b, 300, backend="numpy")
        assert x == y


def test_to_word():
    assert to_word(F(1, 2)) == (1 << 63, True)
    assert to_word(F(1, 3))[1] is False
    assert to_word(F(1)) == (0, True)
