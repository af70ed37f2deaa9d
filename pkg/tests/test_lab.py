from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from psiosc import lab
from psiosc.errors import InputError, ResourceError
from psiosc.lab import (
    ExperimentConfig, Hit, PairSample, bc_hits, default_ladder, density_band, density_sweep,
    run_sign_experiment, sample_pair, sample_pairs, summarize,
)
from psiosc.psi import MatrixTheta, psi_sweep


def test_config_defaults_and_validation():
    c = ExperimentConfig()
    assert c.m == 1 and c.shape == (1, 2) and c.k_ladder == default_ladder("1x2")
    assert ExperimentConfig(regime="mx1", m=3).shape == (3, 1)
    assert c.to_dict()["eps"] == F(1, 2)
    for bad in ({"regime": "2x2"}, {"eps": 0}, {"eps": 1}, {"delta": 1}, {"lam": 2},
                {"regime": "mx1", "m": 1}, {"k_ladder": (8, 4)}, {"k_ladder": (1, 4)},
                {"T": 0}, {"pair_count": -1}, {"seed": -1}, {"T": 2.5}):
        with pytest.raises(InputError):
            ExperimentConfig(**bad)


def test_sampling_deterministic():
    c = ExperimentConfig(pair_count=5, seed=11)
    assert sample_pairs(c) == sample_pairs(c)
    # pair i does not depend on how many pairs are drawn
    assert sample_pairs(c)[3] == sample_pair(ExperimentConfig(pair_count=50, seed=11), 3)
    assert sample_pairs(c) != sample_pairs(ExperimentConfig(pair_count=5, seed=12))


def test_zero_pairs():
    c = ExperimentConfig(pair_count=0)
    assert sample_pairs(c) == []
    res = run_sign_experiment(c)
    assert res.pairs == [] and res.summary["min_changes"] is None


def test_sampled_entries_uniform():
    c = ExperimentConfig(regime="mx1", m=3, pair_count=400, denom_bits=64, seed=2)
    vals = [float(v) for p in sample_pairs(c) for th in (p.theta, p.theta2) for row in th.entries for v in row]
    assert all(0 <= v < 1 for v in vals)
    assert 0.49 <= sum(vals) / len(vals) <= 0.51
    assert all(F(v).denominator <= 2**64 for v in vals)


def _pair(a, b):
    return PairSample(MatrixTheta.form(*a), MatrixTheta.form(*b), (0, 0))


def test_hit_example():
    # (1/3, 1/3) lies on a rational line so psi(k) = 0 from k = 1 on
    p = _pair((F(1, 3), F(1, 3)), (F(1, 7), F(2, 13)))
    rep = bc_hits(p, (2, 4), F(1, 100))
    for h in rep.hits:
        assert h.psi1 == 0 and h.psi2 > 0
        assert h.in_Phi and not h.in_Psi and h.implication_ok
    swapped = bc_hits(_pair((F(1, 7), F(2, 13)), (F(1, 3), F(1, 3))), (2, 4), F(1, 100))
    assert all(h.in_Psi and not h.in_Phi for h in swapped.hits)


def test_degenerate_pair():
    p = _pair((F(2, 11), F(3, 17)), (F(2, 11), F(3, 17)))
    assert p.degenerate
    rep = bc_hits(p, (4, 8, 16), F(1, 2))
    assert rep.degenerate and rep.psi_hits == rep.phi_hits == 0


def test_hit_implication_check():
    assert not Hit(4, F(1), F(2), True, False).implication_ok
    assert not Hit(4, F(1), F(2), True, True).implication_ok
    assert Hit(4, F(1), F(2), False, True).implication_ok


@settings(max_examples=15)
@given(st.integers(0, 2**32), st.sampled_from(["1x2", "mx1"]))
def test_hits_are_disjoint_and_consistent(seed, regime):
    c = ExperimentConfig(regime=regime, pair_count=3, T=64, seed=seed, k_ladder=(4, 16, 64), denom_bits=48)
    res = run_sign_experiment(c)
    for rep in res.pairs:
        assert rep.violations == 0
        assert all(not (h.in_Psi and h.in_Phi) for h in rep.hits)
        assert rep.sign_changes == len(rep.change_positions)
        assert rep.change_positions == sorted(rep.change_positions)


def test_change_positions_prefix_monotone():
    # a longer horizon only appends change positions
    short = run_sign_experiment(ExperimentConfig(pair_count=6, T=200, seed=4, k_ladder=(4, 8)))
    long = run_sign_experiment(ExperimentConfig(pair_count=6, T=800, seed=4, k_ladder=(4, 8)))
    for a, b in zip(short.pairs, long.pairs):
        assert b.change_positions[:a.sign_changes] == a.change_positions
        assert b.changes_up_to(200) == a.sign_changes


def test_change_positions_match_direct_sweep():
    c = ExperimentConfig(pair_count=2, T=100, seed=9, k_ladder=(4, 8))
    res = run_sign_experiment(c)
    p = sample_pair(c, 1)
    r1, r2 = psi_sweep(p.theta, 100), psi_sweep(p.theta2, 100)
    signs = [(t + 1, (a.value > b.value) - (a.value < b.value)) for t, (a, b) in enumerate(zip(r1, r2))]
    nz = [(t, s) for t, s in signs if s]
    want = [t for (_, s0), (t, s1) in zip(nz, nz[1:]) if s0 != s1]
    assert res.pairs[1].change_positions == want


def test_threads_do_not_change_results():
    c = ExperimentConfig(regime="mx1", pair_count=8, T=300, seed=1, k_ladder=(16, 64, 256))
    a = run_sign_experiment(c, threads=1)
    b = run_sign_experiment(c, threads=4)
    assert a.summary == b.summary
    assert [p.hits for p in a.pairs] == [p.hits for p in b.pairs]


def test_resource_error_marks_pair_partial(monkeypatch):
    def refuse(*args, **kwargs):
        raise ResourceError("over budget")

    monkeypatch.setattr(lab, "psi_sweep", refuse)
    c = ExperimentConfig(pair_count=2, T=500, k_ladder=(4, 8))
    res = run_sign_experiment(c)
    assert res.pairs[0].error == "over budget"
    assert all(p.error for p in res.pairs)
    assert res.summary["partial"] and res.summary["completed"] == 0


def test_summary_counts():
    c = ExperimentConfig(pair_count=10, T=300, seed=3, k_ladder=(8, 32))
    res = run_sign_experiment(c)
    s = summarize(c, res.pairs)
    assert s["pairs"] == 10 and s["T_early"] == 30
    assert s["min_changes"] <= s["median_changes"] <= s["max_changes"]
    assert s["median_changes_early"] <= s["median_changes"]
    assert s["psi_hits"] >= s["pairs_with_psi_hit"]


# ----------------------------------------------------------------- densities


def test_density_band_values():
    assert density_band(ExperimentConfig()) == 0
    b = density_band(ExperimentConfig(regime="mx1", eps=F(1, 100)))
    assert 0 < b < F(4133, 75000000)
    assert density_band(ExperimentConfig(eps=F(1, 100))) > 0


def test_density_vacuous_at_large_eps():
    rep = density_sweep(ExperimentConfig(regime="mx1", eps=F(1, 2)), 100, samples=5000)
    assert rep.vacuous and rep.ok


@pytest.mark.parametrize("regime, k", [("mx1", 64), ("1x2", 16)])
def test_density_symmetric_and_deterministic(regime, k):
    c = ExperimentConfig(regime=regime, eps=F(1, 4), seed=7)
    a = density_sweep(c, k, samples=100_000)
    b = density_sweep(c, k, samples=100_000, threads=3)
    assert a == b
    assert a.symmetric and a.psi_hits > 0
    assert a.ok


def test_density_rejects_zero_samples():
    with pytest.raises(InputError):
        density_sweep(ExperimentConfig(), 8, samples=0)
