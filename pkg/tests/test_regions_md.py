import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from psiosc.errors import DomainError, InputError, ResourceError, UnsupportedParameters
from psiosc.psi import MatrixTheta, psi_naive
from psiosc.regions_md import (
    RectC, StripD, centered_box, classify_pairs, cube_cluster_bound, cube_cluster_measure,
    d_region_points, in_sector, lemma5_lemma14_check, lemma5_upper, lemma6_sum, lemma11_bound_ok,
    lemma14_lower, measure_mbar_md, member_words, membership_mbar_md, pick_bound_check, pr_points,
    totient_series_check, totients, tr_pairs, unit_box, word_threshold,
)
from psiosc.regions2d import convex_hull

unit = st.fractions(min_value=0, max_value=1, max_denominator=1000)


# ---------------------------------------------------------------- membership


def test_membership_examples():
    ok, rec = membership_mbar_md([F(1, 3), F(1, 4)], 12, F(1, 10))
    assert ok and rec.value == 0 and rec.witness_x == (12,)
    ok, rec = membership_mbar_md([F(1, 3), F(1, 4)], 3, F(1, 10))
    assert rec.value == F(1, 4) and not ok


def test_membership_domain():
    with pytest.raises(DomainError):
        membership_mbar_md([F(1, 3)], 5, F(1, 10))
    with pytest.raises(DomainError):
        membership_mbar_md([F(1, 3), F(1, 5)], 1, F(1, 10))


@given(st.lists(unit, min_size=2, max_size=3), st.integers(2, 30),
       st.fractions(min_value=F(1, 20), max_value=1, max_denominator=20))
def test_membership_irrational_threshold(alphas, k, eps):
    ok, rec = membership_mbar_md(alphas, k, eps)
    assert rec.value == psi_naive(MatrixTheta.column(alphas), k).value
    m = len(alphas)
    # compare with a float threshold away from the boundary
    thr = float(eps) * k ** (-1 / m)
    if abs(float(rec.value) - thr) > 1e-9:
        assert ok == (float(rec.value) <= thr)


@pytest.mark.parametrize("m, k", [(2, 10), (2, 1000), (3, 100)])
def test_member_words_matches_exact(m, k):
    rng = np.random.default_rng(k + m)
    W = rng.integers(0, 2**64, size=(300, m), dtype=np.uint64)
    eps = F(1, 3)
    got = member_words(W, k, eps, m)
    for row, g in zip(W.tolist(), got.tolist()):
        assert g == membership_mbar_md([F(int(w), 2**64) for w in row], k, eps)[0]


def test_word_threshold():
    H = word_threshold(100, F(1, 10), 2)
    assert H * H * 100 <= (2**64 // 10) ** 2 + 2**64
    assert (H + 1) ** 2 * 100 > (F(2**64, 10)) ** 2


# -------------------------------------------------------------- cube clusters


@pytest.mark.parametrize("q, k, eps, m", [(5, 100, F(1, 10), 2), (7, 50, F(1, 4), 3), (1, 9, F(1, 2), 2)])
def test_cube_cluster_unit_measure(q, k, eps, m):
    assert cube_cluster_measure(q, k, eps, m, unit_box(m)).to_rat() == (2 * eps) ** m / k


@given(st.integers(1, 30), st.integers(2, 200), st.fractions(min_value=F(1, 50), max_value=F(1, 2), max_denominator=50),
       st.fractions(min_value=F(1, 10), max_value=1, max_denominator=10))
def test_cube_cluster_bound(q, k, eps, lam):
    m = 2
    if (2 * eps) ** m >= k:
        return
    mu = cube_cluster_measure(q, k, eps, m, centered_box(lam, m))
    assert float(mu) <= float(cube_cluster_bound(q, k, eps, m, lam)) + 1e-12


def test_cube_cluster_overlap():
    with pytest.raises(UnsupportedParameters):
        cube_cluster_measure(3, 4, 1, 2, unit_box(2))
    with pytest.raises(InputError):
        cube_cluster_measure(3, 100, F(1, 10), 2, unit_box(3))


# --------------------------------------------------------------------- bands


def test_band_frozen_values():
    assert lemma14_lower(F(1, 100), 2) == F(4133, 75000000)
    assert lemma5_upper(F(1, 100), 2) == F(2, 625)


def test_measure_md_in_band():
    est = measure_mbar_md(1000, F(1, 100), 2, samples=200_000)
    rep = lemma5_lemma14_check(1000, F(1, 100), 2, 1, est)
    assert rep.ok and not rep.vacuous


def test_measure_md_deterministic():
    a = measure_mbar_md(100, F(1, 10), 3, samples=70_000, seed=5)
    b = measure_mbar_md(100, F(1, 10), 3, samples=70_000, seed=5, threads=3)
    assert a == b


def test_measure_md_sub_box():
    box = [(F(1, 4), F(3, 4)), (F(1, 2), F(1, 2))]
    assert measure_mbar_md(50, F(1, 10), 2, box=box, samples=1000).value == 0
    with pytest.raises(InputError):
        measure_mbar_md(50, F(1, 10), 2, box=[(F(1, 3), F(1, 2)), (0, 1)])
    with pytest.raises(InputError):
        measure_mbar_md(50, F(1, 10), 2, samples=0)


def test_band_vacuous_at_large_eps():
    est = measure_mbar_md(100, F(1, 5), 2, samples=10_000)
    assert lemma5_lemma14_check(100, F(1, 5), 2, 1, est).vacuous


# -------------------------------------------------------------------- gcd sums


def test_tr_pairs():
    assert list(tr_pairs(4)) == [(2, 3), (2, 4), (3, 4)]
    assert len(list(tr_pairs(101))) == 51 * 50 // 2


def test_gcd_power_sum_frozen():
    assert lemma6_sum(4, 2) == (F(61, 144), True)


@pytest.mark.parametrize("k, m", [(10, 2), (57, 3), (100, 2)])
def test_gcd_power_sum_bound(k, m):
    total, ok = lemma6_sum(k, m)
    assert ok and total > 0


def test_gcd_power_sum_domain():
    with pytest.raises(DomainError):
        lemma6_sum(3, 2)


def test_totients():
    assert totients(12).tolist() == [0, 1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]


@pytest.mark.parametrize("m, P", [(3, 100), (3, 5000), (4, 2000)])
def test_totient_series(m, P):
    r = totient_series_check(m, P)
    assert r.ok and r.partial < r.target_hi


def test_totient_domain():
    with pytest.raises(DomainError):
        totient_series_check(2, 100)
    with pytest.raises(ResourceError):
        totient_series_check(3, 10**7)


# ------------------------------------------------------------------------ Pick


def test_pick_examples():
    r = pick_bound_check([(0, 0), (3, 0), (0, 3)])
    assert (r.N, r.interior, r.boundary) == (10, 1, 9) and r.ok
    r = pick_bound_check([(F(1, 3), F(1, 3)), (F(2, 3), F(1, 3)), (F(1, 2), F(2, 3))])
    assert r.N == 0 and not r.applicable


@given(st.lists(st.tuples(st.fractions(-20, 20, max_denominator=7), st.fractions(-20, 20, max_denominator=7)),
                min_size=3, max_size=10))
def test_pick_random(pts):
    hull = convex_hull(pts)
    if len(hull) < 3:
        return
    assert pick_bound_check(hull).ok


# ------------------------------------------------------------------- strip D


def _brute_d(strip, rect):
    out = []
    for p1 in range(math.ceil(rect.x0), math.floor(rect.x0 + rect.w) + 1):
        for p2 in range(math.ceil(rect.y0), math.floor(rect.y0 + rect.h) + 1):
            if abs(strip.q2 * p1 - strip.q1 * p2) <= strip.a:
                out.append((p1, p2))
    return out


@settings(max_examples=40)
@given(st.integers(10, 60), st.data())
def test_d_region_points_brute(k, data):
    q1 = data.draw(st.integers((k + 1) // 2, k - 1))
    q2 = data.draw(st.integers(q1 + 1, k))
    eps = data.draw(st.sampled_from([F(1, 100), F(1, 10), F(1, 2), F(2)]))
    strip = StripD(q1, q2, k, 2, eps)
    rect = RectC.full(q1, q2, 1, F(1, 10), data.draw(st.integers(-3, 3)), data.draw(st.integers(-3, 3)))
    assert sorted(d_region_points(strip, rect)) == sorted(_brute_d(strip, rect))


@given(st.integers(4, 500), st.integers(2, 3), st.data())
def test_strip_width(k, m, data):
    q1 = data.draw(st.integers((k + 1) // 2, k - 1))
    q2 = data.draw(st.integers(q1 + 1, k))
    eps = data.draw(st.sampled_from([F(1, 100), F(1, 5), F(1)]))
    s = StripD(q1, q2, k, m, eps)
    assert s.width_ok()
    assert s.a % s.d == 0 and s.line_count == 2 * s.lines_half + 1


def test_strip_count_example():
    s = StripD(30, 41, 50, 2, F(1, 100))
    pts = d_region_points(s, RectC.full(30, 41, 1, F(1, 10)))
    assert lemma11_bound_ok(len(pts), s, 1)


def test_pr_points():
    pts = pr_points(100, 2, F(1, 5))
    assert (1, 1) in pts and (2, 3) in pts and (2, 4) not in pts
    assert all(p1 <= p2 <= 2 * p1 and math.gcd(p1, p2) == 1 for p1, p2 in pts)


def test_in_sector():
    assert in_sector((1000, 1001), (1, 1), 100, F(1))
    assert not in_sector((100, 101), (1, 1), 100, F(1))
    assert not in_sector((100, 150), (1, 1), 100, F(1))
    assert not in_sector((-1, -1), (1, 1), 100, F(1))


@pytest.mark.parametrize("k", [50, 120, 200])
def test_classify_small(k):
    cls = classify_pairs(k, 2, F(1, 5), 1, F(1, 10))
    side = k - (k + 1) // 2 + 1
    assert cls.pairs_checked == side * (side - 1) // 2
    assert cls.total_violations == 0
    assert cls.n_j1 <= cls.n_v


def test_classify_sampled_and_errors():
    a = classify_pairs(300, 2, F(1, 5), 1, F(1, 10), mode="sampled", n=200, seed=1)
    b = classify_pairs(300, 2, F(1, 5), 1, F(1, 10), mode="sampled", n=200, seed=1)
    assert a.pairs_checked == 200 and a.j1_pairs == b.j1_pairs and a.total_violations == 0
    with pytest.raises(ResourceError):
        classify_pairs(10**4, 2, F(1, 5), 1, F(1, 10), budget=100)
    with pytest.raises(InputError):
        classify_pairs(100, 2, F(1, 5), 1, F(1))
    with pytest.raises(InputError):
        classify_pairs(100, 2, F(1, 5), 1, F(1, 10), mode="other")


def _sector_reference(q, p, k, lam):
    cross = p[0] * q[1] - p[1] * q[0]
    if p[0] * q[0] + p[1] * q[1] <= 0:
        return False
    pp = p[0] ** 2 + p[1] ** 2
    s = F(cross * cross, (q[0] ** 2 + q[1] ** 2) * pp)
    c2 = 1 - 2 * s
    return c2 >= 0 and c2 * c2 >= 1 - 1 / (k * k * lam * lam * pp)


@settings(max_examples=30)
@given(st.integers(20, 300), st.sampled_from([F(1), F(1, 2), F(3, 7)]), st.data())
def test_sector_filter_matches_reference(k, lam, data):
    from psiosc.regions_md import _sector_candidates

    prs = pr_points(k, 2, F(1, 5))
    P1 = np.array([p[0] for p in prs], dtype=np.int64)
    P2 = np.array([p[1] for p in prs], dtype=np.int64)
    for _ in range(20):
        q1 = data.draw(st.integers((k + 1) // 2, k - 1))
        q2 = data.draw(st.integers(q1 + 1, k))
        want = [i for i, p in enumerate(prs) if _sector_reference((q1, q2), p, k, lam)]
        got = [i for i in _sector_candidates(q1, q2, P1, P2, k, lam) if in_sector((q1, q2), prs[i], k, lam)]
        assert got == want
