"""Simultaneous approximation (m >= 2 numbers, one denominator).

Covers the cube clusters ``A(q)``, the set ``Mbar_k`` of points with
``psi(k) <= eps * k**(-1/m)``, its measure, the gcd and totient sums, the
lattice-point bounds, and the classification of denominator pairs
``(q1, q2)`` in ``Tr_k`` by the geometry of the strip
``D = {(p1, p2): |q2 p1 - q1 p2| <= a}``.

Irrational thresholds are never rounded: ``v <= eps * k**(-1/m)`` is tested
as ``v**m * k <= eps**m``, and sector tests use integer cross products.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, InputError, ResourceError, UnsupportedParameters
from .exactnum import RootPoly, as_rat, ceil_rat, floor_rat, root_floor, zeta
from .kernels import simul as _simul
from .psi import PsiRecord, psi_simul_sweep
from .regions2d import MeasureEstimate, convex_hull, lattice_points_in_convex, polygon_area
from .stats import chunk_rng, chunk_sizes, hoeffding_halfwidth, map_chunks

WORD = 1 << 64


# ------------------------------------------------------------------ membership


def simul_threshold_ok(value: Fraction, k: int, eps: Fraction, m: int) -> bool:
    """``value <= eps * k**(-1/m)``."""
    return value**m * k <= eps**m


def membership_mbar_md(alphas: Sequence, k: int, eps) -> tuple[bool, PsiRecord]:
    """Whether ``psi(k) <= eps * k**(-1/m)``, with the psi record at ``k``."""
    alphas = [as_rat(a) for a in alphas]
    eps = as_rat(eps)
    if len(alphas) < 2:
        raise DomainError("need m >= 2 numbers")
    if k < 2:
        raise DomainError("k must be at least 2")
    rec = psi_simul_sweep(alphas, k)[-1]
    return simul_threshold_ok(rec.value, k, eps, len(alphas)), rec


def word_threshold(k: int, eps: Fraction, m: int) -> int:
    """Largest integer ``H`` with ``H**m * k <= (eps * 2**64)**m``."""
    return root_floor((as_rat(eps) * WORD) ** m / k, m)


def member_words(words, k: int, eps, m: int, lows=None, low_bits: int = 0, backend=None):
    """Exact membership for samples given as fixed-point words.

    ``lows`` carries extra fractional bits beyond the first 64; samples the
    word screen cannot decide are re-checked with exact integers.
    """
    eps = as_rat(eps)
    H = word_threshold(k, eps, m)
    if H >= WORD // 2:
        return np.ones(len(words), bool)
    slack = 0 if lows is None else 1
    status = _simul.member_status(words, k, H, slack, backend)
    out = status == 1
    for s in np.flatnonzero(status == 2).tolist():
        denom_bits = 64 + low_bits
        alphas = [
            Fraction((int(words[s, i]) << low_bits) | int(lows[s, i]), 1 << denom_bits)
            for i in range(m)
        ]
        out[s] = membership_mbar_md(alphas, k, eps)[0]
    return out


# --------------------------------------------------------------- cube clusters


@dataclass(frozen=True)
class CubeCluster:
    q: int
    m: int
    eps: Fraction
    k: int

    @property
    def disjoint(self) -> bool:
        # 2 eps < k**(1/m)
        return (2 * self.eps) ** self.m < self.k

    def half_side(self) -> RootPoly:
        """``eps / (q * k**(1/m))`` as an element of ``Q(k**(1/m))``."""
        rho = RootPoly.radical(self.k, self.m)
        inv = rho ** (self.m - 1) / self.k
        return inv * (self.eps / self.q)


def _axis_length(q: int, r: RootPoly, lo: Fraction, hi: Fraction) -> RootPoly:
    total = r * 0
    p_lo = max(0, floor_rat(lo * q) - 1)
    p_hi = min(q, ceil_rat(hi * q) + 1)
    for p in range(p_lo, p_hi + 1):
        c = Fraction(p, q)
        a = c - r
        b = c + r
        left = a if a > lo else RootPoly.const(lo, r)
        right = b if b < hi else RootPoly.const(hi, r)
        if right > left:
            total = total + (right - left)
    return total


def cube_cluster_measure(q: int, k: int, eps, m: int, box) -> RootPoly:
    """Exact measure of ``A(q)`` inside an axis box ``[(lo, hi), ...]``.

    The result lies in ``Q(k**(1/m))``; it is rational when ``box`` is the
    unit cube.
    """
    eps = as_rat(eps)
    cc = CubeCluster(q, m, eps, k)
    if q < 1 or k < 2 or m < 2:
        raise DomainError("need q >= 1, k >= 2, m >= 2")
    if not cc.disjoint:
        raise UnsupportedParameters("cubes overlap when 2*eps >= k**(1/m)")
    box = _box(box, m)
    r = cc.half_side()
    out = None
    for lo, hi in box:
        ln = _axis_length(q, r, lo, hi)
        out = ln if out is None else out * ln
    return out


def cube_cluster_bound(q: int, k: int, eps, m: int, lam) -> Fraction:
    """``(lam*q + 2)**m * (2 eps)**m / (k q**m)`` for a box of side ``lam``."""
    eps, lam = as_rat(eps), as_rat(lam)
    return (lam * q + 2) ** m * (2 * eps) ** m / (k * Fraction(q) ** m)


def _box(box, m):
    out = [(as_rat(lo), as_rat(hi)) for lo, hi in box]
    if len(out) != m:
        raise InputError(f"box must have {m} axes")
    for lo, hi in out:
        if lo > hi:
            raise InputError("box axis with lo > hi")
    return out


def unit_box(m: int):
    return [(Fraction(0), Fraction(1))] * m


def centered_box(lam, m: int):
    lam = as_rat(lam)
    return [(Fraction(1, 2) - lam / 2, Fraction(1, 2) + lam / 2)] * m


# --------------------------------------------------------------- measure (MC)


def _dyadic_axis(lo: Fraction, hi: Fraction):
    a, b = lo * WORD, hi * WORD
    if a.denominator != 1 or b.denominator != 1 or not 0 <= lo <= hi <= 1:
        raise InputError("Monte-Carlo boxes must lie in [0,1] with endpoints on the 2**-64 grid")
    return int(a), int(b)


def measure_mbar_md(k: int, eps, m: int, box=None, samples: int = 10**6, seed: int = 0,
                    threads: int = 1, delta=None, backend=None) -> MeasureEstimate:
    """Monte-Carlo estimate of ``mu(Mbar_k & box)`` with a Hoeffding interval.

    Points are uniform on the ``2**-64`` grid, where membership is decided
    exactly by fixed-point arithmetic.
    """
    eps = as_rat(eps)
    if samples < 1:
        raise InputError("samples must be positive")
    box = _box(box if box is not None else unit_box(m), m)
    axes = [_dyadic_axis(lo, hi) for lo, hi in box]
    vol = Fraction(1)
    for lo, hi in box:
        vol *= hi - lo
    sizes = chunk_sizes(samples)

    def run(c):
        rng = chunk_rng(seed, 0, c)
        W = np.empty((sizes[c], m), np.uint64)
        for i, (a, b) in enumerate(axes):
            if b == a:
                W[:, i] = np.uint64(a % WORD)
            else:
                W[:, i] = rng.integers(a, b, size=sizes[c], dtype=np.uint64, endpoint=False)
        return int(member_words(W, k, eps, m, backend=backend).sum())

    hits = sum(map_chunks(run, len(sizes), threads))
    kw = {} if delta is None else {"delta": delta}
    return MeasureEstimate(vol * Fraction(hits, samples), vol * hoeffding_halfwidth(samples, **kw),
                           "point-mc", samples, hits)


# ----------------------------------------------------------------- band checks


@dataclass
class BandReport:
    name: str
    lower: Fraction | None
    upper: Fraction | None
    estimate: Fraction
    ci: Fraction
    ok: bool
    vacuous: bool = False
    margins: dict = field(default_factory=dict)


def lemma14_lower(eps, m: int, lam=1) -> Fraction:
    eps, lam = as_rat(eps), as_rat(lam)
    return (2 * lam * eps) ** m / 6 - (68 * lam * eps**2) ** m / 4


def lemma5_upper(eps, m: int, lam=1) -> Fraction:
    """Upper bound ``2 (4 lam eps)**m`` on ``mu(box & Mbar_k)``, the complement form
    of ``lam**m - 2 (4 lam eps)**m <= mu(box & Mund_k)``."""
    eps, lam = as_rat(eps), as_rat(lam)
    return 2 * (4 * lam * eps) ** m


def lemma5_lemma14_check(k: int, eps, m: int, lam, estimate: MeasureEstimate) -> BandReport:
    eps, lam = as_rat(eps), as_rat(lam)
    lo = lemma14_lower(eps, m, lam)
    hi = lemma5_upper(eps, m, lam)
    v, ci = estimate.value, estimate.ci_halfwidth
    vacuous = lo <= 0
    ok_lo = vacuous or v + ci >= lo
    ok_hi = v - ci <= hi
    # complement form: lam^m - v must be at least lam^m - 2 (4 lam eps)^m
    comp = lam**m - v
    return BandReport(
        "lemma5/lemma14", lo, hi, v, ci, ok_lo and ok_hi, vacuous,
        {"lower": v + ci - lo, "upper": hi - (v - ci), "complement": comp + ci - (lam**m - hi)},
    )


# ------------------------------------------------------------------- gcd sums


def tr_pairs(k: int):
    """``Tr_k = {(q1, q2): ceil(k/2) <= q1 < q2 <= k}``."""
    lo = (k + 1) // 2
    for q1 in range(lo, k + 1):
        for q2 in range(q1 + 1, k + 1):
            yield q1, q2


def lemma6_sum(k: int, m: int) -> tuple[Fraction, bool]:
    """Exact ``sum over Tr_k of gcd(q1,q2)**m / q2**m`` against ``2k/5``."""
    if m < 2 or k < 4:
        raise DomainError("need m >= 2 and k >= 4")
    lo = (k + 1) // 2
    total = Fraction(0)
    for q2 in range(lo + 1, k + 1):
        s = sum(math.gcd(q1, q2) ** m for q1 in range(lo, q2))
        total += Fraction(s, q2**m)
    return total, total <= Fraction(2 * k, 5)


def totients(P: int) -> np.ndarray:
    phi = np.arange(P + 1, dtype=np.int64)
    for p in range(2, P + 1):
        if phi[p] == p:
            phi[p::p] -= phi[p::p] // p
    return phi


def _tree_sum(fracs):
    fracs = list(fracs)
    if not fracs:
        return Fraction(0)
    while len(fracs) > 1:
        nxt = [fracs[i] + fracs[i + 1] for i in range(0, len(fracs) - 1, 2)]
        if len(fracs) % 2:
            nxt.append(fracs[-1])
        fracs = nxt
    return fracs[0]


@dataclass
class TotientReport:
    m: int
    P: int
    partial: Fraction
    target_lo: Fraction
    target_hi: Fraction
    tail: Fraction
    ok: bool

    @property
    def gap(self) -> Fraction:
        """Distance from the partial sum to the middle of the target bracket."""
        return (self.target_lo + self.target_hi) / 2 - self.partial


def totient_series_check(m: int, P: int) -> TotientReport:
    """``sum_{p<=P} phi(p)/p**m`` against ``zeta(m-1)/zeta(m)``.

    The remainder ``sum_{p>P} phi(p)/p**m`` is at most ``P**(2-m)/(m-2)``.
    """
    if m < 3:
        raise DomainError("the series converges only for m >= 3")
    if P < 10:
        raise DomainError("P must be at least 10")
    if P > 10**6:
        raise ResourceError("totient sieve is capped at P = 10**6")
    phi = totients(P).tolist()
    partial = _tree_sum(Fraction(phi[p], p**m) for p in range(1, P + 1))
    tail = Fraction(1, (m - 2) * P ** (m - 2))
    tol = tail / 8
    z1, z2 = zeta(m - 1, tol), zeta(m, tol)
    lo = z1.value_lo / z2.value_hi
    hi = z1.value_hi / z2.value_lo
    return TotientReport(m, P, partial, lo, hi, tail, lo - tail <= partial <= hi)


# ---------------------------------------------------------------- Pick bound


@dataclass
class PickResult:
    N: int
    area: Fraction
    interior: int
    boundary: int
    hull_area: Fraction
    applicable: bool
    ok: bool


def pick_bound_check(polygon) -> PickResult:
    """``N <= 2 * area + 2`` for the integer points of a convex polygon.

    ``interior`` and ``boundary`` refer to the lattice polygon spanned by the
    integer points (Pick's formula); the check is applicable only when those
    points are not all collinear.
    """
    poly = [(as_rat(x), as_rat(y)) for x, y in polygon]
    area = polygon_area(poly)
    pts = lattice_points_in_convex(poly)
    N = len(pts)
    hull = convex_hull(pts)
    if len(hull) < 3:
        return PickResult(N, area, 0, 0, Fraction(0), False, True)
    hull_area = polygon_area(hull)
    boundary = sum(
        math.gcd(int(hull[i][0] - hull[i - 1][0]), int(hull[i][1] - hull[i - 1][1]))
        for i in range(len(hull))
    )
    interior = int(hull_area - Fraction(boundary, 2) + 1)
    ok = N <= 2 * area + 2 and N <= 2 * hull_area + 2
    return PickResult(N, area, interior, boundary, hull_area, True, ok)


# --------------------------------------------------------------- the strip D


@dataclass(frozen=True)
class StripD:
    q1: int
    q2: int
    k: int
    m: int
    eps: Fraction

    @property
    def d(self) -> int:
        return math.gcd(self.q1, self.q2)

    @property
    def lines_half(self) -> int:
        """``floor(eps (q1 + q2) / (d k**(1/m)))``."""
        return root_floor((self.eps * (self.q1 + self.q2) / self.d) ** self.m / self.k, self.m)

    @property
    def a(self) -> int:
        return self.d * self.lines_half

    @property
    def line_count(self) -> int:
        return 2 * self.lines_half + 1

    def width_ok(self) -> bool:
        """``h = 2 a / |q| <= 2 sqrt(2) eps k**(-1/m)``, squared and powered."""
        lhs = Fraction(4 * self.a**2, self.q1**2 + self.q2**2)
        rhs = 8 * self.eps**2
        # lhs <= rhs * k**(-2/m)  <=>  lhs**m * k**2 <= rhs**m
        return lhs**self.m * self.k**2 <= rhs**self.m


@dataclass(frozen=True)
class RectC:
    """Axis rectangle ``[x0, x0 + w] x [y0, y0 + h]``."""

    x0: Fraction
    y0: Fraction
    w: Fraction
    h: Fraction

    @classmethod
    def c0(cls, q1: int, q2: int, lam, delta) -> "RectC":
        lam, delta = as_rat(lam), as_rat(delta)
        s = (1 + delta) * lam / 2
        return cls(Fraction(0), Fraction(0), s * q1, s * q2)

    @classmethod
    def full(cls, q1: int, q2: int, lam, delta, x0=0, y0=0) -> "RectC":
        lam, delta = as_rat(lam), as_rat(delta)
        s = (1 + delta) * lam
        return cls(as_rat(x0), as_rat(y0), s * q1, s * q2)


def _ext_gcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
        y0, y1 = y1, y0 - t * y1
    return a, x0, y0


def _line_points(q1, q2, c, rect: RectC):
    """Integer points with ``q2 p1 - q1 p2 = c`` inside ``rect``."""
    d, u, v = _ext_gcd(q2, -q1)
    if d < 0:
        d, u, v = -d, -u, -v
    if c % d:
        return []
    s = c // d
    p1, p2 = u * s, v * s  # particular solution
    s1, s2 = q1 // d, q2 // d  # step along the line (both positive)
    # need x0 <= p1 + j s1 <= x0 + w and y0 <= p2 + j s2 <= y0 + h
    jlo = max(ceil_rat((rect.x0 - p1) / s1), ceil_rat((rect.y0 - p2) / s2))
    jhi = min(floor_rat((rect.x0 + rect.w - p1) / s1), floor_rat((rect.y0 + rect.h - p2) / s2))
    return [(p1 + j * s1, p2 + j * s2) for j in range(jlo, jhi + 1)]


def d_region_points(strip: StripD, rect: RectC) -> list[tuple[int, int]]:
    """Integer points of ``D & rect``, walking the lines ``q2 p1 - q1 p2 = c``."""
    out = []
    d, a = strip.d, strip.a
    for c in range(-a, a + 1, d):
        out.extend(_line_points(strip.q1, strip.q2, c, rect))
    return out


def lemma11_bound_ok(count: int, strip: StripD, lam) -> bool:
    """``count**m <= (32 eps lam)**m k**(m-1) + (16 eps/d)**m k**(m-1) + (8 lam d)**m + 4**m``."""
    lam = as_rat(lam)
    m, k, eps, d = strip.m, strip.k, strip.eps, strip.d
    rhs = (32 * eps * lam) ** m * k ** (m - 1) + (16 * eps / d) ** m * k ** (m - 1) \
        + (8 * lam * d) ** m + 4**m
    return count**m <= rhs


# ----------------------------------------------------------- classification


@dataclass
class PairClassification:
    k: int
    m: int
    eps: Fraction
    lam: Fraction
    delta: Fraction
    pairs_checked: int = 0
    n_j0: int = 0
    n_j1: int = 0
    n_v: int = 0
    meaningful: bool = True
    lemma13_bound: Fraction = Fraction(0)
    violations: dict = field(default_factory=lambda: {
        "J0_subset_J1": 0, "J1_subset_V": 0, "collinear": 0, "step": 0, "sine": 0,
        "lemma13": 0,
    })
    j1_pairs: list = field(default_factory=list)

    @property
    def N0(self) -> RootPoly:
        """``8 (1+delta) eps lam k**(1-1/m) + 6``."""
        kk = RootPoly.radical(self.k, self.m) ** (self.m - 1)
        return kk * (8 * (1 + self.delta) * self.eps * self.lam) + 6

    @property
    def d0(self) -> RootPoly:
        """``9 eps k**(1-1/m)``."""
        return RootPoly.radical(self.k, self.m) ** (self.m - 1) * (9 * self.eps)

    @property
    def total_violations(self) -> int:
        return sum(self.violations.values())


def pr_points(k: int, m: int, eps) -> list[tuple[int, int]]:
    """Primitive ``(p1, p2)`` in ``[0, k**(1/m)/(4 eps)]**2`` with ``1 <= p2/p1 <= 2``."""
    eps = as_rat(eps)
    bound = root_floor(Fraction(k) / (4 * eps) ** m, m)
    return [
        (p1, p2)
        for p1 in range(1, bound + 1)
        for p2 in range(p1, min(2 * p1, bound) + 1)
        if math.gcd(p1, p2) == 1
    ]


def in_sector(q, p, k: int, lam: Fraction) -> bool:
    """``q`` within half the sector angle ``phi`` of ``p``, ``sin(phi) = 1/(k lam |p|)``.

    With ``s = sin(theta)**2`` of the angle to ``p``, the test
    ``2 theta <= phi`` reads ``1 - 2s >= 0`` and ``(1 - 2s)**2 >= cos(phi)**2``,
    evaluated in integers after clearing denominators.
    """
    cross = p[0] * q[1] - p[1] * q[0]
    dot = p[0] * q[0] + p[1] * q[1]
    if dot <= 0:
        return False
    qq = q[0] ** 2 + q[1] ** 2
    pp = p[0] ** 2 + p[1] ** 2
    D = qq * pp
    N = D - 2 * cross * cross  # (1 - 2s) * D
    if N < 0:
        return False
    lam = as_rat(lam)
    a, b = lam.numerator, lam.denominator
    t = k * k * a * a * pp  # cos(phi)**2 = (t - b**2) / t
    return N * N * t >= D * D * (t - b * b)


def _sector_candidates(q1: int, q2: int, P1: np.ndarray, P2: np.ndarray, k: int, lam: Fraction):
    """Directions passing ``|cross(p, q)| <= |q| / (k lam)``, a necessary condition for
    ``in_sector`` (the half angle is below the sector angle)."""
    a, b = lam.numerator, lam.denominator
    cross = P1 * q2 - P2 * q1
    big = int(np.abs(cross).max(initial=0)) ** 2 * k * k * a * a
    if big >= 1 << 62:
        cross = cross.astype(object)
    keep = cross * cross * (k * k * a * a) <= (q1 * q1 + q2 * q2) * b * b
    return np.flatnonzero(keep).tolist()


def _n0_half_le(count: int, cls: PairClassification) -> bool:
    """``count >= N0 / 2``."""
    return cls.N0 <= 2 * count


def classify_pairs(k: int, m: int, eps, lam, delta, mode: str = "full", n: int = 0,
                   seed: int = 0, budget: int = 10**7) -> PairClassification:
    """Classify ``Tr_k`` pairs and check the inclusion chain ``J0 in J1 in V``."""
    eps, lam, delta = as_rat(eps), as_rat(lam), as_rat(delta)
    if not 0 < delta < 1 or lam <= 0 or eps <= 0:
        raise InputError("need 0 < delta < 1, lam > 0, eps > 0")
    cls = PairClassification(k, m, eps, lam, delta)
    kk = RootPoly.radical(k, m) ** (m - 1)
    cls.meaningful = kk * ((1 + delta) * eps * lam) > 6
    d0 = cls.d0
    if mode == "full":
        side = k - (k + 1) // 2 + 1
        total = side * (side - 1) // 2
        if total > budget:
            raise ResourceError(f"|Tr_k| ~ {total} exceeds budget {budget}", partial=cls)
        pairs = tr_pairs(k)
    elif mode == "sampled":
        rng = chunk_rng(seed, 7, 0)
        lo = (k + 1) // 2
        q1 = rng.integers(lo, k, size=n)
        q2 = q1 + 1 + (rng.random(n) * (k - q1)).astype(np.int64)
        pairs = zip(q1.tolist(), q2.tolist())
    else:
        raise InputError(f"unknown mode {mode!r}")

    prs = pr_points(k, m, eps)
    P1 = np.array([p[0] for p in prs], dtype=np.int64)
    P2 = np.array([p[1] for p in prs], dtype=np.int64)
    for q1, q2 in pairs:
        cls.pairs_checked += 1
        strip = StripD(q1, q2, k, m, eps)
        rect = RectC.c0(q1, q2, lam, delta)
        pts = d_region_points(strip, rect)
        count = len(pts)
        in_j0 = d0 < strip.d
        in_j1 = _n0_half_le(count, cls)
        in_v = any(in_sector((q1, q2), prs[i], k, lam)
                   for i in _sector_candidates(q1, q2, P1, P2, k, lam))
        cls.n_j0 += in_j0
        cls.n_j1 += in_j1
        cls.n_v += in_v
        if cls.meaningful and in_j0 and not in_j1:
            cls.violations["J0_subset_J1"] += 1
        if in_j1:
            cls.j1_pairs.append((q1, q2))
            if not in_v:
                cls.violations["J1_subset_V"] += 1
            _check_j1_geometry(cls, pts, q1, q2, k, m, eps, lam)
    bound = lemma13_bound_pow(k, m, eps, lam)
    cls.lemma13_bound = bound
    # #J1 <= 2 k**(1 + 3/(2m)) / (lam eps**2)  <=>  (#J1 lam eps**2 / 2)**(2m) <= k**(2m+3)
    for cnt in (cls.n_j1, cls.n_v):
        if (cnt * lam * eps**2 / 2) ** (2 * m) > Fraction(k) ** (2 * m + 3):
            cls.violations["lemma13"] += 1
    return cls


def lemma13_bound_pow(k, m, eps, lam) -> Fraction:
    """``(2 / (lam eps**2))**(2m) * k**(2m+3)``: the bound on the high-count pairs raised to ``2m``."""
    return (2 / (lam * eps**2)) ** (2 * m) * Fraction(k) ** (2 * m + 3)


def _check_j1_geometry(cls, pts, q1, q2, k, m, eps, lam):
    if len(pts) < 2:
        return
    pts = sorted(pts)
    p0, p1 = pts[0], pts[1]
    dx, dy = p1[0] - p0[0], p1[1] - p0[1]
    for p in pts[2:]:
        if dx * (p[1] - p0[1]) - dy * (p[0] - p0[0]) != 0:
            cls.violations["collinear"] += 1
            return
    g = math.gcd(dx, dy)
    sx, sy = dx // g, dy // g  # primitive direction of the line
    # gamma: distance between neighbouring integer points of the line
    gamma_sq = sx * sx + sy * sy
    # gamma <= k**(1/m)/(4 eps)  <=>  gamma_sq**m * (4 eps)**(2m) <= k**2
    if Fraction(gamma_sq) ** m * (4 * eps) ** (2 * m) > k * k:
        cls.violations["step"] += 1
    # sin(omega) <= 1/(2 k lam gamma) with omega the angle between the line and l0
    # sin(omega) = |cross(dir, q)| / (gamma |q|), so the bound reads
    # 4 k**2 lam**2 cross**2 <= |q|**2
    cross = sx * q2 - sy * q1
    if 4 * k * k * lam * lam * cross * cross > q1 * q1 + q2 * q2:
        cls.violations["sine"] += 1
