"""One linear form in two variables: strips, their intersections, and ``Mbar_k``.

``Mbar_k = {(alpha, beta): psi(k) <= eps / k**2}`` is the union of the strips
``A(x1, x2, q) = {|x1 alpha + x2 beta - q| <= eps/k**2}`` over
``1 <= max(|x1|, |x2|) <= k``. Its measure inside a square is computed
fiber by fiber: on a line ``beta = const`` the set is a finite union of
intervals in ``alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

import numpy as np

from .errors import DomainError, InputError, PreconditionError, ResourceError
from .exactnum import (
    IntervalSet, Mat2, as_rat, ceil_rat, floor_rat, ln_bracket, nearest_int_distance,
    sqrt_bracket, zeta,
)
from .kernels import fiber as _fiber
from .kernels import form2 as _form2
from .psi import PsiRecord, psi_form2_sweep
from .stats import chunk_rng, chunk_sizes, hoeffding_halfwidth, map_chunks

WORD = 1 << 64
METHODS = ("exact-fiber-integration", "fiber-mc", "point-mc")
EXACT_K_MAX = 10


@dataclass(frozen=True)
class MeasureEstimate:
    value: Fraction
    ci_halfwidth: Fraction
    method: str
    samples: int
    hits: int | None = None

    @property
    def lo(self) -> Fraction:
        return self.value - self.ci_halfwidth

    @property
    def hi(self) -> Fraction:
        return self.value + self.ci_halfwidth


# ------------------------------------------------------------------- geometry


def polygon_area(poly) -> Fraction:
    """Shoelace area (absolute value) of a simple polygon."""
    n = len(poly)
    s = Fraction(0)
    for i in range(n):
        x0, y0 = poly[i - 1]
        x1, y1 = poly[i]
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


def polygon_centroid(poly) -> tuple[Fraction, Fraction]:
    n = len(poly)
    a = Fraction(0)
    cx = cy = Fraction(0)
    for i in range(n):
        x0, y0 = poly[i - 1]
        x1, y1 = poly[i]
        c = x0 * y1 - x1 * y0
        a += c
        cx += (x0 + x1) * c
        cy += (y0 + y1) * c
    a /= 2
    return cx / (6 * a), cy / (6 * a)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list:
    """Counter-clockwise hull without collinear boundary points."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _ccw(poly):
    s = sum(poly[i - 1][0] * poly[i][1] - poly[i][0] * poly[i - 1][1] for i in range(len(poly)))
    return poly if s > 0 else poly[::-1]


def is_convex(poly) -> bool:
    n = len(poly)
    if n < 3:
        return False
    signs = set()
    for i in range(n):
        c = _cross(poly[i - 2], poly[i - 1], poly[i])
        if c:
            signs.add(c > 0)
    return len(signs) == 1


def lattice_points_in_convex(poly) -> list[tuple[int, int]]:
    """Integer points of a closed convex polygon with rational vertices."""
    poly = _ccw([(as_rat(x), as_rat(y)) for x, y in poly])
    L = reduce(math.lcm, (v.denominator for p in poly for v in p), 1)
    P = [(int(x * L), int(y * L)) for x, y in poly]
    xs = [p[0] for p in poly]
    ys = [p[1] for p in poly]
    gx = np.arange(ceil_rat(min(xs)), floor_rat(max(xs)) + 1, dtype=np.int64)
    gy = np.arange(ceil_rat(min(ys)), floor_rat(max(ys)) + 1, dtype=np.int64)
    if not len(gx) or not len(gy):
        return []
    X, Y = np.meshgrid(gx, gy, indexing="ij")
    big = max(abs(v) for p in P for v in p) * 4 * (max(abs(gx).max(), abs(gy).max()) * L + 1)
    dtype = np.int64 if big < (1 << 62) else object
    X = X.astype(dtype) * L
    Y = Y.astype(dtype) * L
    inside = np.ones(X.shape, bool)
    for i in range(len(P)):
        (x0, y0), (x1, y1) = P[i - 1], P[i]
        inside &= (x1 - x0) * (Y - y0) - (y1 - y0) * (X - x0) >= 0
    ii, jj = np.nonzero(inside)
    return [(int(gx[a]), int(gy[b])) for a, b in zip(ii, jj)]


def clip_halfplane(poly, a, b, c):
    """Clip a convex polygon to ``a*x + b*y <= c`` (Sutherland-Hodgman)."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i - 1], poly[i]
        fp = a * p[0] + b * p[1] - c
        fq = a * q[0] + b * q[1] - c
        if fq <= 0:
            if fp > 0:
                t = fp / (fp - fq)
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
            out.append(q)
        elif fp <= 0:
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    # drop repeated vertices
    dedup = []
    for v in out:
        if not dedup or dedup[-1] != v:
            dedup.append(v)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


# -------------------------------------------------------------- strip objects


@dataclass(frozen=True)
class Square:
    corner: tuple[Fraction, Fraction]
    side: Fraction

    def __post_init__(self):
        object.__setattr__(self, "corner", (as_rat(self.corner[0]), as_rat(self.corner[1])))
        object.__setattr__(self, "side", as_rat(self.side))
        if self.side <= 0:
            raise InputError("square side must be positive")

    @classmethod
    def centered(cls, lam, center=(Fraction(1, 2), Fraction(1, 2))) -> "Square":
        lam = as_rat(lam)
        return cls((as_rat(center[0]) - lam / 2, as_rat(center[1]) - lam / 2), lam)

    @classmethod
    def unit(cls) -> "Square":
        return cls((Fraction(0), Fraction(0)), Fraction(1))

    @property
    def alpha_range(self):
        return self.corner[0], self.corner[0] + self.side

    @property
    def beta_range(self):
        return self.corner[1], self.corner[1] + self.side

    @property
    def area(self) -> Fraction:
        return self.side**2

    def polygon(self):
        (a0, a1), (b0, b1) = self.alpha_range, self.beta_range
        return [(a0, b0), (a1, b0), (a1, b1), (a0, b1)]


@dataclass(frozen=True)
class StripFamily:
    x1: int
    x2: int
    eps: Fraction
    k: int

    def __post_init__(self):
        if self.x1 == 0 and self.x2 == 0:
            raise InputError("(x1, x2) must be nonzero")
        object.__setattr__(self, "eps", as_rat(self.eps))

    @property
    def half_width(self) -> Fraction:
        """``eps / k**2``."""
        return self.eps / self.k**2

    def strip_polygon(self, q: int, square: Square):
        """``A(x1, x2, q) & square`` as a convex polygon (possibly empty)."""
        w = self.half_width
        poly = square.polygon()
        poly = clip_halfplane(poly, self.x1, self.x2, q + w)
        if poly:
            poly = clip_halfplane(poly, -self.x1, -self.x2, -(q - w))
        return poly

    def measure_in(self, square: Square) -> Fraction:
        """Exact area of the union over ``q`` of the strips inside ``square``."""
        corners = square.polygon()
        vals = [self.x1 * a + self.x2 * b for a, b in corners]
        w = self.half_width
        total = Fraction(0)
        for q in range(floor_rat(min(vals) - w), ceil_rat(max(vals) + w) + 1):
            poly = self.strip_polygon(q, square)
            if len(poly) >= 3:
                total += polygon_area(poly)
        return total


@dataclass(frozen=True)
class CenterLattice:
    """Centers of ``A(x, q1) & A(y, q2)``: the lattice ``M**-1 Z**2``, ``M = [x; y]``."""

    x: tuple[int, int]
    y: tuple[int, int]

    def __post_init__(self):
        if self.mat.det == 0:
            raise InputError("the pairs must be linearly independent")

    @property
    def mat(self) -> Mat2:
        return Mat2(self.x[0], self.x[1], self.y[0], self.y[1])

    @property
    def delta(self) -> int:
        return self.mat.abs_det

    @property
    def basis(self):
        """Columns of ``M**-1``: ``(y2, -y1)/det`` and ``(-x2, x1)/det``."""
        det = self.mat.det
        (x1, x2), (y1, y2) = self.x, self.y
        return (Fraction(y2, det), Fraction(-y1, det)), (Fraction(-x2, det), Fraction(x1, det))

    def center(self, q1: int, q2: int):
        (u1, u2), (v1, v2) = self.basis
        return (q1 * u1 + q2 * v1, q1 * u2 + q2 * v2)

    def on_lattice(self, pt) -> bool:
        """Whether ``M @ pt`` is an integer vector."""
        (x1, x2), (y1, y2) = self.x, self.y
        a, b = pt
        return (x1 * a + x2 * b).denominator == 1 and (y1 * a + y2 * b).denominator == 1

    def parallelogram(self, q1: int, q2: int, eps, k: int):
        """Vertices of ``A(x, q1) & A(y, q2)`` in cyclic order."""
        w = as_rat(eps) / k**2
        return [self.center(q1 + s1 * w, q2 + s2 * w)
                for s1, s2 in ((-1, -1), (1, -1), (1, 1), (-1, 1))]


def diameter_sq(poly) -> Fraction:
    return max((p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 for p in poly for q in poly)


@dataclass(frozen=True)
class PrimitivePairSet:
    k: int
    variant: str
    pairs: tuple

    @classmethod
    def build(cls, k: int, variant: str = "E") -> "PrimitivePairSet":
        if variant == "E":
            lo = (k + 1) // 2
            pairs = tuple((a, b) for a in range(lo, k + 1) for b in range(lo, k + 1)
                          if math.gcd(a, b) == 1)
        elif variant == "E*":
            pairs = tuple((a, b) for a in range(1, k + 1) for b in range(-k, k + 1) if b != 0)
        else:
            raise InputError("variant must be 'E' or 'E*'")
        return cls(k, variant, pairs)


# ------------------------------------------------------------------ membership


def form_threshold_ok(value: Fraction, k: int, eps) -> bool:
    return value <= as_rat(eps) / k**2


def membership_mbar_2d(alpha, beta, k: int, eps, backend=None) -> tuple[bool, PsiRecord]:
    """Whether ``psi_(alpha beta)(k) <= eps/k**2``, with the psi record at ``k``."""
    if k < 2:
        raise DomainError("k must be at least 2")
    rec = psi_form2_sweep(as_rat(alpha), as_rat(beta), k, backend)[-1]
    return form_threshold_ok(rec.value, k, eps), rec


def union_member(alpha, beta, k: int, eps) -> bool:
    """Membership through the strip union: some ``A(x1, x2, q)`` contains the point."""
    alpha, beta = as_rat(alpha), as_rat(beta)
    w = as_rat(eps) / k**2
    for x1 in range(-k, k + 1):
        for x2 in range(-k, k + 1):
            if (x1, x2) != (0, 0) and nearest_int_distance(x1 * alpha + x2 * beta) <= w:
                return True
    return False


def form2_word_threshold(k: int, eps) -> int:
    """Largest integer ``H`` with ``H / 2**64 <= eps / k**2``."""
    return floor_rat(as_rat(eps) * WORD / k**2)


# ----------------------------------------------------------------- fibers


def _row0_covers(beta: Fraction, k: int, w: Fraction) -> bool:
    return any(nearest_int_distance(x2 * beta) <= w for x2 in range(1, k + 1))


def _fiber_scale(beta, w, lo, hi):
    return reduce(math.lcm, (w.denominator, beta.denominator, lo.denominator, hi.denominator))


def fiber_measure_mbar(beta, k: int, eps, alpha_window=(0, 1), backend=None) -> Fraction:
    """Exact length of ``{alpha in window: (alpha, beta) in Mbar_k}``."""
    beta, eps = as_rat(beta), as_rat(eps)
    lo, hi = as_rat(alpha_window[0]), as_rat(alpha_window[1])
    if k < 2:
        raise DomainError("k must be at least 2")
    if not 0 <= lo <= hi <= 1:
        raise InputError("window must lie inside [0, 1]")
    w = eps / k**2
    if _row0_covers(beta, k, w):
        return hi - lo
    G = _fiber_scale(beta, w, lo, hi)
    acc, res, *_ = _fiber.fiber_union(k, G, w * G, beta * G, lo * G, hi * G, backend)
    Lk = reduce(math.lcm, range(1, k + 1))
    num = acc * Lk + sum(r * (Lk // d) for d, r in enumerate(res) if d and r)
    return Fraction(num, G * Lk)


def fiber_intervals(beta, k: int, eps, alpha_window=(0, 1)) -> IntervalSet:
    """The fiber as an explicit canonical interval set (pure Python, small ``k``)."""
    beta, eps = as_rat(beta), as_rat(eps)
    lo, hi = as_rat(alpha_window[0]), as_rat(alpha_window[1])
    w = eps / k**2
    if _row0_covers(beta, k, w):
        return IntervalSet.from_raw([(lo, hi)])
    raw = []
    for x1 in range(1, k + 1):
        for x2 in range(-k, k + 1):
            for q in range(floor_rat(x1 * lo + x2 * beta - w), ceil_rat(x1 * hi + x2 * beta + w) + 1):
                a = (q - x2 * beta - w) / x1
                b = (q - x2 * beta + w) / x1
                a, b = max(a, lo), min(b, hi)
                if a <= b:
                    raw.append((a, b))
    return IntervalSet.from_raw(raw)


# ---------------------------------------------------- exact beta integration


def _endpoint_lines(k, w, a0, a1, b0, b1, Q):
    """Lines ``alpha = (C/Q - x2 beta) / x1`` bounding strips and the window."""
    rows = []
    for x1 in range(1, k + 1):
        for x2 in range(-k, k + 1):
            qmin = floor_rat(x1 * a0 + min(x2 * b0, x2 * b1) - w)
            qmax = ceil_rat(x1 * a1 + max(x2 * b0, x2 * b1) + w)
            for q in range(qmin, qmax + 1):
                for s in (-1, 1):
                    rows.append((int((q + s * w) * Q), x2, x1))
    rows.append((int(a0 * Q), 0, 1))
    rows.append((int(a1 * Q), 0, 1))
    return np.array(rows, dtype=np.int64)


def _events(k, w, a0, a1, b0, b1, Q):
    """Sorted breakpoints in ``[b0, b1]`` as reduced ``(num, den)`` pairs."""
    L = _endpoint_lines(k, w, a0, a1, b0, b1, Q)
    C, X2, X1 = L[:, 0], L[:, 1], L[:, 2]
    chunks = []
    for i in range(len(L) - 1):
        n = C[i] * X1[i + 1:] - C[i + 1:] * X1[i]
        d = Q * (X2[i] * X1[i + 1:] - X2[i + 1:] * X1[i])
        keep = d != 0
        n, d = n[keep], d[keep]
        sg = np.sign(d)
        n, d = n * sg, d * sg
        # b0 < n/d < b1
        inside = (n * b0.denominator > b0.numerator * d) & (n * b1.denominator < b1.numerator * d)
        n, d = n[inside], d[inside]
        g = np.gcd(n, d)
        chunks.append(np.stack([n // g, d // g], 1))
    for x2 in range(1, k + 1):
        for p in range(floor_rat(x2 * b0) - 1, ceil_rat(x2 * b1) + 2):
            for s in (-1, 1):
                v = (p + s * w) / x2
                if b0 < v < b1:
                    chunks.append(np.array([[v.numerator, v.denominator]], dtype=np.int64))
    for v in (b0, b1):
        chunks.append(np.array([[v.numerator, v.denominator]], dtype=np.int64))
    ev = np.concatenate(chunks)
    if ev[:, 1].max() < (1 << 26):
        # distinct reduced fractions differ by at least 2**-52 here, so the
        # float order is exact and equal values sit next to each other
        ev = ev[np.argsort(ev[:, 0] / ev[:, 1], kind="stable")]
        keep = np.ones(len(ev), bool)
        keep[1:] = (ev[1:, 0] != ev[:-1, 0]) | (ev[1:, 1] != ev[:-1, 1])
        ev = ev[keep]
        fr = [Fraction(int(a), int(b)) for a, b in ev.tolist()]
        if all(a < b for a, b in zip(fr, fr[1:])):
            return fr
    return sorted({Fraction(int(a), int(b)) for a, b in ev.tolist()})


def exact_fiber_integral(k: int, eps, square: Square, backend=None) -> Fraction:
    """``mu(Mbar_k & square)`` exactly, integrating the piecewise-linear fiber length.

    Between consecutive breakpoints (crossings of strip boundaries with each
    other or with the window, and the ``x1 = 0`` strip edges) the fiber length
    is linear in ``beta``; it is identified at the mediant of each slab.
    """
    eps = as_rat(eps)
    if k > EXACT_K_MAX:
        raise ResourceError(f"exact integration is limited to k <= {EXACT_K_MAX}")
    if k < 2:
        raise DomainError("k must be at least 2")
    w = eps / k**2
    a0, a1 = square.alpha_range
    b0, b1 = square.beta_range
    if not (0 <= a0 and a1 <= 1 and 0 <= b0 and b1 <= 1):
        raise InputError("square must lie inside [0, 1]**2")
    Q = reduce(math.lcm, (w.denominator, a0.denominator, a1.denominator))
    ev = _events(k, w, a0, a1, b0, b1, Q)
    mids = [Fraction(a.numerator + b.numerator, a.denominator + b.denominator)
            for a, b in zip(ev, ev[1:])]
    BN = np.array([m.numerator for m in mids], dtype=np.int64)
    BD = np.array([m.denominator for m in mids], dtype=np.int64)
    wQ, NwlQ, NwhQ = int(w * Q), int(a0 * Q), int(a1 * Q)
    SQ, SW, SX, Wc = _fiber.slab_structure(k, Q, wQ, NwlQ, NwhQ, BN, BD, backend)
    Lk = reduce(math.lcm, range(1, k + 1))
    scale = np.array([0] + [Lk // x for x in range(1, k + 1)], dtype=object)
    # c0 = C0 / (Lk Q), c1 = C1 / Lk
    C0 = ((SQ.astype(object) * Q + SW.astype(object) * wQ) * scale).sum(axis=1) \
        + (Wc[:, 1].astype(object) * NwhQ + Wc[:, 0].astype(object) * NwlQ) * Lk
    C1 = -(SX.astype(object) * scale).sum(axis=1)
    # rows where some x1 = 0 strip covers the whole fiber
    row0 = np.zeros(len(mids), bool)
    for x2 in range(1, k + 1):
        r = (BN.astype(object) * x2) % BD.astype(object)
        dist = np.minimum(r, BD.astype(object) - r)
        row0 |= (dist * w.denominator <= w.numerator * BD.astype(object)).astype(bool)
    C0 = np.where(row0, (NwhQ - NwlQ) * Lk, C0)
    C1 = np.where(row0, 0, C1)
    Gb = reduce(math.lcm, {e.denominator for e in ev})
    B = [e.numerator * (Gb // e.denominator) for e in ev]
    s1 = 0
    s2 = 0
    for i, (c0, c1) in enumerate(zip(C0.tolist(), C1.tolist())):
        lo, hi = B[i], B[i + 1]
        s1 += c0 * (hi - lo)
        s2 += c1 * (hi * hi - lo * lo)
    return Fraction(s1, Lk * Q * Gb) + Fraction(s2, 2 * Lk * Gb * Gb)


# ------------------------------------------------------------ measure (MC)


def _dyadic_range(lo: Fraction, hi: Fraction, bits: int):
    scale = 1 << bits
    a, b = lo * scale, hi * scale
    if a.denominator != 1 or b.denominator != 1:
        raise InputError(f"square endpoints must be multiples of 2**-{bits}")
    return int(a), int(b)


def _fiber_bits(k: int, eps: Fraction, square: Square) -> int:
    """Largest dyadic resolution for fiber ``beta`` that keeps the kernel in int64."""
    w = eps / k**2
    a0, a1 = square.alpha_range
    bits = 52
    while bits > 1:
        G = reduce(math.lcm, (w.denominator, 1 << bits, a0.denominator, a1.denominator))
        if _fiber.fits_int64(k, G, w * G, a1 * G):
            return bits
        bits -= 1
    return bits


def measure_mbar_2d(k: int, eps, S: Square | None = None, strategy: str = "point-mc",
                    budget: int = 10**6, seed: int = 0, threads: int = 1, delta=None,
                    backend=None) -> MeasureEstimate:
    """``mu(Mbar_k & S)`` by exact integration or Monte Carlo.

    ``budget`` is the number of points for ``point-mc`` and of fibers for
    ``fiber-mc``. Monte-Carlo intervals are Hoeffding half-widths at
    confidence ``1 - delta``.
    """
    eps = as_rat(eps)
    S = S or Square.unit()
    if strategy not in METHODS:
        raise InputError(f"strategy must be one of {METHODS}")
    if k < 2:
        raise DomainError("k must be at least 2")
    kw = {} if delta is None else {"delta": delta}
    if strategy == "exact-fiber-integration":
        return MeasureEstimate(exact_fiber_integral(k, eps, S, backend), Fraction(0), strategy, 0)
    if budget < 1:
        raise InputError("budget must be positive")
    sizes = chunk_sizes(budget)
    (a0, a1), (b0, b1) = S.alpha_range, S.beta_range
    if strategy == "point-mc":
        ra = _dyadic_range(a0, a1, 64)
        rb = _dyadic_range(b0, b1, 64)
        if ra[1] > WORD or rb[1] > WORD or ra[0] < 0 or rb[0] < 0:
            raise InputError("square must lie inside [0, 1]**2")
        H = form2_word_threshold(k, eps)

        def run(c):
            rng = chunk_rng(seed, 1, c)
            A = rng.integers(ra[0], ra[1], size=sizes[c], dtype=np.uint64, endpoint=False)
            B = rng.integers(rb[0], rb[1], size=sizes[c], dtype=np.uint64, endpoint=False)
            return int((_form2.member_status(A, B, k, H, 0, backend) == 1).sum())

        hits = sum(map_chunks(run, len(sizes), threads))
        area = S.area
        return MeasureEstimate(area * Fraction(hits, budget),
                               area * hoeffding_halfwidth(budget, **kw), strategy, budget, hits)
    # fiber-mc
    bits = _fiber_bits(k, eps, S)
    rb = _dyadic_range(b0, b1, bits)

    def run_f(c):
        rng = chunk_rng(seed, 2, c)
        js = rng.integers(rb[0], rb[1], size=sizes[c], dtype=np.int64, endpoint=False)
        return sum((fiber_measure_mbar(Fraction(int(j), 1 << bits), k, eps, (a0, a1), backend)
                    for j in js.tolist()), Fraction(0))

    total = sum(map_chunks(run_f, len(sizes), threads), Fraction(0))
    lam_b = b1 - b0
    return MeasureEstimate(lam_b * total / budget,
                           lam_b * (a1 - a0) * hoeffding_halfwidth(budget, **kw),
                           strategy, budget)


# ------------------------------------------------- lattice count in a square


@dataclass
class Lemma1Result:
    count: int
    bound_lo: Fraction
    bound_hi: Fraction
    ok: bool


def lattice_count_in_square(lattice: CenterLattice, S: Square) -> int:
    """Number of ``q`` in ``Z**2`` with ``M**-1 q`` in the closed square."""
    (x1, x2), (y1, y2) = lattice.x, lattice.y
    poly = [(x1 * a + x2 * b, y1 * a + y2 * b) for a, b in S.polygon()]
    return len(lattice_points_in_convex(poly))


def lemma1_count_check(lattice: CenterLattice, S: Square) -> Lemma1Result:
    """``N < lam**2 Delta + 2 lam sqrt(x1**2+y1**2) + 2 lam sqrt(x2**2+y2**2)``."""
    lam = S.side
    (x1, x2), (y1, y2) = lattice.x, lattice.y
    if min(x1, x2, y1, y2) * lam <= 1:
        raise PreconditionError("need x1, x2, y1, y2 > 1/lam")
    N = lattice_count_in_square(lattice, S)
    bits = 64
    while True:
        r1 = sqrt_bracket(Fraction(x1 * x1 + y1 * y1), bits)
        r2 = sqrt_bracket(Fraction(x2 * x2 + y2 * y2), bits)
        base = lam * lam * lattice.delta
        lo = base + 2 * lam * (r1[0] + r2[0])
        hi = base + 2 * lam * (r1[1] + r2[1])
        if N < lo:
            return Lemma1Result(N, lo, hi, True)
        if N >= hi:
            return Lemma1Result(N, lo, hi, False)
        bits *= 2


# --------------------------------------------------------------- Jarnik


@dataclass
class JarnikResult:
    N: int
    P: Fraction
    L_lo: Fraction
    L_hi: Fraction
    ok: bool


def jarnik_check(polygon) -> JarnikResult:
    """``P - L < N < P + L`` for a convex polygon with perimeter ``L >= 1``."""
    poly = [(as_rat(x), as_rat(y)) for x, y in polygon]
    if not is_convex(poly):
        raise InputError("polygon is not convex")
    N = len(lattice_points_in_convex(poly))
    P = polygon_area(poly)
    edges = [(poly[i][0] - poly[i - 1][0]) ** 2 + (poly[i][1] - poly[i - 1][1]) ** 2
             for i in range(len(poly))]
    bits = 64
    while True:
        br = [sqrt_bracket(e, bits) for e in edges]
        L_lo = sum((b[0] for b in br), Fraction(0))
        L_hi = sum((b[1] for b in br), Fraction(0))
        if L_hi < 1:
            raise PreconditionError("perimeter must be at least 1")
        upper = True if N < P + L_lo else False if N >= P + L_hi else None
        lower = True if P - L_lo < N else False if P - L_hi >= N else None
        if L_lo >= 1 and upper is not None and lower is not None:
            return JarnikResult(N, P, L_lo, L_hi, upper and lower)
        bits *= 2


# -------------------------------------------------------- reciprocal determinants


def lemma2_sum(k: int) -> tuple[Fraction, bool]:
    """Exact ``sum 1/Delta`` over ordered distinct pairs of ``E_k`` against ``9 k**2 ln k``."""
    if k < 4:
        raise DomainError("k must be at least 4")
    E = np.array(PrimitivePairSet.build(k, "E").pairs, dtype=np.int64)
    x1, x2 = E[:, 0], E[:, 1]
    hist = np.zeros(2 * k * k + 1, dtype=np.int64)
    zero = 0
    for i in range(len(E)):
        det = np.abs(x1[i] * x2 - x2[i] * x1)
        det[i] = -1
        zero += int((det == 0).sum())
        hist += np.bincount(det[det > 0], minlength=hist.size)
    if zero:
        raise InputError("distinct primitive pairs should never be parallel")
    L = reduce(math.lcm, (d for d in range(1, hist.size) if hist[d]), 1)
    total = Fraction(sum(int(hist[d]) * (L // d) for d in range(1, hist.size) if hist[d]), L)
    ln_lo, _ = ln_bracket(k, 64)
    return total, total <= 9 * k * k * ln_lo


# ----------------------------------------------------------- measure bands


@dataclass
class Lemma34Report:
    k: int
    eps: Fraction
    lam: Fraction
    lower: Fraction
    upper: Fraction
    estimate: Fraction
    ci: Fraction
    lower_ok: bool
    upper_ok: bool
    lower_positive: bool
    complement: Fraction
    complement_ok: bool
    margins: dict = field(default_factory=dict)


def lemma3_lower(eps, lam) -> Fraction:
    """A certified rational lower bound of ``lam**2 (eps/(3 zeta(2)) - 37 eps**2/zeta(2)**2)``."""
    eps, lam = as_rat(eps), as_rat(lam)
    z = zeta(2, Fraction(1, 10**12))
    return lam**2 * (eps / (3 * z.value_hi) - 37 * eps**2 / z.value_lo**2)


def lemma3_upper(eps, lam) -> Fraction:
    eps, lam = as_rat(eps), as_rat(lam)
    return 5 * eps * lam**2


def lemma3_lemma4_band(k: int, eps, lam, S: Square, estimate: MeasureEstimate) -> Lemma34Report:
    """Compare a measure estimate with both bands and its complement with ``lam**2 (1 - 5 eps)``."""
    eps, lam = as_rat(eps), as_rat(lam)
    if S.side != lam:
        raise InputError("square side must equal lam")
    lo = lemma3_lower(eps, lam)
    hi = lemma3_upper(eps, lam)
    v, ci = estimate.value, estimate.ci_halfwidth
    comp = S.area - v
    comp_bound = lam**2 - 5 * lam**2 * eps
    return Lemma34Report(
        k, eps, lam, lo, hi, v, ci,
        lower_ok=v + ci >= lo,
        upper_ok=v - ci <= hi,
        lower_positive=lo > 0,
        complement=comp,
        complement_ok=comp + ci >= comp_bound,
        margins={"lower": v - lo, "upper": hi - v, "complement": comp - comp_bound},
    )
