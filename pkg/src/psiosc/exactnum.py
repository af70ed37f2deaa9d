"""Exact rational arithmetic and 1D geometry helpers.

Every measure and every irrationality-measure value in this package is a
:class:`fractions.Fraction`. Quantities that involve ``k**(1/m)`` are either
compared after raising both sides to the ``m``-th power or carried as
:class:`RootPoly` elements of ``Q(k**(1/m))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence

from .errors import DomainError, InputError

Rat = Fraction


def as_rat(x) -> Fraction:
    """Convert ints, Fractions and strings ("p/q", "0.01", "1e-3") exactly.

    Floats are rejected: they would smuggle binary rounding into exact code.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError("booleans are not numbers here")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot parse {x!r} as an exact rational") from exc
    raise InputError(f"expected int, Fraction or str, got {type(x).__name__}")


def floor_rat(x: Fraction) -> int:
    return x.numerator // x.denominator


def ceil_rat(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def nearest_int(x: Fraction) -> int:
    """Nearest integer, halves rounded up."""
    return floor_rat(x + Fraction(1, 2))


def nearest_int_distance(x: Fraction) -> Fraction:
    """``||x||``, the distance from ``x`` to the nearest integer."""
    x = as_rat(x)
    frac = x - floor_rat(x)
    return min(frac, 1 - frac)


def fmt_rat(x: Fraction, digits: int = 12) -> str:
    """``p/q`` followed by a decimal rendering; the fraction is authoritative."""
    x = as_rat(x)
    return f"{x.numerator}/{x.denominator} (~{rat_decimal(x, digits)})"


def rat_decimal(x: Fraction, digits: int = 12) -> str:
    """Deterministic ``digits``-significant-digit decimal of a rational."""
    x = as_rat(x)
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    # exponent e with 10**e <= x < 10**(e+1)
    e = len(str(x.numerator)) - len(str(x.denominator))
    if Fraction(10) ** e > x:
        e -= 1
    scaled = x / Fraction(10) ** (e - digits + 1)
    mant = nearest_int(scaled)
    if mant >= 10**digits:
        mant //= 10
        e += 1
    s = str(mant)
    text = f"{s[0]}.{s[1:]}" if digits > 1 else s
    return f"{sign}{text}e{e:+d}"


# ----------------------------------------------------------------- intervals


@dataclass(frozen=True)
class IntervalSet:
    """Sorted, pairwise disjoint closed intervals with exact endpoints."""

    intervals: tuple[tuple[Fraction, Fraction], ...] = ()

    @classmethod
    def from_raw(cls, raw: Iterable[Sequence]) -> "IntervalSet":
        pairs = []
        for item in raw:
            if len(item) != 2:
                raise InputError(f"interval must be a pair, got {item!r}")
            lo, hi = as_rat(item[0]), as_rat(item[1])
            if lo > hi:
                raise InputError(f"malformed interval [{lo}, {hi}]")
            pairs.append((lo, hi))
        pairs.sort()
        merged: list[list[Fraction]] = []
        for lo, hi in pairs:
            # closed intervals: touching endpoints merge
            if merged and lo <= merged[-1][1]:
                if hi > merged[-1][1]:
                    merged[-1][1] = hi
            else:
                merged.append([lo, hi])
        return cls(tuple((a, b) for a, b in merged))

    @property
    def total_length(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), Fraction(0))

    def clip(self, lo, hi) -> "IntervalSet":
        lo, hi = as_rat(lo), as_rat(hi)
        out = []
        for a, b in self.intervals:
            a2, b2 = max(a, lo), min(b, hi)
            if a2 <= b2:
                out.append((a2, b2))
        return IntervalSet(tuple(out))

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)


def interval_union_length(raw) -> tuple[IntervalSet, Fraction]:
    s = IntervalSet.from_raw(raw)
    return s, s.total_length


# ------------------------------------------------------------------ 2x2 dets


@dataclass(frozen=True)
class Mat2:
    x1: int
    x2: int
    y1: int
    y2: int

    @property
    def det(self) -> int:
        return self.x1 * self.y2 - self.x2 * self.y1

    @property
    def abs_det(self) -> int:
        return abs(self.det)


# ------------------------------------------------------------- integer roots


def iroot(n: int, m: int) -> int:
    """``floor(n ** (1/m))`` for integers ``n >= 0``, ``m >= 1``."""
    if n < 0 or m < 1:
        raise DomainError("iroot needs n >= 0 and m >= 1")
    if m == 1 or n < 2:
        return n
    if m == 2:
        return math.isqrt(n)
    x = 1 << ((n.bit_length() + m - 1) // m)
    while True:
        y = ((m - 1) * x + n // x ** (m - 1)) // m
        if y >= x:
            break
        x = y
    while x**m > n:
        x -= 1
    while (x + 1) ** m <= n:
        x += 1
    return x


def root_floor(y: Fraction, m: int) -> int:
    """``floor(y ** (1/m))`` for a rational ``y >= 0``."""
    y = as_rat(y)
    if y < 0:
        raise DomainError("root_floor needs y >= 0")
    # n**m <= y  <=>  n**m <= floor(y) for integer n
    return iroot(floor_rat(y), m)


def is_perfect_power(x: Fraction, g: int) -> bool:
    x = as_rat(x)
    if x < 0:
        return False
    a, b = x.numerator, x.denominator
    return iroot(a, g) ** g == a and iroot(b, g) ** g == b


def le_root(x: Fraction, y: Fraction, m: int) -> bool:
    """``x <= y ** (1/m)`` for ``y >= 0``."""
    return x < 0 or x**m <= y


def lt_root(x: Fraction, y: Fraction, m: int) -> bool:
    return x < 0 or x**m < y


def root_bracket(x: Fraction, n: int, bits: int) -> tuple[Fraction, Fraction]:
    """Rationals ``lo <= x**(1/n) <= hi`` with ``hi - lo <= 2**-bits``."""
    x = as_rat(x)
    if x < 0:
        raise DomainError("root_bracket needs x >= 0")
    scale = 1 << (bits * n)
    s = root_floor(x * scale, n)
    lo = Fraction(s, 1 << bits)
    if Fraction(s) ** n == x * scale:
        return lo, lo
    return lo, Fraction(s + 1, 1 << bits)


def sqrt_bracket(x: Fraction, bits: int = 64) -> tuple[Fraction, Fraction]:
    return root_bracket(x, 2, bits)


def _atanh_bracket(z: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    # atanh z = sum z^(2j+1)/(2j+1); tail after N terms <= z^(2N+1)/((2N+1)(1-z^2))
    if not 0 <= z < 1:
        raise DomainError("atanh series needs 0 <= z < 1")
    eps = Fraction(1, 1 << bits)
    total = Fraction(0)
    term = z
    j = 0
    z2 = z * z
    while True:
        total += term / (2 * j + 1)
        j += 1
        term *= z2
        tail = term / ((2 * j + 1) * (1 - z2))
        if tail <= eps:
            return total, total + tail


def ln_bracket(x, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Certified rational bracket of ``ln x`` for rational ``x >= 1``."""
    x = as_rat(x)
    if x < 1:
        raise DomainError("ln_bracket needs x >= 1")
    j = 0
    y = x
    while y >= 2:
        y /= 2
        j += 1
    l2lo, l2hi = _atanh_bracket(Fraction(1, 3), bits + 8)
    ylo, yhi = _atanh_bracket((y - 1) / (y + 1), bits + 8)
    return 2 * (j * l2lo + ylo), 2 * (j * l2hi + yhi)


# ---------------------------------------------------------------------- zeta


@dataclass(frozen=True)
class ZetaConst:
    s: int
    value_lo: Fraction
    value_hi: Fraction

    @property
    def width(self) -> Fraction:
        return self.value_hi - self.value_lo


def _lcm_range(n: int) -> int:
    return reduce(math.lcm, range(1, n + 1), 1)


def power_sum(s: int, P: int) -> Fraction:
    """Exact ``sum_{p=1..P} p**-s``."""
    L = _lcm_range(P) ** s
    return Fraction(sum(L // p**s for p in range(1, P + 1)), L)


@lru_cache(maxsize=64)
def zeta(s: int, tol) -> ZetaConst:
    """Certified bracket of ``zeta(s)`` of width at most ``tol``.

    With ``S_P`` the partial sum, ``zeta(s)`` lies in
    ``[S_P + (P+1)**(1-s)/(s-1), S_P + P**(1-s)/(s-1)]``. ``P`` is the smallest
    value making that width at most ``tol/2``; ``S_P`` itself is bracketed by
    fixed-point sums with total rounding below ``tol/2``.
    """
    if not isinstance(s, int) or s < 2:
        raise DomainError(f"zeta needs an integer s >= 2, got {s!r}")
    tol = as_rat(tol)
    if tol <= 0:
        raise DomainError("zeta tolerance must be positive")
    half = tol / 2

    def width(P):
        return (Fraction(1, P ** (s - 1)) - Fraction(1, (P + 1) ** (s - 1))) / (s - 1)

    hi_P = 1
    while width(hi_P) > half:
        hi_P *= 2
    lo_P = max(1, hi_P // 2)
    while lo_P < hi_P:
        mid = (lo_P + hi_P) // 2
        if width(mid) <= half:
            hi_P = mid
        else:
            lo_P = mid + 1
    P = hi_P
    bits = (ceil_rat(P / half)).bit_length()
    one = 1 << bits
    floor_sum = sum(one // p**s for p in range(1, P + 1))
    S_lo = Fraction(floor_sum, one)
    S_hi = Fraction(floor_sum + P, one)
    lo = S_lo + Fraction(1, (P + 1) ** (s - 1)) / (s - 1)
    hi = S_hi + Fraction(1, P ** (s - 1)) / (s - 1)
    return ZetaConst(s, lo, hi)


# ------------------------------------------------------- radical extensions


class RootPoly:
    """Element ``sum c_i * rho**i`` of ``Q(rho)`` with ``rho = base**(1/n) > 0``.

    ``rho`` is normalised so that ``x**n - base`` is irreducible, which makes
    the coefficient vector canonical: the element is zero iff every
    coefficient is zero. Signs are decided by refining a rational bracket of
    ``rho`` until the interval value excludes zero.
    """

    __slots__ = ("coeffs", "base", "n")

    def __init__(self, coeffs, base: Fraction, n: int):
        self.base = base
        self.n = n
        c = [Fraction(0)] * n
        for i, v in enumerate(coeffs):
            c[i % n] += as_rat(v) * base ** (i // n)
        self.coeffs = tuple(c)

    @classmethod
    def radical(cls, x, m: int) -> "RootPoly":
        """The positive real ``x ** (1/m)`` for rational ``x > 0``."""
        x = as_rat(x)
        if x <= 0:
            raise DomainError("radical needs x > 0")
        g = max(d for d in range(1, m + 1) if m % d == 0 and is_perfect_power(x, d))
        c = Fraction(iroot(x.numerator, g), iroot(x.denominator, g))
        n = m // g
        if n == 1:
            return cls([c], Fraction(1), 1)
        return cls([0, 1], c, n)

    @classmethod
    def const(cls, v, like: "RootPoly") -> "RootPoly":
        return cls([v], like.base, like.n)

    def _coerce(self, other):
        if isinstance(other, RootPoly):
            if (other.base, other.n) == (self.base, self.n):
                return other
            if other.n == 1:
                return RootPoly([other.coeffs[0]], self.base, self.n)
            if self.n == 1:
                return None
            raise InputError("cannot mix different radical extensions")
        return RootPoly([as_rat(other)], self.base, self.n)

    def __add__(self, other):
        if isinstance(other, RootPoly) and self.n == 1 and other.n > 1:
            return other + self
        o = self._coerce(other)
        return RootPoly([a + b for a, b in zip(self.coeffs, o.coeffs)], self.base, self.n)

    __radd__ = __add__

    def __neg__(self):
        return RootPoly([-a for a in self.coeffs], self.base, self.n)

    def __sub__(self, other):
        return self + (-other if isinstance(other, RootPoly) else -as_rat(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, RootPoly) and self.n == 1 and other.n > 1:
            return other * self
        o = self._coerce(other)
        prod = [Fraction(0)] * (2 * self.n - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(o.coeffs):
                    if b:
                        prod[i + j] += a * b
        return RootPoly(prod, self.base, self.n)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = as_rat(other)
        return RootPoly([a / other for a in self.coeffs], self.base, self.n)

    def __pow__(self, e: int):
        out = RootPoly([1], self.base, self.n)
        for _ in range(e):
            out = out * self
        return out

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_rat(self) -> Fraction:
        if not self.is_rational:
            raise InputError("value is irrational")
        return self.coeffs[0]

    def bracket(self, bits: int = 64) -> tuple[Fraction, Fraction]:
        if self.n == 1:
            return self.coeffs[0], self.coeffs[0]
        rlo, rhi = root_bracket(self.base, self.n, bits)
        lo = hi = Fraction(0)
        plo = phi = Fraction(1)
        for c in self.coeffs:
            if c >= 0:
                lo += c * plo
                hi += c * phi
            else:
                lo += c * phi
                hi += c * plo
            plo *= rlo
            phi *= rhi
        return lo, hi

    def sign(self) -> int:
        if all(c == 0 for c in self.coeffs):
            return 0
        bits = 64
        while True:
            lo, hi = self.bracket(bits)
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2

    def __eq__(self, other):
        try:
            return (self - other).sign() == 0
        except InputError:
            return NotImplemented

    def __hash__(self):
        return hash((self.coeffs, self.base, self.n))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        lo, hi = self.bracket(64)
        return float((lo + hi) / 2)

    def __repr__(self):
        terms = " + ".join(f"({c})*r^{i}" for i, c in enumerate(self.coeffs) if c)
        return f"RootPoly({terms or '0'}; r=({self.base})^(1/{self.n}))"
