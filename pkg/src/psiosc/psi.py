"""The irrationality measure function psi_Theta(t) and sign sequences.

``psi_Theta(t) = min over x in Z^n, 1 <= max|x_i| <= t, of max_j ||theta_j . x||``.

Every routine returns exact :class:`~fractions.Fraction` values. Witnesses are
canonical (first nonzero coordinate positive) and ties are broken by the
smallest shell ``max|x_i|`` and then lexicographically, so the earliest
witness of the running minimum is kept.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, InputError, ResourceError
from .exactnum import as_rat
from .kernels import form2 as _form2

DEFAULT_BUDGET = 10**9
WORD = 1 << 64


@dataclass(frozen=True)
class MatrixTheta:
    """``m`` rows by ``n`` columns; ``entries[j][i]`` multiplies ``x_i`` in row ``j``."""

    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(as_rat(v) for v in row) for row in self.entries)
        if not rows or not rows[0] or any(len(r) != len(rows[0]) for r in rows):
            raise InputError("matrix entries must form a non-empty rectangle")
        for r in rows:
            for v in r:
                if not 0 <= v <= 1:
                    raise InputError(f"matrix entry {v} outside [0, 1]")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def form(cls, alpha, beta) -> "MatrixTheta":
        return cls(((alpha, beta),))

    @classmethod
    def column(cls, alphas: Sequence) -> "MatrixTheta":
        return cls(tuple((a,) for a in alphas))

    @classmethod
    def scalar(cls, alpha) -> "MatrixTheta":
        return cls(((alpha,),))

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.entries[0])

    @property
    def regime(self) -> str:
        if self.m == 1 and self.n == 1:
            return "1x1"
        if self.m == 1 and self.n == 2:
            return "1x2"
        if self.m >= 2 and self.n == 1:
            return "mx1"
        return "general"

    def negated(self) -> "MatrixTheta":
        """Entries ``1 - theta``; has the same psi function."""
        return MatrixTheta(tuple(tuple(1 - v for v in row) for row in self.entries))


@dataclass(frozen=True)
class PsiRecord:
    t: int
    value: Fraction
    witness_x: tuple[int, ...]
    witness_p: tuple[int, ...]


@dataclass
class SignSeq:
    T: int
    values: list[tuple[int, Fraction]]
    change_positions: list[int] = field(default_factory=list)

    @property
    def changes(self) -> int:
        return len(self.change_positions)


def form_value(theta: MatrixTheta, x: Sequence[int]) -> Fraction:
    """``max_j ||theta_j . x||`` evaluated exactly."""
    best = Fraction(0)
    for row in theta.entries:
        y = sum((c * xi for c, xi in zip(row, x)), Fraction(0))
        frac = y - (y.numerator // y.denominator)
        best = max(best, min(frac, 1 - frac))
    return best


def nearest_p(theta: MatrixTheta, x: Sequence[int]) -> tuple[int, ...]:
    out = []
    for row in theta.entries:
        y = sum((c * xi for c, xi in zip(row, x)), Fraction(0))
        y2 = 2 * y + 1
        out.append(y2.numerator // (2 * y2.denominator))
    return tuple(out)


def _record(theta, t, value, x):
    return PsiRecord(t, value, tuple(x), nearest_p(theta, x))


def _common(theta: MatrixTheta):
    D = 1
    for row in theta.entries:
        for v in row:
            D = math.lcm(D, v.denominator)
    N = [[int(v * D) for v in row] for row in theta.entries]
    return D, N


def psi_naive(theta: MatrixTheta, t: int, budget: int = DEFAULT_BUDGET) -> PsiRecord:
    """Exact minimum by enumerating every canonical ``x`` with ``max|x_i| <= t``."""
    if not isinstance(t, int) or t < 1:
        raise DomainError(f"t must be a positive integer, got {t!r}")
    n = theta.n
    total = (2 * t + 1) ** n
    if total > budget:
        raise ResourceError(f"naive enumeration needs {total} points, budget {budget}")
    D, N = _common(theta)
    best = None
    rng = range(-t, t + 1)
    for x in itertools.product(rng, repeat=n):
        first = next((v for v in x if v != 0), 0)
        if first <= 0:
            continue
        worst = 0
        for row in N:
            r = sum(c * xi for c, xi in zip(row, x)) % D
            worst = max(worst, min(r, D - r))
        key = (worst, max(abs(v) for v in x), x)
        if best is None or key < best:
            best = key
    return _record(theta, t, Fraction(best[0], D), best[2])


def cf_convergents(alpha: Fraction) -> list[tuple[int, int]]:
    """Convergents ``(p, q)`` of a rational ``alpha``."""
    alpha = as_rat(alpha)
    a, b = alpha.numerator, alpha.denominator
    p0, q0, p1, q1 = 0, 1, 1, 0
    out = []
    while b:
        c = a // b
        p0, q0, p1, q1 = p1, q1, c * p1 + p0, c * q1 + q0
        out.append((p1, q1))
        a, b = b, a - c * b
    return out


def psi_cf_1d(alpha, t: int) -> PsiRecord:
    """``min_{1<=q<=t} ||q alpha||`` from the largest convergent denominator ``<= t``."""
    alpha = as_rat(alpha)
    if not isinstance(t, int) or t < 1:
        raise DomainError(f"t must be a positive integer, got {t!r}")
    if not 0 <= alpha <= 1:
        raise DomainError("alpha must lie in [0, 1]")
    best = None
    for p, q in cf_convergents(alpha):
        if q > t:
            break
        if q >= 1:
            best = (p, q)
    p, q = best
    return PsiRecord(t, abs(q * alpha - p), (q,), (p,))


def _psi_cf_sweep(theta: MatrixTheta, T: int) -> list[PsiRecord]:
    alpha = theta.entries[0][0]
    convs = [(p, q) for p, q in cf_convergents(alpha) if q >= 1]
    out = []
    i = 0
    for t in range(1, T + 1):
        while i + 1 < len(convs) and convs[i + 1][1] <= t:
            i += 1
        p, q = convs[i]
        out.append(PsiRecord(t, abs(q * alpha - p), (q,), (p,)))
    return out


def to_word(x: Fraction) -> tuple[int, bool]:
    """``(floor(x * 2**64) mod 2**64, exact)``."""
    v = x.numerator * WORD
    w = v // x.denominator
    return w % WORD, w * x.denominator == v


def psi_form2_sweep(alpha, beta, T: int, backend=None) -> list[PsiRecord]:
    """Records for ``t = 1..T`` of ``min ||x1 alpha + x2 beta||``.

    A fixed-point screen finds the shells that can lower the running minimum;
    only their near-minimal points are evaluated exactly.
    """
    alpha, beta = as_rat(alpha), as_rat(beta)
    if not isinstance(T, int) or T < 1:
        raise DomainError(f"T must be a positive integer, got {T!r}")
    theta = MatrixTheta.form(alpha, beta)
    D = math.lcm(alpha.denominator, beta.denominator)
    Na, Nb = int(alpha * D), int(beta * D)
    a, _ = to_word(alpha)
    b, _ = to_word(beta)
    mins = _form2.shell_min(a, b, T, backend)
    run = None  # (distance numerator over D, x)
    rec = None
    out = []
    for t in range(1, T + 1):
        err = 2 * t + 1
        m_t = int(mins[t])
        if run is None:
            check = True
        elif run[0] == 0:
            check = False
        else:
            ceil_run = -((-run[0] * WORD) // D)
            check = m_t < ceil_run + err
        if check:
            xs1, xs2 = _form2.shell_candidates(a, b, t, min(m_t + 2 * err, WORD - 1), backend)
            shell_best = None
            for x1, x2 in zip(xs1.tolist(), xs2.tolist()):
                r = (x1 * Na + x2 * Nb) % D
                key = (min(r, D - r), x1, x2)
                if shell_best is None or key < shell_best:
                    shell_best = key
            if run is None or shell_best[0] < run[0]:
                run = (shell_best[0], (shell_best[1], shell_best[2]))
                rec = _record(theta, t, Fraction(run[0], D), run[1])
        out.append(rec if rec.t == t else PsiRecord(t, rec.value, rec.witness_x, rec.witness_p))
    return out


def psi_simul_sweep(alphas: Sequence, T: int) -> list[PsiRecord]:
    """Records for ``t = 1..T`` of ``min_{q<=t} max_i ||q alpha_i||``."""
    alphas = [as_rat(a) for a in alphas]
    if len(alphas) < 2:
        raise DomainError("simultaneous regime needs at least two numbers")
    if not isinstance(T, int) or T < 1:
        raise DomainError(f"T must be a positive integer, got {T!r}")
    theta = MatrixTheta.column(alphas)
    D, N = _common(theta)
    N = [row[0] for row in N]
    acc = [0] * len(N)
    run = None
    rec = None
    out = []
    for q in range(1, T + 1):
        worst = 0
        for i, c in enumerate(N):
            r = (acc[i] + c) % D
            acc[i] = r
            d = min(r, D - r)
            if d > worst:
                worst = d
        if run is None or worst < run:
            run = worst
            rec = _record(theta, q, Fraction(worst, D), (q,))
        out.append(rec if rec.t == q else PsiRecord(q, rec.value, rec.witness_x, rec.witness_p))
    return out


def psi_sweep(theta: MatrixTheta, T: int, budget: int = DEFAULT_BUDGET, backend=None):
    """Records for ``t = 1..T`` using the fastest exact method for the regime."""
    reg = theta.regime
    if reg == "1x1":
        return _psi_cf_sweep(theta, T)
    if reg == "1x2":
        return psi_form2_sweep(theta.entries[0][0], theta.entries[0][1], T, backend)
    if reg == "mx1":
        return psi_simul_sweep([row[0] for row in theta.entries], T)
    return [psi_naive(theta, t, budget) for t in range(1, T + 1)]


def count_changes(diffs) -> list[int]:
    """Positions where the sign flips strictly; zero values are skipped."""
    changes = []
    last = 0
    for t, d in diffs:
        s = (d > 0) - (d < 0)
        if s == 0:
            continue
        if last and s != last:
            changes.append(t)
        last = s
    return changes


def sign_sequence(theta: MatrixTheta, theta2: MatrixTheta, T: int,
                  budget: int = DEFAULT_BUDGET, backend=None) -> SignSeq:
    if (theta.m, theta.n) != (theta2.m, theta2.n):
        raise InputError("both matrices must have the same shape")
    r1 = psi_sweep(theta, T, budget, backend)
    r2 = psi_sweep(theta2, T, budget, backend)
    values = [(a.t, a.value - b.value) for a, b in zip(r1, r2)]
    return SignSeq(T, values, count_changes(values))
