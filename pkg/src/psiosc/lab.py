"""Sign-change experiments on random pairs of matrices.

For a pair ``(theta, theta2)`` of the same shape the harness records where
``psi_theta(t) - psi_theta2(t)`` changes sign and, along a ladder of ``k``,
whether the pair falls in ``Psi_k`` (``theta`` hard, ``theta2`` well
approximable) or ``Phi_k`` (the reverse). Hard means ``psi(k)`` above the
threshold ``eps/k**2`` for one form in two variables and ``eps * k**(-1/m)``
for ``m`` simultaneous numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import InputError, ResourceError
from .exactnum import as_rat
from .kernels import form2 as _form2
from .psi import DEFAULT_BUDGET, MatrixTheta, PsiRecord, count_changes, psi_sweep
from .regions2d import form2_word_threshold, form_threshold_ok, lemma3_lower, lemma3_upper
from .regions_md import lemma14_lower, lemma5_upper, member_words, simul_threshold_ok
from .stats import chunk_rng, chunk_sizes, hoeffding_halfwidth, map_chunks

REGIMES = ("1x2", "mx1")
PAIR_STREAM = 3
DENSITY_STREAM = 4


def default_ladder(regime: str) -> tuple[int, ...]:
    top = 9 if regime == "1x2" else 14
    return tuple(1 << e for e in range(4, top + 1))


@dataclass(frozen=True)
class ExperimentConfig:
    regime: str = "1x2"
    m: int = 2
    eps: Fraction = Fraction(1, 2)
    lam: Fraction = Fraction(1)
    delta: Fraction = Fraction(1, 10)
    k_ladder: tuple[int, ...] = ()
    T: int = 5000
    pair_count: int = 100
    denom_bits: int = 128
    seed: int = 0
    samples: int = 10**6
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        set_ = object.__setattr__
        if self.regime not in REGIMES:
            raise InputError(f"regime: expected one of {REGIMES}, got {self.regime!r}")
        for name in ("eps", "lam", "delta"):
            set_(self, name, as_rat(getattr(self, name)))
        if not 0 < self.eps < 1:
            raise InputError("eps: must lie in (0, 1)")
        if not 0 < self.delta < 1:
            raise InputError("delta: must lie in (0, 1)")
        if not 0 < self.lam <= 1:
            raise InputError("lam: must lie in (0, 1]")
        m = 1 if self.regime == "1x2" else self.m
        if self.regime == "mx1" and m < 2:
            raise InputError("m: the simultaneous regime needs m >= 2")
        set_(self, "m", m)
        ladder = tuple(int(k) for k in self.k_ladder) or default_ladder(self.regime)
        if any(b <= a for a, b in zip(ladder, ladder[1:])) or ladder[0] < 2:
            raise InputError("k_ladder: must be strictly increasing integers >= 2")
        set_(self, "k_ladder", ladder)
        for name, low in (("T", 1), ("pair_count", 0), ("denom_bits", 1), ("samples", 1),
                          ("budget", 1), ("seed", 0)):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int) or v < low:
                raise InputError(f"{name}: expected an integer >= {low}, got {v!r}")
        if self.seed >= 1 << 64:
            raise InputError("seed: must fit in 64 bits")

    @property
    def shape(self) -> tuple[int, int]:
        return (1, 2) if self.regime == "1x2" else (self.m, 1)

    def to_dict(self) -> dict:
        return {
            "regime": self.regime, "m": self.m, "eps": self.eps, "lam": self.lam,
            "delta": self.delta, "k_ladder": list(self.k_ladder), "T": self.T,
            "pair_count": self.pair_count, "denom_bits": self.denom_bits, "seed": self.seed,
            "samples": self.samples, "budget": self.budget,
        }


@dataclass(frozen=True)
class PairSample:
    theta: MatrixTheta
    theta2: MatrixTheta
    provenance: tuple[int, int]

    @property
    def degenerate(self) -> bool:
        return self.theta == self.theta2


@dataclass(frozen=True)
class Hit:
    k: int
    psi1: Fraction
    psi2: Fraction
    in_Psi: bool
    in_Phi: bool

    @property
    def implication_ok(self) -> bool:
        """A ``Psi_k`` hit forces ``psi1 > psi2``; a ``Phi_k`` hit forces ``psi1 < psi2``."""
        if self.in_Psi and self.in_Phi:
            return False
        if self.in_Psi:
            return self.psi1 > self.psi2
        if self.in_Phi:
            return self.psi1 < self.psi2
        return True


@dataclass
class HitReport:
    id: int
    hits: list[Hit] = field(default_factory=list)
    sign_changes: int = 0
    change_positions: list[int] = field(default_factory=list)
    degenerate: bool = False
    error: str | None = None

    @property
    def psi_hits(self) -> int:
        return sum(h.in_Psi for h in self.hits)

    @property
    def phi_hits(self) -> int:
        return sum(h.in_Phi for h in self.hits)

    @property
    def violations(self) -> int:
        return sum(not h.implication_ok for h in self.hits)

    def changes_up_to(self, t: int) -> int:
        return sum(p <= t for p in self.change_positions)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    pairs: list[HitReport]
    summary: dict


def _random_dyadic(rng: np.random.Generator, bits: int) -> Fraction:
    nbytes = (bits + 7) // 8
    a = int.from_bytes(rng.bytes(nbytes), "little") >> (8 * nbytes - bits)
    return Fraction(a, 1 << bits)


def _matrix(values, shape) -> MatrixTheta:
    m, n = shape
    return MatrixTheta(tuple(tuple(values[j * n:(j + 1) * n]) for j in range(m)))


def sample_pair(config: ExperimentConfig, index: int) -> PairSample:
    rng = chunk_rng(config.seed, PAIR_STREAM, index)
    m, n = config.shape
    vals = [_random_dyadic(rng, config.denom_bits) for _ in range(2 * m * n)]
    return PairSample(_matrix(vals[:m * n], config.shape), _matrix(vals[m * n:], config.shape),
                      (config.seed, index))


def sample_pairs(config: ExperimentConfig) -> list[PairSample]:
    """Pairs with entries ``a / 2**denom_bits``, ``a`` uniform; pair ``i`` depends only on
    ``(seed, i)``."""
    return [sample_pair(config, i) for i in range(config.pair_count)]


def in_mbar(theta: MatrixTheta, value: Fraction, k: int, eps: Fraction) -> bool:
    """Whether ``psi_theta(k) = value`` is at or below the regime threshold."""
    if theta.regime == "1x2":
        return form_threshold_ok(value, k, eps)
    if theta.regime == "mx1":
        return simul_threshold_ok(value, k, eps, theta.m)
    raise InputError(f"no membership threshold for regime {theta.regime}")


def bc_hits(pair: PairSample, k_ladder, eps, records=None, backend=None) -> HitReport:
    """``Psi_k`` / ``Phi_k`` membership of the pair at every ladder ``k``.

    ``records`` may supply precomputed sweeps ``(r1, r2)`` reaching ``max(k_ladder)``.
    """
    eps = as_rat(eps)
    kmax = max(k_ladder)
    if records is None:
        records = (psi_sweep(pair.theta, kmax, backend=backend),
                   psi_sweep(pair.theta2, kmax, backend=backend))
    r1, r2 = records
    rep = HitReport(pair.provenance[1], degenerate=pair.degenerate)
    for k in k_ladder:
        p1, p2 = r1[k - 1].value, r2[k - 1].value
        m1 = in_mbar(pair.theta, p1, k, eps)
        m2 = in_mbar(pair.theta2, p2, k, eps)
        rep.hits.append(Hit(k, p1, p2, (not m1) and m2, m1 and not m2))
    return rep


def _run_pair(config: ExperimentConfig, index: int, backend=None) -> HitReport:
    pair = sample_pair(config, index)
    horizon = max(config.T, max(config.k_ladder))
    try:
        r1: list[PsiRecord] = psi_sweep(pair.theta, horizon, config.budget, backend)
        r2: list[PsiRecord] = psi_sweep(pair.theta2, horizon, config.budget, backend)
    except ResourceError as exc:
        return HitReport(index, degenerate=pair.degenerate, error=str(exc))
    rep = bc_hits(pair, config.k_ladder, config.eps, (r1, r2))
    diffs = [(a.t, a.value - b.value) for a, b in zip(r1[:config.T], r2[:config.T])]
    rep.change_positions = count_changes(diffs)
    rep.sign_changes = len(rep.change_positions)
    return rep


def _median(values) -> Fraction | None:
    v = sorted(values)
    if not v:
        return None
    h = len(v) // 2
    return Fraction(v[h]) if len(v) % 2 else Fraction(v[h - 1] + v[h], 2)


def summarize(config: ExperimentConfig, pairs: list[HitReport]) -> dict:
    done = [p for p in pairs if p.error is None]
    live = [p for p in done if not p.degenerate]
    early = max(1, config.T // 10)
    at_T = [p.sign_changes for p in live]
    at_early = [p.changes_up_to(early) for p in live]
    return {
        "pairs": len(pairs),
        "completed": len(done),
        "partial": len(done) < len(pairs),
        "degenerate": sum(p.degenerate for p in done),
        "without_change": sum(p.sign_changes == 0 for p in live),
        "T": config.T,
        "T_early": early,
        "min_changes": min(at_T) if at_T else None,
        "median_changes": _median(at_T),
        "max_changes": max(at_T) if at_T else None,
        "median_changes_early": _median(at_early),
        "pairs_with_psi_hit": sum(p.psi_hits > 0 for p in done),
        "pairs_with_phi_hit": sum(p.phi_hits > 0 for p in done),
        "psi_hits": sum(p.psi_hits for p in done),
        "phi_hits": sum(p.phi_hits for p in done),
        "implication_violations": sum(p.violations for p in done),
    }


def run_sign_experiment(config: ExperimentConfig, threads: int = 1,
                        backend=None) -> ExperimentResult:
    """Sign sequences to ``T`` and ladder hits for every sampled pair."""
    pairs = map_chunks(lambda i: _run_pair(config, i, backend), config.pair_count, threads)
    return ExperimentResult(config, pairs, summarize(config, pairs))


# ------------------------------------------------------------------ densities


@dataclass
class DensityReport:
    k: int
    samples: int
    psi_hits: int
    phi_hits: int
    ci: Fraction
    band: Fraction
    vacuous: bool

    @property
    def p_psi(self) -> Fraction:
        return Fraction(self.psi_hits, self.samples)

    @property
    def p_phi(self) -> Fraction:
        return Fraction(self.phi_hits, self.samples)

    @property
    def ok(self) -> bool:
        """Empirical ``P(Psi_k)`` is at least the band, up to the confidence half-width."""
        return self.vacuous or self.p_psi >= self.band - self.ci

    @property
    def strict_ok(self) -> bool:
        return self.vacuous or self.p_psi - self.ci >= self.band

    @property
    def symmetric(self) -> bool:
        return abs(self.p_psi - self.p_phi) <= 2 * self.ci


def density_band(config: ExperimentConfig) -> Fraction:
    """Product of lower bounds for the measures of the hard set and its complement
    (zero when either bound is not positive)."""
    eps = config.eps
    if config.regime == "mx1":
        hard, easy = 1 - lemma5_upper(eps, config.m), lemma14_lower(eps, config.m)
    else:
        hard, easy = 1 - lemma3_upper(eps, 1), lemma3_lower(eps, 1)
    # a non-positive factor makes the band vacuous
    return hard * easy if hard > 0 and easy > 0 else Fraction(0)


def _member_block(config: ExperimentConfig, k: int, W: np.ndarray, backend=None) -> np.ndarray:
    if config.regime == "mx1":
        return member_words(W, k, config.eps, config.m, backend=backend)
    H = form2_word_threshold(k, config.eps)
    return _form2.member_status(W[:, 0], W[:, 1], k, H, 0, backend) == kernels.MEMBER


def density_sweep(config: ExperimentConfig, k: int, samples: int | None = None,
                  threads: int = 1, backend=None) -> DensityReport:
    """Fraction of random pairs in ``Psi_k`` and ``Phi_k``.

    Entries are uniform on the ``2**-64`` grid, where membership is exact.
    """
    n = config.samples if samples is None else samples
    if n < 1:
        raise InputError("samples: must be positive")
    m, nn = config.shape
    width = m * nn
    sizes = chunk_sizes(n)

    def run(c):
        rng = chunk_rng(config.seed, DENSITY_STREAM, c)
        W = rng.integers(0, 1 << 64, size=(sizes[c], 2 * width), dtype=np.uint64)
        a = _member_block(config, k, np.ascontiguousarray(W[:, :width]), backend)
        b = _member_block(config, k, np.ascontiguousarray(W[:, width:]), backend)
        return int((~a & b).sum()), int((a & ~b).sum())

    parts = map_chunks(run, len(sizes), threads)
    band = density_band(config)
    return DensityReport(k, n, sum(p[0] for p in parts), sum(p[1] for p in parts),
                         hoeffding_halfwidth(n),
                         band, band <= 0)
