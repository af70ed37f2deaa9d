"""Confidence bounds and reproducible, thread-count independent random streams.

Every stream is cut into fixed-size chunks; chunk ``c`` of stream ``s`` is
drawn from ``SeedSequence([seed, s, c])``. Workers only decide which chunks
they compute, never what a chunk contains, so results do not depend on the
number of workers.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
from scipy import stats as _sps

from .errors import InputError
from .exactnum import as_rat, ln_bracket, sqrt_bracket

CHUNK = 1 << 16
DEFAULT_DELTA = Fraction(1, 10**6)


def hoeffding_halfwidth(n: int, delta=DEFAULT_DELTA, spread=1) -> Fraction:
    """Rational upper bound on ``spread * sqrt(ln(2/delta) / (2n))``.

    With probability at least ``1 - delta`` the mean of ``n`` independent
    samples in an interval of length ``spread`` is within this distance of
    its expectation.
    """
    if n < 1:
        raise InputError("need at least one sample")
    delta = as_rat(delta)
    _, ln_hi = ln_bracket(2 / delta, 64)
    _, root_hi = sqrt_bracket(ln_hi / (2 * n), 64)
    return as_rat(spread) * root_hi


def four_sigma_band(n: int, spread=1) -> Fraction:
    """``4 * (spread/2) / sqrt(n)``: four standard deviations of a mean of
    ``n`` samples of a variable confined to an interval of length ``spread``
    (whose variance is at most ``spread**2 / 4``), rounded up."""
    _, root_hi = sqrt_bracket(Fraction(1, n), 64)
    return 2 * as_rat(spread) * root_hi


def clopper_pearson(hits: int, n: int, alpha: float = 1e-6) -> tuple[float, float]:
    """Two-sided exact binomial interval (informational, floating point)."""
    lo = 0.0 if hits == 0 else float(_sps.beta.ppf(alpha / 2, hits, n - hits + 1))
    hi = 1.0 if hits == n else float(_sps.beta.ppf(1 - alpha / 2, hits + 1, n - hits))
    return lo, hi


def chunk_rng(seed: int, stream: int, chunk: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream, chunk])))


def chunk_sizes(n: int, chunk: int = CHUNK) -> list[int]:
    full, rest = divmod(n, chunk)
    return [chunk] * full + ([rest] if rest else [])


def map_chunks(fn, n_chunks: int, threads: int = 1) -> list:
    """``[fn(0), ..., fn(n_chunks - 1)]``, optionally on a thread pool."""
    if threads <= 1 or n_chunks <= 1:
        return [fn(c) for c in range(n_chunks)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(n_chunks)))


def dyadic_words(rng: np.random.Generator, size, bits: int):
    """Uniform ``a / 2**bits`` with ``0 <= a < 2**bits`` as ``(word, low)``.

    ``word`` holds the top 64 fractional bits; ``low`` holds the remaining
    ``bits - 64`` bits (``None`` when ``bits <= 64``).
    """
    if not 1 <= bits <= 128:
        raise InputError("denominator bits must be between 1 and 128")
    hi = rng.integers(0, 1 << 64, size=size, dtype=np.uint64, endpoint=False)
    if bits <= 64:
        return hi >> np.uint64(64 - bits) << np.uint64(64 - bits), None
    lo = rng.integers(0, 1 << 64, size=size, dtype=np.uint64, endpoint=False)
    return hi, lo >> np.uint64(128 - bits)
