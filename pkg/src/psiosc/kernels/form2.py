"""Kernels for the linear form ``x1*alpha + x2*beta`` (one row, two columns).

Canonical shell ``t`` (first nonzero coordinate positive, ``max|x_i| = t``):
``(0, t)``, ``(x1, -t)`` and ``(x1, t)`` for ``1 <= x1 < t``, and ``(t, x2)``
for ``-t <= x2 <= t``; ``4t`` points in total.
"""

import numpy as np

from .._backend import dispatch, njit

_U0 = np.uint64(0)


@njit(cache=True)
def _dist(u):
    v = np.uint64(0) - u
    return v if v < u else u


@njit(cache=True)
def _shell_min_nb(a, b, T):
    out = np.zeros(T + 1, np.uint64)
    for t in range(1, T + 1):
        ut = np.uint64(t)
        tb = ut * b
        best = _dist(tb)
        base = np.uint64(0)
        for x1 in range(1, t):
            base += a
            d = _dist(base + tb)
            if d < best:
                best = d
            d = _dist(base - tb)
            if d < best:
                best = d
        u = ut * a - tb
        for _ in range(2 * t + 1):
            d = _dist(u)
            if d < best:
                best = d
            u += b
        out[t] = best
    return out


def _shell_points(t):
    x1 = np.concatenate(
        ([0], np.repeat(np.arange(1, t, dtype=np.int64), 2), np.full(2 * t + 1, t))
    )
    x2 = np.concatenate(
        ([t], np.tile(np.array([-t, t], dtype=np.int64), t - 1), np.arange(-t, t + 1))
    )
    return x1.astype(np.int64), x2.astype(np.int64)


def _words(x1, x2, a, b):
    with np.errstate(over="ignore"):
        u = x1.astype(np.uint64) * np.uint64(a) + x2.astype(np.uint64) * np.uint64(b)
        return np.minimum(u, np.uint64(0) - u)


def _shell_min_np(a, b, T):
    out = np.zeros(T + 1, np.uint64)
    for t in range(1, T + 1):
        x1, x2 = _shell_points(t)
        out[t] = _words(x1, x2, a, b).min()
    return out


@njit(cache=True)
def _shell_candidates_nb(a, b, t, limit):
    xs1 = np.empty(4 * t, np.int64)
    xs2 = np.empty(4 * t, np.int64)
    n = 0
    ut = np.uint64(t)
    tb = ut * b
    if _dist(tb) <= limit:
        xs1[n] = 0
        xs2[n] = t
        n += 1
    base = np.uint64(0)
    for x1 in range(1, t):
        base += a
        if _dist(base - tb) <= limit:
            xs1[n] = x1
            xs2[n] = -t
            n += 1
        if _dist(base + tb) <= limit:
            xs1[n] = x1
            xs2[n] = t
            n += 1
    u = ut * a - tb
    for x2 in range(-t, t + 1):
        if _dist(u) <= limit:
            xs1[n] = t
            xs2[n] = x2
            n += 1
        u += b
    return xs1[:n], xs2[:n]


def _shell_candidates_np(a, b, t, limit):
    x1, x2 = _shell_points(t)
    keep = _words(x1, x2, a, b) <= np.uint64(limit)
    return x1[keep], x2[keep]


@njit(cache=True)
def _member_nb(A, B, k, H, slack):
    n = A.shape[0]
    out = np.zeros(n, np.uint8)
    for s in range(n):
        a = A[s]
        b = B[s]
        status = 0
        # x1 = 0 row
        u = np.uint64(0)
        for x2 in range(1, k + 1):
            u += b
            d = _dist(u)
            e = np.uint64(slack * x2)
            if d + e <= H:
                status = 1
                break
            if d <= H + e:
                status = 2
        if status != 1:
            base = np.uint64(0)
            kb = np.uint64(k) * b
            for x1 in range(1, k + 1):
                base += a
                u = base - kb
                for x2 in range(-k, k + 1):
                    d = _dist(u)
                    e = np.uint64(slack * (x1 + abs(x2)))
                    if d + e <= H:
                        status = 1
                        break
                    if d <= H + e:
                        status = 2
                    u += b
                if status == 1:
                    break
        out[s] = status
    return out


def _member_np(A, B, k, H, slack):
    A = np.asarray(A, np.uint64)
    B = np.asarray(B, np.uint64)
    H = np.uint64(H)
    member = np.zeros(A.shape[0], bool)
    amb = np.zeros(A.shape[0], bool)
    with np.errstate(over="ignore"):
        for x1 in range(0, k + 1):
            lo = 1 if x1 == 0 else -k
            for x2 in range(lo, k + 1):
                u = np.uint64(x1) * A + np.uint64(x2 % (1 << 64)) * B
                d = np.minimum(u, np.uint64(0) - u)
                e = np.uint64(slack * (x1 + abs(x2)))
                member |= d + e <= H
                amb |= d <= H + e
    out = np.where(member, 1, np.where(amb, 2, 0)).astype(np.uint8)
    return out


def shell_min(a, b, T, backend=None):
    """Minimum word distance over each canonical shell ``1..T`` (index ``t``)."""
    fn = dispatch(_shell_min_nb, _shell_min_np, backend)
    return fn(np.uint64(a), np.uint64(b), int(T))


def shell_candidates(a, b, t, limit, backend=None):
    """Canonical points of shell ``t`` whose word distance is ``<= limit``."""
    fn = dispatch(_shell_candidates_nb, _shell_candidates_np, backend)
    return fn(np.uint64(a), np.uint64(b), int(t), np.uint64(limit))


def member_status(A, B, k, H, slack, backend=None):
    """Status per sample of ``min over 1<=max|x|<=k of ||x1 a + x2 b|| <= H``."""
    fn = dispatch(_member_nb, _member_np, backend)
    return fn(np.ascontiguousarray(A, np.uint64), np.ascontiguousarray(B, np.uint64),
              int(k), np.uint64(H), int(slack))
