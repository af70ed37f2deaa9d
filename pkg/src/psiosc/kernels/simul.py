"""Kernels for simultaneous approximation ``max_i ||q * alpha_i||``, ``q = 1..k``."""

import numpy as np

from .._backend import dispatch, njit


@njit(cache=True)
def _member_nb(W, k, H, slack):
    n, m = W.shape
    out = np.zeros(n, np.uint8)
    for s in range(n):
        a0 = W[s, 0]
        u0 = np.uint64(0)
        status = 0
        for q in range(1, k + 1):
            u0 += a0
            e = np.uint64(slack * q)
            d = np.uint64(0) - u0
            if u0 < d:
                d = u0
            if d > H + e:
                continue
            sure = d + e <= H
            maybe = True
            for i in range(1, m):
                u = W[s, i] * np.uint64(q)
                di = np.uint64(0) - u
                if u < di:
                    di = u
                if di > H + e:
                    maybe = False
                    break
                if di + e > H:
                    sure = False
            if maybe:
                if sure:
                    status = 1
                    break
                status = 2
        out[s] = status
    return out


def _member_np(W, k, H, slack):
    W = np.asarray(W, np.uint64)
    H = np.uint64(H)
    n = W.shape[0]
    member = np.zeros(n, bool)
    amb = np.zeros(n, bool)
    acc = np.zeros_like(W)
    with np.errstate(over="ignore"):
        for q in range(1, k + 1):
            acc += W
            d = np.minimum(acc, np.uint64(0) - acc)
            e = np.uint64(slack * q)
            member |= (d + e <= H).all(axis=1)
            amb |= (d <= H + e).all(axis=1)
    return np.where(member, 1, np.where(amb, 2, 0)).astype(np.uint8)


def member_status(W, k, H, slack, backend=None):
    """Status per row of ``W`` (samples x m words) for ``psi(k) <= H`` ulps."""
    fn = dispatch(_member_nb, _member_np, backend)
    return fn(np.ascontiguousarray(W, np.uint64), int(k), np.uint64(H), int(slack))
