"""Union of the strips ``|x1 a + x2 b - q| <= w`` along one fiber ``b = const``.

All endpoints are ``num / x1`` over a fiber-wide integer scale ``G``:
an interval ``(x1, x2, q)`` spans ``[(qG - wG - x2 bG) / x1, (qG + wG - x2 bG) / x1]``
in units of ``1/G``; window endpoints carry denominator 1. Comparisons are
exact int64 cross products, so callers must keep ``(3k + 4) * G * k < 2**62``.

Besides the union length, the kernel reports which endpoint bounds every
component. Between two consecutive breakpoints in ``b`` that assignment is
fixed, so the length is the linear function
``sum_x1 (SQ + SW*w - SX*b) / x1 + WH*wh + WL*wl``.
"""

import numpy as np

from .._backend import dispatch, njit


@njit(cache=True, nogil=True)
def _cdiv(a, b):
    return -((-a) // b)


@njit(cache=True, nogil=True)
def _fiber_nb(k, G, wG, bG, Nwl, Nwh):
    n = 0
    for x1 in range(1, k + 1):
        for x2 in range(-k, k + 1):
            qlo = _cdiv(x1 * Nwl + x2 * bG - wG, G)
            qhi = (x1 * Nwh + x2 * bG + wG) // G
            if qhi >= qlo:
                n += qhi - qlo + 1
    # counting sort on a float key into n buckets, then an exact insertion
    # pass; records are scattered straight into sorted position
    kmin = float(Nwl - wG)
    span = float(Nwh + wG) - kmin
    scale = n / span if span > 0 else 0.0
    start = np.zeros(n + 1, np.int64)
    for x1 in range(1, k + 1):
        for x2 in range(-k, k + 1):
            qlo = _cdiv(x1 * Nwl + x2 * bG - wG, G)
            qhi = (x1 * Nwh + x2 * bG + wG) // G
            f = (qlo * G - x2 * bG - wG) / x1
            df = G / x1
            for q in range(qlo, qhi + 1):
                bk = int((f - kmin) * scale)
                bk = min(max(bk, 0), n - 1)
                start[bk + 1] += 1
                f += df
    for bk in range(n):
        start[bk + 1] += start[bk]
    lo = np.empty(n, np.int64)
    den = np.empty(n, np.int32)
    ix2 = np.empty(n, np.int32)
    iq = np.empty(n, np.int64)
    for x1 in range(1, k + 1):
        for x2 in range(-k, k + 1):
            qlo = _cdiv(x1 * Nwl + x2 * bG - wG, G)
            qhi = (x1 * Nwh + x2 * bG + wG) // G
            f = (qlo * G - x2 * bG - wG) / x1
            df = G / x1
            for q in range(qlo, qhi + 1):
                c = q * G - x2 * bG - wG
                bk = int((f - kmin) * scale)
                bk = min(max(bk, 0), n - 1)
                f += df
                i = start[bk]
                start[bk] = i + 1
                lo[i] = c
                den[i] = x1
                ix2[i] = x2
                iq[i] = q
    for i in range(1, n):
        l, d, a, b = lo[i], den[i], ix2[i], iq[i]
        j = i
        while j > 0 and l * np.int64(den[j - 1]) < lo[j - 1] * np.int64(d):
            lo[j] = lo[j - 1]
            den[j] = den[j - 1]
            ix2[j] = ix2[j - 1]
            iq[j] = iq[j - 1]
            j -= 1
        lo[j], den[j], ix2[j], iq[j] = l, d, a, b

    acc_int = np.int64(0)
    res = np.zeros(k + 1, np.int64)
    SQ = np.zeros(k + 1, np.int64)
    SW = np.zeros(k + 1, np.int64)
    SX = np.zeros(k + 1, np.int64)
    WL = np.int64(0)
    WH = np.int64(0)
    have = False
    cs = np.int64(0)
    csid = -1
    ce = np.int64(0)
    ced = np.int64(1)
    ceid = -2
    for t in range(n + 1):
        if t < n:
            sl = lo[t]
            sd = np.int64(den[t])
            sid = t
            el = sl + 2 * wG
            ed = sd
            eid = t
            if sl < Nwl * sd:
                sl = Nwl
                sd = np.int64(1)
                sid = -1
            if el > Nwh * ed:
                el = Nwh
                ed = np.int64(1)
                eid = -2
            if el * sd < sl * ed:
                continue
            if have and sl * ced <= ce * sd:
                if el * ced > ce * ed:
                    ce = el
                    ced = ed
                    ceid = eid
                continue
        if have:
            # close the current component: + end - start
            if ceid == -2:
                WH += 1
                acc_int += ce
            else:
                x1 = den[ceid]
                SQ[x1] += iq[ceid]
                SW[x1] += 1
                SX[x1] += ix2[ceid]
                acc_int += ce // x1
                res[x1] += ce % x1
            if csid == -1:
                WL -= 1
                acc_int -= cs
            else:
                x1 = den[csid]
                SQ[x1] -= iq[csid]
                SW[x1] += 1
                SX[x1] -= ix2[csid]
                acc_int -= cs // x1
                res[x1] -= cs % x1
        if t < n:
            have = True
            cs = sl
            csid = sid
            ce = el
            ced = ed
            ceid = eid
    return acc_int, res, SQ, SW, SX, WL, WH


def _fiber_py(k, G, wG, bG, Nwl, Nwh):
    """Same computation with numpy generation and an exact Python sweep."""
    x1s, x2s, qs = [], [], []
    for x1 in range(1, k + 1):
        x2 = np.arange(-k, k + 1, dtype=object)
        qlo = -((-(x1 * Nwl + x2 * bG - wG)) // G)
        qhi = (x1 * Nwh + x2 * bG + wG) // G
        for xx, a, b in zip(x2.tolist(), qlo.tolist(), qhi.tolist()):
            if b >= a:
                cnt = b - a + 1
                x1s.extend([x1] * cnt)
                x2s.extend([xx] * cnt)
                qs.extend(range(a, b + 1))
    n = len(qs)
    x2a = np.array(x2s, dtype=object)
    qa = np.array(qs, dtype=object)
    c = qa * G - x2a * bG
    lo = (c - wG).tolist() if n else []
    hi = (c + wG).tolist() if n else []
    keys = np.array([l / d for l, d in zip(lo, x1s)], dtype=np.float64)
    order = np.argsort(keys, kind="stable").tolist()
    for i in range(1, n):
        j = i
        while j > 0 and lo[order[j]] * x1s[order[j - 1]] < lo[order[j - 1]] * x1s[order[j]]:
            order[j], order[j - 1] = order[j - 1], order[j]
            j -= 1
    acc_int = 0
    res = [0] * (k + 1)
    SQ = [0] * (k + 1)
    SW = [0] * (k + 1)
    SX = [0] * (k + 1)
    WL = WH = 0
    comps = []
    cur = None
    for idx in order:
        d = x1s[idx]
        s = (lo[idx], d, idx)
        e = (hi[idx], d, idx)
        if s[0] < Nwl * d:
            s = (Nwl, 1, -1)
        if e[0] > Nwh * d:
            e = (Nwh, 1, -2)
        if e[0] * s[1] < s[0] * e[1]:
            continue
        if cur is not None and s[0] * cur[1][1] <= cur[1][0] * s[1]:
            if e[0] * cur[1][1] > cur[1][0] * e[1]:
                cur[1] = e
            continue
        if cur is not None:
            comps.append(cur)
        cur = [s, e]
    if cur is not None:
        comps.append(cur)
    for s, e in comps:
        if e[2] == -2:
            WH += 1
            acc_int += e[0]
        else:
            x1 = e[1]
            SQ[x1] += qs[e[2]]
            SW[x1] += 1
            SX[x1] += x2s[e[2]]
            acc_int += e[0] // x1
            res[x1] += e[0] % x1
        if s[2] == -1:
            WL -= 1
            acc_int -= s[0]
        else:
            x1 = s[1]
            SQ[x1] -= qs[s[2]]
            SW[x1] += 1
            SX[x1] -= x2s[s[2]]
            acc_int -= s[0] // x1
            res[x1] -= s[0] % x1
    return acc_int, res, SQ, SW, SX, WL, WH


def fits_int64(k, G, wG, Nwh):
    return (3 * k + 4) * (G + abs(wG) + abs(Nwh)) * k < (1 << 62)


def fiber_union(k, G, wG, bG, Nwl, Nwh, backend=None):
    """Raw union data ``(acc_int, res, SQ, SW, SX, WL, WH)`` for one fiber.

    The union length is ``(acc_int + sum_d res[d] / d) / G``.
    """
    args = (int(k), int(G), int(wG), int(bG), int(Nwl), int(Nwh))
    if not fits_int64(k, G, wG, max(abs(Nwl), abs(Nwh))):
        return _fiber_py(*args)
    fn = dispatch(_fiber_nb, _fiber_py, backend)
    out = fn(*args)
    return tuple(int(v) if np.ndim(v) == 0 else [int(x) for x in v] for v in out)


@njit(cache=True, nogil=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True, nogil=True)
def _slabs_nb(k, Q, wQ, NwlQ, NwhQ, BN, BD):
    S = BN.shape[0]
    SQo = np.zeros((S, k + 1), np.int64)
    SWo = np.zeros((S, k + 1), np.int64)
    SXo = np.zeros((S, k + 1), np.int64)
    Wo = np.zeros((S, 2), np.int64)
    for s in range(S):
        bd = BD[s]
        g = _gcd(Q, bd)
        G = Q // g * bd
        f = G // Q
        _, _, SQ, SW, SX, WL, WH = _fiber_nb(k, G, wQ * f, BN[s] * (G // bd), NwlQ * f, NwhQ * f)
        SQo[s] = SQ
        SWo[s] = SW
        SXo[s] = SX
        Wo[s, 0] = WL
        Wo[s, 1] = WH
    return SQo, SWo, SXo, Wo


def _slabs_py(k, Q, wQ, NwlQ, NwhQ, BN, BD):
    S = len(BN)
    SQo = np.zeros((S, k + 1), np.int64)
    SWo = np.zeros((S, k + 1), np.int64)
    SXo = np.zeros((S, k + 1), np.int64)
    Wo = np.zeros((S, 2), np.int64)
    for s in range(S):
        bd = int(BD[s])
        G = np.lcm(Q, bd).item()
        f = G // Q
        _, _, SQ, SW, SX, WL, WH = _fiber_py(k, G, wQ * f, int(BN[s]) * (G // bd),
                                             NwlQ * f, NwhQ * f)
        SQo[s], SWo[s], SXo[s] = SQ, SW, SX
        Wo[s] = (WL, WH)
    return SQo, SWo, SXo, Wo


def slab_structure(k, Q, wQ, NwlQ, NwhQ, BN, BD, backend=None):
    """Endpoint bookkeeping for many fibers ``b = BN/BD`` at once."""
    BN = np.ascontiguousarray(BN, np.int64)
    BD = np.ascontiguousarray(BD, np.int64)
    Gmax = Q * int(BD.max()) if len(BD) else Q
    f = Gmax // Q
    if not fits_int64(k, Gmax, wQ * f, max(abs(NwlQ), abs(NwhQ)) * f):
        return _slabs_py(k, Q, wQ, NwlQ, NwhQ, BN, BD)
    fn = dispatch(_slabs_nb, _slabs_py, backend)
    return fn(int(k), int(Q), int(wQ), int(NwlQ), int(NwhQ), BN, BD)
