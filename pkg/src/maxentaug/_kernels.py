"""Compiled inner loops for the per-pixel hot paths.

Each kernel has a vectorized numpy twin in its caller; the two compute the
same IEEE expressions in the same order, so results are identical. numba is
optional: without it the callers fall back to the numpy routes.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - exercised only without numba
    NUMBA_AVAILABLE = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


@njit(cache=True)
def warp_bilinear(x, dx, dy):
    """Bilinear warp of float32 (H, W, C) by float64 pixel displacements."""
    h, w, nch = x.shape
    out = np.empty_like(x)
    one = np.float32(1.0)
    for r in range(h):
        for c in range(w):
            rr = r + dy[r, c]
            cc = c + dx[r, c]
            if rr < 0.0:
                rr = 0.0
            elif rr > h - 1.0:
                rr = h - 1.0
            if cc < 0.0:
                cc = 0.0
            elif cc > w - 1.0:
                cc = w - 1.0
            r0 = int(np.floor(rr))
            c0 = int(np.floor(cc))
            r1 = min(r0 + 1, h - 1)
            c1 = min(c0 + 1, w - 1)
            fr = np.float32(rr - r0)
            fc = np.float32(cc - c0)
            for ch in range(nch):
                top = (one - fc) * x[r0, c0, ch] + fc * x[r0, c1, ch]
                bot = (one - fc) * x[r1, c0, ch] + fc * x[r1, c1, ch]
                val = (one - fr) * top + fr * bot
                if val < 0.0:
                    val = np.float32(0.0)
                elif val > 1.0:
                    val = np.float32(1.0)
                out[r, c, ch] = val
    return out


@njit(cache=True)
def hermite_lookup(v, tab, g):
    """v + cubic Hermite interpolation of the perturbation table, clamped.

    ``tab`` interleaves node values and node derivatives (scaled by the
    node spacing) as (value_0, slope_0, value_1, slope_1, ...), so one
    lookup touches a single cache line.
    """
    n = v.size
    out = np.empty(n, dtype=np.float32)
    for i in range(n):
        t = v[i] * g
        cell = int(np.floor(t))
        if cell < 0:
            cell = 0
        elif cell > g - 1:
            cell = g - 1
        f = t - cell
        p1 = tab[2 * cell]
        m1 = tab[2 * cell + 1]
        p2 = tab[2 * cell + 2]
        m2 = tab[2 * cell + 3]
        s = p1 + f * (
            m1 + f * (3.0 * (p2 - p1) - 2.0 * m1 - m2 + f * (2.0 * (p1 - p2) + m1 + m2))
        )
        val = v[i] + s
        if val < 0.0:
            val = 0.0
        elif val > 1.0:
            val = 1.0
        out[i] = val
    return out


@njit(cache=True)
def jacobian_min_det(dx, dy):
    """Minimum central-difference Jacobian determinant over interior points."""
    h, w = dx.shape
    best = np.inf
    for r in range(1, h - 1):
        for c in range(1, w - 1):
            a = 1.0 + (dx[r, c + 1] - dx[r, c - 1]) / 2.0
            b = (dx[r + 1, c] - dx[r - 1, c]) / 2.0
            cc = (dy[r, c + 1] - dy[r, c - 1]) / 2.0
            d = 1.0 + (dy[r + 1, c] - dy[r - 1, c]) / 2.0
            det = a * d - b * cc
            if det < best:
                best = det
    return best


@njit(cache=True)
def _correlate3(xf, t, h, w, nch):
    """3x3 specialization: one fused store per element, no accumulator reload."""
    m = w * nch
    out = np.empty((h, m), dtype=np.float32)
    t00 = t[0, 0]; t01 = t[0, 1]; t02 = t[0, 2]
    t10 = t[1, 0]; t11 = t[1, 1]; t12 = t[1, 2]
    t20 = t[2, 0]; t21 = t[2, 1]; t22 = t[2, 2]
    for r in range(h):
        a = xf[r - 1 if r > 0 else 1]
        b = xf[r]
        c = xf[r + 1 if r < h - 1 else h - 2]
        buf = out[r]
        for j in range(nch, m - nch):
            buf[j] = (
                t00 * a[j - nch] + t01 * a[j] + t02 * a[j + nch]
                + t10 * b[j - nch] + t11 * b[j] + t12 * b[j + nch]
                + t20 * c[j - nch] + t21 * c[j] + t22 * c[j + nch]
            )
        for ch in range(nch):  # reflected border columns
            buf[ch] = (
                t00 * a[nch + ch] + t01 * a[ch] + t02 * a[nch + ch]
                + t10 * b[nch + ch] + t11 * b[ch] + t12 * b[nch + ch]
                + t20 * c[nch + ch] + t21 * c[ch] + t22 * c[nch + ch]
            )
            j = m - nch + ch
            buf[j] = (
                t00 * a[j - nch] + t01 * a[j] + t02 * a[j - nch]
                + t10 * b[j - nch] + t11 * b[j] + t12 * b[j - nch]
                + t20 * c[j - nch] + t21 * c[j] + t22 * c[j - nch]
            )
    return out


@njit(cache=True)
def correlate_reflect(x, taps):
    """Sliding-window correlation with reflect (edge-excluded) padding.

    Accumulates one output row at a time: each tap becomes a contiguous
    shifted sweep over the flattened (width * channels) row, with only the
    few out-of-range columns handled by explicit reflection.
    """
    h, w, nch = x.shape
    k = taps.shape[0]
    half = k // 2
    m = w * nch
    xf = x.reshape(h, m)
    taps32 = taps.astype(np.float32)
    if k == 3:
        return _correlate3(xf, taps32, h, w, nch).reshape(h, w, nch)
    out = np.zeros((h, m), dtype=np.float32)
    for r in range(h):
        buf = out[r]
        for dr in range(k):
            rr = r + dr - half
            if rr < 0:
                rr = -rr
            elif rr > h - 1:
                rr = 2 * (h - 1) - rr
            row = xf[rr]
            for dc in range(k):
                t = taps32[dr, dc]
                off = (dc - half) * nch
                j0 = -off if off < 0 else 0
                j1 = m - off if off > 0 else m
                for j in range(j0, j1):
                    buf[j] += t * row[j + off]
                for j in range(j0):  # reflected left border columns
                    c = j // nch
                    ch = j - c * nch
                    buf[j] += t * row[(half - dc - c) * nch + ch]
                for j in range(j1, m):  # reflected right border columns
                    c = j // nch
                    ch = j - c * nch
                    buf[j] += t * row[(2 * (w - 1) - c - dc + half) * nch + ch]
    return out.reshape(h, w, nch)
