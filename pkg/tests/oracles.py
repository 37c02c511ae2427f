"""Slow, independent reference implementations used only by the tests.

Everything here is written with explicit loops over pixels and shares no
code with the package under test.
"""

from __future__ import annotations

import math

import numpy as np

BINOMIAL = [1 / 16, 4 / 16, 6 / 16, 4 / 16, 1 / 16]
R2 = math.sqrt(0.5)


def _clamp(i, n):
    return min(max(i, 0), n - 1)


def reduce_naive(img):
    img = np.asarray(img, dtype=float)
    h, w = img.shape
    out = np.zeros(((h + 1) // 2, (w + 1) // 2))
    for i in range(out.shape[0]):
        for j in range(out.shape[1]):
            acc = 0.0
            for a in range(5):
                for b in range(5):
                    acc += BINOMIAL[a] * BINOMIAL[b] * img[_clamp(2 * i + a - 2, h), _clamp(2 * j + b - 2, w)]
            out[i, j] = acc
    return out


def expand_naive(img, tw, th):
    img = np.asarray(img, dtype=float)
    h, w = img.shape

    def up(m, n):
        if m % 2 or n % 2:
            return 0.0
        return img[_clamp(m // 2, h), _clamp(n // 2, w)]

    out = np.zeros((th, tw))
    for y in range(th):
        for x in range(tw):
            acc = 0.0
            for a in range(5):
                for b in range(5):
                    acc += 4 * BINOMIAL[a] * BINOMIAL[b] * up(y + a - 2, x + b - 2)
            out[y, x] = acc
    return out


def haar_level_naive(img):
    """One level of the separable Haar DWT, odd sizes padded by repeating the edge."""
    img = np.asarray(img, dtype=float)
    h, w = img.shape

    def px(y, x):
        return img[min(y, h - 1), min(x, w - 1)]

    oh, ow = (h + 1) // 2, (w + 1) // 2
    ll, lh, hl, hh = (np.zeros((oh, ow)) for _ in range(4))
    for i in range(oh):
        for j in range(ow):
            a, b = px(2 * i, 2 * j), px(2 * i, 2 * j + 1)
            c, d = px(2 * i + 1, 2 * j), px(2 * i + 1, 2 * j + 1)
            # rows: low = (a+b)/sqrt2, high = (a-b)/sqrt2; then columns likewise
            lo_top, lo_bot = (a + b) * R2, (c + d) * R2
            hi_top, hi_bot = (a - b) * R2, (c - d) * R2
            ll[i, j] = (lo_top + lo_bot) * R2
            lh[i, j] = (lo_top - lo_bot) * R2
            hl[i, j] = (hi_top + hi_bot) * R2
            hh[i, j] = (hi_top - hi_bot) * R2
    return ll, lh, hl, hh


def ihaar_level_naive(ll, lh, hl, hh, h, w):
    out = np.zeros((2 * ll.shape[0], 2 * ll.shape[1]))
    for i in range(ll.shape[0]):
        for j in range(ll.shape[1]):
            lo_top = (ll[i, j] + lh[i, j]) * R2
            lo_bot = (ll[i, j] - lh[i, j]) * R2
            hi_top = (hl[i, j] + hh[i, j]) * R2
            hi_bot = (hl[i, j] - hh[i, j]) * R2
            out[2 * i, 2 * j] = (lo_top + hi_top) * R2
            out[2 * i, 2 * j + 1] = (lo_top - hi_top) * R2
            out[2 * i + 1, 2 * j] = (lo_bot + hi_bot) * R2
            out[2 * i + 1, 2 * j + 1] = (lo_bot - hi_bot) * R2
    return out[:h, :w]


def _pick_max_abs(values):
    best = values[0]
    for v in values[1:]:
        if abs(v) > abs(best):
            best = v
    return best


def dwt_fuse_naive(planes, levels):
    """Max-abs details / mean approximation Haar fusion of 2-D planes, clamped."""
    decs = []
    for p in planes:
        bands, cur = [], np.asarray(p, dtype=float)
        for _ in range(levels):
            ll, lh, hl, hh = haar_level_naive(cur)
            bands.append((lh, hl, hh, cur.shape))
            cur = ll
        decs.append((bands, cur))
    fused_bands = []
    for k in range(levels):
        shape = decs[0][0][k][3]
        triple = []
        for band in range(3):
            arrs = [d[0][k][band] for d in decs]
            out = np.zeros_like(arrs[0])
            for idx in np.ndindex(out.shape):
                out[idx] = _pick_max_abs([a[idx] for a in arrs])
            triple.append(out)
        fused_bands.append((*triple, shape))
    ll = sum(d[1] for d in decs) / len(decs)
    for lh, hl, hh, (h, w) in reversed(fused_bands):
        ll = ihaar_level_naive(ll, lh, hl, hh, h, w)
    return np.clip(ll, 0.0, 1.0)


def luma_naive(img):
    img = np.asarray(img, dtype=float)
    if img.ndim == 2:
        return img
    if img.shape[2] == 1:
        return img[:, :, 0]
    out = np.zeros(img.shape[:2])
    for idx in np.ndindex(out.shape):
        r, g, b = img[idx]
        out[idx] = 0.2126 * r + 0.7152 * g + 0.0722 * b
    return out


def sharpness_naive(img):
    p = luma_naive(img)
    h, w = p.shape
    total = 0.0
    for y in range(h):
        for x in range(w):
            if x == 0:
                gx = p[y, 1] - p[y, 0]
            elif x == w - 1:
                gx = p[y, w - 1] - p[y, w - 2]
            else:
                gx = (p[y, x + 1] - p[y, x - 1]) / 2
            if y == 0:
                gy = p[1, x] - p[0, x]
            elif y == h - 1:
                gy = p[h - 1, x] - p[h - 2, x]
            else:
                gy = (p[y + 1, x] - p[y - 1, x]) / 2
            total += math.sqrt(gx * gx + gy * gy)
    return total / (h * w)


def rms_contrast_naive(img):
    vals = luma_naive(img).ravel().tolist()
    mu = math.fsum(vals) / len(vals)
    return math.sqrt(math.fsum((v - mu) ** 2 for v in vals) / len(vals))


def background_difference_naive(img, bg):
    a, b = luma_naive(img).ravel().tolist(), luma_naive(bg).ravel().tolist()
    return math.fsum(abs(x - y) for x, y in zip(a, b)) / len(a)
