"""Closed-form integral of a linear-chirp exponential.

    J = integral over [u0, u1] of exp(2j*pi*(y*u**2 + w*u)) du

evaluated through the Faddeeva function, which stays well conditioned where
a direct difference of error functions would cancel catastrophically.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erf, wofz

Y_EPS = 1e-12  # Hz/s^2: below this the quadratic term is treated as zero


def _tone(w, L):
    # integral_0^L exp(2j pi w s) ds
    return L * np.exp(1j * np.pi * w * L) * np.sinc(w * L)


def _chirp(y, w, L):
    # integral_0^L exp(j(alpha s^2 + beta s)) ds, alpha != 0
    alpha = 2 * np.pi * y
    beta = 2 * np.pi * w
    a = np.sqrt(-1j * alpha)
    s0 = beta / (2 * alpha)
    z1 = a * s0
    z2 = a * (L + s0)
    end_phase = np.exp(1j * (alpha * L * L + beta * L))
    # erfc(z) = exp(-z^2) w(jz) is only safe for Re z >= 0; reflect otherwise
    pos1 = z1.real >= 0
    pos2 = z2.real >= 0
    both_pos = np.where(pos1, wofz(1j * z1), 0) - end_phase * np.where(pos2, wofz(1j * z2), 0)
    both_neg = end_phase * np.where(~pos2, wofz(-1j * z2), 0) - np.where(~pos1, wofz(-1j * z1), 0)
    straddle = (2 * np.exp(-1j * beta * s0 / 2)
                - end_phase * np.where(pos2, wofz(1j * z2), 0)
                - np.where(~pos1, wofz(-1j * z1), 0))
    bracket = np.where(pos1 & pos2, both_pos, np.where(~pos1 & ~pos2, both_neg, straddle))
    out = np.sqrt(np.pi) / (2 * a) * bracket
    # near the stationary point with a weak quadratic term the Faddeeva
    # difference cancels; plain erf is accurate there
    small = np.maximum(np.abs(z1), np.abs(z2)) < 1.0
    if np.any(small):
        ph0 = np.exp(-1j * beta[small] * s0[small] / 2)
        out[small] = (np.sqrt(np.pi) / (2 * a[small]) * ph0
                      * (erf(z2[small]) - erf(z1[small])))
    return out


def chirp_integral(y, w, u0, u1):
    """Integral of exp(2j*pi*(y*u^2 + w*u)) from u0 to u1 (broadcasting, returns complex)."""
    y, w, u0, u1 = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (y, w, u0, u1)))
    L = u1 - u0
    # shift the origin to u0: the linear coefficient picks up 2*y*u0
    w_shift = w + 2 * y * u0
    c0 = y * u0 * u0 + w * u0
    lead = np.exp(2j * np.pi * (c0 - np.floor(c0)))
    out = np.empty(y.shape, dtype=complex)
    tone = np.abs(y) <= Y_EPS
    if np.any(tone):
        out[tone] = _tone(w_shift[tone], L[tone])
    if np.any(~tone):
        out[~tone] = _chirp(y[~tone], w_shift[~tone], L[~tone])
    out = out * lead
    return out[()] if out.ndim == 0 else out


def chirp_sum(y, w, n0, n1):
    """Sum of exp(2j*pi*(y*n^2 + w*n)) over integers n0 <= n < n1 (1-D arrays of equal length)."""
    y, w, n0, n1 = np.broadcast_arrays(np.asarray(y, float), np.asarray(w, float),
                                       np.asarray(n0, np.int64), np.asarray(n1, np.int64))
    flat = [a.ravel() for a in (y, w, n0, n1)]
    lengths = np.maximum(flat[3] - flat[2], 0)
    out = np.zeros(flat[0].shape, dtype=complex)
    if lengths.size == 0 or lengths.max() == 0:
        return out.reshape(y.shape)[()] if y.ndim == 0 else out.reshape(y.shape)
    span = np.arange(lengths.max())
    # chunk rows to bound the temporary grid
    step = max(1, (1 << 22) // max(1, span.size))
    for lo in range(0, out.size, step):
        sl = slice(lo, lo + step)
        n = flat[2][sl, None] + span[None, :]
        ph = flat[0][sl, None] * n * n + flat[1][sl, None] * n
        terms = np.exp(2j * np.pi * (ph - np.floor(ph)))
        terms[span[None, :] >= lengths[sl, None]] = 0
        out[sl] = terms.sum(axis=1)
    out = out.reshape(y.shape)
    return out[()] if y.ndim == 0 else out
