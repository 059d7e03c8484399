"""Raw Dirichlet-convolution kernel shared by the sieve and convolution layers."""

from __future__ import annotations

import math

import numpy as np


def convolve_values(f: np.ndarray, g: np.ndarray, limit: int) -> np.ndarray:
    """(f*g)(n) = sum_{d|n} f(d) g(n/d) for 1 <= n <= limit.

    Splits divisor pairs (d, m), d*m <= limit, at s = isqrt(limit): the d <= s
    half runs over multiples of d, the d > s half (equivalently m <= limit/(s+1))
    over stride-m index ranges.  Both halves are numpy slice accumulations, so the
    whole convolution costs O(limit log limit) element ops across ~2*sqrt(limit)
    vector calls.  Integer inputs stay exact in int64.
    """
    if len(f) < limit + 1 or len(g) < limit + 1:
        raise ValueError("limit mismatch: input tables shorter than requested limit")
    integer = f.dtype.kind in "iu" and g.dtype.kind in "iu"
    dtype = np.int64 if integer else np.float64
    fv = f if f.dtype == dtype else f.astype(dtype)
    gv = g if g.dtype == dtype else g.astype(dtype)
    h = np.zeros(limit + 1, dtype=dtype)
    s = math.isqrt(limit)
    for d in range(1, s + 1):
        fd = fv[d]
        if fd:
            k = limit // d
            h[d::d] += fd * gv[1 : k + 1]
    for m in range(1, limit // (s + 1) + 1):
        gm = gv[m]
        if gm:
            k = limit // m
            h[(s + 1) * m : k * m + 1 : m] += gm * fv[s + 1 : k + 1]
    return h
