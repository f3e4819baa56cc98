"""Truncated Taylor series arithmetic.

A series is an array whose first axis holds the coefficients
``f^(k)(t0) / k!``; trailing axes hold components, so a quaternion-valued
series of degree d has shape ``(d + 1, 4)``.
"""
from __future__ import annotations

from math import factorial

import numpy as np


def from_derivatives(values) -> np.ndarray:
    """Series from ``[f(t0), f'(t0), f''(t0), ...]``."""
    vals = np.asarray(values, dtype=float)
    scale = np.array([1.0 / factorial(k) for k in range(len(vals))])
    return vals * scale.reshape((-1,) + (1,) * (vals.ndim - 1))


def to_derivatives(series) -> np.ndarray:
    a = np.asarray(series, dtype=float)
    scale = np.array([float(factorial(k)) for k in range(len(a))])
    return a * scale.reshape((-1,) + (1,) * (a.ndim - 1))


def mul(a, b, degree: int | None = None) -> np.ndarray:
    """Cauchy product, truncated to the shorter input (or ``degree``)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    d = min(len(a), len(b)) - 1 if degree is None else degree
    # promote scalar series so they broadcast against vector series
    while a.ndim < b.ndim:
        a = a[..., None]
    while b.ndim < a.ndim:
        b = b[..., None]
    out = np.zeros((d + 1,) + np.broadcast_shapes(a.shape[1:], b.shape[1:]))
    for k in range(d + 1):
        for i in range(k + 1):
            out[k] += a[i] * b[k - i]
    return out


def power(a, p: float) -> np.ndarray:
    """``a ** p`` for a scalar series with nonzero constant term."""
    a = np.asarray(a, dtype=float)
    if a[0] == 0.0:
        raise ZeroDivisionError("series power needs a nonzero constant term")
    b = np.zeros_like(a)
    b[0] = a[0] ** p
    for k in range(1, len(a)):
        acc = 0.0
        for j in range(1, k + 1):
            acc += ((p + 1.0) * j - k) * a[j] * b[k - j]
        b[k] = acc / (k * a[0])
    return b


def deriv(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    k = np.arange(1, len(a)).reshape((-1,) + (1,) * (a.ndim - 1))
    return a[1:] * k
