"""Fixed central finite-difference stencils.

Weights come from Fornberg's recurrence (Math. Comp. 51, 1988), which gives the
exact weights for any derivative order on an arbitrary node set.  Curves use the
symmetric 9-point stencil on offsets -4..4, so the footprint is +-4h.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

FOOTPRINT = 4


def fornberg_weights(offsets, order: int) -> np.ndarray:
    """Weights w with f^(order)(0) ~= sum_j w_j f(offsets[j]) for unit spacing."""
    x = np.asarray(offsets, dtype=float)
    n = len(x)
    if order >= n:
        raise ValueError("need more nodes than the derivative order")
    c = np.zeros((n, order + 1))
    c1, c4 = 1.0, x[0]
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, order)
        c2, c5 = 1.0, c4
        c4 = x[i]
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i, k] = c1 * (k * c[i - 1, k - 1] - c5 * c[i - 1, k]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for k in range(mn, 0, -1):
                c[j, k] = (c4 * c[j, k] - k * c[j, k - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, order]


@lru_cache(maxsize=None)
def central_weights(order: int, half_width: int = FOOTPRINT) -> tuple[np.ndarray, np.ndarray]:
    offsets = np.arange(-half_width, half_width + 1)
    w = fornberg_weights(offsets, order)
    w.setflags(write=False)
    return offsets, w


def central_derivative(f, s: float, h: float, order: int, half_width: int = FOOTPRINT):
    """Central difference of ``f`` at ``s``.

    Samples are taken relative to f(s), which leaves the weighted sum unchanged
    (the weights of a derivative sum to zero) but removes the large common part
    before it can contaminate the difference.
    """
    offsets, w = central_weights(order, half_width)
    f0 = np.asarray(f(s), dtype=float)
    acc = np.zeros_like(f0)
    for j, wj in zip(offsets, w):
        if j == 0 or wj == 0.0:
            continue
        acc = acc + wj * (np.asarray(f(s + j * h), dtype=float) - f0)
    return acc / h**order
