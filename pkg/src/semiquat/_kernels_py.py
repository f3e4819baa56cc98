"""Numpy implementations of the algebra kernels.

Same call signatures as the compiled ``_kernels`` module.  Every function
accepts a single 4-vector of shape ``(4,)`` or a stack of shape ``(n, 4)``.
"""
import numpy as np


def qmul(p, q, eps):
    """Semi-real quaternion product; ``eps`` holds the basis signs of e1, e2, e3."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    e1, e2, e3 = eps
    p1, p2, p3, p4 = p[..., 0], p[..., 1], p[..., 2], p[..., 3]
    q1, q2, q3, q4 = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    out = np.empty(np.broadcast_shapes(p.shape, q.shape))
    out[..., 3] = p4 * q4 - e1 * p1 * q1 - e2 * p2 * q2 - e3 * p3 * q3
    out[..., 0] = p4 * q1 + q4 * p1 - e2 * e3 * (p2 * q3 - p3 * q2)
    out[..., 1] = p4 * q2 + q4 * p2 - e3 * e1 * (p3 * q1 - p1 * q3)
    out[..., 2] = p4 * q3 + q4 * p3 - e1 * e2 * (p1 * q2 - p2 * q1)
    return out


def hdot(p, q, signs):
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    return np.sum(np.asarray(signs, dtype=float) * p * q, axis=-1)


def _cofactors(a, b, c):
    a0, a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2], a[..., 3]
    b0, b1, b2, b3 = b[..., 0], b[..., 1], b[..., 2], b[..., 3]
    c0, c1, c2, c3 = c[..., 0], c[..., 1], c[..., 2], c[..., 3]

    def det3(x0, x1, x2, y0, y1, y2, z0, z1, z2):
        return x0 * (y1 * z2 - y2 * z1) - x1 * (y0 * z2 - y2 * z0) + x2 * (y0 * z1 - y1 * z0)

    return (
        -det3(a1, a2, a3, b1, b2, b3, c1, c2, c3),
        det3(a0, a2, a3, b0, b2, b3, c0, c2, c3),
        -det3(a0, a1, a3, b0, b1, b3, c0, c1, c3),
        det3(a0, a1, a2, b0, b1, b2, c0, c1, c2),
    )


def wedge4(a, b, c, signs, orient):
    """Metric-weighted cofactor vector X with h(X, w) = orient * det(a, b, c, w)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    cof = _cofactors(a, b, c)
    out = np.empty(np.broadcast_shapes(a.shape, b.shape, c.shape))
    for i in range(4):
        out[..., i] = orient * signs[i] * cof[i]
    return out


def det4(a, b, c, d):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    d = np.asarray(d, dtype=float)
    cof = _cofactors(a, b, c)
    return sum(d[..., i] * cof[i] for i in range(4))
