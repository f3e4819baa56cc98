# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled algebra kernels (same API as ``_kernels_py``)."""
import numpy as np


cdef inline void _qmul(const double* p, const double* q,
                       double e1, double e2, double e3, double* out) noexcept nogil:
    out[3] = p[3] * q[3] - e1 * p[0] * q[0] - e2 * p[1] * q[1] - e3 * p[2] * q[2]
    out[0] = p[3] * q[0] + q[3] * p[0] - e2 * e3 * (p[1] * q[2] - p[2] * q[1])
    out[1] = p[3] * q[1] + q[3] * p[1] - e3 * e1 * (p[2] * q[0] - p[0] * q[2])
    out[2] = p[3] * q[2] + q[3] * p[2] - e1 * e2 * (p[0] * q[1] - p[1] * q[0])


cdef inline double _det3(double x0, double x1, double x2,
                         double y0, double y1, double y2,
                         double z0, double z1, double z2) noexcept nogil:
    return x0 * (y1 * z2 - y2 * z1) - x1 * (y0 * z2 - y2 * z0) + x2 * (y0 * z1 - y1 * z0)


cdef inline void _cofactors(const double* a, const double* b, const double* c,
                            double* cof) noexcept nogil:
    cof[0] = -_det3(a[1], a[2], a[3], b[1], b[2], b[3], c[1], c[2], c[3])
    cof[1] = _det3(a[0], a[2], a[3], b[0], b[2], b[3], c[0], c[2], c[3])
    cof[2] = -_det3(a[0], a[1], a[3], b[0], b[1], b[3], c[0], c[1], c[3])
    cof[3] = _det3(a[0], a[1], a[2], b[0], b[1], b[2], c[0], c[1], c[2])


def _as2d(x):
    arr = np.ascontiguousarray(x, dtype=np.float64)
    if arr.ndim == 1:
        return arr.reshape(1, 4), True
    return arr, False


def qmul(p, q, eps):
    cdef double[:, ::1] pv
    cdef double[:, ::1] qv
    cdef double[:, ::1] ov
    cdef Py_ssize_t i, n, sp, sq
    cdef double e1 = eps[0], e2 = eps[1], e3 = eps[2]
    pa, p1 = _as2d(p)
    qa, q1 = _as2d(q)
    n = max(pa.shape[0], qa.shape[0])
    sp = 0 if pa.shape[0] == 1 else 1
    sq = 0 if qa.shape[0] == 1 else 1
    if (sp and pa.shape[0] != n) or (sq and qa.shape[0] != n):
        raise ValueError("shape mismatch")
    out = np.empty((n, 4))
    pv = pa
    qv = qa
    ov = out
    with nogil:
        for i in range(n):
            _qmul(&pv[i * sp, 0], &qv[i * sq, 0], e1, e2, e3, &ov[i, 0])
    if p1 and q1:
        return out[0]
    return out


def hdot(p, q, signs):
    cdef double[:, ::1] pv
    cdef double[:, ::1] qv
    cdef double[::1] ov
    cdef Py_ssize_t i, n, sp, sq
    cdef double s0 = signs[0], s1 = signs[1], s2 = signs[2], s3 = signs[3]
    pa, p1 = _as2d(p)
    qa, q1 = _as2d(q)
    n = max(pa.shape[0], qa.shape[0])
    sp = 0 if pa.shape[0] == 1 else 1
    sq = 0 if qa.shape[0] == 1 else 1
    out = np.empty(n)
    pv = pa
    qv = qa
    ov = out
    with nogil:
        for i in range(n):
            ov[i] = (s0 * pv[i * sp, 0] * qv[i * sq, 0] + s1 * pv[i * sp, 1] * qv[i * sq, 1]
                     + s2 * pv[i * sp, 2] * qv[i * sq, 2] + s3 * pv[i * sp, 3] * qv[i * sq, 3])
    if p1 and q1:
        return float(out[0])
    return out


def wedge4(a, b, c, signs, double orient):
    cdef double[:, ::1] av
    cdef double[:, ::1] bv
    cdef double[:, ::1] cv
    cdef double[:, ::1] ov
    cdef double cof[4]
    cdef double sg[4]
    cdef Py_ssize_t i, j, n, sa, sb, sc
    for j in range(4):
        sg[j] = signs[j]
    aa, a1 = _as2d(a)
    ba, b1 = _as2d(b)
    ca, c1 = _as2d(c)
    n = max(aa.shape[0], ba.shape[0], ca.shape[0])
    sa = 0 if aa.shape[0] == 1 else 1
    sb = 0 if ba.shape[0] == 1 else 1
    sc = 0 if ca.shape[0] == 1 else 1
    out = np.empty((n, 4))
    av = aa
    bv = ba
    cv = ca
    ov = out
    with nogil:
        for i in range(n):
            _cofactors(&av[i * sa, 0], &bv[i * sb, 0], &cv[i * sc, 0], cof)
            for j in range(4):
                ov[i, j] = orient * sg[j] * cof[j]
    if a1 and b1 and c1:
        return out[0]
    return out


def det4(a, b, c, d):
    cdef double[:, ::1] av
    cdef double[:, ::1] bv
    cdef double[:, ::1] cv
    cdef double[:, ::1] dv
    cdef double[::1] ov
    cdef double cof[4]
    cdef Py_ssize_t i, n, sa, sb, sc, sd
    aa, a1 = _as2d(a)
    ba, b1 = _as2d(b)
    ca, c1 = _as2d(c)
    da, d1 = _as2d(d)
    n = max(aa.shape[0], ba.shape[0], ca.shape[0], da.shape[0])
    sa = 0 if aa.shape[0] == 1 else 1
    sb = 0 if ba.shape[0] == 1 else 1
    sc = 0 if ca.shape[0] == 1 else 1
    sd = 0 if da.shape[0] == 1 else 1
    out = np.empty(n)
    av = aa
    bv = ba
    cv = ca
    dv = da
    ov = out
    with nogil:
        for i in range(n):
            _cofactors(&av[i * sa, 0], &bv[i * sb, 0], &cv[i * sc, 0], cof)
            ov[i] = (dv[i * sd, 0] * cof[0] + dv[i * sd, 1] * cof[1]
                     + dv[i * sd, 2] * cof[2] + dv[i * sd, 3] * cof[3])
    if a1 and b1 and c1 and d1:
        return float(out[0])
    return out
