"""Associated spatial curves in E^3_1.

A unit-speed curve in E^2_4 with frame {T, N, B, E} determines spatial
quaternions t, n, b through ``N = eps_T t T``, ``B = eps_T n T`` and
``E = eps_T b T``.  Right-multiplying by conj(T) solves these:
``t = eps_T N conj(T) / (T conj(T))``.

The vector parts are carried into E^3_1 coordinates by the context's
``spatial_axes`` map, an isometry from the vector-part form onto
``spatial_signs``.  Integrating t gives the associated curve alpha.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from . import kernels as K
from .curvekit import CurveSpec, FrenetApparatus4, PartialFrame, frenet_apparatus, frenet_partial
from .errors import ExtractionFailure, NonSpatialCurve, NotUnitSpeed, NullCurvatureVector
from .involute import InvolutePair, involute_partial
from .semialgebra import DEFAULT_CONTEXT, MetricContext, SemiQuaternion
from .stencils import central_derivative


def to_spatial(vec_q, ctx: MetricContext = DEFAULT_CONTEXT) -> np.ndarray:
    """Quaternion vector part (first three components) -> E^3_1 coordinates."""
    return ctx.axes_matrix @ np.asarray(vec_q, dtype=float)[:3]


def from_spatial(vec_s, ctx: MetricContext = DEFAULT_CONTEXT) -> np.ndarray:
    """E^3_1 coordinates -> spatial quaternion (scalar part 0)."""
    return np.append(ctx.axes_matrix.T @ np.asarray(vec_s, dtype=float), 0.0)


def g3(u, v, ctx: MetricContext = DEFAULT_CONTEXT) -> float:
    """The E^3_1 inner product with weights ``spatial_signs``."""
    return float(np.dot(np.array(ctx.spatial_signs, dtype=float) * np.asarray(u, dtype=float)[:3],
                        np.asarray(v, dtype=float)[:3]))


def lorentz_cross(u, v, ctx: MetricContext = DEFAULT_CONTEXT) -> np.ndarray:
    """Cross product of E^3_1: X_i = s_i (u x v)_i, so g3(X, w) = det(u, v, w)."""
    return np.array(ctx.spatial_signs, dtype=float) * np.cross(np.asarray(u, dtype=float)[:3],
                                                               np.asarray(v, dtype=float)[:3])


@dataclass(frozen=True)
class SpatialFrenet3:
    """Spatial frame in E^3_1 coordinates (stored as quaternions with zero scalar part)."""

    s: float
    t: SemiQuaternion
    n: SemiQuaternion
    b: SemiQuaternion
    k: float
    r: float
    eps_t: int
    eps_n: int
    eps_b: int

    def frame(self) -> np.ndarray:
        return np.array([self.t, self.n, self.b], dtype=float)[:, :3]

    def orthonormality_defect(self, ctx: MetricContext = DEFAULT_CONTEXT) -> float:
        F = self.frame()
        G = (F * np.array(ctx.spatial_signs, dtype=float)) @ F.T
        return float(np.max(np.abs(G - np.diag([self.eps_t, self.eps_n, self.eps_b]))))


def _spq(v3) -> SemiQuaternion:
    return SemiQuaternion(float(v3[0]), float(v3[1]), float(v3[2]), 0.0)


def _solve_right(X: np.ndarray, T: np.ndarray, eps_T: int, ctx: MetricContext, tol: float, what: str):
    """Solve X = eps_T y T for y, require y spatial, return its vector part."""
    Tbar = np.array([-T[0], -T[1], -T[2], T[3]])
    nq = float(K.qmul(T, Tbar, ctx.basis_signs)[3])
    y = eps_T * K.qmul(X, Tbar, ctx.basis_signs) / nq
    if abs(y[3]) > tol * max(1.0, float(np.max(np.abs(y[:3])))):
        raise ExtractionFailure(f"{what} has scalar part {y[3]:.3g}; the sign conventions do not match",
                                quantity=what)
    return y[:3]


def spatial_quaternions(T, N, eps_T: int, ctx: MetricContext = DEFAULT_CONTEXT, tol: float = 1e-8):
    """t solving N = eps_T t T, as a quaternion vector part."""
    return _solve_right(np.asarray(N, dtype=float), np.asarray(T, dtype=float), eps_T, ctx, tol, "t")


def extract_spatial_frame(app: FrenetApparatus4, ctx: MetricContext = DEFAULT_CONTEXT,
                          tol: float = 1e-8) -> SpatialFrenet3:
    """t, n, b of the associated spatial curve, in E^3_1 coordinates.

    ``k`` is the torsion of the 4D curve and ``r`` is recovered as
    ``eps_T third + eps_t eps_T eps_N kappa``.
    """
    T, N, B, E = app.frame()
    vecs = [to_spatial(_solve_right(X, T, app.eps_T, ctx, tol, name), ctx)
            for X, name in ((N, "t"), (B, "n"), (E, "b"))]
    signs = [1 if g3(v, v, ctx) > 0 else -1 for v in vecs]
    return SpatialFrenet3(app.s, *(_spq(v) for v in vecs), app.k, app.r, *signs)


def spatial_tangent(frame, ctx: MetricContext = DEFAULT_CONTEXT, tol: float = 1e-8) -> np.ndarray:
    """E^3_1 tangent t from a (partial) 4D frame."""
    return to_spatial(_solve_right(np.asarray(frame.N, dtype=float), np.asarray(frame.T, dtype=float),
                                   frame.eps_T, ctx, tol, "t"), ctx)


# ----------------------------------------------------------------------------
# associated curves


def associated_curve(source: CurveSpec, ctx: MetricContext = DEFAULT_CONTEXT, anchor=None,
                     anchor_s: float | None = None, fd_step: float = 1e-3, name: str | None = None,
                     quad_tol: float = 1e-12) -> CurveSpec:
    """The spatial curve alpha with alpha' = t, as a CurveSpec in E^3_1 coordinates.

    Positions integrate t by adaptive quadrature from ``anchor_s`` (default
    the domain midpoint), where alpha equals ``anchor`` (default 0).  The first
    derivative is t itself; higher ones are central differences of t.
    """
    a, b = source.effective_domain()
    s0 = 0.5 * (a + b) if anchor_s is None else float(anchor_s)
    p0 = np.zeros(3) if anchor is None else np.asarray(anchor, dtype=float)

    def tangent(s):
        return spatial_tangent(frenet_partial(source, s, ctx), ctx)

    def position(s):
        if s == s0:
            return p0.copy()
        val, _ = integrate.quad_vec(tangent, s0, s, epsabs=quad_tol, epsrel=quad_tol)
        return p0 + val

    def derivs(s, n):
        if n == 1:
            return tangent(s)
        h = min(fd_step, 0.24 * max(min(s - a, b - s), 1e-12))
        return central_derivative(tangent, s, h, n - 1)

    return CurveSpec(position, (a, b), derivs, max_order=4, name=name or f"assoc({source.name})",
                     meta={"anchor": p0.tolist(), "anchor_s": s0})


def spatial_frenet(alpha: CurveSpec, s: float, ctx: MetricContext = DEFAULT_CONTEXT,
                   unit_tol: float = 1e-6, spatial_tol: float = 1e-9) -> SpatialFrenet3:
    """Frenet frame and curvatures of a unit-speed curve in E^3_1.

    t = alpha', n = alpha''/N(alpha''), b = t x n, k = eps_n N(alpha'') and
    r = g(alpha''', b) / N(alpha'').
    """
    ds = []
    for n in (1, 2, 3):
        d = np.asarray(alpha.derivative(s, n), dtype=float)
        if d.shape == (4,):
            if abs(d[3]) > spatial_tol * max(1.0, float(np.max(np.abs(d)))):
                raise NonSpatialCurve("curve has a nonzero scalar part", s=s, quantity="scalar part")
            d = d[:3]
        ds.append(d)
    d1, d2, d3 = ds
    gt = g3(d1, d1, ctx)
    if abs(math.sqrt(abs(gt)) - 1.0) > unit_tol:
        raise NotUnitSpeed(f"g(alpha', alpha') = {gt:.12g} is not +-1", s=s, quantity="N(alpha')")
    g2 = g3(d2, d2, ctx)
    if not np.any(d2) or abs(g2) <= ctx.null_tol * max(1.0, float(np.max(np.abs(d2)))) ** 2:
        raise NullCurvatureVector("alpha'' is null, the normal is undefined", s=s, quantity="N(alpha'')")
    nu = math.sqrt(abs(g2))
    n_vec = d2 / nu
    b_vec = lorentz_cross(d1, n_vec, ctx)
    eps_n = 1 if g2 > 0 else -1
    k = eps_n * nu
    r = g3(d3, b_vec, ctx) / nu
    signs = [1 if g3(v, v, ctx) > 0 else -1 for v in (d1, n_vec, b_vec)]
    return SpatialFrenet3(float(s), _spq(d1), _spq(n_vec), _spq(b_vec), k, r, *signs)


def spatial_frenet_rhs(fr: SpatialFrenet3) -> np.ndarray:
    """Right-hand sides of t', n', b' for the conventions of :func:`spatial_frenet`."""
    t, n, b = fr.frame()
    return np.array([
        fr.eps_n * fr.k * n,
        -fr.eps_t * fr.k * t + fr.eps_b * fr.r * b,
        -fr.eps_n * fr.r * n,
    ])


def spatial_ode_residual(alpha: CurveSpec, s: float, ctx: MetricContext = DEFAULT_CONTEXT,
                         h_step: float = 1e-3) -> tuple[float, float, float]:
    """Euclidean norms of (5-point derivative of t, n, b) minus the Frenet right-hand side."""
    fr = [spatial_frenet(alpha, s + j * h_step, ctx).frame() for j in (-2, -1, 1, 2)]
    d = (fr[0] - 8 * fr[1] + 8 * fr[2] - fr[3]) / (12 * h_step)
    res = np.linalg.norm(d - spatial_frenet_rhs(spatial_frenet(alpha, s, ctx)), axis=1)
    return tuple(float(x) for x in res)


# ----------------------------------------------------------------------------
# Theorem on associated curves of involute pairs


class Theorem35Sample(NamedTuple):
    s: float
    g_tstar_n: float
    gap: float
    g_t_tstar: float
    h4_t_tstar: float
    product_scalar: float
    coeff_t: float
    coeff_b: float
    printed_x: float
    printed_y: float


class Theorem35Report(NamedTuple):
    samples: list
    max_g_tstar_n: float
    min_gap: float
    h_t_tstar: list
    max_printed_mismatch: float
    tol: float
    perpendicular: bool
    collinear_detected: bool

    @property
    def passed(self) -> bool:
        return self.perpendicular and not self.collinear_detected


def _tstar_sample(pair: InvolutePair, s: float, ctx: MetricContext, etol: float) -> Theorem35Sample:
    app = frenet_apparatus(pair.evolute, s, ctx)
    sp = extract_spatial_frame(app, ctx, etol)
    t, n, b = (np.array(v)[:3] for v in (sp.t, sp.n, sp.b))
    part: PartialFrame = involute_partial(pair, s)
    tq_star = _solve_right(np.asarray(part.N), np.asarray(part.T), part.eps_T, ctx, etol, "t*")
    tq = _solve_right(app.frame()[1], app.frame()[0], app.eps_T, ctx, etol, "t")
    t_star = to_spatial(tq_star, ctx)
    gtn = g3(t_star, n, ctx)
    denom = g3(t_star, t_star, ctx) * g3(n, n, ctx)
    gap = math.sqrt(abs(1.0 - gtn * gtn / denom))
    q4 = np.append(tq, 0.0)
    q4s = np.append(tq_star, 0.0)
    h4 = float(K.hdot(q4, q4s, ctx.h_signs))
    prod = float(K.qmul(q4, q4s, ctx.basis_signs)[3])
    coeff_t = g3(t_star, t, ctx) / g3(t, t, ctx)
    coeff_b = g3(t_star, b, ctx) / g3(b, b, ctx)
    rad = math.sqrt(abs(app.eps_T * app.kappa ** 2 + app.eps_n * app.eps_T * app.k ** 2))
    x = -app.eps_t * app.kappa / rad
    y = app.eps_n * app.k / rad
    return Theorem35Sample(float(s), gtn, gap, g3(t, t_star, ctx), h4, prod, coeff_t, coeff_b,
                           -app.eps_T * app.eps_N * x, app.eps_N * y)


def check_theorem35(pair: InvolutePair, samples: int = 21, ctx: MetricContext | None = None,
                    tol: float = 1e-8, grid=None, extract_tol: float = 1e-8) -> Theorem35Report:
    """t* (tangent of the curve associated with the involute) against n.

    Reports max |g(t*, n)|, the minimum normalized non-collinearity gap
    sqrt|1 - g(t*,n)^2 / (g(t*,t*) g(n,n))| and g(t, t*) per sample, along
    with the 4D inner product and product form of t and t*.  The printed
    coefficients of t and b are compared up to sign.
    """
    ctx = pair.ctx if ctx is None else ctx
    if grid is None:
        a, b = pair.evolute.effective_domain()
        grid = np.linspace(a, b, samples)
    rows = [_tstar_sample(pair, s, ctx, extract_tol) for s in grid if pair.is_regular(s)]
    if not rows:
        raise ValueError("no regular samples for the theorem check")
    max_g = max(abs(r.g_tstar_n) for r in rows)
    min_gap = min(r.gap for r in rows)
    mismatch = max(max(abs(abs(r.coeff_t) - abs(r.printed_x)), abs(abs(r.coeff_b) - abs(r.printed_y)))
                   for r in rows)
    return Theorem35Report(rows, max_g, min_gap, [r.g_t_tstar for r in rows], mismatch, tol,
                           max_g <= tol, min_gap < tol)


def example_alpha(ctx: MetricContext = DEFAULT_CONTEXT, domain=(-3.0, 3.0)) -> CurveSpec:
    """Associated curve of the worked example, anchored at alpha(0) = (0, 0, -sqrt2)."""
    from .curves import example31

    return associated_curve(example31(domain), ctx, anchor=(0.0, 0.0, -math.sqrt(2.0)), anchor_s=0.0,
                            name="alpha")


def involute_associated_curve(pair: InvolutePair, s: float, anchor=None, name: str = "beta") -> CurveSpec:
    """Spatial curve associated with the arc-length involute on the segment holding s.

    The anchor (default (c, c, c)) is placed at arc length s* = 0.
    """
    rep = pair.arclength_curve(s)
    p0 = (pair.c, pair.c, pair.c) if anchor is None else anchor
    lo, hi = rep.domain
    return associated_curve(rep, pair.ctx, anchor=p0, anchor_s=min(max(0.0, lo), hi), name=name)
