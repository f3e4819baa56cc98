"""Curves in E^2_4 with derivative access, arc-length handling and the 4D Frenet apparatus.

Frame conventions used throughout (unit-speed curve, derivatives d1..d4):

* ``T = d1`` and ``N = d2 / N(d2)`` with ``kappa = eps_N N(d2)``;
* ``E`` is the normalized triple wedge of ``T, N, d3``, ``B`` the normalized
  wedge of ``E, T, N``;
* the sign of ``B`` makes the torsion ``k`` nonnegative and the sign of ``E``
  makes ``det(T, N, B, E)`` equal to the context orientation;
* ``eps_t = eps_T eps_N``, ``eps_n = eps_T sign h(B,B)``, ``eps_b = eps_T sign h(E,E)``.

With these the Frenet equations read::

    T' =  eps_N kappa N
    N' = -eps_t eps_N kappa T + eps_n k B
    B' = -eps_t k N + eps_n third E
    E' = -eps_b third B
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate, optimize

from . import kernels as K
from . import series as S
from .errors import (
    DegenerateFrame,
    NotUnitSpeed,
    NullCurvatureVector,
    NullSpeedPoint,
    OutOfDomain,
    StencilOverflow,
)
from .semialgebra import DEFAULT_CONTEXT, MetricContext, SemiQuaternion
from .stencils import FOOTPRINT, central_derivative, central_weights

ANALYTIC = "analytic"
FINITE_DIFFERENCE = "fd"

FRAME_TOL = {ANALYTIC: 1e-7, FINITE_DIFFERENCE: 1e-4}
# relative size of N(T ^ N ^ xi''') below which the full frame counts as degenerate
DEGENERATE_TOL = {ANALYTIC: 1e-9, FINITE_DIFFERENCE: 1e-2}


@dataclass(frozen=True, eq=False)
class CurveSpec:
    """A parameterized curve with analytic or finite-difference derivatives.

    ``derivs(s, n)`` returns the n-th derivative for ``1 <= n <= max_order``.
    Without it the curve is in finite-difference mode with step ``fd_step``
    (default ``1e-3`` times the domain length).
    """

    position: Callable[[float], np.ndarray]
    domain: tuple[float, float]
    derivs: Callable[[float, int], np.ndarray] | None = None
    max_order: int = 4
    fd_step: float | None = None
    name: str = "curve"
    arclength: "ArcLengthMap | None" = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        a, b = (float(x) for x in self.domain)
        if not a < b:
            raise ValueError(f"empty domain {self.domain}")
        object.__setattr__(self, "domain", (a, b))

    @property
    def mode(self) -> str:
        return ANALYTIC if self.derivs is not None else FINITE_DIFFERENCE

    @property
    def length(self) -> float:
        return self.domain[1] - self.domain[0]

    @property
    def step(self) -> float:
        return self.fd_step if self.fd_step is not None else 1e-3 * self.length

    def margin(self) -> float:
        """Distance from the domain ends needed to evaluate derivatives."""
        return FOOTPRINT * self.step if self.mode == FINITE_DIFFERENCE else 0.0

    def effective_domain(self) -> tuple[float, float]:
        m = self.margin()
        return self.domain[0] + m, self.domain[1] - m

    def _check_domain(self, s: float):
        a, b = self.domain
        slack = 1e-12 * max(1.0, self.length)
        if not (a - slack <= s <= b + slack):
            raise OutOfDomain(f"parameter outside domain [{a}, {b}]", s=s)

    def at(self, s: float) -> np.ndarray:
        self._check_domain(s)
        return np.asarray(self.position(s), dtype=float)

    def derivative(self, s: float, n: int) -> np.ndarray:
        if n == 0:
            return self.at(s)
        self._check_domain(s)
        if self.derivs is not None:
            if n > self.max_order:
                raise ValueError(f"{self.name}: analytic derivatives only up to order {self.max_order}")
            return np.asarray(self.derivs(s, n), dtype=float)
        h = self.step
        a, b = self.domain
        slack = 1e-12 * max(1.0, self.length)
        if s - FOOTPRINT * h < a - slack or s + FOOTPRINT * h > b + slack:
            raise StencilOverflow(
                f"finite-difference footprint +-{FOOTPRINT}h (h={h:g}) leaves the domain [{a}, {b}]", s=s
            )
        return central_derivative(self.position, s, h, n)

    def with_fd(self, step: float | None = None) -> "CurveSpec":
        """Same positions, derivatives by finite differences."""
        return CurveSpec(self.position, self.domain, None, 4, step, self.name + "[fd]", None, dict(self.meta))

    def restrict(self, a: float, b: float) -> "CurveSpec":
        lo, hi = self.domain
        if a < lo or b > hi:
            raise OutOfDomain(f"restriction [{a}, {b}] exceeds domain [{lo}, {hi}]")
        return CurveSpec(self.position, (a, b), self.derivs, self.max_order, self.fd_step,
                         self.name, self.arclength, dict(self.meta))


def derivatives(curve: CurveSpec, s: float, max_order: int = 4) -> list[SemiQuaternion]:
    if not 1 <= max_order <= 4:
        raise ValueError("max_order must be in 1..4")
    return [SemiQuaternion.from_array(curve.derivative(s, n)) for n in range(1, max_order + 1)]


def _deriv_stack(curve: CurveSpec, s: float, n: int) -> np.ndarray:
    return np.array([curve.derivative(s, k) for k in range(1, n + 1)])


def sample_grid(curve: CurveSpec, samples: int) -> np.ndarray:
    a, b = curve.effective_domain()
    return np.linspace(a, b, samples)


class UnitSpeedReport(NamedTuple):
    max_deviation: float
    worst_s: float
    tol: float
    passed: bool


def check_unit_speed(curve: CurveSpec, samples: int = 101, tol: float = 1e-6,
                     ctx: MetricContext = DEFAULT_CONTEXT) -> UnitSpeedReport:
    if samples < 2:
        raise ValueError("samples must be >= 2")
    grid = sample_grid(curve, samples)
    d1 = np.array([curve.derivative(s, 1) for s in grid])
    dev = np.abs(np.sqrt(np.abs(K.hdot(d1, d1, ctx.h_signs))) - 1.0)
    i = int(np.argmax(dev))
    return UnitSpeedReport(float(dev[i]), float(grid[i]), tol, bool(dev[i] <= tol))


# ----------------------------------------------------------------------------
# arc-length reparameterization


_GL_X, _GL_W = np.polynomial.legendre.leggauss(24)


class ArcLengthMap:
    """Monotone map between a curve parameter t and arc length sigma.

    ``sigma = direction * (S(t) - S(origin))`` with ``S`` the running integral
    of the speed N(xi'(t)).  Adaptive quadrature accumulates S over fixed
    nodes, a Gauss-Legendre rule covers the partial interval, and Brent's
    method inverts the map.
    """

    def __init__(self, curve: CurveSpec, ctx: MetricContext = DEFAULT_CONTEXT,
                 quadrature_tol: float = 1e-11, origin: float | None = None,
                 direction: int = 1, nodes: int = 65, speed_tol: float = 1e-6):
        if direction not in (1, -1):
            raise ValueError("direction must be +1 or -1")
        self.curve = curve
        self.ctx = ctx
        self.tol = quadrature_tol
        self.direction = direction
        self._cache: dict[float, float] = {}
        a, b = curve.effective_domain()
        self.t_domain = (a, b)
        self.nodes = np.linspace(a, b, nodes)
        probe = np.linspace(a, b, 8 * (nodes - 1) + 1)
        d1 = np.array([curve.derivative(t, 1) for t in probe])
        hh = K.hdot(d1, d1, ctx.h_signs)
        speed = np.sqrt(np.abs(hh))
        bad = np.flatnonzero(speed < speed_tol)
        if bad.size:
            raise NullSpeedPoint("speed vanishes or the tangent is null", s=float(probe[bad[0]]),
                                 quantity="N(xi')")
        flips = np.flatnonzero(np.sign(hh[1:]) != np.sign(hh[:-1]))
        if flips.size:
            raise NullSpeedPoint("tangent changes causal character", s=float(probe[flips[0]]),
                                 quantity="h(xi',xi')")
        self.eps = int(np.sign(hh[0]))
        pieces = [self._quad(self.nodes[i], self.nodes[i + 1]) for i in range(nodes - 1)]
        self.cumulative = np.concatenate([[0.0], np.cumsum(pieces)])
        self.origin = a if origin is None else float(origin)
        self._s_origin = self._raw(self.origin)
        ends = sorted(self.sigma(t) for t in (a, b))
        self.domain = (ends[0], ends[1])

    def speed(self, t: float) -> float:
        d1 = self.curve.derivative(t, 1)
        return float(np.sqrt(abs(K.hdot(d1, d1, self.ctx.h_signs))))

    def _quad(self, lo: float, hi: float) -> float:
        if hi == lo:
            return 0.0
        val, _ = integrate.quad(self.speed, lo, hi, epsabs=self.tol, epsrel=self.tol, limit=200)
        return val

    def _partial(self, lo: float, t: float) -> float:
        """Integral of the speed over [lo, t] inside one node interval.

        A fixed Gauss-Legendre rule keeps this a smooth function of t, which
        matters when positions are later differentiated numerically.
        """
        if t == lo:
            return 0.0
        half = 0.5 * (t - lo)
        pts = lo + half * (_GL_X + 1.0)
        d1 = np.array([self.curve.derivative(x, 1) for x in pts])
        speed = np.sqrt(np.abs(K.hdot(d1, d1, self.ctx.h_signs)))
        return float(half * np.dot(_GL_W, speed))

    def _raw(self, t: float) -> float:
        i = int(np.clip(np.searchsorted(self.nodes, t, side="right") - 1, 0, len(self.nodes) - 2))
        return float(self.cumulative[i] + self._partial(self.nodes[i], t))

    def sigma(self, t: float) -> float:
        return self.direction * (self._raw(t) - self._s_origin)

    def param_of(self, sigma: float) -> float:
        sigma = float(sigma)
        hit = self._cache.get(sigma)
        if hit is None:
            if len(self._cache) > 4096:
                self._cache.clear()
            hit = self._cache[sigma] = self._invert(sigma)
        return hit

    def _invert(self, sigma: float) -> float:
        raw = self.direction * sigma + self._s_origin
        total = self.cumulative[-1]
        slack = 1e-12 * max(1.0, total)
        if raw < -slack or raw > total + slack:
            raise OutOfDomain("arc length outside the reparameterized domain", s=sigma)
        raw = min(max(raw, 0.0), total)
        i = int(np.clip(np.searchsorted(self.cumulative, raw, side="right") - 1, 0, len(self.nodes) - 2))
        lo, hi = self.nodes[i], self.nodes[i + 1]
        base = self.cumulative[i]
        f = lambda t: base + self._partial(lo, t) - raw  # noqa: E731
        flo, fhi = f(lo), f(hi)
        if flo >= 0.0:
            return float(lo)
        if fhi <= 0.0:
            return float(hi)
        return float(optimize.brentq(f, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps))


def _unit_speed_derivatives(curve: CurveSpec, t: float, order: int, ctx: MetricContext,
                            eps: int, direction: int) -> np.ndarray:
    """Derivatives 1..order with respect to arc length, from t-derivatives.

    Uses d/dsigma = direction * u d/dt with u = (eps h(x', x'))^(-1/2),
    expanded as truncated Taylor series around t.
    """
    vals = [curve.derivative(t, 0)] + [curve.derivative(t, n) for n in range(1, order + 1)]
    p = S.from_derivatives(vals)
    dp = S.deriv(p)
    w = eps * S.mul(dp * ctx.h_signs, dp).sum(axis=1)
    u = S.power(w[:order], -0.5)
    out = []
    f = p
    for n in range(1, order + 1):
        f = S.mul(u, S.deriv(f), degree=order - n)
        out.append(f[0] * direction**n)
    return np.array(out)


def reparameterize_by_arclength(curve: CurveSpec, quadrature_tol: float = 1e-11,
                                ctx: MetricContext = DEFAULT_CONTEXT, origin: float | None = None,
                                direction: int = 1) -> CurveSpec:
    """Arc-length reparameterization.

    When the source has analytic derivatives, the result does too (chain rule
    through the parameter map); otherwise it is in finite-difference mode.
    """
    amap = ArcLengthMap(curve, ctx, quadrature_tol, origin, direction)

    def position(sig):
        return curve.at(amap.param_of(sig))

    derivs = None
    order = 4
    if curve.mode == ANALYTIC:
        order = min(4, curve.max_order)

        def derivs(sig, n):
            t = amap.param_of(sig)
            return _unit_speed_derivatives(curve, t, n, ctx, amap.eps, direction)[n - 1]

    step = None if curve.mode == ANALYTIC else (curve.fd_step or 1e-3 * (amap.domain[1] - amap.domain[0]))
    return CurveSpec(position, amap.domain, derivs, order, step, curve.name + "[arclength]", amap,
                     dict(curve.meta))


# ----------------------------------------------------------------------------
# Frenet apparatus


@dataclass(frozen=True)
class FrenetApparatus4:
    s: float
    T: SemiQuaternion
    N: SemiQuaternion
    B: SemiQuaternion
    E: SemiQuaternion
    kappa: float
    k: float
    third: float
    eps_T: int
    eps_N: int
    eps_t: int
    eps_n: int
    eps_b: int
    speed2: float = 1.0

    @property
    def signs(self) -> dict:
        return {"eps_T": self.eps_T, "eps_N": self.eps_N, "eps_t": self.eps_t,
                "eps_n": self.eps_n, "eps_b": self.eps_b}

    @property
    def r(self) -> float:
        """Torsion of the associated spatial curve recovered from ``third``.

        ``r = eps_T third + eps_t eps_T eps_N kappa``; the factor eps_T on the
        third curvature matters only for timelike tangents.
        """
        return self.eps_T * self.third + self.eps_t * self.eps_T * self.eps_N * self.kappa

    def frame(self) -> np.ndarray:
        return np.array([self.T, self.N, self.B, self.E], dtype=float)

    def gram(self, ctx: MetricContext = DEFAULT_CONTEXT) -> np.ndarray:
        F = self.frame()
        return (F * ctx.h_signs) @ F.T

    def expected_gram(self) -> np.ndarray:
        return np.diag([self.eps_T, self.eps_N, self.eps_n * self.eps_T, self.eps_b * self.eps_T]).astype(float)

    def orthonormality_defect(self, ctx: MetricContext = DEFAULT_CONTEXT) -> float:
        return float(np.max(np.abs(self.gram(ctx) - self.expected_gram())))

    def det(self) -> float:
        return float(np.linalg.det(self.frame()))


def _normalize(x: np.ndarray, ctx: MetricContext) -> tuple[np.ndarray, float, float]:
    hh = float(K.hdot(x, x, ctx.h_signs))
    n = np.sqrt(abs(hh))
    return x / n, n, hh


def _is_null(x: np.ndarray, hh: float, ctx: MetricContext) -> bool:
    return abs(hh) <= ctx.null_tol * float(np.max(np.abs(x))) ** 2


def apparatus_from_derivatives(d: np.ndarray, ctx: MetricContext = DEFAULT_CONTEXT, s: float = 0.0,
                               unit_tol: float = 1e-7, degenerate_tol: float = 1e-9) -> FrenetApparatus4:
    """Frenet apparatus from the first four arc-length derivatives ``d[0..3]``.

    The frame counts as degenerate when N(T ^ N ^ xi''') is below
    ``degenerate_tol`` relative to xi'''.
    """
    d1, d2, d3, d4 = (np.asarray(x, dtype=float) for x in d)
    hs = ctx.h_signs
    hT = float(K.hdot(d1, d1, hs))
    if abs(hT) <= ctx.null_tol * max(1.0, float(np.max(np.abs(d1)))) ** 2:
        raise NullSpeedPoint("the tangent xi' is null", s=s, quantity="N(xi')")
    if abs(np.sqrt(abs(hT)) - 1.0) > unit_tol:
        raise NotUnitSpeed(f"N(xi') = {np.sqrt(abs(hT)):.12g} is not 1", s=s, quantity="N(xi')")
    eps_T = 1 if hT > 0 else -1
    T = d1
    h2 = float(K.hdot(d2, d2, hs))
    scale = max(float(np.max(np.abs(d2))), 1e-300)
    if not np.any(d2) or abs(h2) <= ctx.null_tol * max(scale, 1.0) ** 2:
        raise NullCurvatureVector("xi'' is null, the principal normal is undefined", s=s, quantity="N(xi'')")
    nu = np.sqrt(abs(h2))
    eps_N = 1 if h2 > 0 else -1
    N = d2 / nu
    kappa = eps_N * nu
    X = K.wedge4(T, N, d3, hs, 1.0)
    hX = float(K.hdot(X, X, hs))
    tiny = degenerate_tol * max(1.0, float(np.max(np.abs(d3))))
    if np.sqrt(abs(hX)) <= tiny or _is_null(X, hX, ctx):
        raise DegenerateFrame("wedge of T, N, xi''' is null, E is undefined", s=s, quantity="N(T^N^xi''')")
    E0 = X / np.sqrt(abs(hX))
    B0, _, _ = _normalize(K.wedge4(E0, T, N, hs, 1.0), ctx)
    proj = eps_T * float(K.hdot(d3, B0, hs))
    B = B0 if proj >= 0 else -B0
    eps_n = eps_T * (1 if K.hdot(B, B, hs) > 0 else -1)
    k = eps_T * float(K.hdot(d3, B, hs)) / nu
    E = E0 if np.linalg.det(np.array([T, N, B, E0])) * ctx.orientation > 0 else -E0
    eps_b = eps_T * (1 if K.hdot(E, E, hs) > 0 else -1)
    eps_t = eps_T * eps_N
    third = eps_b * eps_T * float(K.hdot(d4, E, hs)) / (k * nu)
    return FrenetApparatus4(
        s=float(s), T=SemiQuaternion.from_array(T), N=SemiQuaternion.from_array(N),
        B=SemiQuaternion.from_array(B), E=SemiQuaternion.from_array(E),
        kappa=float(kappa), k=float(k), third=float(third),
        eps_T=eps_T, eps_N=eps_N, eps_t=eps_t, eps_n=eps_n, eps_b=eps_b, speed2=hT,
    )


class PartialFrame(NamedTuple):
    """Tangent and principal normal only, for curves whose full frame degenerates."""

    s: float
    T: np.ndarray
    N: np.ndarray
    kappa: float
    eps_T: int
    eps_N: int


def frenet_partial(curve: CurveSpec, s: float, ctx: MetricContext = DEFAULT_CONTEXT,
                   unit_tol: float | None = None) -> PartialFrame:
    if unit_tol is None:
        unit_tol = FRAME_TOL[curve.mode]
    d1, d2 = curve.derivative(s, 1), curve.derivative(s, 2)
    hs = ctx.h_signs
    hT = float(K.hdot(d1, d1, hs))
    if abs(hT) <= ctx.null_tol * max(1.0, float(np.max(np.abs(d1)))) ** 2:
        raise NullSpeedPoint("the tangent xi' is null", s=s, quantity="N(xi')")
    if abs(np.sqrt(abs(hT)) - 1.0) > unit_tol:
        raise NotUnitSpeed(f"N(xi') = {np.sqrt(abs(hT)):.12g} is not 1", s=s, quantity="N(xi')")
    h2 = float(K.hdot(d2, d2, hs))
    if not np.any(d2) or abs(h2) <= ctx.null_tol * max(float(np.max(np.abs(d2))), 1.0) ** 2:
        raise NullCurvatureVector("xi'' is null, the principal normal is undefined", s=s, quantity="N(xi'')")
    eps_N = 1 if h2 > 0 else -1
    nu = np.sqrt(abs(h2))
    return PartialFrame(float(s), d1, d2 / nu, eps_N * nu, 1 if hT > 0 else -1, eps_N)


def frenet_apparatus(curve: CurveSpec, s: float, ctx: MetricContext = DEFAULT_CONTEXT,
                     unit_tol: float | None = None, degenerate_tol: float | None = None) -> FrenetApparatus4:
    if unit_tol is None:
        unit_tol = FRAME_TOL[curve.mode]
    if degenerate_tol is None:
        degenerate_tol = DEGENERATE_TOL[curve.mode]
    return apparatus_from_derivatives(_deriv_stack(curve, s, 4), ctx, s, unit_tol, degenerate_tol)


def frenet_rhs(app: FrenetApparatus4) -> np.ndarray:
    """Right-hand sides of the Frenet equations for T', N', B', E'."""
    T, N, B, E = app.frame()
    return np.array([
        app.eps_N * app.kappa * N,
        -app.eps_t * app.eps_N * app.kappa * T + app.eps_n * app.k * B,
        -app.eps_t * app.k * N + app.eps_n * app.third * E,
        -app.eps_b * app.third * B,
    ])


class OdeResidual(NamedTuple):
    T: float
    N: float
    B: float
    E: float

    def max(self) -> float:
        return max(self)


def frenet_ode_residual(curve: CurveSpec, s: float, ctx: MetricContext = DEFAULT_CONTEXT,
                        h_step: float = 1e-3, scale_step: bool = False) -> OdeResidual:
    """Euclidean norms of (numerical frame derivative) - (Frenet right-hand side).

    Frame derivatives use the 5-point, fourth-order central stencil. With
    ``scale_step`` the step is divided by max(1, |kappa|, k, |third|), the
    local rotation rate of the frame, so sharply turning stretches are
    resolved as finely as gentle ones.
    """
    offsets, w = central_weights(1, half_width=2)
    app = frenet_apparatus(curve, s, ctx)
    if scale_step:
        h_step = h_step / max(1.0, abs(app.kappa), abs(app.k), abs(app.third))
    frames = {}
    for j in offsets:
        if w[j + 2] != 0.0:
            frames[j] = frenet_apparatus(curve, s + j * h_step, ctx).frame()
    dF = sum(w[j + 2] * (frames[j] - app.frame()) for j in frames) / h_step
    res = np.linalg.norm(dF - frenet_rhs(app), axis=1)
    return OdeResidual(*(float(x) for x in res))


class CurvatureDerivatives(NamedTuple):
    dkappa: float
    dk: float
    dthird: float
    ddkappa: float
    ddk: float
    ddthird: float


def curvature_derivatives(curve: CurveSpec, s: float, ctx: MetricContext = DEFAULT_CONTEXT,
                          h: float = 1e-2, half_width: int = FOOTPRINT) -> CurvatureDerivatives:
    """First and second derivatives of (kappa, k, third) by central differences."""
    def curv(x):
        a = frenet_apparatus(curve, x, ctx)
        return np.array([a.kappa, a.k, a.third])

    d1 = central_derivative(curv, s, h, 1, half_width)
    d2 = central_derivative(curv, s, h, 2, half_width)
    return CurvatureDerivatives(*(float(x) for x in np.concatenate([d1, d2])))
