"""Involutes of unit-speed curves and the transfer of Frenet data to them.

For a unit-speed curve xi and a constant c the involute is

    phi(s) = xi(s) + (c - s) T(s),      phi'(s) = (c - s) kappa eps_N N(s),

so its speed is |sigma| with sigma = (c - s) kappa.  The involute is always
parameterized by forward arc length here (s* increases with s), which makes
``T_phi = sign(sigma) eps_N N``.

Transfer formulas, with Lambda = k^2 + eps_n kappa^2 and Delta = kappa k' - kappa' k:

    N_phi  ~ V1 = -eps_t kappa T + eps_N eps_n k B
    B_phi  ~ P  = beta W + eps_N k tau E,      W = eps_N k T + eps_t kappa B
    E_phi  ~ Q  = eps_N eps_b k tau W - eps_t eps_N Delta E
    kappa_phi = eps_Nphi sqrt|Lambda| / |sigma|
    k_star    = sqrt|M| / (|Lambda| |sigma|),   M = eps_T (Lambda k^2 tau^2 + eps_b Delta^2)

where tau is the third curvature of xi and beta = eps_t eps_N Delta / Lambda.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import optimize

from . import kernels as K
from .curvekit import (
    ANALYTIC,
    CurvatureDerivatives,
    CurveSpec,
    FrenetApparatus4,
    PartialFrame,
    curvature_derivatives,
    frenet_apparatus,
    frenet_partial,
    reparameterize_by_arclength,
)
from .errors import DegenerateTransfer, NotWCurve, SingularInvolutePoint
from .semialgebra import DEFAULT_CONTEXT, MetricContext, SemiQuaternion

DEGENERACY_TOL = 1e-9


def _sgn(x: float) -> int:
    return 1 if x >= 0 else -1


@dataclass(eq=False)
class InvolutePair:
    evolute: CurveSpec
    involute: CurveSpec
    c: float
    singular_set: list[float]
    ctx: MetricContext = DEFAULT_CONTEXT
    guard: float = 0.0
    speed_floor: float = 1e-6
    _segments: dict = field(default_factory=dict, repr=False)

    def sigma(self, s: float) -> float:
        """Signed speed law ds*/ds = (c - s) kappa."""
        return (self.c - s) * frenet_partial(self.evolute, s, self.ctx).kappa

    def is_regular(self, s: float) -> bool:
        if abs(s - self.c) < self.guard:
            return False
        if any(abs(s - z) < self.guard for z in self.singular_set):
            return False
        try:
            return abs(self.sigma(s)) >= self.speed_floor
        except ValueError:
            return False

    def check_regular(self, s: float):
        if not self.is_regular(s):
            raise SingularInvolutePoint("involute is singular here (ds*/ds = (c-s) kappa vanishes)",
                                        s=s, quantity="(c-s)*kappa")

    def regular_segments(self) -> list[tuple[float, float]]:
        a, b = self.evolute.effective_domain()
        cuts = sorted(z for z in set(self.singular_set) | {self.c} if a - self.guard < z < b + self.guard)
        segs, lo = [], a
        for z in cuts:
            hi = z - self.guard
            if hi > lo:
                segs.append((lo, hi))
            lo = max(lo, z + self.guard)
        if b > lo:
            segs.append((lo, b))
        return segs

    def arclength_curve(self, s: float) -> CurveSpec:
        """Forward arc-length reparameterization of the regular segment holding s."""
        self.check_regular(s)
        for seg in self.regular_segments():
            if seg[0] <= s <= seg[1]:
                break
        else:
            raise SingularInvolutePoint("no regular segment contains this parameter", s=s)
        if seg not in self._segments:
            self._segments[seg] = reparameterize_by_arclength(self.involute.restrict(*seg), ctx=self.ctx)
        return self._segments[seg]

    def s_star(self, s: float) -> float:
        return self.arclength_curve(s).arclength.sigma(s)


def _involute_curve(xi: CurveSpec, c: float) -> CurveSpec:
    def position(s):
        return xi.at(s) + (c - s) * xi.derivative(s, 1)

    derivs = None
    if xi.mode == ANALYTIC and xi.max_order >= 5:
        def derivs(s, n):
            return (1 - n) * xi.derivative(s, n) + (c - s) * xi.derivative(s, n + 1)

    return CurveSpec(position, xi.domain, derivs, max(1, xi.max_order - 1) if derivs else 4,
                     xi.fd_step, f"involute({xi.name}, c={c:g})", meta={"c": c})


def _find_singular(xi: CurveSpec, c: float, ctx: MetricContext, samples: int) -> list[float]:
    a, b = xi.effective_domain()

    def g(s):
        d2 = xi.derivative(s, 2)
        return (c - s) * float(K.hdot(d2, d2, ctx.h_signs))

    grid = np.linspace(a, b, samples)
    vals = np.array([g(s) for s in grid])
    scale = max(float(np.max(np.abs(vals))), 1e-300)
    out = []
    for i in range(len(grid) - 1):
        if vals[i] == 0.0 or abs(vals[i]) < 1e-14 * scale:
            out.append(float(grid[i]))
        elif vals[i] * vals[i + 1] < 0:
            out.append(float(optimize.brentq(g, grid[i], grid[i + 1], xtol=1e-14)))
    if abs(vals[-1]) < 1e-14 * scale:
        out.append(float(grid[-1]))
    if a <= c <= b and not any(abs(z - c) < 1e-9 for z in out):
        out.append(float(c))
    return sorted(out)


def make_involute(xi: CurveSpec, c: float, ctx: MetricContext = DEFAULT_CONTEXT,
                  guard: float | None = None, samples: int = 2001) -> InvolutePair:
    """Involute phi = xi + (c - s) T of a unit-speed curve.

    Analytic derivatives are inherited when xi provides order 5.  The singular
    set collects zeros and sign changes of (c - s) h(xi'', xi''), which
    include s = c whenever c lies in the domain.
    """
    if guard is None:
        guard = 1e-2 * xi.length
    phi = _involute_curve(xi, float(c))
    return InvolutePair(xi, phi, float(c), _find_singular(xi, float(c), ctx, samples), ctx, guard)


def involute_distance(pair: InvolutePair, s: float) -> float:
    d = pair.involute.at(s) - pair.evolute.at(s)
    return float(np.sqrt(abs(K.hdot(d, d, pair.ctx.h_signs))))


class PairCheck(NamedTuple):
    is_pair: bool
    residual: float
    samples_used: int


def _unit_tangent(curve: CurveSpec, s: float, ctx: MetricContext):
    d1 = curve.derivative(s, 1)
    n = math.sqrt(abs(float(K.hdot(d1, d1, ctx.h_signs))))
    return None if n < 1e-12 else d1 / n


def is_involute_pair(phi: CurveSpec, xi: CurveSpec, samples: int = 21, tol: float = 1e-8,
                     ctx: MetricContext = DEFAULT_CONTEXT, correspondence=None,
                     grid=None) -> PairCheck:
    """Check the defining tangency h(T_phi(s*), T_xi(s)) = 0 on samples.

    ``correspondence`` maps an evolute parameter s to the involute parameter
    s*; by default it is taken from phi's arc-length map when phi is an
    arc-length reparameterization, and the identity otherwise.  Samples where
    phi is stationary are skipped.
    """
    if correspondence is None:
        correspondence = phi.arclength.sigma if phi.arclength is not None else (lambda s: s)
    if grid is None:
        lo, hi = xi.effective_domain()
        if phi.arclength is not None:
            lo, hi = max(lo, phi.arclength.t_domain[0]), min(hi, phi.arclength.t_domain[1])
        grid = np.linspace(lo, hi, samples)
    worst, used = 0.0, 0
    for s in grid:
        Tp = _unit_tangent(phi, correspondence(s), ctx)
        if Tp is None:
            continue
        Tx = xi.derivative(s, 1)
        worst = max(worst, abs(float(K.hdot(Tp, Tx, ctx.h_signs))))
        used += 1
    return PairCheck(used > 0 and worst <= tol, worst, used)


def pair_tangency(pair: InvolutePair, s: float) -> float:
    pair.check_regular(s)
    Tp = _unit_tangent(pair.involute, s, pair.ctx)
    return abs(float(K.hdot(Tp, pair.evolute.derivative(s, 1), pair.ctx.h_signs)))


def involute_apparatus(pair: InvolutePair, s: float) -> FrenetApparatus4:
    """Frenet apparatus of phi computed directly on its arc-length reparameterization.

    The returned ``s`` field is the arc length s* of phi at evolute parameter s.
    """
    rep = pair.arclength_curve(s)
    return frenet_apparatus(rep, rep.arclength.sigma(s), pair.ctx)


def involute_partial(pair: InvolutePair, s: float) -> PartialFrame:
    rep = pair.arclength_curve(s)
    return frenet_partial(rep, rep.arclength.sigma(s), pair.ctx)


class SpeedCheck(NamedTuple):
    fd_speed: float
    predicted: float
    residual: float
    reversed: bool


def speed_law(pair: InvolutePair, s: float, h: float = 1e-4) -> SpeedCheck:
    """Finite-difference ds*/ds against |(c - s) kappa|.

    ``reversed`` flags where the signed law (c - s) kappa is negative, i.e.
    where forward arc length runs against the printed sign.
    """
    amap = pair.arclength_curve(s).arclength
    lo, hi = amap.t_domain
    h = min(h, 0.25 * (hi - lo))
    if s - h < lo:
        fd = (-3 * amap.sigma(s) + 4 * amap.sigma(s + h) - amap.sigma(s + 2 * h)) / (2 * h)
    elif s + h > hi:
        fd = (3 * amap.sigma(s) - 4 * amap.sigma(s - h) + amap.sigma(s - 2 * h)) / (2 * h)
    else:
        fd = (amap.sigma(s + h) - amap.sigma(s - h)) / (2 * h)
    sig = pair.sigma(s)
    return SpeedCheck(fd, abs(sig), abs(fd - abs(sig)), sig < 0)


# ----------------------------------------------------------------------------
# transfer of frames and curvatures


@dataclass(frozen=True)
class TransferredApparatus:
    s: float
    T: SemiQuaternion
    N: SemiQuaternion
    B: SemiQuaternion
    E: SemiQuaternion
    kappa: float
    k_star: float
    third_star: float
    eta_used: int
    eps_T: int
    eps_N: int
    eps_t: int
    eps_n: int
    eps_b: int
    printed_kappa_sign: int = 0

    def frame(self) -> np.ndarray:
        return np.array([self.T, self.N, self.B, self.E], dtype=float)

    def as_apparatus(self) -> FrenetApparatus4:
        return FrenetApparatus4(self.s, self.T, self.N, self.B, self.E, self.kappa, self.k_star,
                                self.third_star, self.eps_T, self.eps_N, self.eps_t, self.eps_n, self.eps_b)

    def orthonormality_defect(self, ctx: MetricContext = DEFAULT_CONTEXT) -> float:
        return self.as_apparatus().orthonormality_defect(ctx)


def _sigma_factor(app: FrenetApparatus4, c: float | None) -> tuple[float, int]:
    if c is None:
        return 1.0, 1
    sig = (c - app.s) * app.kappa
    if abs(sig) < 1e-12:
        raise SingularInvolutePoint("(c - s) kappa vanishes", s=app.s, quantity="(c-s)*kappa")
    return abs(sig), _sgn(sig)


def _unit(x: np.ndarray, ctx: MetricContext) -> tuple[np.ndarray, int]:
    hh = float(K.hdot(x, x, ctx.h_signs))
    return x / math.sqrt(abs(hh)), _sgn(hh)


def _common(app: FrenetApparatus4, ctx: MetricContext, tol: float):
    T, N, B, E = app.frame()
    kap, k = app.kappa, app.k
    V1 = -app.eps_t * kap * T + app.eps_N * app.eps_n * k * B
    Lam = k * k + app.eps_n * kap * kap
    if abs(Lam) <= tol:
        raise DegenerateTransfer("k^2 + eps_n kappa^2 vanishes, N_phi is undefined", s=app.s,
                                 quantity="Lambda")
    W = app.eps_N * k * T + app.eps_t * kap * B
    return T, N, B, E, V1, Lam, W


def _signs(app, T_phi, N_phi, B_phi, E_phi, ctx):
    hs = ctx.h_signs
    eT = _sgn(float(K.hdot(T_phi, T_phi, hs)))
    eN = _sgn(float(K.hdot(N_phi, N_phi, hs)))
    en = eT * _sgn(float(K.hdot(B_phi, B_phi, hs)))
    eb = eT * _sgn(float(K.hdot(E_phi, E_phi, hs)))
    return eT, eN, eT * eN, en, eb


def transfer_frame(app: FrenetApparatus4, curvature_derivs, ctx: MetricContext = DEFAULT_CONTEXT,
                   c: float | None = None, tol: float = DEGENERACY_TOL) -> TransferredApparatus:
    """Frame and curvatures of the involute predicted from the evolute's data.

    ``curvature_derivs`` holds (kappa', k', tau') and optionally
    (kappa'', k''); the second derivatives are needed for the third curvature.
    With ``c`` given the curvatures carry the ds/ds* factor 1/|(c-s) kappa|
    and the orientation of forward arc length; without it the per-parameter
    form (sigma = 1) is returned.
    """
    cd = tuple(curvature_derivs)
    dkap, dk, dtau = cd[0], cd[1], cd[2]
    T, N, B, E, V1, Lam, W = _common(app, ctx, tol)
    kap, k, tau = app.kappa, app.k, app.third
    eT, eN, et, en, eb = app.eps_T, app.eps_N, app.eps_t, app.eps_n, app.eps_b
    absig, rho = _sigma_factor(app, c)
    Delta = kap * dk - dkap * k
    M = eT * (Lam * k * k * tau * tau + eb * Delta * Delta)
    scale = max(1.0, Lam * Lam * max(k * k * tau * tau, Delta * Delta))
    if abs(M) <= tol * scale:
        raise DegenerateTransfer("B_phi radicand vanishes (w-curve limit or planar involute)",
                                 s=app.s, quantity="M")
    beta = et * eN * Delta / Lam
    P = beta * W + eN * k * tau * E
    Q = eN * eb * k * tau * W - et * eN * Delta * E

    T_phi = rho * eN * N
    N_phi = rho * V1 / math.sqrt(abs(Lam))
    # lambda: make k_star >= 0, judged from the s-derivative of V1
    dV1 = (-et * dkap * T - et * eN * kap * kap * N + eN * en * dk * B
           - eN * en * et * k * k * N + eN * k * tau * E)
    P_unit, _ = _unit(P, ctx)
    epsTphi = _sgn(float(K.hdot(T_phi, T_phi, ctx.h_signs)))
    lam = _sgn(epsTphi * rho * float(K.hdot(dV1, P_unit, ctx.h_signs)))
    B_phi = lam * P_unit
    Q_unit, _ = _unit(Q, ctx)
    mu = _sgn(np.linalg.det(np.array([T_phi, N_phi, B_phi, Q_unit])) * ctx.orientation)
    E_phi = mu * Q_unit
    eTp, eNp, etp, enp, ebp = _signs(app, T_phi, N_phi, B_phi, E_phi, ctx)

    kappa_phi = eNp * math.sqrt(abs(Lam)) / absig
    k_star = math.sqrt(abs(M)) / (abs(Lam) * absig)
    third_star = float("nan")
    if len(cd) >= 5:
        ddkap, ddk = cd[3], cd[4]
        H = (et * eT * eb * (-k * tau * (ddkap * k - kap * ddk) + (dkap * k - kap * dk) * (2 * dk * tau + k * dtau))
             - et * en * eT * kap * k * k * tau ** 3)
        third_star = enp * ebp * eTp * lam * mu * H * math.sqrt(abs(Lam)) / (absig * abs(M))
    return TransferredApparatus(
        app.s, *(SemiQuaternion.from_array(x) for x in (T_phi, N_phi, B_phi, E_phi)),
        kappa_phi, k_star, third_star, mu, eTp, eNp, etp, enp, ebp, printed_kappa_sign=en * eN,
    )


def transfer_curvatures(app: FrenetApparatus4, curvature_derivs, ctx: MetricContext = DEFAULT_CONTEXT,
                        c: float | None = None, tol: float = DEGENERACY_TOL) -> tuple[float, float, float]:
    """(kappa_phi, k_star, third_star); needs (kappa', k', tau', kappa'', k'')."""
    if len(tuple(curvature_derivs)) < 5:
        raise ValueError("curvature_derivs must hold kappa', k', tau', kappa'', k''")
    t = transfer_frame(app, curvature_derivs, ctx, c, tol)
    return t.kappa, t.k_star, t.third_star


def w_curve_transfer(app: FrenetApparatus4, ctx: MetricContext = DEFAULT_CONTEXT,
                     curvature_derivs=None, c: float | None = None, tol: float = 1e-6) -> TransferredApparatus:
    """Transfer for curves with constant curvatures.

    B_phi is along E, E_phi along W = eps_N k T + eps_t kappa B.  The general
    formulas reduce to 0/0 here when the third curvature also vanishes.
    """
    if curvature_derivs is not None:
        cd = tuple(curvature_derivs)
        if abs(cd[0]) > tol or abs(cd[1]) > tol:
            raise NotWCurve(f"kappa' = {cd[0]:.3g}, k' = {cd[1]:.3g} are not zero", s=app.s,
                            quantity="curvature derivatives")
    T, N, B, E, V1, Lam, W = _common(app, ctx, DEGENERACY_TOL)
    kap, k, tau = app.kappa, app.k, app.third
    eT, eN, et, en, eb = app.eps_T, app.eps_N, app.eps_t, app.eps_n, app.eps_b
    absig, rho = _sigma_factor(app, c)
    T_phi = rho * eN * N
    N_phi = rho * V1 / math.sqrt(abs(Lam))
    epsTphi = _sgn(float(K.hdot(T_phi, T_phi, ctx.h_signs)))
    lam = _sgn(rho * epsTphi * eN * eb * eT * k * tau) if k * tau != 0 else 1
    B_phi = lam * E
    W_unit, _ = _unit(W, ctx)
    mu = _sgn(np.linalg.det(np.array([T_phi, N_phi, B_phi, W_unit])) * ctx.orientation)
    E_phi = mu * W_unit
    eTp, eNp, etp, enp, ebp = _signs(app, T_phi, N_phi, B_phi, E_phi, ctx)
    kappa_phi = eNp * math.sqrt(abs(Lam)) / absig
    k_star = abs(k * tau) / (math.sqrt(abs(Lam)) * absig)
    third_star = enp * ebp * eTp * (-lam * mu * eb * tau * et * kap * en * eT) / (absig * math.sqrt(abs(Lam)))
    return TransferredApparatus(
        app.s, *(SemiQuaternion.from_array(x) for x in (T_phi, N_phi, B_phi, E_phi)),
        kappa_phi, k_star, third_star + 0.0, mu, eTp, eNp, etp, enp, ebp, printed_kappa_sign=en * eN,
    )


def evolute_curvature_derivatives(pair_or_curve, s: float, ctx: MetricContext = DEFAULT_CONTEXT,
                                  h: float = 1e-2) -> CurvatureDerivatives:
    curve = pair_or_curve.evolute if isinstance(pair_or_curve, InvolutePair) else pair_or_curve
    return curvature_derivatives(curve, s, ctx, h)
