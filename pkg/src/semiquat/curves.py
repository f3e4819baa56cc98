"""Builtin curves: the worked example, a random unit-speed family, and CSV tables."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np
from scipy.interpolate import make_interp_spline

from .curvekit import CurveSpec, frenet_apparatus
from .errors import ConfigError
from .semialgebra import DEFAULT_CONTEXT, MetricContext

SQRT2 = math.sqrt(2.0)


def example31(domain=(-3.0, 3.0)) -> CurveSpec:
    """xi(s) = (cosh s, sqrt2 s, sinh s, sqrt2), unit speed and timelike."""

    def position(s):
        return np.array([math.cosh(s), SQRT2 * s, math.sinh(s), SQRT2])

    def derivs(s, n):
        ch, sh = math.cosh(s), math.sinh(s)
        if n % 2:
            return np.array([sh, SQRT2 if n == 1 else 0.0, ch, 0.0])
        return np.array([ch, 0.0, sh, 0.0])

    return CurveSpec(position, tuple(domain), derivs, max_order=12, name="example31")


class ExpTrigCurve:
    """Unit-speed curve whose tangent is a hyperbolic-trigonometric unit vector.

    For a spacelike tangent the components are
    ``(sinh rho cos th, sinh rho sin th, cosh rho cos ps, cosh rho sin ps)``
    placed so that the sinh factors sit on the negative metric axes (a
    timelike tangent swaps the roles).  With rho, th, ps linear in s every
    component is a sum of ``Re(C exp(lam s))``, so derivatives and the
    position integral are exact to all orders.
    """

    def __init__(self, rho, theta, psi, causal: str = "spacelike", origin=None,
                 ctx: MetricContext = DEFAULT_CONTEXT):
        (r0, r1), (t0, t1), (p0, p1) = rho, theta, psi
        if r1 == 0.0:
            raise ValueError("rho rate must be nonzero")
        neg = [i for i in range(4) if ctx.ambient_signs[i] < 0]
        pos = [i for i in range(4) if ctx.ambient_signs[i] > 0]
        if causal == "spacelike":
            sinh_axes, cosh_axes = neg, pos
        elif causal == "timelike":
            sinh_axes, cosh_axes = pos, neg
        else:
            raise ValueError("causal must be 'spacelike' or 'timelike'")
        C = np.zeros((4, 2), dtype=complex)
        lam = np.zeros((4, 2), dtype=complex)
        # sinh(rho) e^{i th} = (e^{rho} - e^{-rho})/2 e^{i th}; cos -> Re, sin -> Re(-i .)
        for axes, ang0, ang1, sgn in ((sinh_axes, t0, t1, -1.0), (cosh_axes, p0, p1, 1.0)):
            for which, ax in enumerate(axes):
                rot = 1.0 if which == 0 else -1j
                C[ax, 0] = 0.5 * math.exp(r0) * np.exp(1j * ang0) * rot
                C[ax, 1] = sgn * 0.5 * math.exp(-r0) * np.exp(1j * ang0) * rot
                lam[ax, 0] = r1 + 1j * ang1
                lam[ax, 1] = -r1 + 1j * ang1
        self.C, self.lam = C, lam
        self.causal = causal
        self.params = {"rho": list(rho), "theta": list(theta), "psi": list(psi), "causal": causal}
        self.origin = np.zeros(4) if origin is None else np.asarray(origin, dtype=float)

    def tangent(self, s):
        return np.real(self.C * np.exp(self.lam * s)).sum(axis=1)

    def position(self, s):
        return self.origin + np.real(self.C / self.lam * (np.exp(self.lam * s) - 1.0)).sum(axis=1)

    def derivative(self, s, n):
        return np.real(self.C * self.lam ** (n - 1) * np.exp(self.lam * s)).sum(axis=1)

    def spec(self, domain=(-1.0, 1.0), name="exptrig") -> CurveSpec:
        return CurveSpec(self.position, tuple(domain), self.derivative, max_order=12, name=name,
                         meta={"family": "exptrig", **self.params})


def random_exptrig(rng: np.random.Generator, causal: str | None = None,
                   ctx: MetricContext = DEFAULT_CONTEXT) -> ExpTrigCurve:
    if causal is None:
        causal = "spacelike" if rng.random() < 0.5 else "timelike"
    r1 = rng.uniform(0.25, 0.9) * rng.choice([-1.0, 1.0])
    rho = (rng.uniform(-0.6, 0.6), r1)
    theta = (rng.uniform(0, 2 * np.pi), rng.uniform(-1.5, 1.5))
    psi = (rng.uniform(0, 2 * np.pi), rng.uniform(-1.5, 1.5))
    return ExpTrigCurve(rho, theta, psi, causal, rng.normal(size=4), ctx)


def fuzz_family(count: int, seed: int = 0, domain=(-1.0, 1.0), ctx: MetricContext = DEFAULT_CONTEXT,
                accept=None, samples: int = 33, min_curvature: float = 0.05, max_curvature: float = 20.0,
                max_draws: int = 10_000) -> list[CurveSpec]:
    """``count`` non-degenerate random unit-speed curves.

    A draw is rejected when, on a sample grid, kappa or k gets close to zero
    or exceeds ``max_curvature``, the causal signature of the frame changes,
    the apparatus fails, or ``accept(curve)`` is false.
    """
    rng = np.random.default_rng(seed)
    out = []
    for i in range(max_draws):
        if len(out) == count:
            break
        spec = random_exptrig(rng, ctx=ctx).spec(domain, name=f"exptrig[{seed}:{i}]")
        try:
            apps = [frenet_apparatus(spec, s, ctx) for s in np.linspace(*domain, samples)]
        except ValueError:
            continue
        if min(min(abs(a.kappa), abs(a.k)) for a in apps) < min_curvature:
            continue
        if len({tuple(a.signs.values()) for a in apps}) != 1 or max(max(abs(a.kappa), abs(a.k)) for a in apps) > max_curvature:
            continue
        if accept is not None and not accept(spec):
            continue
        out.append(spec)
    if len(out) < count:
        raise RuntimeError(f"only {len(out)} of {count} acceptable curves after {max_draws} draws")
    return out


# ----------------------------------------------------------------------------
# CSV tables

CSV_HEADER = ["s", "q1", "q2", "q3", "q4"]


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def load_csv_curve(path, degree: int = 7, name: str | None = None) -> CurveSpec:
    """Curve interpolating a table with header ``s,q1,q2,q3,q4``.

    Each component is an interpolating spline of the given degree; derivatives
    are the exact spline derivatives.
    """
    path = Path(path)
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ConfigError(f"cannot read curve table {path}: {exc}") from exc
    if not rows or [c.strip() for c in rows[0]] != CSV_HEADER:
        raise ConfigError(f"{path}: header must be {','.join(CSV_HEADER)}")
    try:
        data = np.array([[float(x) for x in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"{path}: non-numeric entry ({exc})") from exc
    if data.ndim != 2 or data.shape[1] != 5:
        raise ConfigError(f"{path}: every row needs 5 columns")
    if len(data) < degree + 1:
        raise ConfigError(f"{path}: need at least {degree + 1} rows for degree-{degree} splines")
    s = data[:, 0]
    if np.any(np.diff(s) <= 0):
        raise ConfigError(f"{path}: s column must be strictly increasing")
    if not np.all(np.isfinite(data)):
        raise ConfigError(f"{path}: non-finite entries")
    spline = make_interp_spline(s, data[:, 1:], k=degree)
    dsplines = [spline] + [spline.derivative(n) for n in range(1, degree + 1)]

    def position(x):
        return dsplines[0](x)

    def derivs(x, n):
        if n > degree:
            return np.zeros(4)
        return dsplines[n](x)

    return CurveSpec(position, (float(s[0]), float(s[-1])), derivs, max_order=12,
                     name=name or path.stem, meta={"source": str(path), "degree": degree})


def write_rows(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([v if isinstance(v, str) else fmt(v) for v in r])


def export_csv_curve(curve: CurveSpec, grid, path):
    write_rows(path, CSV_HEADER, ([s, *curve.at(s)] for s in grid))
