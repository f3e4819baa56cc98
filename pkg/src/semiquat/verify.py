"""Verification suites behind ``semiquat verify`` and the table builders of the CLI."""
from __future__ import annotations

import math

import numpy as np

from . import kernels as K
from .config import RunConfig
from .curvekit import (
    CurveSpec,
    curvature_derivatives,
    frenet_apparatus,
    frenet_ode_residual,
)
from .curves import example31, fuzz_family, load_csv_curve
from .errors import ConfigError, DegenerateFrame, DegenerateTransfer, SemiQuatError
from .involute import (
    InvolutePair,
    involute_apparatus,
    involute_distance,
    involute_partial,
    make_involute,
    pair_tangency,
    speed_law,
    transfer_frame,
    w_curve_transfer,
)
from .spatial3 import (
    associated_curve,
    check_theorem35,
    example_alpha,
    involute_associated_curve,
    spatial_frenet,
)

SQRT2 = math.sqrt(2.0)

# room the verification checks need around each sample (curvature derivative stencils)
VERIFY_MARGIN = 0.05


def build_curve(cfg: RunConfig, margin: float = 0.0) -> CurveSpec:
    """Curve named by the config; the grid must sit ``margin`` inside its usable domain."""
    spec = cfg.curve
    if "csv" in spec:
        curve = load_csv_curve(spec["csv"], int(spec.get("degree", 7)))
    elif spec["name"] == "example31":
        curve = example31(tuple(spec.get("domain", (-3.0, 3.0))))
    else:
        index = int(spec.get("index", 0))
        curve = fuzz_family(index + 1, int(spec.get("seed", 0)), tuple(spec.get("domain", (-1.5, 1.5))),
                            cfg.metric)[index]
    if cfg.fd_step is not None:
        curve = curve.with_fd(cfg.fd_step)
    a, b, _ = cfg.sample_grid
    lo, hi = curve.effective_domain()
    lo, hi = lo + margin, hi - margin
    if a < lo - 1e-12 or b > hi + 1e-12:
        raise ConfigError(f"sample grid [{a}, {b}] leaves the usable curve domain [{lo:.6g}, {hi:.6g}]")
    return curve


def is_example(cfg: RunConfig) -> bool:
    return cfg.curve.get("name") == "example31" and "csv" not in cfg.curve


def build_pair(cfg: RunConfig, curve: CurveSpec | None = None) -> InvolutePair:
    curve = build_curve(cfg) if curve is None else curve
    return make_involute(curve, cfg.c, cfg.metric, guard=cfg.guard)


def signed_gap(a, b) -> float:
    """Distance between two vectors modulo an overall sign."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(min(np.max(np.abs(a - b)), np.max(np.abs(a + b))))


def example_frame(s: float) -> np.ndarray:
    """The printed frame of the worked example without its sign prefactors."""
    ch, sh = math.cosh(s), math.sinh(s)
    return np.array([
        [sh, SQRT2, ch, 0.0],
        [ch, 0.0, sh, 0.0],
        [SQRT2 * sh, 1.0, SQRT2 * ch, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ])


def example_alpha_printed(s: float) -> np.ndarray:
    return np.array([SQRT2 * math.sinh(s), s, -SQRT2 * math.cosh(s)])


# ----------------------------------------------------------------------------
# individual checks; each returns (residual, extra-info dict)


def check_example_apparatus(curve, grid, ctx):
    worst = 0.0
    for s in grid:
        app = frenet_apparatus(curve, s, ctx)
        F = app.frame()
        P = example_frame(s)
        frame_gap = max(signed_gap(F[i], P[i]) for i in range(4))
        worst = max(worst, abs(app.kappa + 1.0), abs(app.k - SQRT2), abs(app.third), frame_gap)
    return worst, {}


def check_frenet_ode(curve, grid, ctx, h_step):
    return max(frenet_ode_residual(curve, s, ctx, h_step).max() for s in grid), {}


def check_distance(pair, grid):
    return max(abs(involute_distance(pair, s) - abs(pair.c - s)) for s in grid), {}


def _usable(pair: InvolutePair, s: float) -> bool:
    """Regular, with room for the involute's own stencils around s*."""
    if not pair.is_regular(s):
        return False
    inv = pair.arclength_curve(s)
    lo, hi = inv.effective_domain()
    return lo <= inv.arclength.sigma(s) <= hi


def regular(pair, grid):
    return [s for s in grid if _usable(pair, s)]


def check_tangency(pair, grid):
    pts = regular(pair, grid)
    return max((pair_tangency(pair, s) for s in pts), default=0.0), {"regular_samples": len(pts)}


def check_speed_law(pair, grid):
    pts = regular(pair, grid)
    checks = [speed_law(pair, s) for s in pts]
    return (max((c.residual for c in checks), default=0.0),
            {"reversed_samples": sum(1 for c in checks if c.reversed)})


def _transfer(pair: InvolutePair, s: float, deg_tol: float, w_tol: float):
    """Transferred apparatus, through the w-curve path when the general one degenerates."""
    ctx = pair.ctx
    app = frenet_apparatus(pair.evolute, s, ctx)
    cd = curvature_derivatives(pair.evolute, s, ctx)
    try:
        return transfer_frame(app, cd, ctx, c=pair.c, tol=deg_tol), False
    except DegenerateTransfer:
        return w_curve_transfer(app, ctx, cd, c=pair.c, tol=w_tol), True


def check_transfer(pair: InvolutePair, grid, deg_tol: float = 1e-9, w_tol: float = 1e-6):
    """Frames and curvature magnitudes: transferred against direct computation.

    Where the involute's own frame degenerates beyond N (a planar involute),
    T and N are compared directly, B and E are required to complete an
    orthonormal frame, and k*, third* are compared with zero.
    """
    ctx = pair.ctx
    frame_res = curv_res = 0.0
    degenerate = w_path = 0
    for s in regular(pair, grid):
        tr, used_w = _transfer(pair, s, deg_tol, w_tol)
        w_path += used_w
        F = tr.frame()
        try:
            d = involute_apparatus(pair, s)
            frame_res = max(frame_res, max(signed_gap(F[i], d.frame()[i]) for i in range(4)))
            curv_res = max(curv_res, abs(abs(tr.kappa) - abs(d.kappa)), abs(abs(tr.k_star) - abs(d.k)),
                           abs(abs(tr.third_star) - abs(d.third)))
        except DegenerateFrame:
            degenerate += 1
            p = involute_partial(pair, s)
            frame_res = max(frame_res, signed_gap(F[0], p.T), signed_gap(F[1], p.N),
                            tr.orthonormality_defect(ctx))
            curv_res = max(curv_res, abs(abs(tr.kappa) - abs(p.kappa)), abs(tr.k_star), abs(tr.third_star))
    return frame_res, curv_res, {"degenerate_direct_frames": degenerate, "w_curve_path": w_path}


def check_w_curve(pair: InvolutePair, grid, example: bool, w_tol: float = 1e-6):
    ctx = pair.ctx
    worst = 0.0
    for s in regular(pair, grid):
        app = frenet_apparatus(pair.evolute, s, ctx)
        cd = curvature_derivatives(pair.evolute, s, ctx)
        tr = w_curve_transfer(app, ctx, cd, c=pair.c, tol=w_tol)
        F = tr.frame()
        p = involute_partial(pair, s)
        worst = max(worst, signed_gap(F[0], p.T), signed_gap(F[1], p.N), tr.orthonormality_defect(ctx),
                    signed_gap(F[2], app.E))
        try:
            d = involute_apparatus(pair, s)
            worst = max(worst, signed_gap(F[2], d.B), signed_gap(F[3], d.E))
        except DegenerateFrame:
            pass
        if example:
            worst = max(worst, signed_gap(F[2], [0.0, 0.0, 0.0, 1.0]))
    return worst, {}


def check_alpha(ctx, grid):
    alpha = example_alpha(ctx)
    pos = max(float(np.max(np.abs(alpha.at(s) - example_alpha_printed(s)))) for s in grid)
    curv = 0.0
    for s in grid:
        fr = spatial_frenet(alpha, s, ctx)
        curv = max(curv, abs(fr.k - SQRT2), abs(fr.r + 1.0))
    return pos, curv


def _entry(residual, tol, extra=None, passed=None):
    ok = residual <= tol if passed is None else passed
    out = {"residual": float(residual), "tolerance": float(tol), "pass": bool(ok)}
    if extra:
        out.update(extra)
    return out


def _guarded(report, key, tol, fn):
    try:
        res, extra = fn()
        report[key] = _entry(res, tol, extra)
    except (SemiQuatError, ArithmeticError) as exc:
        report[key] = {"residual": None, "tolerance": float(tol), "pass": False, "error": str(exc)}


def run_verify(cfg: RunConfig) -> dict:
    ctx = cfg.metric
    fd = cfg.mode == "fd"
    h_step = 1e-2 if fd else 1e-3
    curve = build_curve(cfg, margin=VERIFY_MARGIN + 2 * h_step)
    grid = cfg.grid()
    ex = is_example(cfg)
    deg_tol, w_tol = (1e-6, 1e-3) if fd else (1e-9, 1e-6)
    tol = cfg.tolerance
    report: dict = {}
    pair = build_pair(cfg, curve)

    if ex:
        _guarded(report, "example_3_1_apparatus", tol("apparatus"),
                 lambda: check_example_apparatus(curve, grid, ctx))
    _guarded(report, "theorem_3_1_frenet_ode", tol("frenet_ode"),
             lambda: check_frenet_ode(curve, grid, ctx, h_step))
    _guarded(report, "theorem_3_2_distance", tol("distance"), lambda: check_distance(pair, grid))
    _guarded(report, "definition_3_1_tangency", tol("tangency"), lambda: check_tangency(pair, grid))
    _guarded(report, "speed_law", tol("speed_law"), lambda: check_speed_law(pair, grid))

    try:
        frame_res, curv_res, extra = check_transfer(pair, grid, deg_tol, w_tol)
        report["theorem_3_3_frames"] = _entry(frame_res, tol("transfer_frame"), extra)
        report["theorem_3_4_curvatures"] = _entry(curv_res, tol("transfer_curvature"), extra)
    except (SemiQuatError, ArithmeticError) as exc:
        for key, t in (("theorem_3_3_frames", "transfer_frame"), ("theorem_3_4_curvatures", "transfer_curvature")):
            report[key] = {"residual": None, "tolerance": tol(t), "pass": False, "error": str(exc)}

    if ex:
        _guarded(report, "corollary_3_1_w_curve", tol("w_curve"), lambda: check_w_curve(pair, grid, True, w_tol))

    def t35():
        rep = check_theorem35(pair, grid=regular(pair, grid), ctx=ctx, tol=tol("theorem35_perp"),
                              extract_tol=1e-4 if fd else 1e-8)
        return rep, rep.max_g_tstar_n

    try:
        rep, res = t35()
        report["theorem_3_5"] = _entry(res, tol("theorem35_perp"),
                                       {"min_collinearity_gap": rep.min_gap,
                                        "max_printed_coefficient_mismatch": rep.max_printed_mismatch},
                                       passed=res <= tol("theorem35_perp") and rep.min_gap >= tol("theorem35_gap"))
        if ex:
            h_res = max(abs(v + 1.0) for v in rep.h_t_tstar)
            h4 = sorted({round(r.h4_t_tstar, 12) for r in rep.samples})
            report["example_3_1_h_t_tstar"] = _entry(h_res, tol("theorem35_h"),
                                                     {"ambient_h_values": h4})
    except (SemiQuatError, ArithmeticError, ValueError) as exc:
        report["theorem_3_5"] = {"residual": None, "tolerance": tol("theorem35_perp"), "pass": False,
                                 "error": str(exc)}

    if ex:
        try:
            pos, curv = check_alpha(ctx, grid)
            report["example_3_1_associated_curve"] = _entry(pos, tol("associated_curve"))
            report["example_3_1_spatial_curvatures"] = _entry(curv, tol("spatial_curvature"))
        except (SemiQuatError, ArithmeticError) as exc:
            report["example_3_1_associated_curve"] = {"residual": None, "tolerance": tol("associated_curve"),
                                                      "pass": False, "error": str(exc)}
    return report


def overall_pass(report: dict) -> bool:
    return all(v["pass"] for v in report.values())


# ----------------------------------------------------------------------------
# tables


def frenet_table(cfg: RunConfig):
    curve = build_curve(cfg)
    cols = ["s"] + [f"{v}{i}" for v in "TNBE" for i in range(1, 5)] + [
        "kappa", "k", "third", "eps_T", "eps_N", "eps_t", "eps_n", "eps_b"]
    rows = []
    for s in cfg.grid():
        app = frenet_apparatus(curve, s, cfg.metric)
        rows.append([float(s), *app.frame().ravel(), app.kappa, app.k, app.third,
                     app.eps_T, app.eps_N, app.eps_t, app.eps_n, app.eps_b])
    return cols, rows


def involute_table(cfg: RunConfig):
    pair = build_pair(cfg)
    cols = ["s", "phi1", "phi2", "phi3", "phi4", "distance", "distance_residual", "singular",
            "tangency", "Tphi1", "Tphi2", "Tphi3", "Tphi4", "kappa_phi"]
    rows = []
    for s in cfg.grid():
        phi = pair.involute.at(s)
        dist = involute_distance(pair, s)
        row = [float(s), *phi, dist, abs(dist - abs(pair.c - s))]
        if pair.is_regular(s):
            p = involute_partial(pair, s)
            row += [0, pair_tangency(pair, s), *p.T, p.kappa]
        else:
            row += [1] + [""] * 6
        rows.append(row)
    return cols, rows


def project_tables(cfg: RunConfig, drop_axis: int) -> dict:
    """3D coordinate rows for xi, phi, alpha and beta over the grid."""
    if drop_axis not in (1, 2, 3, 4):
        raise ConfigError(f"drop_axis must be in 1..4, got {drop_axis}")
    keep = [i for i in range(4) if i != drop_axis - 1]
    names = [f"q{i + 1}" for i in keep]
    curve = build_curve(cfg)
    pair = build_pair(cfg, curve)
    grid = cfg.grid()
    ctx = cfg.metric
    out = {}
    out["xi"] = (["s", *names], [[float(s), *curve.at(s)[keep]] for s in grid])
    out["phi"] = (["s", *names], [[float(s), *pair.involute.at(s)[keep]] for s in grid])
    alpha = example_alpha(ctx) if is_example(cfg) else associated_curve(curve, ctx)
    out["alpha"] = (["s", "a1", "a2", "a3"], [[float(s), *alpha.at(s)] for s in grid])
    rows, betas = [], {}
    for s in grid:
        if not pair.is_regular(s):
            continue
        seg = next(sg for sg in pair.regular_segments() if sg[0] <= s <= sg[1])
        if seg not in betas:
            betas[seg] = involute_associated_curve(pair, s)
        beta = betas[seg]
        s_star = pair.s_star(s)
        rows.append([float(s), s_star, *beta.at(s_star)])
    out["beta"] = (["s", "s_star", "a1", "a2", "a3"], rows)
    return out


def example_summary(cfg: RunConfig) -> dict:
    ctx = cfg.metric
    xi = example31()
    app = frenet_apparatus(xi, 0.0, ctx)
    pair = make_involute(xi, cfg.c, ctx, guard=cfg.guard)
    alpha = example_alpha(ctx)
    fr = spatial_frenet(alpha, 0.0, ctx)
    rep = check_theorem35(pair, grid=[0.0], ctx=ctx)
    return {
        "xi(0)": xi.at(0.0).tolist(),
        "frame(0)": {k: list(getattr(app, k)) for k in "TNBE"},
        "curvatures": {"kappa": app.kappa, "k": app.k, "third": app.third},
        "signs": app.signs,
        "c": cfg.c,
        "phi(0)": pair.involute.at(0.0).tolist(),
        "alpha(0)": alpha.at(0.0).tolist(),
        "alpha_curvatures": {"k": fr.k, "r": fr.r},
        "g(t,t*)": rep.samples[0].g_t_tstar,
        "h(t,t*) ambient": rep.samples[0].h4_t_tstar,
        "scalar(t x t*)": rep.samples[0].product_scalar,
    }
