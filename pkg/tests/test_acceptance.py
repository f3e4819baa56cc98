"""Acceptance suite: ten criteria at their stated tolerances.

Each test prints one ``criterion N: PASS|FAIL`` line (visible with or
without ``-s``) and then asserts.
"""
import math
import time

import numpy as np
import pytest

from semiquat import kernels as K
from semiquat.curvekit import curvature_derivatives, frenet_apparatus, frenet_ode_residual
from semiquat.curves import fuzz_family
from semiquat.errors import DegenerateFrame
from semiquat.involute import (
    involute_apparatus,
    involute_distance,
    involute_partial,
    make_involute,
    pair_tangency,
    transfer_frame,
    w_curve_transfer,
)
from semiquat.spatial3 import check_theorem35, example_alpha, spatial_frenet

SQRT2 = math.sqrt(2.0)
GRID = np.linspace(-1.0, 1.0, 21)


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, f"criterion {n}: {detail}"
    return emit


def sign_gap(a, b):
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(min(np.max(np.abs(a - b)), np.max(np.abs(a + b))))


def printed_frame(s):
    ch, sh = math.cosh(s), math.sinh(s)
    return [[sh, SQRT2, ch, 0.0], [ch, 0.0, sh, 0.0], [SQRT2 * sh, 1.0, SQRT2 * ch, 0.0], [0.0, 0.0, 0.0, 1.0]]


def example_worst(curve, ctx):
    worst = 0.0
    for s in GRID:
        app = frenet_apparatus(curve, s, ctx)
        F = app.frame()
        frame = max(sign_gap(F[i], printed_frame(s)[i]) for i in range(4))
        worst = max(worst, abs(app.kappa + 1.0), abs(app.k - SQRT2), abs(app.third), frame)
    return worst


@pytest.fixture(scope="module")
def fuzz(ctx):
    return fuzz_family(20, seed=2024, domain=(-1.5, 1.5), ctx=ctx)


def test_criterion_1_example_apparatus(report, xi, ctx):
    t0 = time.perf_counter()
    worst = example_worst(xi, ctx)
    elapsed = time.perf_counter() - t0
    report(1, worst <= 1e-9 and elapsed < 1.0, f"max deviation {worst:.2e} (tol 1e-9), runtime {elapsed:.3f}s (< 1s)")


def test_criterion_2_example_fd(report, xi, ctx):
    worst = example_worst(xi.with_fd(1e-3), ctx)
    report(2, worst <= 1e-4, f"FD h=1e-3 max deviation {worst:.2e} (tol 1e-4)")


def _distance_pairs(xi, fuzz, ctx):
    rng = np.random.default_rng(31)
    cases = [(make_involute(xi, 2.0, ctx), s) for s in GRID]
    for _ in range(50):
        curve = fuzz[int(rng.integers(len(fuzz)))]
        cases.append((make_involute(curve, float(rng.uniform(-3, 3)), ctx), float(rng.uniform(-1.4, 1.4))))
    return cases


def test_criterion_3_distance(report, xi, fuzz, ctx):
    cases = _distance_pairs(xi, fuzz, ctx)
    analytic = max(abs(involute_distance(p, s) - abs(p.c - s)) for p, s in cases)
    fd = 0.0
    for p, s in cases:
        pf = make_involute(p.evolute.with_fd(1e-3), p.c, ctx)
        fd = max(fd, abs(involute_distance(pf, s) - abs(p.c - s)))
    ok = analytic <= 1e-8 and fd <= 1e-5
    report(3, ok, f"{len(cases)} cases (50 random fuzz c/s): analytic {analytic:.2e} (1e-8), FD {fd:.2e} (1e-5)")


def test_criterion_4_tangency(report, xi, fuzz, ctx):
    worst, count = 0.0, 0
    pairs = [make_involute(xi, c, ctx) for c in (2.0, 0.5, -1.5)]
    pairs += [make_involute(curve, c, ctx) for curve in fuzz for c in (-2.0, 0.3, 2.5)]
    for pair in pairs:
        for s in np.linspace(-1.4, 1.4, 15):
            if pair.is_regular(s):
                worst = max(worst, pair_tangency(pair, s))
                count += 1
    report(4, worst <= 1e-8, f"{len(pairs)} pairs, {count} regular samples, max |h(T_phi, T_xi)| {worst:.2e} (1e-8)")


def test_criterion_5_frenet_ode(report, xi, fuzz, ctx):
    analytic = max(frenet_ode_residual(xi, s, ctx, 1e-3).max() for s in GRID)
    fd = 0.0
    for curve in fuzz:
        fdc = curve.with_fd(1e-2)
        for s in np.linspace(-1.2, 1.2, 5):
            fd = max(fd, frenet_ode_residual(fdc, s, ctx, 1e-2, scale_step=True).max())
    steps = [0.2, 0.1, 0.05]
    res = [max(frenet_ode_residual(xi, s, ctx, h).max() for s in (-0.7, 0.2, 0.9)) for h in steps]
    order = min(math.log2(res[i] / res[i + 1]) for i in range(2))
    ok = analytic <= 1e-8 and fd <= 1e-4 and order >= 1.8
    report(5, ok, f"example {analytic:.2e} (1e-8); FD suite of {len(fuzz)} curves {fd:.2e} (1e-4); "
                  f"observed order {order:.2f} (>= 1.8)")


def test_criterion_6_transfer(report, fuzz, ctx):
    frame_res = curv_res = 0.0
    curves = 0
    for curve in fuzz[:12]:
        pair = make_involute(curve, 2.5, ctx)
        used = 0
        for s in (-1.0, -0.3, 0.4, 1.1):
            if not pair.is_regular(s):
                continue
            app = frenet_apparatus(curve, s, ctx)
            tr = transfer_frame(app, curvature_derivatives(curve, s, ctx), ctx, c=pair.c)
            d = involute_apparatus(pair, s)
            frame_res = max(frame_res, max(sign_gap(tr.frame()[i], d.frame()[i]) for i in range(4)))
            curv_res = max(curv_res, abs(abs(tr.kappa) - abs(d.kappa)), abs(abs(tr.k_star) - abs(d.k)),
                           abs(abs(tr.third_star) - abs(d.third)))
            used += 1
        curves += used > 0
    ok = curves >= 10 and frame_res <= 1e-4 and curv_res <= 1e-3
    report(6, ok, f"{curves} fuzz curves: frames {frame_res:.2e} (1e-4), curvatures {curv_res:.2e} (1e-3)")


def test_criterion_7_w_curve(report, xi, example_pair, ctx):
    worst, parallel, degenerate = 0.0, 0.0, 0
    for s in GRID:
        app = frenet_apparatus(xi, s, ctx)
        tr = w_curve_transfer(app, ctx, curvature_derivatives(xi, s, ctx), c=example_pair.c)
        F = tr.frame()
        parallel = max(parallel, sign_gap(F[2], [0, 0, 0, 1.0]))
        try:
            d = involute_apparatus(example_pair, s)
            worst = max(worst, max(sign_gap(F[i], d.frame()[i]) for i in range(4)))
        except DegenerateFrame:
            # the involute is planar: its own frame is determined up to N only
            degenerate += 1
            p = involute_partial(example_pair, s)
            worst = max(worst, sign_gap(F[0], p.T), sign_gap(F[1], p.N), tr.orthonormality_defect(ctx))
    ok = worst <= 1e-6 and parallel <= 1e-6
    report(7, ok, f"frames vs direct {worst:.2e} (1e-6, {degenerate}/{len(GRID)} direct frames planar), "
                  f"B_phi vs (0,0,0,1) {parallel:.2e}")


def test_criterion_8_theorem35(report, example_pair, fuzz, ctx):
    rep = check_theorem35(example_pair, grid=GRID, ctx=ctx)
    h_res = max(abs(v + 1.0) for v in rep.h_t_tstar)
    gap = rep.min_gap
    for curve in fuzz:
        for c in (-2.0, 2.5):
            fr = check_theorem35(make_involute(curve, c, ctx), grid=np.linspace(-1.2, 1.2, 5), ctx=ctx)
            gap = min(gap, fr.min_gap)
    ok = h_res <= 1e-6 and rep.max_g_tstar_n <= 1e-8 and gap >= 0.1
    report(8, ok, f"h(t,t*)+1 {h_res:.2e} (1e-6), |g(t*,n)| {rep.max_g_tstar_n:.2e} (1e-8), "
                  f"min collinearity gap {gap:.3f} over {2 * len(fuzz) + 1} pairs (>= 0.1)")


def test_criterion_9_associated_curve(report, ctx):
    alpha = example_alpha(ctx)
    pos = max(float(np.max(np.abs(alpha.at(s) - [SQRT2 * math.sinh(s), s, -SQRT2 * math.cosh(s)])))
              for s in GRID)
    curv = 0.0
    for s in GRID:
        fr = spatial_frenet(alpha, s, ctx)
        curv = max(curv, abs(fr.k - SQRT2), abs(fr.r + 1.0))
    ok = pos <= 1e-4 and curv <= 1e-6
    report(9, ok, f"alpha position {pos:.2e} (1e-4), k and r {curv:.2e} (1e-6)")


def test_criterion_10_algebra(report, ctx):
    n = 10_000
    rng = np.random.default_rng(10)
    eps, hs = ctx.basis_signs, ctx.h_signs
    t0 = time.perf_counter()
    p, q, r, w = rng.uniform(-2, 2, size=(4, n, 4))
    a, b = rng.uniform(-2, 2, size=(2, n, 1))
    conj = np.array([-1.0, -1.0, -1.0, 1.0])
    mul = K.qmul
    bil = np.max(np.abs(mul(a * p + b * q, r, eps) - (a * mul(p, r, eps) + b * mul(q, r, eps))))
    bil = max(bil, np.max(np.abs(mul(r, a * p + b * q, eps) - (a * mul(r, p, eps) + b * mul(r, q, eps)))))
    assoc = np.max(np.abs(mul(mul(p, q, eps), r, eps) - mul(p, mul(q, r, eps), eps)))
    anti = np.max(np.abs(conj * mul(p, q, eps) - mul(conj * q, conj * p, eps)))
    nf = mul(p, conj * p, eps)
    norm = max(np.max(np.abs(nf[:, :3])), np.max(np.abs(nf[:, 3] - K.hdot(p, p, hs))))
    X = K.wedge4(p, q, r, hs, float(ctx.orientation))
    orth = max(np.max(np.abs(K.hdot(X, v, hs))) for v in (p, q, r))
    vol = np.max(np.abs(K.hdot(X, w, hs) - ctx.orientation * K.det4(p, q, r, w)))
    elapsed = time.perf_counter() - t0
    worst = max(bil, assoc, anti, norm, orth, vol)
    ok = worst <= 1e-11 and elapsed < 5.0
    report(10, ok, f"{n} samples x 6 identities: max defect {worst:.2e} (1e-11), {elapsed:.2f}s (< 5s)")
