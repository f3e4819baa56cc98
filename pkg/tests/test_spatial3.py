import math

import numpy as np
import pytest

from semiquat.curvekit import CurveSpec, frenet_apparatus
from semiquat.errors import ExtractionFailure, NonSpatialCurve, NullCurvatureVector
from semiquat.involute import make_involute
from semiquat.semialgebra import quat_mul
from semiquat.spatial3 import (
    associated_curve,
    check_theorem35,
    example_alpha,
    extract_spatial_frame,
    from_spatial,
    g3,
    involute_associated_curve,
    lorentz_cross,
    spatial_frenet,
    spatial_ode_residual,
    spatial_quaternions,
    to_spatial,
)

SQRT2 = math.sqrt(2.0)


def test_coordinate_maps(ctx):
    q = np.array([1.0, 2.0, 3.0, 0.0])
    np.testing.assert_allclose(to_spatial(q, ctx), [3.0, 2.0, -1.0])
    np.testing.assert_allclose(from_spatial(to_spatial(q, ctx), ctx), q)
    u, v = np.array([0.3, 1.0, -0.5]), np.array([2.0, 0.1, 0.7])
    X = lorentz_cross(u, v, ctx)
    assert g3(X, u, ctx) == pytest.approx(0.0, abs=1e-14)
    assert g3(X, [1.0, -2.0, 0.5], ctx) == pytest.approx(np.linalg.det([u, v, [1.0, -2.0, 0.5]]))


def test_example_alpha(ctx):
    alpha = example_alpha(ctx)
    for s in np.linspace(-1, 1, 9):
        np.testing.assert_allclose(alpha.at(s), [SQRT2 * math.sinh(s), s, -SQRT2 * math.cosh(s)], atol=1e-4)
        np.testing.assert_allclose(alpha.derivative(s, 1), [SQRT2 * math.cosh(s), 1, -SQRT2 * math.sinh(s)],
                                   atol=1e-12)
    fr = spatial_frenet(alpha, 0.4, ctx)
    assert fr.k == pytest.approx(SQRT2, abs=1e-6)
    assert fr.r == pytest.approx(-1.0, abs=1e-6)
    assert fr.orthonormality_defect(ctx) <= 1e-8
    assert max(spatial_ode_residual(alpha, 0.4, ctx, 1e-2)) <= 1e-6


def test_extraction_round_trip(fuzz20, ctx):
    for curve in fuzz20[:6]:
        app = frenet_apparatus(curve, 0.2, ctx)
        sp = extract_spatial_frame(app, ctx)
        assert sp.orthonormality_defect(ctx) <= 1e-9
        T = app.T.as_array()
        for small, big in ((sp.t, app.N), (sp.n, app.B), (sp.b, app.E)):
            q = from_spatial(np.asarray(small)[:3], ctx)
            np.testing.assert_allclose(app.eps_T * quat_mul(q, T, ctx).as_array(), np.asarray(big), atol=1e-10)
        # the 4D and 3D third curvatures are tied through r
        assert sp.r == pytest.approx(app.eps_T * app.third + app.eps_t * app.eps_T * app.eps_N * app.kappa)


def test_associated_curve_curvatures_on_fuzz(fuzz20, ctx):
    curve = fuzz20[2]
    alpha = associated_curve(curve, ctx)
    app = frenet_apparatus(curve, 0.1, ctx)
    fr = spatial_frenet(alpha, 0.1, ctx)
    assert abs(fr.k) == pytest.approx(abs(app.k), abs=1e-5)
    assert abs(fr.r) == pytest.approx(abs(app.r), abs=1e-5)


def test_scalar_tangent_case(ctx):
    t = spatial_quaternions([0, 0, 0, 1.0], [1.0, 0, 0, 0], 1, ctx)
    np.testing.assert_allclose(t, [1.0, 0, 0])


def test_extraction_rejects_non_orthogonal_input(xi, ctx):
    app = frenet_apparatus(xi, 0.0, ctx)
    T = app.T.as_array()
    with pytest.raises(ExtractionFailure):
        spatial_quaternions(T, app.N.as_array() + 0.1 * T, app.eps_T, ctx)


def test_degenerate_spatial_curves(ctx):
    line = CurveSpec(lambda s: np.array([0.0, s, 0.0]), (-1, 1), lambda s, n: np.array([0.0, 1.0, 0.0]) * (n == 1), 4)
    with pytest.raises(NullCurvatureVector):
        spatial_frenet(line, 0.0, ctx)
    q = CurveSpec(lambda s: np.array([0.0, s, 0.0, s]), (-1, 1), lambda s, n: np.array([0.0, 1.0, 0.0, 1.0]), 4)
    with pytest.raises(NonSpatialCurve):
        spatial_frenet(q, 0.0, ctx)


def test_beta_of_example(example_pair, ctx):
    beta = involute_associated_curve(example_pair, 0.0)
    lo, hi = beta.domain
    for ss in np.linspace(max(lo, -1.0), min(hi, 1.0), 5):
        np.testing.assert_allclose(beta.at(ss), [2.0, -ss + 2.0, 2.0], atol=1e-8)
        np.testing.assert_allclose(beta.derivative(ss, 1), [0.0, -1.0, 0.0], atol=1e-8)
    with pytest.raises(NullCurvatureVector):
        spatial_frenet(beta, 0.5 * (lo + hi), ctx)


def test_theorem35_example(example_pair, ctx, grid21):
    rep = check_theorem35(example_pair, grid=grid21, ctx=ctx)
    assert rep.passed
    assert max(abs(v + 1.0) for v in rep.h_t_tstar) <= 1e-6
    assert rep.max_g_tstar_n <= 1e-8
    assert rep.min_gap >= 0.1
    assert rep.max_printed_mismatch <= 1e-8
    assert {round(r.h4_t_tstar, 9) for r in rep.samples} == {1.0}
    assert {round(r.product_scalar, 9) for r in rep.samples} == {-1.0}


def test_theorem35_fuzz(fuzz20, ctx):
    for curve in fuzz20[:4]:
        pair = make_involute(curve, 2.0, ctx)
        rep = check_theorem35(pair, grid=np.linspace(-1.2, 1.2, 5), ctx=ctx)
        assert rep.max_g_tstar_n <= 1e-8
        assert rep.min_gap >= 0.1
