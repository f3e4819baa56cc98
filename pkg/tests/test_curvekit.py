import math

import numpy as np
import pytest

from semiquat.curvekit import (
    ArcLengthMap,
    CurveSpec,
    apparatus_from_derivatives,
    check_unit_speed,
    curvature_derivatives,
    derivatives,
    frenet_apparatus,
    frenet_ode_residual,
    frenet_partial,
    reparameterize_by_arclength,
)
from semiquat.curves import example31
from semiquat.errors import (
    DegenerateFrame,
    NotUnitSpeed,
    NullCurvatureVector,
    NullSpeedPoint,
    OutOfDomain,
    StencilOverflow,
)
from semiquat.semialgebra import inner_h, norm_N

SQRT2 = math.sqrt(2.0)


def test_example_first_derivative(xi):
    np.testing.assert_allclose(derivatives(xi, 0.0, 1)[0].as_array(), [0, SQRT2, 1, 0])


def test_constant_curve_has_zero_derivatives():
    c = CurveSpec(lambda s: np.array([1.0, 2.0, 3.0, 4.0]), (-1, 1), fd_step=1e-2)
    for d in derivatives(c, 0.0, 4):
        np.testing.assert_allclose(d.as_array(), 0.0, atol=1e-9)


def test_fd_matches_analytic(xi):
    fd = xi.with_fd(1e-2)
    worst = 0.0
    for s in np.linspace(-1, 1, 21):
        for n in range(1, 5):
            worst = max(worst, np.max(np.abs(fd.derivative(s, n) - xi.derivative(s, n))))
    assert worst <= 1e-6


def test_domain_errors(xi):
    with pytest.raises(OutOfDomain):
        xi.at(5.0)
    fd = example31((-1.0, 1.0)).with_fd(1e-2)
    with pytest.raises(StencilOverflow):
        fd.derivative(0.99, 1)
    assert fd.effective_domain() == pytest.approx((-0.96, 0.96))
    with pytest.raises(ValueError):
        xi.derivative(0.0, 13)


def test_unit_speed_checks(xi):
    rep = check_unit_speed(xi)
    assert rep.passed and rep.max_deviation <= 1e-12
    fast = CurveSpec(lambda t: xi.at(2 * t), (-1, 1), lambda t, n: 2 ** n * xi.derivative(2 * t, n), 12)
    rep = check_unit_speed(fast)
    assert not rep.passed and rep.max_deviation == pytest.approx(1.0)


def test_reparameterize_doubled_curve(xi, ctx):
    fast = CurveSpec(lambda t: xi.at(2 * t), (-1, 1), lambda t, n: 2 ** n * xi.derivative(2 * t, n), 12)
    rep = reparameterize_by_arclength(fast, ctx=ctx, origin=0.0)
    assert rep.mode == "analytic"
    for sig in np.linspace(-1.5, 1.5, 7):
        np.testing.assert_allclose(rep.at(sig), xi.at(sig), atol=1e-6)
        np.testing.assert_allclose(rep.derivative(sig, 3), xi.derivative(sig, 3), atol=1e-6)
    assert check_unit_speed(rep, tol=1e-8).passed


def test_reparameterize_cubic_and_identity(xi, ctx):
    # a timelike cubic-in-t curve
    def pos(t):
        return np.array([0.1 * t ** 3, t, 0.3 * t ** 2, 0.0])

    def der(t, n):
        return np.array([[0.3 * t ** 2, 1.0, 0.6 * t, 0.0], [0.6 * t, 0.0, 0.6, 0.0],
                         [0.6, 0.0, 0.0, 0.0]][n - 1] if n <= 3 else np.zeros(4))

    rep = reparameterize_by_arclength(CurveSpec(pos, (-1, 1), der, 12), ctx=ctx)
    assert check_unit_speed(rep, tol=1e-6, ctx=ctx).passed
    same = reparameterize_by_arclength(example31((-1, 1)), ctx=ctx, origin=-1.0)
    for s in np.linspace(-1, 1, 5):
        np.testing.assert_allclose(same.at(s + 1.0), xi.at(s), atol=1e-11)


def test_arclength_map_rejects_null_speed(ctx):
    null = CurveSpec(lambda t: np.array([t, 0, t, 0.0]), (-1, 1), lambda t, n: np.array([1.0, 0, 1, 0]) * (n == 1), 4)
    with pytest.raises(NullSpeedPoint):
        ArcLengthMap(null, ctx)


@pytest.mark.parametrize("s", [0.0, 1.0])
def test_example_apparatus_printed(xi, ctx, s):
    app = frenet_apparatus(xi, s, ctx)
    ch, sh = math.cosh(s), math.sinh(s)
    np.testing.assert_allclose(app.T.as_array(), [sh, SQRT2, ch, 0], atol=1e-12)
    np.testing.assert_allclose(app.N.as_array(), [ch, 0, sh, 0], atol=1e-12)
    assert app.kappa == pytest.approx(-1.0, abs=1e-12)
    assert app.k == pytest.approx(SQRT2, abs=1e-12)
    assert app.third == pytest.approx(0.0, abs=1e-12)
    # printed: B = -eps_b (sqrt2 sinh s, 1, sqrt2 cosh s, 0), E = -eps_n eps_b (0, 0, 0, 1), up to
    # those prefactors; k >= 0 and det = +1 fix B = -(...) and E = +(0, 0, 0, 1) here
    np.testing.assert_allclose(app.B.as_array(), -np.array([SQRT2 * sh, 1, SQRT2 * ch, 0]), atol=1e-12)
    np.testing.assert_allclose(app.E.as_array(), [0, 0, 0, 1.0], atol=1e-12)
    assert app.det() == pytest.approx(1.0)
    assert (app.eps_T, app.eps_N, app.eps_n, app.eps_b) == (-1, -1, -1, -1)
    assert inner_h(app.T, app.T, ctx) == pytest.approx(-1.0)
    assert norm_N(app.N, ctx) == pytest.approx(1.0)


def test_apparatus_invariants_fuzz(fuzz20, ctx):
    for curve in fuzz20[:8]:
        for s in np.linspace(-1.2, 1.2, 7):
            app = frenet_apparatus(curve, s, ctx)
            assert app.orthonormality_defect(ctx) <= 1e-9
            assert app.det() * ctx.orientation > 0
            assert app.k >= 0
            assert np.sign(inner_h(app.B, app.B, ctx)) == app.eps_n * app.eps_T
            assert np.sign(inner_h(app.E, app.E, ctx)) == app.eps_b * app.eps_T
            # |kappa| = N(T') cross-check by finite differences
            h = 1e-4
            dT = (frenet_apparatus(curve, s + h, ctx).T.as_array() - frenet_apparatus(curve, s - h, ctx).T.as_array()) / (2 * h)
            assert abs(abs(app.kappa) - norm_N(dT, ctx)) <= 1e-6


def test_apparatus_errors(ctx):
    d = np.array([[0, SQRT2, 1, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0.0]])
    with pytest.raises(DegenerateFrame):
        apparatus_from_derivatives(d, ctx)
    with pytest.raises(NullCurvatureVector):
        apparatus_from_derivatives(np.array([[0, SQRT2, 1, 0], [0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0.0]]), ctx)
    with pytest.raises(NotUnitSpeed):
        apparatus_from_derivatives(2 * d, ctx)
    with pytest.raises(NullSpeedPoint):
        apparatus_from_derivatives(np.array([[1.0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]]), ctx)


def test_partial_frame(ctx):
    line_bend = CurveSpec(lambda s: np.array([math.sinh(s), 0, math.cosh(s), 0]), (-1, 1),
                          lambda s, n: np.array([math.cosh(s), 0, math.sinh(s), 0]) if n % 2
                          else np.array([math.sinh(s), 0, math.cosh(s), 0]), 12)
    p = frenet_partial(line_bend, 0.0, ctx)
    np.testing.assert_allclose(p.N, [0, 0, 1, 0])
    with pytest.raises(DegenerateFrame):
        frenet_apparatus(line_bend, 0.0, ctx)


def test_frenet_ode_example(xi, ctx, grid21):
    assert max(frenet_ode_residual(xi, s, ctx, 1e-3).max() for s in grid21) <= 1e-8


def test_frenet_ode_convergence_order(xi, ctx):
    hs = [0.2, 0.1, 0.05]
    res = [max(frenet_ode_residual(xi, s, ctx, h).max() for s in (-0.5, 0.3, 1.0)) for h in hs]
    orders = [math.log(res[i] / res[i + 1], 2) for i in range(2)]
    assert min(orders) >= 1.8


def test_curvature_derivatives_example(xi, ctx):
    cd = curvature_derivatives(xi, 0.2, ctx)
    assert max(abs(x) for x in cd) <= 1e-8
