import numpy as np
import pytest

from semiquat import kernels
from semiquat.kernels import get_backend

try:
    get_backend("cython")
    HAVE_EXT = True
except ImportError:
    HAVE_EXT = False

needs_ext = pytest.mark.skipif(not HAVE_EXT, reason="compiled extension not built")
SIGNS = np.array([-1.0, -1.0, 1.0, 1.0])
EPS = (-1.0, -1.0, 1.0)


def test_backend_name():
    assert kernels.BACKEND in ("cython", "python")
    with pytest.raises(ValueError):
        get_backend("fortran")


@needs_ext
@pytest.mark.parametrize("shape", [(4,), (7, 4)])
def test_backends_agree(shape):
    rng = np.random.default_rng(11)
    a, b, c, d = (rng.normal(size=shape) for _ in range(4))
    py, cy = get_backend("python"), get_backend("cython")
    np.testing.assert_allclose(cy.qmul(a, b, EPS), py.qmul(a, b, EPS), atol=1e-13)
    np.testing.assert_allclose(cy.hdot(a, b, SIGNS), py.hdot(a, b, SIGNS), atol=1e-13)
    np.testing.assert_allclose(cy.wedge4(a, b, c, SIGNS, -1.0), py.wedge4(a, b, c, SIGNS, -1.0), atol=1e-13)
    np.testing.assert_allclose(cy.det4(a, b, c, d), py.det4(a, b, c, d), atol=1e-13)


@needs_ext
def test_broadcast_single_against_stack():
    rng = np.random.default_rng(2)
    a = rng.normal(size=4)
    b = rng.normal(size=(5, 4))
    py, cy = get_backend("python"), get_backend("cython")
    np.testing.assert_allclose(cy.qmul(a, b, EPS), py.qmul(a, b, EPS), atol=1e-13)
    np.testing.assert_allclose(cy.hdot(a, b, SIGNS), py.hdot(a, b, SIGNS), atol=1e-13)


def test_python_fallback_scalar_shapes():
    py = get_backend("python")
    a = np.array([1.0, 2.0, 3.0, 4.0])
    assert np.ndim(py.hdot(a, a, SIGNS)) == 0
    assert py.qmul(a, a, EPS).shape == (4,)
