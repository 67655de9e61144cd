"""Backend parity: the numba kernels and the numpy fallback must agree."""

import numpy as np
import pytest

from edmlab import kernels
from edmlab.kernels import _numpy

try:
    from edmlab.kernels import _numba

    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize(
    "a,b,x",
    [
        (0.5, 0.5, 0.3),
        (1.0, 1.0, 0.25),
        (3.0, 5.0, 0.7),
        (50.0, 50.0, 0.5),
        (500.0, 500.0, 0.4999),
        (1.0, 100.0, 0.01),
    ],
)
def test_betainc_backends_agree(a, b, x):
    # instruction fusion in the JIT moves the last couple of digits; both
    # backends stay well inside the 1e-10 accuracy contract
    assert _numba.betainc(a, b, x) == pytest.approx(_numpy.betainc(a, b, x), abs=5e-13)


@needs_numba
def test_poly2_eval_backends_agree():
    rng = np.random.default_rng(7)
    for n in (2, 4, 6):
        lin = rng.normal(size=n)
        quad = rng.normal(size=(n, n))
        quad = (quad + quad.T) / 2
        pts = np.ascontiguousarray(rng.normal(size=(50, n)))
        a = _numba.poly2_eval(1.5, lin, quad, pts)
        b = _numpy.poly2_eval(1.5, lin, quad, pts)
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)


def test_backend_selection_loads_both():
    impl_np, name_np = kernels.load_backend("numpy")
    assert name_np == "numpy" and impl_np is _numpy
    if HAVE_NUMBA:
        impl_nb, name_nb = kernels.load_backend("numba")
        assert name_nb == "numba"
    with pytest.raises(ValueError):
        kernels.load_backend("fortran")


def test_betainc_uniform_case_is_identity():
    # I_x(1, 1) = x for the uniform distribution
    for x in (0.0, 0.25, 0.5, 0.9, 1.0):
        assert kernels.betainc(1.0, 1.0, x) == pytest.approx(x, abs=1e-12)
