"""Numeric hot kernels with a numba backend and a pure-numpy fallback.

The backend is chosen once at import time from the ``EDMLAB_BACKEND``
environment variable:

* ``numba`` - require the JIT backend, fail if numba is missing;
* ``numpy`` - force the pure numpy/python fallback;
* unset or ``auto`` - numba when importable, numpy otherwise.

``benchmarks/bench_kernels.py`` compares the two implementations head to
head; they agree to machine precision.
"""

import os

import numpy as np

from . import _numpy


def load_backend(name: str | None = None):
    """Return (implementation module, backend name) for the given selector."""
    name = name or os.environ.get("EDMLAB_BACKEND", "auto")
    if name not in ("auto", "numba", "numpy"):
        raise ValueError(f"unknown kernel backend {name!r} (use numba, numpy or auto)")
    if name in ("auto", "numba"):
        try:
            from . import _numba

            return _numba, "numba"
        except ImportError:
            if name == "numba":
                raise
    return _numpy, "numpy"


_impl, BACKEND = load_backend()

betainc = _impl.betainc
poly2_eval = _impl.poly2_eval


def warmup() -> None:
    """Trigger JIT compilation (no-op on the numpy backend)."""
    betainc(1.5, 2.5, 0.25)
    poly2_eval(0.0, np.zeros(2), np.zeros((2, 2)), np.zeros((1, 2)))
