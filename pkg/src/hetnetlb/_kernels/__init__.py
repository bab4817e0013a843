"""Hot numerical kernels with a compiled core and a numpy fallback.

The compiled extension is used when it was built at install time; setting
the environment variable ``HETNETLB_PURE_PYTHON=1`` forces the numpy
implementations (useful for benchmarking and debugging).
"""

import os

import numpy as np

from . import _numpy as _numpy_impl

if os.environ.get("HETNETLB_PURE_PYTHON"):
    _impl = _numpy_impl
    BACKEND = "numpy"
else:
    try:
        from . import _speedups as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _numpy_impl
        BACKEND = "numpy"


def _as_c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def rate_matrix(p, gains, noise_w):
    """Achievable rates log2(1 + SINR), shape (N, K)."""
    return _impl.rate_matrix(_as_c(p), _as_c(gains), float(noise_w))


def hbar_all(p, eta, gains, noise_w):
    """Interference-pricing vector of the power update, shape (N,)."""
    return _impl.hbar_all(_as_c(p), _as_c(eta), _as_c(gains), float(noise_w))
