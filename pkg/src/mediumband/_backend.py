"""Kernel backend selection.

The compiled extension ``mediumband._kernels`` is preferred; the pure-NumPy
twin ``mediumband._kernels_np`` is the fallback.  Set the environment
variable ``MEDIUMBAND_BACKEND`` to ``cython`` or ``python`` to force one
(forcing ``cython`` raises if the extension is missing).
"""

import os

import numpy as np

from . import _kernels_np

_FORCED = os.environ.get("MEDIUMBAND_BACKEND", "").strip().lower()

if _FORCED == "python":
    _impl = _kernels_np
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        if _FORCED == "cython":
            raise ImportError(
                "MEDIUMBAND_BACKEND=cython but the compiled extension is "
                "not available; reinstall the package or unset the variable"
            )
        _impl = _kernels_np

OBJ_COMPONENT = _kernels_np.OBJ_COMPONENT
OBJ_MAGNITUDE = _kernels_np.OBJ_MAGNITUDE


def get_backend():
    """Active kernel module (its NAME attribute is 'cython' or 'python')."""
    return _impl


def set_backend(kernels):
    """Swap the active kernel module; returns the previous one.

    Intended for tests and benchmarks that compare implementations.
    """
    global _impl
    previous = _impl
    _impl = kernels
    return previous


def backend_name():
    return _impl.NAME


def rc_pulse(x, beta, half_span):
    return _impl.rc_pulse(x, beta, half_span)


def sync_batch(wr, wi, tau, beta, half_span, lo, hi, res, tol, objective):
    return _impl.sync_batch(wr, wi, tau, beta, half_span, lo, hi, res, tol,
                            objective)


def taps_batch(wr, wi, tau, beta, half_span, t0, k_lo, k_hi):
    return _impl.taps_batch(wr, wi, tau, beta, half_span, t0, k_lo, k_hi)


def ber_detect_batch(taps, k0, bits, noise, sigma_w):
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    return _impl.ber_detect_batch(taps, k0, bits, noise, sigma_w)
