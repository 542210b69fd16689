"""Statevector kernels: compiled extension when built, NumPy otherwise.

``BACKEND`` names the active implementation. ``use_backend`` switches at
runtime (used by the benchmark and the cross-backend tests).
"""
from . import _fallback

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_IMPLS = {"python": _fallback}
if _ckernels is not None:
    _IMPLS["cython"] = _ckernels

_KERNELS = ("apply_1q", "apply_cnot", "apply_rzz", "apply_pauli", "probabilities")


def available():
    return sorted(_IMPLS)


def use_backend(name):
    """Rebind the module-level kernels; callers must go through the module."""
    global BACKEND
    if name not in _IMPLS:
        raise ValueError(f"kernel backend {name!r} not available; have {available()}")
    BACKEND = name
    impl = _IMPLS[name]
    globals().update({k: getattr(impl, k) for k in _KERNELS})


BACKEND = ""
use_backend("cython" if _ckernels is not None else "python")
