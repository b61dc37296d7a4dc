"""Backend dispatch for the hot quadrature integrands.

At import time the compiled extension is preferred; the NumPy fallback is
selected when the extension is missing or when the environment variable
``SGCOHERENCE_BACKEND=python`` forces it. ``use_backend`` rebinds the
module-level functions at runtime (used by the benchmark and the
backend-parity tests).
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py

_FORCED = os.environ.get("SGCOHERENCE_BACKEND", "").strip().lower()

_impl: ModuleType
if _FORCED in ("", "cython", "c"):
    try:
        from . import _kernels_c as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        if _FORCED:
            raise
        _impl = _kernels_py
        BACKEND = "python"
elif _FORCED == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    raise ValueError(f"unknown SGCOHERENCE_BACKEND {_FORCED!r}")

overlap_integrand = _impl.overlap_integrand
kernel_integrand = _impl.kernel_integrand


def available_backends() -> list[str]:
    names = ["python"]
    try:
        from . import _kernels_c  # noqa: F401

        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def use_backend(name: str) -> str:
    """Switch the active integrand implementation; returns the new name."""
    global _impl, BACKEND, overlap_integrand, kernel_integrand
    if name == "python":
        _impl = _kernels_py
    elif name in ("cython", "c"):
        from . import _kernels_c

        _impl = _kernels_c
        name = "cython"
    else:
        raise ValueError(f"unknown backend {name!r}")
    BACKEND = name
    overlap_integrand = _impl.overlap_integrand
    kernel_integrand = _impl.kernel_integrand
    return BACKEND
