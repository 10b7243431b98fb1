"""Kernel dispatch: compiled cyclic-Jacobi core with a pure-python fallback.

The compiled extension is used when importable; setting the environment
variable ``SEPFACES_PURE=1`` (or calling :func:`use_backend`) forces the
pure-python implementation. Both backends run the same rotation sequence,
so results agree up to floating-point rounding.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pyjacobi

try:
    from . import _cyjacobi
except ImportError:  # extension not built; stay pure
    _cyjacobi = None

if _cyjacobi is not None and not os.environ.get("SEPFACES_PURE"):
    _impl = _cyjacobi
else:
    _impl = _pyjacobi


def backend_name() -> str:
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return "compiled" if _impl is _cyjacobi else "python"


def available_backends() -> tuple[str, ...]:
    return ("compiled", "python") if _cyjacobi is not None else ("python",)


def use_backend(name: str) -> None:
    """Switch kernels at runtime; intended for tests and benchmarks."""
    global _impl
    if name == "python":
        _impl = _pyjacobi
    elif name == "compiled":
        if _cyjacobi is None:
            raise RuntimeError("compiled kernel extension is not available")
        _impl = _cyjacobi
    else:
        raise ValueError(f"unknown backend {name!r}")


def hermitian_eigh(A) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and matching eigenvector columns."""
    w, V = _impl.eigh(A)
    order = np.argsort(w, kind="stable")
    return w[order], np.ascontiguousarray(V[:, order])


def hermitian_eigvalsh(A) -> np.ndarray:
    """Ascending eigenvalues of one Hermitian matrix."""
    return np.sort(_impl.eigvalsh(A))


def hermitian_eigvalsh_batch(As) -> np.ndarray:
    """Ascending eigenvalues of a stack of Hermitian matrices, row per matrix."""
    return np.sort(_impl.eigvalsh_batch(As), axis=1)
