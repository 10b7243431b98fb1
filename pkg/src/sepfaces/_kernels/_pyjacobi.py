"""Pure-python fallback of the cyclic-Jacobi kernels.

Implements the same rotations in the same fixed sweep order as the
compiled extension, so both backends agree up to rounding. The batch
variant vectorizes one rotation across the whole stack, which keeps
grid scans tolerable without compiled code.
"""

from __future__ import annotations

import numpy as np

OFF_TOL = 1e-14
MAX_SWEEPS = 60


def _sweep_pairs(n):
    return [(p, q) for p in range(n - 1) for q in range(p + 1, n)]


def _off_mass(A):
    # summed directly (not total minus diagonal, which cancels catastrophically)
    n = A.shape[0]
    off = A.copy()
    off[np.arange(n), np.arange(n)] = 0.0
    return np.sqrt((np.abs(off) ** 2).sum())


def eigh(A):
    """Eigenvalues and eigenvectors of a Hermitian matrix (unsorted)."""
    A = np.array(A, dtype=np.complex128, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("eigh expects a square matrix")
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128)
    _jacobi(A, V)
    return np.diagonal(A).real.copy(), V


def eigvalsh(A):
    """Eigenvalues of a Hermitian matrix (unsorted)."""
    A = np.array(A, dtype=np.complex128, copy=True)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("eigvalsh expects a square matrix")
    _jacobi(A, None)
    return np.diagonal(A).real.copy()


def _jacobi(A, V):
    n = A.shape[0]
    fro = np.sqrt((np.abs(A) ** 2).sum())
    if fro == 0.0:
        return
    for _ in range(MAX_SWEEPS):
        if _off_mass(A) <= OFF_TOL * fro:
            return
        for p, q in _sweep_pairs(n):
            apq = A[p, q]
            absa = abs(apq)
            if absa <= 1e-300:
                continue
            tau = (A[q, q].real - A[p, p].real) / (2.0 * absa)
            sgn = 1.0 if tau >= 0.0 else -1.0
            t = sgn / (abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            x = apq / absa
            cp, cq = A[:, p].copy(), A[:, q].copy()
            A[:, p] = c * cp - s * np.conj(x) * cq
            A[:, q] = s * x * cp + c * cq
            rp, rq = A[p, :].copy(), A[q, :].copy()
            A[p, :] = c * rp - s * x * rq
            A[q, :] = s * np.conj(x) * rp + c * rq
            A[p, q] = 0.0
            A[q, p] = 0.0
            A[p, p] = A[p, p].real
            A[q, q] = A[q, q].real
            if V is not None:
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * np.conj(x) * vq
                V[:, q] = s * x * vp + c * vq
    raise RuntimeError("jacobi rotation did not converge in 60 sweeps")


def eigvalsh_batch(As):
    """Eigenvalues of a stack of Hermitian matrices, shape (N, n, n)."""
    A = np.array(As, dtype=np.complex128, copy=True)
    if A.ndim != 3 or A.shape[1] != A.shape[2]:
        raise ValueError("eigvalsh_batch expects shape (N, n, n)")
    N, n, _ = A.shape
    if N == 0:
        return np.zeros((0, n))
    fro = np.sqrt((np.abs(A) ** 2).sum(axis=(1, 2)))
    idx = np.arange(n)
    for _ in range(MAX_SWEEPS):
        off = A.copy()
        off[:, idx, idx] = 0.0
        off_mass = np.sqrt((np.abs(off) ** 2).sum(axis=(1, 2)))
        if np.all(off_mass <= OFF_TOL * fro):
            return A[:, idx, idx].real.copy()
        for p, q in _sweep_pairs(n):
            apq = A[:, p, q]
            absa = np.abs(apq)
            act = absa > 1e-300
            denom = np.where(act, 2.0 * absa, 1.0)
            tau = np.where(act, (A[:, q, q].real - A[:, p, p].real) / denom, 0.0)
            sgn = np.where(tau >= 0.0, 1.0, -1.0)
            with np.errstate(over="ignore"):  # huge tau just flushes t to 0
                t = np.where(act, sgn / (np.abs(tau) + np.sqrt(1.0 + tau * tau)), 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            x = np.where(act, apq / np.where(act, absa, 1.0), 1.0)
            sx = s * x
            sxc = np.conj(sx)  # s is real, so this is s * conj(x)
            cp, cq = A[:, :, p].copy(), A[:, :, q].copy()
            A[:, :, p] = c[:, None] * cp - sxc[:, None] * cq
            A[:, :, q] = sx[:, None] * cp + c[:, None] * cq
            rp, rq = A[:, p, :].copy(), A[:, q, :].copy()
            A[:, p, :] = c[:, None] * rp - sx[:, None] * rq
            A[:, q, :] = sxc[:, None] * rp + c[:, None] * rq
            A[:, p, q] = 0.0
            A[:, q, p] = 0.0
            A[:, p, p] = A[:, p, p].real
            A[:, q, q] = A[:, q, q].real
    raise RuntimeError("jacobi rotation did not converge in 60 sweeps")
