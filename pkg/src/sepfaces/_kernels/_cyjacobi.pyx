# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled cyclic-Jacobi core for small Hermitian matrices.

One rotation per off-diagonal pair in fixed row-major order
(0,1),(0,2),...,(n-2,n-1); sweeps repeat until the off-diagonal
Frobenius mass falls below 1e-14 of the input Frobenius norm.
The fixed sweep order makes results reproducible across runs and
identical (up to rounding) to the pure-python fallback.
"""

from libc.math cimport fabs, sqrt

import numpy as np

cdef double OFF_TOL = 1e-14
cdef int MAX_SWEEPS = 60


cdef inline double _abs2(double complex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef int _jacobi(double complex[:, :] A, double complex[:, :] V,
                 int n, bint want_vectors) noexcept nogil:
    """Diagonalize Hermitian A in place; returns 0 on convergence."""
    cdef double fro = 0.0, off, app, aqq, absa, tau, t, c, s, sgn
    cdef double complex apq, x, xc, tp, tq
    cdef int i, p, q, sweep

    for p in range(n):
        for q in range(n):
            fro += _abs2(A[p, q])
    fro = sqrt(fro)
    if fro == 0.0:
        return 0

    for sweep in range(MAX_SWEEPS):
        off = 0.0
        for p in range(n):
            for q in range(p + 1, n):
                off += 2.0 * _abs2(A[p, q])
        if sqrt(off) <= OFF_TOL * fro:
            return 0
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                absa = sqrt(_abs2(apq))
                if absa <= 1e-300:
                    continue
                app = A[p, p].real
                aqq = A[q, q].real
                tau = (aqq - app) / (2.0 * absa)
                sgn = 1.0 if tau >= 0.0 else -1.0
                t = sgn / (fabs(tau) + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                x = apq / absa
                xc = x.conjugate()
                # A <- A G with the unitary G rotating columns p, q
                for i in range(n):
                    tp = A[i, p]
                    tq = A[i, q]
                    A[i, p] = c * tp - s * xc * tq
                    A[i, q] = s * x * tp + c * tq
                # A <- G^H A
                for i in range(n):
                    tp = A[p, i]
                    tq = A[q, i]
                    A[p, i] = c * tp - s * x * tq
                    A[q, i] = s * xc * tp + c * tq
                # enforce the exact zeros/reals the rotation produces
                A[p, q] = 0
                A[q, p] = 0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                if want_vectors:
                    for i in range(n):
                        tp = V[i, p]
                        tq = V[i, q]
                        V[i, p] = c * tp - s * xc * tq
                        V[i, q] = s * x * tp + c * tq
    return 1


def eigh(A):
    """Eigenvalues and eigenvectors of a Hermitian matrix (unsorted)."""
    cdef double complex[:, :] work
    cdef double complex[:, :] vecs
    cdef int n, status
    W = np.array(A, dtype=np.complex128, order="C", copy=True)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("eigh expects a square matrix")
    n = W.shape[0]
    Vm = np.eye(n, dtype=np.complex128)
    work = W
    vecs = Vm
    with nogil:
        status = _jacobi(work, vecs, n, 1)
    if status:
        raise RuntimeError("jacobi rotation did not converge in 60 sweeps")
    return np.diagonal(W).real.copy(), Vm


def eigvalsh(A):
    """Eigenvalues of a Hermitian matrix (unsorted)."""
    cdef double complex[:, :] work
    cdef int n, status
    W = np.array(A, dtype=np.complex128, order="C", copy=True)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise ValueError("eigvalsh expects a square matrix")
    n = W.shape[0]
    work = W
    with nogil:
        status = _jacobi(work, work, n, 0)
    if status:
        raise RuntimeError("jacobi rotation did not converge in 60 sweeps")
    return np.diagonal(W).real.copy()


def eigvalsh_batch(As):
    """Eigenvalues of a stack of Hermitian matrices, shape (N, n, n)."""
    cdef double complex[:, :, :] work
    cdef Py_ssize_t k, N
    cdef int n, status
    W = np.array(As, dtype=np.complex128, order="C", copy=True)
    if W.ndim != 3 or W.shape[1] != W.shape[2]:
        raise ValueError("eigvalsh_batch expects shape (N, n, n)")
    N = W.shape[0]
    n = W.shape[1]
    work = W
    status = 0
    with nogil:
        for k in range(N):
            if _jacobi(work[k], work[k], n, 0):
                status = 1
                break
    if status:
        raise RuntimeError("jacobi rotation did not converge in 60 sweeps")
    return np.ascontiguousarray(np.diagonal(W, axis1=1, axis2=2).real)
