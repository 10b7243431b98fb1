"""Backend-level checks: both kernel implementations, and their agreement."""

import numpy as np
import pytest

from sepfaces import _kernels as kernels

from conftest import random_state


def hermitian(rng, n):
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (A + A.conj().T) / 2


def test_eigh_identity(backend):
    w, V = kernels.hermitian_eigh(np.eye(8) / 8)
    assert np.allclose(w, 1 / 8, atol=1e-14)
    assert np.abs(V.conj().T @ V - np.eye(8)).max() < 1e-12


def test_eigh_reconstruction(backend, rng):
    for n in (1, 2, 4, 8, 13):
        for _ in range(5):
            H = hermitian(rng, n)
            w, V = kernels.hermitian_eigh(H)
            assert np.all(np.diff(w) >= 0)
            rec = (V * w) @ V.conj().T
            scale = np.linalg.norm(H)
            assert np.linalg.norm(rec - H) <= 1e-12 * max(scale, 1e-300)
            assert np.abs(V.conj().T @ V - np.eye(n)).max() < 1e-12


def test_eigh_zero_matrix(backend):
    w, V = kernels.hermitian_eigh(np.zeros((5, 5)))
    assert np.all(w == 0)
    assert np.array_equal(V, np.eye(5))


def test_eigvalsh_matches_eigh(backend, rng):
    H = hermitian(rng, 8)
    w, _ = kernels.hermitian_eigh(H)
    assert np.allclose(kernels.hermitian_eigvalsh(H), w, atol=1e-13)


def test_eigvalsh_batch_matches_single(backend, rng):
    mats = np.array([hermitian(rng, 4) for _ in range(40)] + [np.zeros((4, 4))])
    W = kernels.hermitian_eigvalsh_batch(mats)
    for row, M in zip(W, mats):
        assert np.allclose(row, kernels.hermitian_eigvalsh(M), atol=1e-13)


def test_nonsquare_rejected(backend):
    with pytest.raises(ValueError):
        kernels.hermitian_eigh(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        kernels.hermitian_eigvalsh_batch(np.zeros((2, 3, 4)))


@pytest.mark.skipif(len(kernels.available_backends()) < 2,
                    reason="compiled extension not built")
def test_backend_agreement(rng):
    H = hermitian(rng, 8)
    rho = random_state(rng)
    batch = np.array([hermitian(rng, 4) for _ in range(10)])
    results = {}
    for name in kernels.available_backends():
        kernels.use_backend(name)
        try:
            results[name] = (
                kernels.hermitian_eigh(H),
                kernels.hermitian_eigvalsh(rho),
                kernels.hermitian_eigvalsh_batch(batch),
            )
        finally:
            kernels.use_backend("compiled")
    (wc, Vc), sc, bc = results["compiled"]
    (wp, Vp), sp, bp = results["python"]
    assert np.allclose(wc, wp, atol=1e-13)
    assert np.allclose(sc, sp, atol=1e-13)
    assert np.allclose(bc, bp, atol=1e-13)
    # same rotation sequence: eigenvectors agree up to per-column phase
    overlap = np.abs(np.sum(Vc.conj() * Vp, axis=0))
    assert np.allclose(overlap, 1.0, atol=1e-10)
