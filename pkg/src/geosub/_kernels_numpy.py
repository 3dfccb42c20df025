"""Vectorized numpy implementations of the hot kernels.

Selected when numba is unavailable or ``GEOSUB_NO_NUMBA=1`` is set. Every
function here has a loop-based twin in ``_kernels_numba`` with identical
signature and semantics.
"""
import numpy as np


def markov_blocks(A, B, C, D, count):
    p, m = D.shape
    out = np.empty((count, p, m))
    if count == 0:
        return out
    out[0] = D
    AkB = B.copy()
    for j in range(1, count):
        out[j] = C @ AkB
        AkB = A @ AkB
    return out


def assemble_markov(blocks, k):
    _, p, m = blocks.shape
    padded = np.concatenate([np.zeros((1, p, m)), blocks[:k]], axis=0)
    i = np.arange(k)[:, None]
    j = np.arange(k)[None, :]
    # block (i, j) holds parameter number i + j - (k - 1); negative means zero
    idx = np.clip(i + j - (k - 1) + 1, 0, None)
    return padded[idx].transpose(0, 2, 1, 3).reshape(k * p, k * m)


def krylov_blocks(A, B, k):
    n, m = B.shape
    out = np.empty((n, k * m))
    AkB = B.copy()
    for j in range(k):
        out[:, j * m:(j + 1) * m] = AkB
        AkB = A @ AkB
    return out


def faddeev_leverrier(A):
    n = A.shape[0]
    chi = np.zeros(n + 1)
    chi[n] = 1.0
    adj = np.zeros((n, n, max(n, 1)))
    eye = np.eye(n)
    Mk = np.zeros((n, n))
    for k in range(1, n + 1):
        Mk = A @ Mk + chi[n - k + 1] * eye
        adj[:, :, n - k] = Mk
        chi[n - k] = -np.trace(A @ Mk) / k
    return chi, adj


def polymat_mul(P, Q):
    dP = P.shape[2]
    dQ = Q.shape[2]
    T = np.einsum("ika,kjb->ijab", P, Q)
    out = np.zeros((P.shape[0], Q.shape[1], dP + dQ - 1))
    for a in range(dP):
        out[:, :, a:a + dQ] += T[:, :, a, :]
    return out


def polymat_eval(P, nodes):
    powers = nodes[:, None] ** np.arange(P.shape[2])[None, :]
    return np.einsum("ijd,nd->nij", P.astype(np.complex128), powers)


def pencil_dets(E, A, nodes):
    stack = nodes[:, None, None] * E[None, :, :] - A[None, :, :]
    return np.linalg.det(stack)


def polymat_dets(P, nodes):
    return np.linalg.det(polymat_eval(P, nodes))
