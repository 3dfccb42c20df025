"""numba-compiled loop kernels.

Loop-level twins of ``_kernels_numpy``. Small fixed-size matrices dominate
this package, so avoiding per-call numpy dispatch is where the time goes.
Importing this module requires numba.
"""
import numpy as np
from numba import njit

_opts = {"cache": True, "nogil": True}


@njit(**_opts)
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


@njit(**_opts)
def assemble_markov(blocks, k):
    p = blocks.shape[1]
    m = blocks.shape[2]
    out = np.zeros((k * p, k * m))
    for i in range(k):
        for j in range(k - 1 - i, k):
            idx = i + j - (k - 1)
            for r in range(p):
                for c in range(m):
                    out[i * p + r, j * m + c] = blocks[idx, r, c]
    return out


@njit(**_opts)
def krylov_blocks(A, B, k):
    n, m = B.shape
    out = np.empty((n, k * m))
    AkB = B.copy()
    for j in range(k):
        out[:, j * m:(j + 1) * m] = AkB
        AkB = A @ AkB
    return out


@njit(**_opts)
def faddeev_leverrier(A):
    n = A.shape[0]
    chi = np.zeros(n + 1)
    chi[n] = 1.0
    adj = np.zeros((n, n, max(n, 1)))
    Mk = np.zeros((n, n))
    for k in range(1, n + 1):
        Mk = A @ Mk
        for i in range(n):
            Mk[i, i] += chi[n - k + 1]
        adj[:, :, n - k] = Mk
        AM = A @ Mk
        tr = 0.0
        for i in range(n):
            tr += AM[i, i]
        chi[n - k] = -tr / k
    return chi, adj


@njit(**_opts)
def polymat_mul(P, Q):
    r, inner, dP = P.shape
    c = Q.shape[1]
    dQ = Q.shape[2]
    out = np.zeros((r, c, dP + dQ - 1))
    for i in range(r):
        for j in range(c):
            for k in range(inner):
                for a in range(dP):
                    pa = P[i, k, a]
                    if pa == 0.0:
                        continue
                    for b in range(dQ):
                        out[i, j, a + b] += pa * Q[k, j, b]
    return out


@njit(**_opts)
def polymat_eval(P, nodes):
    r, c, d = P.shape
    out = np.zeros((nodes.shape[0], r, c), dtype=np.complex128)
    for t in range(nodes.shape[0]):
        z = nodes[t]
        for i in range(r):
            for j in range(c):
                acc = 0j
                for e in range(d - 1, -1, -1):
                    acc = acc * z + P[i, j, e]
                out[t, i, j] = acc
    return out


@njit(**_opts)
def pencil_dets(E, A, nodes):
    out = np.empty(nodes.shape[0], dtype=np.complex128)
    Ec = E.astype(np.complex128)
    Ac = A.astype(np.complex128)
    for t in range(nodes.shape[0]):
        out[t] = np.linalg.det(nodes[t] * Ec - Ac)
    return out


@njit(**_opts)
def polymat_dets(P, nodes):
    vals = polymat_eval(P, nodes)
    out = np.empty(nodes.shape[0], dtype=np.complex128)
    for t in range(nodes.shape[0]):
        out[t] = np.linalg.det(np.ascontiguousarray(vals[t]))
    return out
