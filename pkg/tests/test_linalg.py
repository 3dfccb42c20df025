import numpy as np
import pytest

from geosub.errors import (
    BoundaryAmbiguity,
    DimensionMismatch,
    InvalidMatrix,
    SingularPencil,
)
from geosub.linalg import (
    SubspaceBasis,
    image_basis,
    is_regular_pencil,
    nullspace_basis,
    orthogonal_complement,
    ordered_pencil_eigenspace,
    rank,
    subspace_equal,
    subspace_intersection,
    subspace_sum,
)


def line(*v):
    v = np.asarray(v, float).reshape(-1, 1)
    return SubspaceBasis(v / np.linalg.norm(v))


@pytest.mark.parametrize("M, expected", [
    (np.eye(3), 3),
    (np.zeros((2, 4)), 0),
    ([[1, 2], [2, 4]], 1),
])
def test_rank_examples(M, expected):
    assert rank(M, 1e-9) == expected


def test_rank_rejects_nonfinite():
    with pytest.raises(InvalidMatrix):
        rank([[1.0, np.nan]])
    with pytest.raises(InvalidMatrix):
        nullspace_basis([[np.inf]])


def test_nullspace_examples():
    assert nullspace_basis(np.eye(2)).dim == 0
    assert nullspace_basis(np.zeros((1, 3))).dim == 3
    N = nullspace_basis([[1, 1]])
    assert N.dim == 1
    assert subspace_equal(N, line(1, -1))


def test_image_examples():
    assert image_basis(np.eye(2)).dim == 2
    assert image_basis(np.zeros((3, 2))).dim == 0
    assert subspace_equal(image_basis([[0, 1], [1, 0]]), SubspaceBasis.full(2))


def test_image_scale_floor_drops_rounding_noise():
    tiny = np.array([[1e-17], [0.0]])
    assert image_basis(tiny).dim == 1
    assert image_basis(tiny, scale=1.0).dim == 0


def test_rank_nullity(rng=np.random.default_rng(3)):
    for _ in range(50):
        r, c = rng.integers(1, 7, size=2)
        M = rng.integers(-2, 3, size=(r, c)).astype(float)
        N = nullspace_basis(M)
        assert rank(M) + N.dim == c
        if N.dim:
            assert np.linalg.norm(M @ N.basis, 2) <= 10 * 1e-9 * max(1, np.linalg.norm(M, 2))
            assert N.orthogonality_error() < 1e-12


def test_subspace_equal_examples():
    e1 = line(1, 0)
    assert subspace_equal(e1, line(2, 0))
    assert not subspace_equal(e1, line(0, 1))
    Q, _ = np.linalg.qr(np.array([[1.0, 2.0], [3.0, -1.0]]))
    assert subspace_equal(SubspaceBasis.full(2), SubspaceBasis(Q))
    with pytest.raises(DimensionMismatch):
        subspace_equal(e1, line(1, 0, 0))


def test_sum_intersection_complement():
    x, y = line(1, 0, 0), line(0, 1, 0)
    plane = subspace_sum(x, y)
    assert plane.dim == 2
    assert subspace_intersection(plane, line(1, 1, 0)).dim == 1
    assert subspace_intersection(x, y).dim == 0
    assert subspace_equal(orthogonal_complement(plane), line(0, 0, 1))
    assert plane.contains([3, -2, 0]) and not plane.contains([0, 0, 1])


def test_pencil_diagonal_all_finite_and_lhp():
    U1, U2 = np.eye(2), np.diag([-1.0, 3.0])
    eig = ordered_pencil_eigenspace(U1, U2, "all_finite")
    assert eig.r == 2
    assert np.allclose(np.sort(eig.eigenvalues.real), [-1, 3])
    good = ordered_pencil_eigenspace(U1, U2, "open_left_half_plane")
    assert good.r == 1 and np.allclose(good.eigenvalues, [-1])
    assert np.allclose(np.linalg.eigvals(good.J), [-1])


def test_pencil_s2_example():
    U1, U2 = np.diag([1.0, 0.0]), np.array([[-1.0, 1.0], [1.0, 1.0]])
    eig = ordered_pencil_eigenspace(U1, U2, "all_finite")
    assert eig.r == 1 and np.allclose(eig.J, [[-2.0]])
    v = eig.V[:, 0] / eig.V[0, 0]
    assert np.allclose(v, [1, -1])
    assert eig.residual(U1, U2) <= 1e-9 * (1 + np.linalg.norm(U2, 2))


def test_pencil_complex_pair_stays_real():
    U1 = np.eye(3)
    U2 = np.array([[-1.0, 2.0, 0.0], [-2.0, -1.0, 0.0], [0.0, 0.0, 4.0]])
    eig = ordered_pencil_eigenspace(U1, U2, "open_left_half_plane")
    assert eig.r == 2 and eig.J.dtype == float
    assert np.allclose(np.sort_complex(np.linalg.eigvals(eig.J)), [-1 - 2j, -1 + 2j])


def test_pencil_singular_and_boundary():
    U1 = np.diag([1.0, 0.0])
    with pytest.raises(SingularPencil):
        ordered_pencil_eigenspace(U1, np.array([[0.0, 1.0], [0.0, 0.0]]), "all_finite")
    with pytest.raises(BoundaryAmbiguity):
        ordered_pencil_eigenspace(np.eye(2), np.diag([0.0, -1.0]), "open_left_half_plane")
    # the all-finite selection needs no side decision
    assert ordered_pencil_eigenspace(np.eye(2), np.diag([0.0, -1.0]), "all_finite").r == 2


def test_regularity():
    assert is_regular_pencil(np.eye(2), np.zeros((2, 2)))
    assert not is_regular_pencil(np.zeros((2, 2)), np.array([[1.0, 0.0], [0.0, 0.0]]))


def test_lhp_is_subselection_of_all_finite(rng=np.random.default_rng(5)):
    for _ in range(40):
        n = int(rng.integers(1, 6))
        U1 = np.diag(np.r_[np.ones(n), np.zeros(1)])
        U2 = rng.integers(-3, 4, size=(n + 1, n + 1)).astype(float)
        if not is_regular_pencil(U1, U2):
            continue
        allf = ordered_pencil_eigenspace(U1, U2, "all_finite", n=n)
        try:
            good = ordered_pencil_eigenspace(U1, U2, "open_left_half_plane", n=n)
        except BoundaryAmbiguity:
            continue
        ev = list(allf.eigenvalues)
        for z in good.eigenvalues:
            j = int(np.argmin(np.abs(np.asarray(ev) - z)))
            assert abs(ev[j] - z) < 1e-6 * max(1, abs(z))
            ev.pop(j)
        for e in (allf, good):
            assert e.residual(U1, U2) <= 1e-8 * (1 + np.linalg.norm(U2, 2))
