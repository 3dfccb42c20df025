import numpy as np
import pytest
import sympy as sp

from conftest import S1, S2, S3, S5, make
from geosub import markov, transferdim as td
from geosub.errors import InfiniteImpulsiveSpace, Inapplicable, NotLeftInvertible, NotSquare
from geosub.linalg import nullspace_basis
from geosub.sysmodel import random_system

s = sp.symbols("s")


def _sym(M):
    return sp.Matrix(np.asarray(M).astype(int).tolist())


def _coeffs(expr, size):
    c = sp.Poly(sp.expand(expr), s).all_coeffs()[::-1] if expr != 0 else []
    out = np.zeros(size)
    out[:len(c)] = [float(x) for x in c]
    return out


def _exact_pencil_det(sys):
    n, m = sys.n, sys.m
    U1 = sp.diag(sp.eye(n), sp.zeros(m, m))
    U2 = sp.Matrix(sp.BlockMatrix([[_sym(sys.A), _sym(sys.B)], [_sym(sys.C), _sym(sys.D)]]))
    return (s * U1 - U2).det(method="berkowitz")


def test_polynomial_basics():
    p = td.Polynomial([1.0, 2.0, 0.0, 1e-12])
    assert p.degree == 1 and p.trimmed().coeffs.size == 2
    assert td.Polynomial([0.0, 0.0]).degree == td.ZERO_DEGREE
    assert np.array_equal(p.reflect().coeffs, [1.0, -2.0, 0.0, -1e-12])
    q = td.Polynomial([1.0, 1.0]) * td.Polynomial([1.0, -1.0])
    assert q.allclose([1.0, 0.0, -1.0]) and q.odd_part_ratio() == 0.0
    assert (td.Polynomial([1.0, 1.0]) ** 3).allclose([1, 3, 3, 1])
    assert np.isclose(p(2.0), 5.0)


def test_balanced_degree_uses_radius():
    # raw leading/max ratio 1e-10 would be trimmed at radius 1
    c = [1e10, 0.0, 1.0]
    assert td.Polynomial(c).degree == 0
    assert td.Polynomial(c, radius=1e5).degree == 2


def test_fujiwara_bound_encloses_roots():
    rng = np.random.default_rng(0)
    for _ in range(50):
        c = rng.standard_normal(int(rng.integers(2, 8)))
        assert np.abs(np.roots(c[::-1])).max() <= td.fujiwara_bound(c) * (1 + 1e-12)


def test_integer_nodes():
    assert np.array_equal(td.integer_nodes(5), [0, 1, -1, 2, -2])


def test_char_poly_and_adjugate_examples():
    chi, adj = td.char_poly_and_adjugate([[0.0]])
    assert chi.allclose([0, 1]) and adj.entry(0, 0).allclose([1])
    chi, adj = td.char_poly_and_adjugate([[0.0, 1.0], [0.0, 0.0]])
    assert chi.allclose([0, 0, 1])
    assert adj.entry(0, 0).allclose([0, 1]) and adj.entry(0, 1).allclose([1])
    assert adj.entry(1, 0).is_zero() and adj.entry(1, 1).allclose([0, 1])


@pytest.mark.parametrize("seed", range(10))
def test_char_poly_and_adjugate_exact(seed):
    n = 1 + seed % 6
    A = np.random.default_rng(seed).integers(-3, 4, size=(n, n)).astype(float)
    chi, adj = td.char_poly_and_adjugate(A)
    M = s * sp.eye(n) - _sym(A)
    assert chi.allclose(_coeffs(M.det(method="berkowitz"), n + 1), rtol=1e-12)
    adj_ex = M.adjugate(method="berkowitz")
    for i in range(n):
        for j in range(n):
            want = _coeffs(adj_ex[i, j], n)
            assert np.allclose(adj.coeffs[i, j, :n], want, atol=1e-9 * max(1, np.abs(want).max()))


def test_numerator_matrix_examples():
    P, chi = td.numerator_matrix(S2)
    assert P.entry(0, 0).allclose([2, 1]) and chi.allclose([1, 1])
    P, chi = td.numerator_matrix(S1)
    assert P.entry(0, 0).allclose([1]) and chi.allclose([0, 0, 1])
    zero = make(np.eye(2), np.zeros((2, 1)), np.ones((1, 2)), np.zeros((1, 1)))
    assert td.numerator_matrix(zero)[0].max_degree == td.ZERO_DEGREE


@pytest.mark.parametrize("seed", range(8))
def test_numerator_matrix_exact(seed):
    sys = random_system(1 + seed % 4, 2, 2 + seed % 2, seed=seed)
    P, chi = td.numerator_matrix(sys)
    M = s * sp.eye(sys.n) - _sym(sys.A)
    G_num = _sym(sys.C) * M.adjugate() * _sym(sys.B) + _sym(sys.D) * M.det()
    for i in range(sys.p):
        for j in range(sys.m):
            assert np.allclose(P.coeffs[i, j, :sys.n + 1], _coeffs(G_num[i, j], sys.n + 1))


def test_pencil_det_examples():
    assert td.pencil_det_poly(S2).allclose([-2, -1])
    assert td.pencil_det_poly(S1).allclose([-1])
    assert td.pencil_det_poly(S5).is_zero()
    with pytest.raises(NotSquare):
        td.pencil_det_poly(S3)


@pytest.mark.parametrize("seed", range(12))
def test_pencil_det_exact(seed):
    sys = random_system(1 + seed % 6, 1 + seed % 3, 1 + seed % 3, seed=100 + seed)
    got = td.pencil_det_poly(sys)
    want = _coeffs(_exact_pencil_det(sys), sys.n + 1)
    assert np.allclose(got.coeffs, want, atol=1e-9 * max(1, np.abs(want).max()))


def test_pencil_det_is_signed_numerator_det():
    # det(s U1 - U2) = (-1)^m num det G for square systems
    sys = random_system(3, 2, 2, seed=5)
    P, chi = td.numerator_matrix(sys)
    Psym = sp.Matrix(2, 2, lambda i, j: sum(float(c) * s**k for k, c in enumerate(P.coeffs[i, j])))
    chisym = sum(float(c) * s**k for k, c in enumerate(chi.coeffs))
    num = sp.cancel(Psym.det() / chisym ** (sys.m - 1))
    want = _coeffs(num, sys.n + 1) * (-1) ** sys.m
    assert np.allclose(td.pencil_det_poly(sys).coeffs, want, atol=1e-8)


def test_even_numdet_examples():
    assert td.even_numdet(S3).allclose([2, 0, -1])
    assert td.even_numdet(S2).allclose([4, 0, -1])
    q1 = td.even_numdet(S1)
    assert q1.degree == 0 and q1.allclose([1])
    with pytest.raises(NotLeftInvertible):
        td.even_numdet(S5)


def test_division_route_matches_on_small_systems():
    checked = 0
    for seed in range(200):
        sys = random_system(1 + seed % 2, 1 + seed % 3, 1 + (seed // 3) % 3, seed=seed)
        if not td.is_left_invertible(sys):
            continue
        a, b = td.even_numdet(sys), td.even_numdet_by_division(sys)
        assert a.degree == b.degree
        assert a.allclose(b.coeffs, rtol=1e-6)
        checked += 1
    assert checked > 50


def test_even_numdet_exact_nonsquare():
    sys = random_system(2, 1, 2, seed=3)
    P, chi = td.numerator_matrix(sys)
    col = [sum(float(c) * s**k for k, c in enumerate(P.coeffs[i, 0])) for i in range(2)]
    want = sp.expand(sum(e.subs(s, -s) * e for e in col))
    assert td.even_numdet(sys).allclose(_coeffs(want, 5), rtol=1e-9)


def test_left_invertibility_examples():
    assert td.is_left_invertible(S3)
    assert not td.is_left_invertible(S5)
    assert td.is_left_invertible(S2)
    wide = random_system(2, 2, 1, seed=0)
    assert not td.is_left_invertible(wide)


def test_dims_examples():
    d2 = td.dims_from_transfer(S2)
    assert (d2.n_s, d2.n_f, d2.route) == (1, 0, "square")
    d1 = td.dims_from_transfer(S1)
    assert (d1.n_s, d1.n_f) == (0, 2)
    d3 = td.dims_from_transfer(S3)
    assert (d3.n_s, d3.n_f, d3.route) == (1, 0, "even")
    with pytest.raises(Inapplicable):
        td.dims_from_transfer(S5)


def test_routes_agree_on_square_invertible():
    seen = 0
    for seed in range(300):
        n, m = 1 + seed % 6, 1 + seed % 3
        sys = random_system(n, m, m, seed=seed)
        if not td.is_left_invertible(sys):
            continue
        assert td.even_numdet(sys).degree == 2 * td.pencil_det_poly(sys).degree
        seen += 1
    assert seen > 100


def test_strictly_proper_examples():
    assert td.strictly_proper_product_check(S1, [[1], [1]])
    assert not td.strictly_proper_product_check(S2, [[1]])
    assert td.strictly_proper_product_check(S2, np.zeros((2, 1)))


def test_strictly_proper_matches_admissibility():
    rng = np.random.default_rng(17)
    pairs = 0
    for seed in range(300):
        sys = random_system(1 + seed % 5, 1 + seed % 3, 1 + (seed // 3) % 3, seed=seed)
        try:
            imp = markov.impulsive_space(sys)
        except InfiniteImpulsiveSpace:
            imp = None
        inputs = [rng.integers(-2, 3, size=(int(rng.integers(1, 4)), sys.m)).astype(float)]
        if imp is not None and imp.f:
            inputs.append(imp.input_coeffs(rng.standard_normal(imp.f)))
        if imp is None:
            k = int(rng.integers(1, 4))
            N = nullspace_basis(markov.build_markov(sys, k).assembled).basis
            inputs.append((N @ rng.standard_normal(N.shape[1])).reshape(k, sys.m))
        for u in inputs:
            assert td.strictly_proper_product_check(sys, u) == markov.is_admissible(sys, u)
            pairs += 1
    assert pairs > 400
