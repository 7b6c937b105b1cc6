import numpy as np
import pytest

from hopfred import algebra as alg
from hopfred.clifford import antisym_product, build_rep, clifford_check, gamma_multiply, gamma_pair_table, gamma_quad_table
from hopfred.errors import DimensionMismatch, UnsupportedDimension


@pytest.mark.parametrize("n", [2, 4, 8])
def test_relations(n):
    for key, dev in clifford_check(build_rep(n)).items():
        assert dev <= 1e-12, key


@pytest.mark.parametrize("n", [2, 4, 8])
def test_shapes(n):
    rep = build_rep(n)
    assert rep.lam.shape == (n - 1, n, n)
    assert rep.gamma.shape == (n, n, n)
    assert rep.big_gamma.shape == (n + 1, 2 * n, 2 * n)
    assert rep.sigma.shape == (n, n, n, n)
    assert rep.spinor_dim == 2 * n


def test_nine_symmetric_sixteen_by_sixteen():
    g = build_rep(8).big_gamma
    assert g.shape == (9, 16, 16)
    assert np.array_equal(g, g.transpose(0, 2, 1))


@pytest.mark.parametrize("n", [2, 4, 8])
def test_gamma_family_is_left_multiplication(n):
    rep = build_rep(n)
    rng = np.random.default_rng(n)
    x, y = rng.normal(size=(2, 20, n))
    assert np.allclose(gamma_multiply(rep, x, y), alg.multiply(x, y), atol=1e-13)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_lambda_is_right_multiplication(n):
    rep = build_rep(n)
    rng = np.random.default_rng(n)
    y = rng.normal(size=n)
    for mu in range(n - 1):
        assert np.allclose(rep.lam[mu] @ y, alg.multiply(y, alg.basis(n, mu + 1)), atol=1e-14)


def test_gamma_multiply_checks_dimension():
    with pytest.raises(DimensionMismatch):
        gamma_multiply(build_rep(4), np.ones(4), np.ones(8))


def test_unsupported():
    with pytest.raises(UnsupportedDimension):
        build_rep(3)


def test_antisym_product():
    rep = build_rep(8)
    g = rep.big_gamma
    assert np.allclose(antisym_product(rep, (1, 2)), g[0] @ g[1])
    assert np.allclose(antisym_product(rep, (2, 2)), 0.0)
    assert np.allclose(antisym_product(rep, (1, 2, 3, 4)), g[0] @ g[1] @ g[2] @ g[3])
    assert np.allclose(antisym_product(rep, (2, 1)), -antisym_product(rep, (1, 2)))
    with pytest.raises(IndexError):
        antisym_product(rep, (0, 1))
    with pytest.raises(IndexError):
        antisym_product(rep, (1, 10))


def test_cached_tables_match_antisym_product():
    rep = build_rep(8)
    g2, g4 = gamma_pair_table(8), gamma_quad_table(8)
    assert np.allclose(g2[2, 5], antisym_product(rep, (3, 6)))
    assert np.allclose(g4[0, 3, 5, 8], antisym_product(rep, (1, 4, 6, 9)))
    assert not g4[1, 1, 2, 3].any()
