import numpy as np
import pytest

from hopfred.clifford import build_rep
from hopfred.errors import ChartSingularity, UnsupportedDimension
from hopfred.gauge import d_form, killing, potential, reduce_potential
from hopfred.hopf import fiber_coords
from hopfred import mechanics as mech


def test_dirac_potential_closed_form():
    # A_12 = (x1 xdot2 - x2 xdot1) / (2 r (r + x3)) at x = (0.3, 0.4, 0.5)
    red = reduce_potential(2, potential(build_rep(2), [0.3, 0.4, 0.5]))
    assert np.allclose(red.components, [-0.23431457505076198, 0.17573593128807148, 0.0], rtol=1e-14)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_potential_structure(n):
    rng = np.random.default_rng(n)
    x = rng.normal(size=(20, n + 1))
    x[:, -1] = np.abs(x[:, -1])
    A = potential(build_rep(n), x).coeffs
    assert A.shape == (20, n, n, n + 1)
    assert np.abs(A + np.swapaxes(A, 1, 2)).max() == 0.0
    assert not A[..., -1].any()


def test_potential_singular_on_south_string():
    with pytest.raises(ChartSingularity):
        potential(build_rep(4), [0.0, 0.0, 0.0, 0.0, -2.0])


def test_eps_reduction_identity():
    rng = np.random.default_rng(4)
    x = rng.normal(size=(200, 5))
    x[:, -1] = np.abs(x[:, -1])
    red = reduce_potential(4, potential(build_rep(4), x))
    assert red.residual <= 1e-12
    assert red.components.shape == (200, 3, 5)


def test_reduce_only_two_and_four():
    with pytest.raises(UnsupportedDimension):
        reduce_potential(8, potential(build_rep(8), np.ones(9)))


def test_dirac_field_has_half_unit_flux():
    from hopfred.verification import dirac_curl_check

    assert dirac_curl_check(trials=20).passed


@pytest.mark.parametrize("n", [2, 4, 8])
def test_d_form_pairs_with_fiber_velocity(n):
    rng = np.random.default_rng(n + 10)
    u, ud = mech.sample_free_initial(n, rng)
    g, gd, y, yd = mech.fiber_velocity(u, ud)
    base, xd = mech.base_velocity(u, ud)
    A = potential(build_rep(n), base).contract(xd)
    assert np.isclose(g @ A @ gd, 2.0 * d_form(y, A) @ yd, rtol=1e-12)
    assert np.allclose(fiber_coords(u).y, y)


def test_killing_potentials():
    k = killing(0.0)
    assert (k.h_plus, k.h_minus, k.h3) == (0.0, 0.0, 1.0)
    k = killing(1.0 + 1.0j)
    assert np.isclose(k.h3, -1.0 / 3.0)
    assert np.isclose(k.h_plus, (1 + 1j) / 3)
    z = np.random.default_rng(0).normal(size=100) * (1 + 2j)
    assert killing(z).sphere_residual().max() <= 1e-12
