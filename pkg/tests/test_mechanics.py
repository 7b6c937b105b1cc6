import numpy as np
import pytest

from hopfred import algebra as alg
from hopfred import mechanics as mech
from hopfred.errors import NonconstantMetric
from hopfred.hopf import BundlePoint, project


def sample(n, seed):
    rng = np.random.default_rng(seed)
    u, ud = mech.sample_free_initial(n, rng)
    return u, ud, mech.exact_phase_state(u, ud)


def test_params_validation():
    with pytest.raises(ValueError):
        mech.LagrangianParams(g0=0.0)
    with pytest.raises(ValueError):
        mech.LagrangianParams(dt=-1.0)
    assert mech.LagrangianParams(g0=2.5).g(3.0) == 2.5


@pytest.mark.parametrize("n", [2, 4, 8])
def test_decomposition_equals_flat_kinetic_energy(n):
    rng = np.random.default_rng(n)
    u, ud = (BundlePoint.from_vector(v) for v in rng.normal(size=(2, 200, 2 * n)))
    u = BundlePoint(np.abs(u.u1) + 0.1, u.u2)
    flat = mech.flat_lagrangian(ud)
    assert np.allclose(mech.lagrangian_bundle(u, ud), flat, rtol=1e-9, atol=0)


def test_conformal_factor_scales_lagrangian():
    u, ud, _ = sample(4, 1)
    p2 = mech.LagrangianParams(g0=2.0)
    assert np.isclose(mech.lagrangian_bundle(u, ud, p2), 2.0 * mech.lagrangian_bundle(u, ud))


def test_zero_velocity_zero_lagrangian():
    u, _, _ = sample(8, 2)
    assert mech.lagrangian_bundle(u, np.zeros(16)) == 0.0


def test_base_velocity_is_exact():
    u, ud, _ = sample(8, 3)
    h = 1e-6
    a, b = u.vector(), ud.vector()
    fd = (project(BundlePoint.from_vector(a + h * b)).x - project(BundlePoint.from_vector(a - h * b)).x) / (2 * h)
    assert np.allclose(mech.base_velocity(u, ud)[1], fd, atol=1e-8)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_legendre_matches_finite_differences(n):
    from hopfred.verification import legendre_suite

    assert all(c.passed for c in legendre_suite(trials=10, seed=n))


def test_legendre_trivial():
    x = np.array([0.1, 0.2, 0.3, 0.4, 0.5])
    p = mech.legendre(np.array([0.2, -0.1, 0.3]), np.zeros(3), x, np.zeros(5))
    assert np.array_equal(p, np.zeros(3))


@pytest.mark.parametrize("n", [2, 4, 8])
def test_legendre_roundtrip(n):
    u, ud, st = sample(n, n)
    _, _, y, yd = mech.fiber_velocity(u, ud)
    assert np.allclose(mech.inverse_legendre(st.y, st.p, st.x, st.xdot), yd, rtol=1e-12)
    lint = mech.lagrangian_int(st.x, st.xdot, y, yd, st.p)
    assert np.isclose(lint, mech.lagrangian_chart(st.x, st.xdot, y, yd), rtol=1e-12)
    assert np.isclose(lint, mech.flat_lagrangian(ud), rtol=1e-12)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_generators_at_origin(n):
    p = np.arange(1.0, n)
    y = np.zeros(n - 1)
    assert np.array_equal(mech.s_matrix(y), np.eye(n - 1))
    obs = mech.generators(y, p)
    assert np.allclose(obs.I, p / 4)
    assert np.array_equal(obs.J[: n - 1, : n - 1], np.zeros((n - 1, n - 1)))
    assert np.allclose(obs.J[: n - 1, n - 1], p / 2)
    assert np.allclose(obs.J, -obs.J.T)
    assert obs.casimir >= 0
    assert (obs.P is None) == (n != 4)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_s_matrix_orthogonal(n):
    y = np.random.default_rng(n).normal(size=(50, n - 1))
    S = mech.s_matrix(y)
    assert np.abs(S @ np.swapaxes(S, 1, 2) - np.eye(n - 1)).max() <= 1e-12


def test_two_so3_casimirs_agree():
    rng = np.random.default_rng(4)
    for _ in range(20):
        y, p = rng.normal(size=(2, 3))
        obs = mech.generators(y, p)
        assert np.isclose(obs.I @ obs.I, obs.P @ obs.P, rtol=1e-12)


def test_canonical_pair_bracket():
    at = (np.array([0.1, 0.2, -0.3]), np.array([1.0, 0.5, 0.2]))
    table = mech.poisson(lambda y, p: y, lambda y, p: p, at)
    assert np.allclose(table, np.eye(3), atol=1e-9)
    assert np.isclose(mech.poisson(lambda y, p: y[0], lambda y, p: p[0], at), 1.0)


def test_so4_bracket_table():
    from hopfred.verification import bracket_suite

    for check in bracket_suite(points=20, seed=11):
        assert check.passed, check


def test_sphere_coordinate_at_pole():
    assert mech.sphere_coordinate(np.array([0.0, 0.0, -1.0])) == 0.0


@pytest.mark.parametrize("n", [2, 4, 8])
def test_identity_checks(n):
    _, _, st = sample(n, 20 + n)
    checks = mech.identity_checks(st)
    for key, chk in checks.items():
        assert chk.deviation <= 1e-9, key
    assert checks["isospin_square"].scale == 0.5
    assert checks["casimir_vs_J"].scale == 0.125
    assert np.isclose(checks["isospin_square"].ratio, 0.5)


def test_isospin_identity_vanishes_without_momenta():
    _, _, st = sample(4, 1)
    st0 = mech.PhaseState(st.x, st.xdot, st.y, np.zeros(3))
    chk = mech.identity_checks(st0)["isospin_square"]
    assert chk.lhs == 0.0 and chk.rhs == 0.0


def test_free_flow():
    u, ud, _ = sample(4, 0)
    assert np.array_equal(mech.free_flow(u, ud, 0.0).vector(), u.vector())
    assert np.array_equal(mech.free_flow(u, np.zeros(8), 3.0).vector(), u.vector())
    t = np.linspace(0, 10, 7)
    flow = mech.free_flow(u, ud, t)
    udot = BundlePoint.from_vector(np.broadcast_to(ud.vector(), (7, 8)))
    energy = mech.lagrangian_bundle(flow, udot)
    assert np.allclose(energy, energy[0], rtol=1e-12)


def test_free_flow_refuses_nonconstant_metric():
    params = mech.LagrangianParams(metric=lambda r: 1.0 + r)
    with pytest.raises(NonconstantMetric):
        mech.free_flow(np.ones(8), np.ones(8), 1.0, params)


def test_sampler_stays_in_chart():
    rng = np.random.default_rng(0)
    for n in (2, 4, 8):
        u, ud = mech.sample_free_initial(n, rng)
        flow = mech.free_flow(u, ud, np.linspace(0, 10, 101))
        assert flow.u1[:, -1].min() >= 0.5


@pytest.mark.parametrize("n", [2, 4])
def test_pullback_isospin_constant(n):
    u, ud, _ = sample(n, 30 + n)
    t = np.linspace(0, 10, 51)
    udot = BundlePoint.from_vector(np.broadcast_to(ud.vector(), (51, 2 * n)))
    obs = mech.pullback_observables(mech.free_flow(u, ud, t), udot)
    assert np.abs(obs.I - obs.I[0]).max() <= 1e-6 * np.linalg.norm(obs.I[0])
    assert np.allclose(obs.energy, mech.flat_lagrangian(ud), rtol=1e-12)


def test_pullback_octonion_isospin_drifts_but_casimir_does_not():
    u, ud, _ = sample(8, 38)
    t = np.linspace(0, 10, 51)
    udot = BundlePoint.from_vector(np.broadcast_to(ud.vector(), (51, 16)))
    obs = mech.pullback_observables(mech.free_flow(u, ud, t), udot)
    assert np.abs(obs.casimir - obs.casimir[0]).max() <= 1e-6 * obs.casimir[0]
    assert np.abs(obs.I - obs.I[0]).max() > 1e-2 * np.linalg.norm(obs.I[0])
    # pointwise, I.I = J_ab J_ab / 8
    assert np.allclose(obs.casimir, np.sum(obs.J**2, axis=(1, 2)) / 8, rtol=1e-9)


@pytest.mark.parametrize("n", [2, 4])
def test_horizontal_part_kills_isospin(n):
    u, ud, _ = sample(n, 40 + n)
    h = mech.horizontal_part(u, ud)
    st = mech.exact_phase_state(u, h)
    assert np.allclose(mech.isospin(st.y, st.p), 0.0, atol=1e-12)
    # horizontal and flat kinetic energies agree on the base part
    assert np.isclose(mech.flat_lagrangian(h), mech.lagrangian_bundle(u, h))


def test_reduced_initial_state_levels():
    rng = np.random.default_rng(0)
    st, _ = mech.reduced_initial_state(2, 0.8, rng)
    assert np.isclose(mech.j_matrix(st.y, st.p)[0, 1], 0.8)
    st, _ = mech.reduced_initial_state(4, 0.8, rng)
    assert np.allclose(mech.isospin(st.y, st.p), [0, 0, 0.8])
    with pytest.raises(ValueError):
        mech.reduced_initial_state(8, 0.8, rng)


def test_left_multiplication_generator_is_isospin():
    # I_mu generates g -> (1 + t e_mu) g on the fiber chart: {y, I_mu} is the chart image of e_mu g
    rng = np.random.default_rng(9)
    y = 0.4 * rng.normal(size=3)
    p = rng.normal(size=3)
    from hopfred.hopf import stereographic_to_sphere, sphere_to_stereographic

    g = stereographic_to_sphere(y)
    for mu in range(3):
        flow = mech.poisson(lambda a, b: a, lambda a, b: mech.isospin(a, b)[mu], (y, p))
        h = 1e-6
        e = alg.basis(4, mu + 1)
        moved = [sphere_to_stereographic(alg.multiply(alg.one(4) + s * e, g) / np.sqrt(1 + s * s)) for s in (h, -h)]
        tangent = (moved[0] - moved[1]) / (2 * h)
        assert np.allclose(np.ravel(flow), 0.5 * tangent, atol=1e-7)
