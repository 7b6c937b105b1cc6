import numpy as np
import pytest

from hopfred import dynamics as dyn
from hopfred import mechanics as mech
from hopfred.errors import ChartSingularity, EmptyTrajectory, UnsupportedDimension
from hopfred.hopf import project


def ramp_trajectory(values):
    t = np.linspace(0.0, 1.0, len(values))
    z = np.zeros((len(values), 3))
    traj = dyn.Trajectory(2, t, z, z, z[:, :1], z[:, :1])
    traj.observables = {"O": np.asarray(values, dtype=float)}
    return traj


def test_constant_series_is_conserved():
    rep = dyn.drift_report(ramp_trajectory(np.full(11, 2.5)))
    assert rep.entries["O"] == dyn.DriftEntry(0.0, 0.0, True)


def test_ramp_is_not_conserved():
    rep = dyn.drift_report(ramp_trajectory(np.linspace(0.0, 1.0, 11)), threshold=1e-6)
    entry = rep.entries["O"]
    assert entry.max_abs == 1.0
    assert not entry.conserved
    assert rep.classification() == {"O": "not-conserved"}


def test_relative_drift_uses_first_sample():
    rep = dyn.drift_report(ramp_trajectory([2.0, 2.0, 2.5]))
    assert rep.entries["O"].max_rel == 0.25


def test_component_groups_share_denominator():
    traj = ramp_trajectory([0.0, 0.0])
    traj.observables = {"I_1": np.array([0.0, 1e-9]), "I_2": np.array([3.0, 3.0]), "I_3": np.array([4.0, 4.0])}
    rep = dyn.drift_report(traj)
    assert np.isclose(rep.entries["I_1"].max_rel, 2e-10)
    assert rep.group_max("I") == rep.entries["I_1"].max_rel


def test_empty_trajectory():
    with pytest.raises(EmptyTrajectory):
        dyn.drift_report(ramp_trajectory([]))
    with pytest.raises(EmptyTrajectory):
        dyn.drift_of([])


def test_timestamps_must_increase():
    z = np.zeros((2, 3))
    with pytest.raises(ValueError):
        dyn.Trajectory(2, np.array([0.0, 0.0]), z, z, z[:, :1], z[:, :1])


def test_reduced_dimensions():
    st, _ = mech.reduced_initial_state(2, 0.1, np.random.default_rng(0))
    with pytest.raises(UnsupportedDimension):
        dyn.integrate_reduced(st, mech.LagrangianParams(steps=1), n=8)
    with pytest.raises(UnsupportedDimension):
        dyn.reduced_lagrangian(4, "dirac")
    with pytest.raises(ValueError):
        dyn.reduced_lagrangian(2, "nope")


@pytest.mark.parametrize("n", [2, 4])
def test_first_order_form_reproduces_free_flow(n):
    rng = np.random.default_rng(n)
    u, ud = mech.sample_free_initial(n, rng)
    st = mech.exact_phase_state(u, ud)
    params = mech.LagrangianParams(dt=1e-3, steps=200)
    traj = dyn.integrate_reduced(st, params)
    free = project(mech.free_flow(u, ud, traj.t)).x
    assert np.abs(traj.x - free).max() <= 1e-8
    rep = dyn.drift_report(traj)
    assert rep.entries["energy"].conserved
    assert rep.group_max("I") <= 1e-9


def test_dirac_form_with_matching_charge_follows_free_flow():
    rng = np.random.default_rng(5)
    u, ud = mech.sample_free_initial(2, rng)
    st = mech.exact_phase_state(u, ud)
    s = float(mech.j_matrix(st.y, st.p)[0, 1])
    traj = dyn.integrate_reduced(st, mech.LagrangianParams(dt=1e-3, steps=200, s=s), form="dirac")
    free = project(mech.free_flow(u, ud, traj.t)).x
    assert np.abs(traj.x - free).max() <= 1e-8
    # the opposite charge does not
    wrong = dyn.integrate_reduced(st, mech.LagrangianParams(dt=1e-3, steps=200, s=-s), form="dirac")
    assert np.abs(wrong.x - free).max() > 1e-3


def test_uncorrected_form_conserves_its_energy():
    st, _ = mech.reduced_initial_state(2, 0.5, np.random.default_rng(3))
    traj = dyn.integrate_reduced(st, mech.LagrangianParams(dt=1e-3, steps=200), form="unfin")
    assert dyn.drift_report(traj).entries["energy"].conserved


def test_energy_of_quadratic_lagrangian():
    ell = dyn.reduced_lagrangian(2, "dirac", mech.LagrangianParams(s=0.0))
    st, _ = mech.reduced_initial_state(2, 0.0, np.random.default_rng(1))
    Z = np.concatenate([st.x, st.xdot, st.y, st.p])
    r = np.linalg.norm(st.x)
    assert np.isclose(dyn.energy(ell, 2, Z)[0], st.xdot @ st.xdot / (8 * r), rtol=1e-12)


def test_rhs_matches_closed_form_for_free_base_motion():
    # s = 0 Dirac form: ell = v^2/(8r), so xddot = (x.v) v / r^2 - v^2 x / (2 r^2)
    ell = dyn.reduced_lagrangian(2, "dirac", mech.LagrangianParams(s=0.0))
    x = np.array([0.3, -0.4, 0.9])
    v = np.array([0.5, 0.2, -0.1])
    Z = np.concatenate([x, v, [0.1], [0.2]])
    acc = dyn.euler_lagrange_rhs(ell, 2, Z)[3:6]
    r2 = x @ x
    want = (x @ v) * v / r2 - (v @ v) * x / (2 * r2)
    assert np.allclose(acc, want, atol=1e-8)


def test_singularity_truncates():
    # heading straight at the Dirac string, the run must stop rather than fail
    st = mech.PhaseState(np.array([1e-2, 0.0, -1.0]), np.array([-1.0, 0.0, 0.0]), np.zeros(1), np.zeros(1))
    traj = dyn.integrate_reduced(st, mech.LagrangianParams(dt=1e-3, steps=50), form="dirac")
    assert traj.truncated
    assert "step" in traj.note
    assert 1 < len(traj) < 51
    assert np.all(np.diff(traj.t) > 0)
    assert dyn.drift_report(traj).truncated


def test_singular_start_is_rejected():
    st = mech.PhaseState(np.array([0.0, 0.0, -1.0]), np.ones(3), np.zeros(1), np.zeros(1))
    with pytest.raises(ChartSingularity):
        dyn.integrate_reduced(st, mech.LagrangianParams(steps=5))


def test_free_pullback_trajectory_is_seeded():
    params = mech.LagrangianParams(dt=1e-2, steps=50)
    a = dyn.free_pullback_trajectory(4, params, seed=1)
    b = dyn.free_pullback_trajectory(4, params, seed=1)
    c = dyn.free_pullback_trajectory(4, params, seed=2)
    assert np.array_equal(a.x, b.x)
    assert not np.array_equal(a.x, c.x)
    assert list(a.observables) == ["J_12", "J_13", "J_14", "J_23", "J_24", "J_34", "I_1", "I_2", "I_3", "casimir", "P_1", "P_2", "P_3", "energy"]


def test_octonion_classification_robust_to_fd_step():
    params = mech.LagrangianParams(dt=1e-3, steps=10_000)
    for fd in (1e-6, 5e-7):
        rep = dyn.drift_report(dyn.free_pullback_trajectory(8, params, seed=4, fd_step=fd))
        assert rep.entries["casimir"].conserved
        assert not any(e.conserved for k, e in rep.entries.items() if k.startswith("I_"))
