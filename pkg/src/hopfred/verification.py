"""Seeded property suites.

Each suite returns a list of :class:`Check` records: the measured statistic,
the tolerance it is compared against, and enough of the worst case to rerun it.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import algebra as alg
from . import dynamics as dyn
from . import mechanics as mech
from .clifford import build_rep, clifford_check, gamma_multiply
from .gauge import killing, potential, reduce_potential
from .hopf import (
    DEFAULT_SEED,
    BundlePoint,
    fiber_coords,
    fiber_rotate,
    fiber_rotate_oct,
    infinitesimal_rotate,
    lift,
    naive_octonion_counterexample,
    project,
    project_spinor,
    projection_deviation,
    random_unit,
)


@dataclass
class Check:
    name: str
    value: float
    tol: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_dict(self):
        return {"name": self.name, "value": self.value, "tol": self.tol, "passed": self.passed, "detail": self.detail}


def _le(name, value, tol, **detail):
    value = float(value)
    return Check(name, value, tol, bool(value <= tol), detail)


def _worst(devs, *arrays):
    k = int(np.argmax(devs))
    return k, [np.asarray(a)[k].tolist() for a in arrays]


# -- algebra -----------------------------------------------------------------

def norm_composition(n, trials=10_000, seed=DEFAULT_SEED, tol=1e-12):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(trials, n))
    y = rng.normal(size=(trials, n))
    lhs = alg.norm(alg.multiply(x, y))
    rhs = alg.norm(x) * alg.norm(y)
    dev = np.abs(lhs - rhs) / rhs
    k, (wx, wy) = _worst(dev, x, y)
    return _le(f"norm_composition[n={n}]", dev.max(), tol, trials=trials, seed=seed, x=wx, y=wy)


def associativity(n, trials=1000, seed=DEFAULT_SEED, tol=1e-12):
    """n <= 4: associator vanishes.  n = 8: alternativity plus the e1 e2 e4 witness."""
    rng = np.random.default_rng(seed)
    x, y, z = (rng.normal(size=(trials, n)) for _ in range(3))
    out = []
    if n <= 4:
        dev = np.abs(alg.associator(x, y, z)).max(axis=-1)
        k, (wx, wy, wz) = _worst(dev, x, y, z)
        out.append(_le(f"associative[n={n}]", dev.max(), tol, trials=trials, seed=seed, x=wx, y=wy, z=wz))
        return out
    dev = np.maximum.reduce([
        np.abs(alg.associator(x, x, y)).max(axis=-1),
        np.abs(alg.associator(x, y, y)).max(axis=-1),
        np.abs(alg.associator(x, y, x)).max(axis=-1),
    ])
    k, (wx, wy) = _worst(dev, x, y)
    out.append(_le("alternative[n=8]", dev.max(), tol, trials=trials, seed=seed, x=wx, y=wy))
    got = alg.associator(alg.basis(8, 1), alg.basis(8, 2), alg.basis(8, 4))
    want = -2.0 * alg.basis(8, 5)
    out.append(_le("associator(e1,e2,e4)=-2e5", np.abs(got - want).max(), 0.0, got=got.tolist()))
    full = np.abs(alg.associator(x, y, z)).max()
    out.append(Check("nonassociative[n=8]", float(full), 1e-3, bool(full > 1e-3), {"trials": trials, "seed": seed}))
    return out


def algebra_suite(trials=10_000, seed=DEFAULT_SEED, dims=alg.DIMENSIONS):
    checks = [norm_composition(n, trials, seed) for n in dims]
    for n in dims:
        checks += associativity(n, min(trials, 1000), seed)
    return checks


# -- clifford ----------------------------------------------------------------

def clifford_suite(tol=1e-12, seed=DEFAULT_SEED):
    checks = []
    rng = np.random.default_rng(seed)
    for n in (2, 4, 8):
        rep = build_rep(n)
        for key, dev in clifford_check(rep).items():
            checks.append(_le(f"{key}[n={n}]", dev, tol))
        x, y = rng.normal(size=(2, 100, n))
        dev = np.abs(gamma_multiply(rep, x, y) - alg.multiply(x, y)).max()
        checks.append(_le(f"gamma_multiply[n={n}]", dev, tol))
    g = build_rep(8).big_gamma
    checks.append(Check("big_gamma_shape[n=8]", float(g.shape[0]), 9.0, g.shape == (9, 16, 16), {"shape": list(g.shape)}))
    return checks


# -- hopf --------------------------------------------------------------------

def _bundle_sample(n, trials, rng):
    v = rng.normal(size=(trials, 2 * n))
    return BundlePoint.from_vector(v)


def hopf_consistency(n, trials=1000, seed=DEFAULT_SEED, tol=1e-10):
    rng = np.random.default_rng(seed)
    u = _bundle_sample(n, trials, rng)
    base = project(u)
    Rsq = u.radius_sq()
    vec = u.vector()
    out = []
    dev = np.abs(np.linalg.norm(base.x, axis=-1) - Rsq) / Rsq
    k, (w,) = _worst(dev, vec)
    out.append(_le(f"radius_identity[n={n}]", dev.max(), tol, seed=seed, u=w))
    g = fiber_coords(u).g
    back = lift(base, g).vector()
    dev = np.abs(back - vec).max(axis=-1) / np.sqrt(Rsq)
    k, (w,) = _worst(dev, vec)
    out.append(_le(f"lift_project_roundtrip[n={n}]", dev.max(), tol, seed=seed, u=w))
    G = random_unit(n, rng, trials)
    x_again = project(lift(base, G)).x
    dev = np.abs(x_again - base.x).max(axis=-1) / Rsq
    k, (w,) = _worst(dev, vec)
    out.append(_le(f"project_lift_roundtrip[n={n}]", dev.max(), tol, seed=seed, u=w))
    spin = project_spinor(build_rep(n), u.spinor()).x
    dev = np.abs(spin - base.x).max(axis=-1) / Rsq
    k, (w,) = _worst(dev, vec)
    out.append(_le(f"spinor_vs_algebraic[n={n}]", dev.max(), tol, seed=seed, u=w))
    return out


def fiber_action_suite(trials=1000, seed=DEFAULT_SEED):
    out = []
    rng = np.random.default_rng(seed)
    for n in (2, 4):
        u = _bundle_sample(n, trials, rng)
        G = random_unit(n, rng, trials)
        dev = projection_deviation(u, fiber_rotate(u, G))
        out.append(_le(f"group_action_preserves_projection[n={n}]", dev.max(), 1e-12, seed=seed))
    u = _bundle_sample(8, trials, rng)
    G = random_unit(8, rng, trials)
    dev = projection_deviation(u, fiber_rotate_oct(u, G))
    out.append(_le("modified_action_preserves_projection[n=8]", dev.max(), 1e-10, seed=seed))
    found = naive_octonion_counterexample(trials, seed, 1e-3)
    out.append(Check("naive_action_counterexample[n=8]", found["max_deviation"], 1e-3,
                     found["witness"] is not None, found))
    return out


def infinitesimal_suite(pairs=100, seed=DEFAULT_SEED, eps=1e-3, band=(3.5, 4.5)):
    """Projection deviation under U + eps dU must fall by ~4 when eps halves."""
    rep = build_rep(8)
    rng = np.random.default_rng(seed)
    ratios = []
    for _ in range(pairs):
        U = rng.normal(size=16)
        U /= np.linalg.norm(U)
        w = rng.normal(size=(9, 9))
        w = w - w.T
        x0 = project_spinor(rep, U).x
        devs = [np.abs(project_spinor(rep, infinitesimal_rotate(rep, U, w, e)).x - x0).max() for e in (eps, eps / 2)]
        ratios.append(devs[0] / devs[1])
    ratios = np.array(ratios)
    lo, hi = float(ratios.min()), float(ratios.max())
    return [Check("eps_halving_ratio[n=8]", hi, band[1], bool(lo >= band[0] and hi <= band[1]),
                  {"min_ratio": lo, "max_ratio": hi, "pairs": pairs, "seed": seed, "eps": eps})]


def hopf_suite(trials=1000, seed=DEFAULT_SEED):
    checks = []
    for n in (2, 4, 8):
        checks += hopf_consistency(n, trials, seed)
    return checks + fiber_action_suite(trials, seed) + infinitesimal_suite(100, seed)


# -- gauge -------------------------------------------------------------------

def _phase_states(n, count, rng):
    states = []
    for _ in range(count):
        u, ud = mech.sample_free_initial(n, rng)
        states.append((u, ud, mech.exact_phase_state(u, ud)))
    return states


def dirac_curl_check(trials=100, seed=DEFAULT_SEED, h=1e-5, tol=1e-6):
    """Curl of the n = 2 reduced potential equals ``x/(2 r^3)``."""
    rng = np.random.default_rng(seed)
    rep = build_rep(2)
    worst = 0.0
    for _ in range(trials):
        x = rng.normal(size=3)
        x[2] = abs(x[2])
        jac = np.zeros((3, 3))
        for j in range(3):
            e = np.zeros(3)
            e[j] = h
            ap = reduce_potential(2, potential(rep, x + e)).components
            am = reduce_potential(2, potential(rep, x - e)).components
            jac[:, j] = (ap - am) / (2 * h)
        curl = np.array([jac[2, 1] - jac[1, 2], jac[0, 2] - jac[2, 0], jac[1, 0] - jac[0, 1]])
        r = np.linalg.norm(x)
        worst = max(worst, float(np.abs(curl - x / (2 * r**3)).max() * r**2))
    return _le("dirac_field_curl[n=2]", worst, tol, trials=trials, seed=seed)


def gauge_suite(trials=1000, seed=DEFAULT_SEED):
    rng = np.random.default_rng(seed)
    rep = build_rep(4)
    x = rng.normal(size=(trials, 5))
    x[:, 4] = np.abs(x[:, 4])
    red = reduce_potential(4, potential(rep, x))
    checks = [_le("eps_reduction[n=4]", red.residual, 1e-9, seed=seed)]
    for n in (2, 4, 8):
        xs = rng.normal(size=(trials, n + 1))
        xs[:, n] = np.abs(xs[:, n])
        A = potential(build_rep(n), xs).coeffs
        checks.append(_le(f"potential_antisymmetric[n={n}]", np.abs(A + np.swapaxes(A, -2, -3)).max(), 1e-15))
    z = rng.normal(size=trials) + 1j * rng.normal(size=trials)
    checks.append(_le("killing_sphere", killing(z).sphere_residual().max(), 1e-9, seed=seed))
    checks.append(dirac_curl_check(100, seed))
    return checks


# -- mechanics ---------------------------------------------------------------

def identity_suite(trials=1000, seed=DEFAULT_SEED, tol=1e-9):
    """Pointwise identities over seeded phase states for n = 2, 4, 8."""
    checks = []
    rng = np.random.default_rng(seed)
    for n in (2, 4, 8):
        worst = {}
        ud_all, u_all = [], []
        for u, ud, st in _phase_states(n, trials, rng):
            u_all.append(u.vector())
            ud_all.append(ud.vector())
            for key, chk in mech.identity_checks(st).items():
                if chk.deviation > worst.get(key, (-1.0, None))[0]:
                    worst[key] = (chk.deviation, {"scale": chk.scale, "u": u.vector().tolist(), "udot": ud.vector().tolist()})
        for key, (dev, det) in sorted(worst.items()):
            checks.append(_le(f"{key}[n={n}]", dev, tol, seed=seed, **det))
        u, ud = BundlePoint.from_vector(np.array(u_all)), BundlePoint.from_vector(np.array(ud_all))
        flat = mech.flat_lagrangian(ud)
        dev = np.abs(mech.lagrangian_bundle(u, ud) - flat) / flat
        k, (wu, wd) = _worst(dev, u.vector(), ud.vector())
        checks.append(_le(f"lagrangian_decomposition[n={n}]", dev.max(), tol, seed=seed, u=wu, udot=wd))
    z = rng.normal(size=trials) + 1j * rng.normal(size=trials)
    checks.append(_le("killing_sphere", killing(z).sphere_residual().max(), tol, seed=seed))
    return checks


def legendre_suite(trials=50, seed=DEFAULT_SEED, h=1e-6, tol=1e-6):
    """Closed-form momenta against central differences of the chart Lagrangian."""
    rng = np.random.default_rng(seed)
    checks = []
    for n in (2, 4, 8):
        worst = 0.0
        for u, ud, st in _phase_states(n, trials, rng):
            _, _, y, yd = mech.fiber_velocity(u, ud)
            fd = np.empty(n - 1)
            for k in range(n - 1):
                e = np.zeros(n - 1)
                e[k] = h
                fd[k] = (mech.lagrangian_chart(st.x, st.xdot, y, yd + e) - mech.lagrangian_chart(st.x, st.xdot, y, yd - e)) / (2 * h)
            worst = max(worst, float(np.abs(fd - st.p).max() / max(np.abs(st.p).max(), 1.0)))
        checks.append(_le(f"legendre_fd[n={n}]", worst, tol, seed=seed))
    return checks


def bracket_suite(points=100, seed=DEFAULT_SEED, tol=1e-5, step=1e-6):
    """so(4) = so(3) x so(3) table and the isospin-sphere bracket, n = 4."""
    rng = np.random.default_rng(seed)
    eps = alg.structure_table(4).c
    worst = {"I_I": 0.0, "P_P": 0.0, "P_I": 0.0, "z_zbar": 0.0, "y_p": 0.0}
    witness = {}
    for _ in range(points):
        y = 0.5 * rng.normal(size=3)
        p = rng.normal(size=3)
        at = (y, p)
        I = mech.isospin(y, p)
        P = mech.so4_partner(y, p)
        devs = {
            "I_I": np.abs(mech.poisson(mech.isospin, mech.isospin, at, step) - eps @ I).max(),
            "P_P": np.abs(mech.poisson(mech.so4_partner, mech.so4_partner, at, step) - eps @ P).max(),
            "P_I": np.abs(mech.poisson(mech.so4_partner, mech.isospin, at, step)).max(),
            "y_p": np.abs(mech.poisson(lambda a, b: a, lambda a, b: b, at, step) - np.eye(3)).max(),
        }
        s = np.linalg.norm(P)

        def re_z(a, b):
            return mech.sphere_coordinate(mech.so4_partner(a, b)).real

        def im_z(a, b):
            return mech.sphere_coordinate(mech.so4_partner(a, b)).imag

        z = mech.sphere_coordinate(P)
        zz = -2j * mech.poisson(re_z, im_z, at, step)
        want = (1j / (2 * s)) * (1 + abs(z) ** 2) ** 2
        devs["z_zbar"] = abs(zz - want) / abs(want)
        for key, val in devs.items():
            if val > worst[key]:
                worst[key] = float(val)
                witness[key] = {"y": y.tolist(), "p": p.tolist()}
    names = {
        "I_I": "{I_mu,I_nu}=eps I",
        "P_P": "{P_mu,P_nu}=eps P",
        "P_I": "{P_mu,I_nu}=0",
        "y_p": "{y_mu,p_nu}=delta",
        "z_zbar": "{z,zbar}=(i/2s)(1+z zbar)^2",
    }
    return [_le(names[k], worst[k], tol, seed=seed, points=points, **witness.get(k, {})) for k in names]


def conservation_suite(seeds=10, params=None, seed=DEFAULT_SEED, threshold=1e-6, witness=1e-2, fd_step=1e-6):
    """Free-flow audit: every I_mu conserved for n = 2, 4; only I.I for n = 8."""
    params = params or mech.LagrangianParams(dt=1e-3, steps=10_000)
    checks = []
    for n in (2, 4):
        rep = dyn.drift_report(dyn.free_pullback_trajectory(n, params, seed, fd_step), threshold)
        checks.append(_le(f"I_conserved[n={n}]", rep.group_max("I"), threshold, seed=seed))
    hits, casimir_worst, drifts = 0, 0.0, []
    for k in range(seeds):
        s = seed + k
        rep = dyn.drift_report(dyn.free_pullback_trajectory(8, params, s, fd_step), threshold)
        casimir_worst = max(casimir_worst, rep.entries["casimir"].max_rel)
        d = rep.group_max("I")
        drifts.append(d)
        hits += d > witness
    checks.append(_le("casimir_conserved[n=8]", casimir_worst, threshold, seeds=seeds, seed=seed))
    need = int(np.ceil(0.9 * seeds))
    checks.append(Check("I_not_conserved[n=8]", float(hits), float(need), bool(hits >= need),
                        {"seeds": seeds, "seed": seed, "witness_threshold": witness, "max_rel_drift": drifts}))
    return checks


def reduced_suite(steps=10_000, dt=1e-3, seed=DEFAULT_SEED, s=0.7, threshold=1e-6, match_tol=1e-5, match_steps=1000):
    """n = 2 reduced system: energy and J_12 = s conserved; the s = 0 run follows the free flow."""
    rng = np.random.default_rng(seed)
    st, _ = mech.reduced_initial_state(2, s, rng)
    params = mech.LagrangianParams(dt=dt, steps=steps, s=s)
    traj = dyn.integrate_reduced(st, params, 2)
    rep = dyn.drift_report(traj, threshold)
    checks = [
        _le("energy_conserved[reduced n=2]", rep.entries["energy"].max_rel, threshold, seed=seed, s=s, steps=steps),
        _le("J12_conserved[reduced n=2]", rep.entries["J_12"].max_rel, threshold, seed=seed, s=s, steps=steps),
        _le("J12_equals_s[reduced n=2]", abs(traj.observables["J_12"][0] - s), 1e-12, s=s),
        Check("not_truncated[reduced n=2]", 0.0, 0.0, not traj.truncated, {"note": traj.note}),
    ]
    st0, (u, ud) = mech.reduced_initial_state(2, 0.0, rng)
    params0 = mech.LagrangianParams(dt=dt, steps=match_steps, s=0.0)
    t = np.arange(match_steps + 1) * dt
    free_x = project(mech.free_flow(u, ud, t)).x
    for form in ("lint", "dirac"):
        tr = dyn.integrate_reduced(st0, params0, 2, form=form)
        dev = float(np.abs(tr.x - free_x).max() / np.abs(free_x).max())
        checks.append(_le(f"s0_matches_free_flow[{form}]", dev, match_tol, seed=seed, u=u.vector().tolist(), udot=ud.vector().tolist()))
    return checks


def reduced_n4_suite(steps=2000, dt=1e-3, seed=DEFAULT_SEED, s=0.7, tol=1e-5, samples=5):
    """n = 4 reduced system on ``I_1 = I_2 = 0, I_3 = s``: energy, I.I and the so(4) table hold."""
    rng = np.random.default_rng(seed)
    st, _ = mech.reduced_initial_state(4, s, rng)
    traj = dyn.integrate_reduced(st, mech.LagrangianParams(dt=dt, steps=steps, s=s), 4)
    rep = dyn.drift_report(traj, tol)
    checks = [
        _le("energy_conserved[reduced n=4]", rep.entries["energy"].max_rel, tol, seed=seed, steps=steps),
        _le("casimir_conserved[reduced n=4]", rep.entries["casimir"].max_rel, tol, seed=seed, steps=steps),
        _le("I_conserved[reduced n=4]", rep.group_max("I"), tol, seed=seed, steps=steps),
    ]
    eps = alg.structure_table(4).c
    worst = 0.0
    for k in np.linspace(0, len(traj) - 1, samples).astype(int):
        at = (traj.y[k], traj.p[k])
        P = mech.so4_partner(*at)
        worst = max(
            worst,
            float(np.abs(mech.poisson(mech.so4_partner, mech.so4_partner, at) - eps @ P).max()),
            float(np.abs(mech.poisson(mech.so4_partner, mech.isospin, at)).max()),
        )
    checks.append(_le("so4_brackets_along_flow[reduced n=4]", worst, tol, seed=seed, samples=samples))
    return checks


def mechanics_suite(trials=1000, seed=DEFAULT_SEED, steps=10_000, dt=1e-3, seeds=10):
    params = mech.LagrangianParams(dt=dt, steps=steps)
    return (
        identity_suite(trials, seed)
        + legendre_suite(min(trials, 50), seed)
        + bracket_suite(min(trials, 100), seed)
        + conservation_suite(seeds, params, seed)
        + reduced_suite(steps, dt, seed)
        + reduced_n4_suite(min(steps, 2000), dt, seed)
    )


SUITES = {
    "algebra": lambda trials, seed, **kw: algebra_suite(trials, seed),
    "clifford": lambda trials, seed, **kw: clifford_suite(seed=seed),
    "hopf": lambda trials, seed, **kw: hopf_suite(trials, seed),
    "gauge": lambda trials, seed, **kw: gauge_suite(trials, seed),
    "mechanics": lambda trials, seed, **kw: mechanics_suite(trials, seed, **kw),
}


def run_suite(name, trials=1000, seed=DEFAULT_SEED, **kw):
    names = list(SUITES) if name == "all" else [name]
    out = {}
    for key in names:
        out[key] = SUITES[key](trials, seed, **kw)
    return out
