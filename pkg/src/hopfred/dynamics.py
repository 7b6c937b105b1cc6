"""Reduced dynamics: finite-difference Euler-Lagrange equations, RK4, and drift audits.

A reduced Lagrangian is first order in the isospin pair, ``L = p.ydot + ell(x, xdot, y, p)``.
Its equations of motion are

    ydot = -d ell/dp,    pdot = d ell/dy,
    M xddot = d ell/dx - (d/dt)(d ell/dxdot) |_(xddot = 0),    M = d^2 ell/dxdot^2,

with every derivative taken by central differences of ``ell``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .clifford import build_rep
from .errors import ChartSingularity, EmptyTrajectory, UnsupportedDimension
from .gauge import potential
from .hopf import BasePoint, BundlePoint
from .mechanics import (
    DEFAULT_PARAMS,
    ObservableSet,
    PhaseState,
    generators,
    isospin,
    isospin_lagrangian_lint,
    j_matrix,
)

FORMS = ("lint", "unfin", "dirac")
DEFAULT_THRESHOLD = 1e-6


@dataclass(frozen=True)
class FDSteps:
    """Difference steps, scaled per component by ``1 + |z_i|``.

    ``ell`` is quadratic in ``xdot`` for every form here, so the velocity
    derivatives are exact up to rounding and tolerate a large step.
    """

    first: float = 1e-6
    velocity: float = 1e-3
    mixed: float = 1e-4


def reduced_lagrangian(n, form="lint", params=DEFAULT_PARAMS):
    """``ell(x, xdot, y, p)`` for the chosen form, batched over a leading axis.

    lint  : ``(g/2) rdot.rdot - (1+y^2)^2 (p - 2grD)^2/(8rg)``, exact for the free particle.
    unfin : ``g xdot^2/(8r) + r g J_ab A_ab - (1/4) I.I/(2gr)`` with the uncorrected coefficients (it does not reproduce the free flow).
    dirac : n = 2 with the isospin fixed at ``params.s``;
            ``g xdot^2/(8r) - s A_12.xdot - s^2/(2gr)`` (no y, p dependence).
    """
    if form not in FORMS:
        raise ValueError(f"unknown form {form!r}; choose from {FORMS}")
    if form == "dirac" and n != 2:
        raise UnsupportedDimension("the Dirac form is the n = 2 reduction")
    rep = build_rep(n)
    s = params.s

    def ell(x, v, y, p):
        r = np.linalg.norm(x, axis=-1)
        g = params.g(r)
        if form == "lint":
            return isospin_lagrangian_lint(x, v, y, p, params)
        A = potential(rep, BasePoint.from_vector(x)).contract(v)
        kin = g * np.sum(v * v, axis=-1) / (8.0 * r)
        if form == "unfin":
            coupling = np.sum(j_matrix(y, p) * A, axis=(-2, -1))
            I = isospin(y, p)
            return kin + r * g * coupling - 0.25 * np.sum(I * I, axis=-1) / (2.0 * g * r)
        return kin - s * A[..., 0, 1] - s * s / (2.0 * g * r)

    return ell


def _pack(state):
    return np.concatenate([np.ravel(state.x), np.ravel(state.xdot), np.ravel(state.y), np.ravel(state.p)])


class _Layout:
    def __init__(self, n):
        self.N = n + 1
        self.m = n - 1
        N, m = self.N, self.m
        self.sx = slice(0, N)
        self.sv = slice(N, 2 * N)
        self.sy = slice(2 * N, 2 * N + m)
        self.sp = slice(2 * N + m, 2 * N + 2 * m)
        self.dim = 2 * N + 2 * m

    def split(self, Z):
        return Z[..., self.sx], Z[..., self.sv], Z[..., self.sy], Z[..., self.sp]


@lru_cache(maxsize=None)
def _templates(n):
    """Unit offset patterns for the first pass (gradients and mass matrix)."""
    lay = _Layout(n)
    eye = np.eye(lay.dim)
    Ex, Ey, Ep, Ev = eye[lay.sx], eye[lay.sy], eye[lay.sp], eye[lay.sv]
    iu, ju = np.triu_indices(lay.N)
    blocks = [Ex, -Ex, Ey, -Ey, Ep, -Ep]
    blocks += [a * Ev[iu] + b * Ev[ju] for a, b in ((1, 1), (1, -1), (-1, 1), (-1, -1))]
    first = np.concatenate(blocks)
    second = np.concatenate([Ev, -Ev])
    first.setflags(write=False)
    second.setflags(write=False)
    return lay, first, second, iu, ju


def euler_lagrange_rhs(ell, n, z, steps=FDSteps()):
    """Time derivative of the packed state ``(x, xdot, y, p)``."""
    lay, first, second, iu, ju = _templates(n)
    N, m = lay.N, lay.m
    scale = 1.0 + np.abs(z)
    h = steps.first * scale
    h[lay.sv] = steps.velocity * scale[lay.sv]

    def f(Z):
        return ell(*lay.split(Z))

    vals = f(z + first * h)
    k = 0

    def take(count):
        nonlocal k
        out = vals[k : k + count]
        k += count
        return out

    dx = (take(N) - take(N)) / (2.0 * h[lay.sx])
    dy = (take(m) - take(m)) / (2.0 * h[lay.sy])
    dp = (take(m) - take(m)) / (2.0 * h[lay.sp])
    npair = len(iu)
    fpp, fpm, fmp, fmm = take(npair), take(npair), take(npair), take(npair)
    hvv = h[lay.sv]
    mixed = (fpp - fpm - fmp + fmm) / (4.0 * hvv[iu] * hvv[ju])
    M = np.zeros((N, N))
    M[iu, ju] = mixed
    M[ju, iu] = mixed

    x, v, y, p = lay.split(z)
    ydot = -dp
    pdot = dy
    w = np.zeros(lay.dim)
    w[lay.sx] = v
    w[lay.sy] = ydot
    w[lay.sp] = pdot
    hw = steps.mixed / max(1.0, float(np.abs(w).max()))
    Ev = second * h
    sv = f(np.concatenate([z + hw * w + Ev, z - hw * w + Ev]))
    gp = (sv[:N] - sv[N : 2 * N]) / (2.0 * hvv)
    gm = (sv[2 * N : 3 * N] - sv[3 * N :]) / (2.0 * hvv)
    dgdt = (gp - gm) / (2.0 * hw)
    acc = np.linalg.solve(M, dx - dgdt)
    return np.concatenate([v, acc, ydot, pdot])


def energy(ell, n, Z, h=1e-3):
    """``E = xdot . d ell/dxdot - ell`` for a batch of packed states."""
    lay = _Layout(n)
    Z = np.atleast_2d(Z)
    base = ell(*lay.split(Z))
    grad = np.zeros(Z.shape[:-1] + (lay.N,))
    for i in range(lay.N):
        step = h * (1.0 + np.abs(Z[:, lay.sv][:, i]))
        Zp, Zm = Z.copy(), Z.copy()
        Zp[:, lay.sv.start + i] += step
        Zm[:, lay.sv.start + i] -= step
        grad[:, i] = (ell(*lay.split(Zp)) - ell(*lay.split(Zm))) / (2.0 * step)
    return np.sum(Z[:, lay.sv] * grad, axis=-1) - base


@dataclass
class Trajectory:
    n: int
    t: np.ndarray
    x: np.ndarray
    xdot: np.ndarray
    y: np.ndarray
    p: np.ndarray
    observables: dict = field(default_factory=dict)
    truncated: bool = False
    note: str = ""

    def __post_init__(self):
        if len(self.t) > 1 and np.any(np.diff(self.t) <= 0):
            raise ValueError("timestamps must increase strictly")

    def __len__(self):
        return len(self.t)

    def state(self, k):
        return PhaseState(self.x[k], self.xdot[k], self.y[k], self.p[k], float(self.t[k]))


def observable_series(n, y, p, energies=None):
    """Flatten an :class:`ObservableSet` over samples into named columns."""
    obs = generators(y, p, n)
    cols = {}
    for a in range(n):
        for b in range(a + 1, n):
            cols[f"J_{a + 1}{b + 1}"] = obs.J[..., a, b]
    for mu in range(n - 1):
        cols[f"I_{mu + 1}"] = obs.I[..., mu]
    cols["casimir"] = obs.casimir
    if obs.P is not None:
        for mu in range(3):
            cols[f"P_{mu + 1}"] = obs.P[..., mu]
    if energies is not None:
        cols["energy"] = np.asarray(energies, dtype=float)
    return cols


def observable_set(traj, k):
    st = traj.state(k)
    obs = generators(st.y, st.p, traj.n)
    obs.energy = traj.observables.get("energy", np.full(len(traj), np.nan))[k]
    return obs


def integrate_reduced(state0, params=DEFAULT_PARAMS, n=None, form="lint", steps=FDSteps(), record_every=1):
    """Fixed-step RK4 for the reduced system starting at ``state0``.

    A chart singularity (or a non-finite state) stops the run; the samples
    reached so far are returned with ``truncated`` set.
    """
    n = n or state0.n
    if n not in (2, 4):
        raise UnsupportedDimension("reduced dynamics are defined for n = 2 and n = 4")
    ell = reduced_lagrangian(n, form, params)
    dt = params.dt
    z = _pack(state0).astype(float)
    t0 = float(state0.t)
    lay = _Layout(n)
    ell(*lay.split(z[None]))  # raises ChartSingularity for an invalid start
    rows, times = [z.copy()], [t0]
    truncated, note = False, ""

    def rhs(zz):
        return euler_lagrange_rhs(ell, n, zz, steps)

    for k in range(1, int(params.steps) + 1):
        try:
            k1 = rhs(z)
            k2 = rhs(z + 0.5 * dt * k1)
            k3 = rhs(z + 0.5 * dt * k2)
            k4 = rhs(z + dt * k3)
        except (ChartSingularity, np.linalg.LinAlgError) as exc:
            truncated, note = True, f"stopped at step {k}: {exc}"
            break
        z_new = z + dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        try:
            finite = np.all(np.isfinite(z_new)) and np.isfinite(ell(*lay.split(z_new[None])))[0]
        except ChartSingularity as exc:
            truncated, note = True, f"stopped at step {k}: {exc}"
            break
        if not finite:
            truncated, note = True, f"non-finite state at step {k}"
            break
        z = z_new
        if k % record_every == 0:
            rows.append(z.copy())
            times.append(t0 + k * dt)
    Z = np.array(rows)
    x, v, y, p = (np.array(a) for a in lay.split(Z))
    traj = Trajectory(n, np.array(times), x, v, y, p, truncated=truncated, note=note)
    traj.observables = observable_series(n, y, p, energy(ell, n, Z))
    return traj


def free_pullback_trajectory(n, params=DEFAULT_PARAMS, seed=None, fd_step=1e-6, record_every=1):
    """Samples of the exact free flow pulled back to ``(x, xdot, y, p)``."""
    from .hopf import DEFAULT_SEED
    from .mechanics import free_flow, lagrangian_bundle, pullback_state, sample_free_initial

    rng = np.random.default_rng(DEFAULT_SEED if seed is None else seed)
    u0, ud = sample_free_initial(n, rng)
    count = int(params.steps) // record_every + 1
    t = np.arange(count) * params.dt * record_every
    u = free_flow(u0, ud, t, params)
    udot = BundlePoint.from_vector(np.broadcast_to(ud.vector(), (count, 2 * n)))
    st = pullback_state(u, udot, params, fd_step)
    traj = Trajectory(n, t, st.x, st.xdot, st.y, st.p)
    traj.observables = observable_series(n, st.y, st.p, lagrangian_bundle(u, udot, params))
    traj.note = f"u0={u0.vector().tolist()} udot0={ud.vector().tolist()}"
    return traj


@dataclass(frozen=True)
class DriftEntry:
    max_abs: float
    max_rel: float
    conserved: bool


@dataclass
class ConservationReport:
    threshold: float
    entries: dict
    samples: int
    truncated: bool = False

    def group_max(self, prefix):
        """Largest relative drift among ``prefix_1, prefix_2, ...``."""
        vals = [e.max_rel for k, e in self.entries.items() if k.startswith(prefix + "_")]
        return max(vals) if vals else np.nan

    def classification(self):
        return {k: ("conserved" if e.conserved else "not-conserved") for k, e in self.entries.items()}

    def to_dict(self):
        return {
            "threshold": self.threshold,
            "samples": self.samples,
            "truncated": self.truncated,
            "observables": {
                k: {"max_abs_drift": e.max_abs, "max_rel_drift": e.max_rel,
                    "classification": "conserved" if e.conserved else "not-conserved"}
                for k, e in self.entries.items()
            },
        }


def drift_of(series, threshold=DEFAULT_THRESHOLD, ref=None):
    """Drift of one series against its first sample.

    ``ref`` is the denominator of the relative drift; by default ``|O(0)|``,
    falling back to ``max_t |O(t)|`` (then 1) when the series starts at zero.
    """
    series = np.asarray(series, dtype=float)
    if series.size == 0:
        raise EmptyTrajectory("no samples to audit")
    dev = np.abs(series - series[0])
    max_abs = float(dev.max())
    if ref is None:
        ref = abs(float(series[0]))
    if ref == 0.0:
        ref = float(np.abs(series).max()) or 1.0
    max_rel = max_abs / ref
    return DriftEntry(max_abs, max_rel, bool(max_rel <= threshold))


def _group(name):
    head, _, tail = name.rpartition("_")
    return head if head and tail.isdigit() else None


def drift_report(traj, threshold=DEFAULT_THRESHOLD):
    """Per-observable drift against the value at the first sample.

    Components of one tensor (``J_ab``, ``I_mu``, ``P_mu``) share a
    denominator: the norm of the whole tensor at the first sample.  A
    component that starts at zero is then judged on the scale of its siblings.
    """
    if traj is None or len(traj) == 0 or not traj.observables:
        raise EmptyTrajectory("trajectory has no observable samples")
    norms = {}
    for name, col in traj.observables.items():
        grp = _group(name)
        if grp is not None:
            norms[grp] = norms.get(grp, 0.0) + float(np.asarray(col, dtype=float)[0]) ** 2
    entries = {}
    for name, col in traj.observables.items():
        grp = _group(name)
        ref = np.sqrt(norms[grp]) if grp is not None else None
        entries[name] = drift_of(col, threshold, ref)
    return ConservationReport(threshold, entries, len(traj), getattr(traj, "truncated", False))


def dirac_field(x):
    """Curl of the n = 2 reduced potential, ``x / (2 r^3)``, as a check helper."""
    x = np.asarray(x, dtype=float)
    r = np.linalg.norm(x, axis=-1)
    return x / (2.0 * r**3)[..., None]


__all__ = [
    "FORMS",
    "FDSteps",
    "ObservableSet",
    "Trajectory",
    "ConservationReport",
    "DriftEntry",
    "reduced_lagrangian",
    "euler_lagrange_rhs",
    "energy",
    "integrate_reduced",
    "free_pullback_trajectory",
    "drift_report",
    "drift_of",
    "observable_series",
]
