"""Free particle on R^{2n} written in base/fiber coordinates of the Hopf bundle.

Coordinates: base point ``x`` in R^{n+1} (with ``r = |x|``), fiber chart ``y`` in
R^{n-1} (stereographic image of the unit element ``g = u1/|u1|``) and its
conjugate momentum ``p``.  All evaluators broadcast over leading axes.

Normalizations used throughout:

* chart Lagrangian ``L = (g/2)(rdot_A rdot_A + 4 r D.ydot + 4 r ydot^2/(1+y^2)^2)``
  with ``D`` from :func:`hopfred.gauge.d_form`; it equals ``(g/2) |udot|^2``.
* ``p = 2 g r (D + 2 ydot/(1+y^2)^2)``.
* ``I_mu = (1/4)(1+y^2) S_{nu mu} p_nu``, the generator of ``g -> G g``; with this
  weight ``{I_mu, I_nu} = eps_{mu nu lam} I_lam`` for n = 4.
* ``P_lam = (1/2)(J_{n lam} + (1/2) eps_{lam mu nu} J_{mu nu})`` (n = 4), which
  commutes with every ``I_mu`` and has ``P.P = I.I``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import conjugate, multiply, structure_table
from .clifford import build_rep
from .errors import NonconstantMetric
from .gauge import d_form, potential
from .hopf import BasePoint, BundlePoint, as_bundle, fiber_coords, project

# Constant ratios between the two sides of identities whose usual
# normalizations disagree with the generator weights above.
ISOSPIN_SQUARE_SCALE = 0.5  # I.I/(2gr) = scale * (1+y^2)^2 p^2/(16 r g)
CASIMIR_J_SCALE = 0.125  # I.I = scale * J_ab J_ab


@dataclass(frozen=True)
class LagrangianParams:
    """``g0`` is the constant conformal factor; ``metric`` (a function of r) replaces it."""

    g0: float = 1.0
    s: float = 0.0
    dt: float = 1e-3
    steps: int = 10_000
    metric: Callable | None = None

    def __post_init__(self):
        if not self.g0 > 0:
            raise ValueError("g0 must be positive")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if int(self.steps) < 0:
            raise ValueError("steps must be nonnegative")

    def g(self, r):
        if self.metric is None:
            return self.g0 * np.ones_like(np.asarray(r, dtype=float))
        return np.asarray(self.metric(r), dtype=float)


DEFAULT_PARAMS = LagrangianParams()


@dataclass(frozen=True)
class PhaseState:
    x: np.ndarray
    xdot: np.ndarray
    y: np.ndarray
    p: np.ndarray
    t: float | np.ndarray = 0.0

    @property
    def n(self):
        return np.shape(self.x)[-1] - 1


@dataclass
class ObservableSet:
    J: np.ndarray
    I: np.ndarray
    casimir: np.ndarray
    P: np.ndarray | None = None
    energy: np.ndarray | float = field(default=np.nan)


def base_velocity(u, udot):
    """Base point and its exact velocity along ``udot``."""
    u, ud = as_bundle(u), as_bundle(udot)
    base = project(u)
    xd = 2.0 * (multiply(conjugate(ud.u1), u.u2) + multiply(conjugate(u.u1), ud.u2))
    hd = 2.0 * (np.sum(u.u1 * ud.u1, axis=-1) - np.sum(u.u2 * ud.u2, axis=-1))
    return base, np.concatenate([xd, hd[..., None]], axis=-1)


def fiber_velocity(u, udot):
    """Exact ``(g, gdot, y, ydot)`` for the chart ``g = u1/|u1|``."""
    u, ud = as_bundle(u), as_bundle(udot)
    y = fiber_coords(u).y
    r1 = np.linalg.norm(u.u1, axis=-1)[..., None]
    g = u.u1 / r1
    gd = ud.u1 / r1 - g * np.sum(g * ud.u1, axis=-1, keepdims=True) / r1
    den = 1.0 + g[..., -1:]
    yd = gd[..., :-1] / den - g[..., :-1] * gd[..., -1:] / den**2
    return g, gd, y, yd


def section_speed_sq(x, xdot):
    """``rdot_A rdot_A`` for ``r1 = sqrt((r+x^{n+1})/2)``, ``r2 = x/sqrt(2(r+x^{n+1}))``.

    Differentiating at fixed g: with ``s = r + x^{n+1}``,
    ``r1dot = sdot/(4 r1)`` and ``r2dot = xdot/sqrt(2s) - x sdot/(2s)^{3/2}``.
    """
    x = np.asarray(x, dtype=float)
    xd = np.asarray(xdot, dtype=float)
    r = np.linalg.norm(x, axis=-1)
    s = r + x[..., -1]
    sd = np.sum(x * xd, axis=-1) / r + xd[..., -1]
    r1 = np.sqrt(s / 2.0)
    r1d = sd / (4.0 * r1)
    w = np.sqrt(2.0 * s)
    r2d = xd[..., :-1] / w[..., None] - x[..., :-1] * (sd / w**3)[..., None]
    return r1d**2 + np.sum(r2d * r2d, axis=-1)


def evaluated_potential(x, xdot):
    x = np.asarray(x, dtype=float)
    rep = build_rep(x.shape[-1] - 1)
    return potential(rep, BasePoint.from_vector(x)).contract(xdot)


def lagrangian_bundle(u, udot, params=DEFAULT_PARAMS):
    """Middle form ``(g/2)(rdot rdot + 2 r v_a A_ab vdot_b + r vdot vdot)``."""
    base, xd = base_velocity(u, udot)
    g, gd, _, _ = fiber_velocity(u, udot)
    r = base.r
    A = evaluated_potential(base.x, xd)
    coupling = np.einsum("...a,...ab,...b->...", g, A, gd)
    kin = section_speed_sq(base.x, xd) + 2.0 * r * coupling + r * np.sum(gd * gd, axis=-1)
    return 0.5 * params.g(r) * kin


def flat_lagrangian(udot, params=DEFAULT_PARAMS, u=None):
    ud = as_bundle(udot).vector()
    if params.metric is None:
        return 0.5 * params.g0 * np.sum(ud * ud, axis=-1)
    return 0.5 * params.g(project(u).r) * np.sum(ud * ud, axis=-1)


def lagrangian_chart(x, xdot, y, ydot, params=DEFAULT_PARAMS):
    """Same Lagrangian as a function of ``(x, xdot, y, ydot)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    yd = np.asarray(ydot, dtype=float)
    r = np.linalg.norm(x, axis=-1)
    D = d_form(y, evaluated_potential(x, xdot))
    w = (1.0 + np.sum(y * y, axis=-1)) ** 2
    kin = section_speed_sq(x, xdot) + 4.0 * r * np.sum(D * yd, axis=-1) + 4.0 * r * np.sum(yd * yd, axis=-1) / w
    return 0.5 * params.g(r) * kin


def legendre(y, ydot, x, xdot, params=DEFAULT_PARAMS):
    """``p = dL/dydot = 2 g r (D + 2 ydot/(1+y^2)^2)``."""
    y = np.asarray(y, dtype=float)
    r = np.linalg.norm(np.asarray(x, dtype=float), axis=-1)
    D = d_form(y, evaluated_potential(x, xdot))
    w = (1.0 + np.sum(y * y, axis=-1)) ** 2
    return (2.0 * params.g(r) * r)[..., None] * (D + 2.0 * np.asarray(ydot, dtype=float) / w[..., None])


def inverse_legendre(y, p, x, xdot, params=DEFAULT_PARAMS):
    y = np.asarray(y, dtype=float)
    r = np.linalg.norm(np.asarray(x, dtype=float), axis=-1)
    gr = params.g(r) * r
    D = d_form(y, evaluated_potential(x, xdot))
    w = (1.0 + np.sum(y * y, axis=-1)) ** 2
    return (w / (4.0 * gr))[..., None] * (np.asarray(p, dtype=float) - 2.0 * gr[..., None] * D)


def lagrangian_int(x, xdot, y, ydot, p, params=DEFAULT_PARAMS):
    """First-order form ``p ydot + (g/2) rdot rdot - (1+y^2)^2 (p - 2grD)^2/(8rg)``."""
    y = np.asarray(y, dtype=float)
    p = np.asarray(p, dtype=float)
    return np.sum(p * np.asarray(ydot, dtype=float), axis=-1) + isospin_lagrangian_lint(x, xdot, y, p, params)


def isospin_lagrangian_lint(x, xdot, y, p, params=DEFAULT_PARAMS):
    """``L_int - p ydot``: the part that depends on ``(x, xdot, y, p)`` only."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r = np.linalg.norm(x, axis=-1)
    g = params.g(r)
    D = d_form(y, evaluated_potential(x, xdot))
    w = (1.0 + np.sum(y * y, axis=-1)) ** 2
    shifted = np.asarray(p, dtype=float) - (2.0 * g * r)[..., None] * D
    return 0.5 * g * section_speed_sq(x, xdot) - w * np.sum(shifted**2, axis=-1) / (8.0 * r * g)


def s_matrix(y, n=None):
    """``S_{mu nu} = (2 y_mu y_nu + (1-y^2) delta_{mu nu} + 2 y_lam C_{mu nu lam}) / (1+y^2)``."""
    y = np.asarray(y, dtype=float)
    m = y.shape[-1]
    c = structure_table(n or m + 1).c
    ysq = np.sum(y * y, axis=-1)[..., None, None]
    S = 2.0 * y[..., :, None] * y[..., None, :] + (1.0 - ysq) * np.eye(m)
    S = S + 2.0 * np.einsum("...l,mnl->...mn", y, c)
    return S / (1.0 + ysq)


def j_matrix(y, p):
    """SO(n) generators ``J_{mu nu} = y_mu p_nu - y_nu p_mu``, ``J_{mu n} = (1-y^2)p_mu/2 + (y.p) y_mu``."""
    y = np.asarray(y, dtype=float)
    p = np.asarray(p, dtype=float)
    m = y.shape[-1]
    J = np.zeros(y.shape[:-1] + (m + 1, m + 1))
    J[..., :m, :m] = y[..., :, None] * p[..., None, :] - p[..., :, None] * y[..., None, :]
    ysq = np.sum(y * y, axis=-1)[..., None]
    col = 0.5 * (1.0 - ysq) * p + np.sum(y * p, axis=-1)[..., None] * y
    J[..., :m, m] = col
    J[..., m, :m] = -col
    return J


def isospin(y, p):
    """``I_mu = (1/4)(1+y^2) S_{nu mu} p_nu``."""
    y = np.asarray(y, dtype=float)
    S = s_matrix(y)
    ysq = np.sum(y * y, axis=-1)[..., None]
    return 0.25 * (1.0 + ysq) * np.einsum("...nm,...n->...m", S, np.asarray(p, dtype=float))


def so4_partner(y, p):
    """``P_lam = (1/2)(J_{4 lam} + (1/2) eps_{lam mu nu} J_{mu nu})``, n = 4 only."""
    J = j_matrix(y, p)
    if J.shape[-1] != 4:
        raise ValueError("P is defined for n = 4")
    eps = structure_table(4).c
    return 0.5 * (J[..., 3, :3] + 0.5 * np.einsum("lmn,...mn->...l", eps, J[..., :3, :3]))


def momenta_for_isospin(y, I):
    """Momenta ``p`` with ``isospin(y, p) = I`` (S is orthogonal)."""
    y = np.asarray(y, dtype=float)
    ysq = np.sum(y * y, axis=-1)[..., None]
    return np.einsum("...mn,...n->...m", s_matrix(y), np.asarray(I, dtype=float)) * 4.0 / (1.0 + ysq)


def generators(y, p, n=None):
    y = np.asarray(y, dtype=float)
    p = np.asarray(p, dtype=float)
    n = n or y.shape[-1] + 1
    I = isospin(y, p)
    return ObservableSet(
        J=j_matrix(y, p),
        I=I,
        casimir=np.sum(I * I, axis=-1),
        P=so4_partner(y, p) if n == 4 else None,
    )


def sphere_coordinate(P):
    """Chart value ``z`` on the isospin sphere |P| = s.

    ``P_2 + i P_1 = -2 i s h_-``, ``P_3 = -s h_3``; inverting gives
    ``z = -(P_1 + i P_2)/(s - P_3)``.
    """
    P = np.asarray(P, dtype=float)
    s = np.linalg.norm(P, axis=-1)
    return -(P[..., 0] + 1j * P[..., 1]) / (s - P[..., 2])


def _state_yp(at):
    if isinstance(at, PhaseState):
        return np.asarray(at.y, dtype=float), np.asarray(at.p, dtype=float)
    y, p = at
    return np.asarray(y, dtype=float), np.asarray(p, dtype=float)


def _partials(f, y, p, step):
    m = y.shape[-1]
    fy, fp = [], []
    for k in range(m):
        e = np.zeros(m)
        e[k] = step
        fy.append((np.asarray(f(y + e, p)) - np.asarray(f(y - e, p))) / (2.0 * step))
        fp.append((np.asarray(f(y, p + e)) - np.asarray(f(y, p - e))) / (2.0 * step))
    return np.array(fy), np.array(fp)


def poisson(f, h, at, step=1e-6):
    """Canonical bracket ``sum_mu (df/dy_mu dh/dp_mu - df/dp_mu dh/dy_mu)`` by central differences.

    ``f`` and ``h`` map ``(y, p)`` to scalars (or arrays, in which case the
    result is the table ``{f_i, h_j}``).
    """
    y, p = _state_yp(at)
    fy, fp = _partials(f, y, p, step)
    hy, hp = _partials(h, y, p, step)
    if fy.ndim == 1 and hy.ndim == 1:
        return float(fy @ hp - fp @ hy)
    fy, fp = fy.reshape(len(fy), -1), fp.reshape(len(fp), -1)
    hy, hp = hy.reshape(len(hy), -1), hp.reshape(len(hp), -1)
    return fy.T @ hp - fp.T @ hy


@dataclass(frozen=True)
class IdentityCheck:
    lhs: float
    rhs: float
    scale: float
    deviation: float

    @property
    def ratio(self):
        return self.lhs / self.rhs if self.rhs != 0 else np.nan


def _relative(lhs, rhs, scale):
    ref = max(abs(lhs), abs(scale * rhs), 1e-300)
    return abs(lhs - scale * rhs) / ref


def identity_checks(state, params=DEFAULT_PARAMS):
    """Evaluate both sides of the pointwise identities at one phase state.

    Each entry reports the scale the identity holds with; for the isospin and
    Casimir identities that scale is the fixed constant documented above.
    """
    x = np.asarray(state.x, dtype=float)
    xd = np.asarray(state.xdot, dtype=float)
    y, p = np.asarray(state.y, dtype=float), np.asarray(state.p, dtype=float)
    n = x.shape[-1] - 1
    r = float(np.linalg.norm(x))
    g = float(params.g(r))
    ysq = float(y @ y)
    out = {}

    S = s_matrix(y, n)
    dev = float(np.abs(S @ S.T - np.eye(n - 1)).max())
    out["S_orthogonal"] = IdentityCheck(dev, 0.0, 1.0, dev)

    obs = generators(y, p, n)
    lhs = float(obs.casimir) / (2.0 * g * r)
    rhs = (1.0 + ysq) ** 2 * float(p @ p) / (16.0 * r * g)
    out["isospin_square"] = IdentityCheck(lhs, rhs, ISOSPIN_SQUARE_SCALE, _relative(lhs, rhs, ISOSPIN_SQUARE_SCALE))

    D = d_form(y, evaluated_potential(x, xd))
    lhs = float(section_speed_sq(x, xd)) - r * float(D @ D) * (1.0 + ysq) ** 2
    rhs = float(xd @ xd) / (4.0 * r)
    out["kinetic"] = IdentityCheck(lhs, rhs, 1.0, _relative(lhs, rhs, 1.0))

    jj = float(np.sum(obs.J**2))
    out["casimir_vs_J"] = IdentityCheck(float(obs.casimir), jj, CASIMIR_J_SCALE, _relative(float(obs.casimir), jj, CASIMIR_J_SCALE))

    if n == 4:
        from .gauge import reduce_potential

        red = reduce_potential(4, potential(build_rep(4), BasePoint.from_vector(x)))
        out["eps_reduction"] = IdentityCheck(red.residual, 0.0, 1.0, red.residual)
        PP = float(obs.P @ obs.P)
        out["so4_casimirs"] = IdentityCheck(float(obs.casimir), PP, 1.0, _relative(float(obs.casimir), PP, 1.0))
    return out


def free_flow(u0, udot0, t, params=DEFAULT_PARAMS):
    """Straight-line motion ``u(t) = u0 + t udot0``; ``t`` may be an array."""
    if params.metric is not None:
        raise NonconstantMetric("the exact free flow needs a constant conformal factor")
    a, b = as_bundle(u0).vector(), as_bundle(udot0).vector()
    t = np.asarray(t, dtype=float)
    return BundlePoint.from_vector(a + t[..., None] * b)


def sample_free_initial(n, rng, margin=0.5):
    """Random ``(u0, udot0)`` whose free flow stays inside both charts for all t >= 0.

    The real parts of ``u1`` and its velocity are made positive, so the real
    part of ``u1(t)`` never drops below ``margin``.
    """
    u0 = rng.normal(size=2 * n)
    ud = rng.normal(size=2 * n)
    u0[n - 1] = abs(u0[n - 1]) + margin
    ud[n - 1] = abs(ud[n - 1])
    return BundlePoint.from_vector(u0), BundlePoint.from_vector(ud)


def pullback_state(u, udot, params=DEFAULT_PARAMS, fd_step=1e-6):
    """Phase-space point over ``(u, udot)``; ``ydot`` by central differences along udot."""
    u, ud = as_bundle(u), as_bundle(udot)
    base, xd = base_velocity(u, ud)
    y = fiber_coords(u).y
    a, b = u.vector(), ud.vector()
    y_plus = fiber_coords(BundlePoint.from_vector(a + fd_step * b)).y
    y_minus = fiber_coords(BundlePoint.from_vector(a - fd_step * b)).y
    yd = (y_plus - y_minus) / (2.0 * fd_step)
    p = legendre(y, yd, base.x, xd, params)
    return PhaseState(x=base.x, xdot=xd, y=y, p=p)


def pullback_observables(u, udot, params=DEFAULT_PARAMS, fd_step=1e-6):
    state = pullback_state(u, udot, params, fd_step)
    obs = generators(state.y, state.p)
    obs.energy = lagrangian_bundle(u, udot, params)
    return obs


def exact_phase_state(u, udot, params=DEFAULT_PARAMS):
    """Like :func:`pullback_state` but with the analytic ``ydot``."""
    base, xd = base_velocity(u, udot)
    _, _, y, yd = fiber_velocity(u, udot)
    return PhaseState(x=base.x, xdot=xd, y=y, p=legendre(y, yd, base.x, xd, params))


def horizontal_part(u, udot):
    """Remove from ``udot`` its component along the fiber action ``u -> G u`` (n = 2, 4)."""
    u, ud = as_bundle(u), as_bundle(udot)
    n = u.n
    if n == 8:
        raise ValueError("the octonionic fiber carries no group action")
    a, b = u.vector(), ud.vector()
    out = b.copy()
    rsq = np.sum(a * a, axis=-1, keepdims=True)
    for mu in range(n - 1):
        e = np.zeros(n)
        e[mu] = 1.0
        k = np.concatenate([multiply(e, u.u1), multiply(e, u.u2)], axis=-1)
        out = out - np.sum(out * k, axis=-1, keepdims=True) * k / rsq
    return BundlePoint.from_vector(out)


def reduced_initial_state(n, s, rng, params=DEFAULT_PARAMS):
    """Seeded phase state on the reduction level set.

    n = 2 fixes ``J_12 = s``; n = 4 fixes ``I_1 = I_2 = 0``, ``I_3 = s``.
    Base data come from a free-flow sample, so they avoid both chart loci.
    Returns the state together with the horizontal ``(u, udot)`` it was built from.
    """
    u, ud = sample_free_initial(n, rng)
    ud = horizontal_part(u, ud)
    base, xd = base_velocity(u, ud)
    y = fiber_coords(u).y
    if n == 2:
        p = np.array([2.0 * s / (1.0 + float(y @ y))])
    elif n == 4:
        p = momenta_for_isospin(y, np.array([0.0, 0.0, s]))
    else:
        raise ValueError("reductions are defined for n = 2 and n = 4")
    return PhaseState(x=base.x, xdot=xd, y=y, p=p), (u, ud)
