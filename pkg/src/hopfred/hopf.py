"""Hopf projections S^{2n-1} -> S^n, their inverse on the north chart, and fiber actions.

A point of the total space is a pair ``(u1, u2)`` of algebra elements.  The
real 2n-column used by the spinor form stacks them as ``U = (u2, u1)``; with
that ordering ``U^T Gamma^A U`` reproduces ``x = 2 conj(u1) u2`` and
``x^{n+1} = |u1|^2 - |u2|^2`` component by component.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import check_dimension, conjugate, multiply, norm
from .clifford import gamma_pair_table, gamma_quad_table
from .errors import (
    ChartSingularity,
    DimensionMismatch,
    InvalidFiberElement,
    NonAntisymmetric,
    UnsupportedDimension,
)

CHART_EPS = 1e-8
UNIT_TOL = 1e-10
# int.from_bytes(b"H0PF", "big"); the default seed for all randomized searches
DEFAULT_SEED = 0x48305046


@dataclass(frozen=True)
class BundlePoint:
    u1: np.ndarray
    u2: np.ndarray

    def __post_init__(self):
        u1 = np.asarray(self.u1, dtype=float)
        u2 = np.asarray(self.u2, dtype=float)
        if u1.shape != u2.shape:
            raise DimensionMismatch(f"u1 {u1.shape} and u2 {u2.shape} differ")
        check_dimension(u1.shape[-1], (2, 4, 8))
        object.__setattr__(self, "u1", u1)
        object.__setattr__(self, "u2", u2)

    @property
    def n(self):
        return self.u1.shape[-1]

    @classmethod
    def from_vector(cls, vec):
        """Split a 2n-vector laid out as ``(u1, u2)``."""
        vec = np.asarray(vec, dtype=float)
        n = vec.shape[-1] // 2
        return cls(vec[..., :n], vec[..., n:])

    def vector(self):
        return np.concatenate([self.u1, self.u2], axis=-1)

    @classmethod
    def from_spinor(cls, U):
        U = np.asarray(U, dtype=float)
        n = U.shape[-1] // 2
        return cls(U[..., n:], U[..., :n])

    def spinor(self):
        return np.concatenate([self.u2, self.u1], axis=-1)

    def radius_sq(self):
        """``R^2 = |u1|^2 + |u2|^2``."""
        return np.sum(self.u1**2, axis=-1) + np.sum(self.u2**2, axis=-1)


def as_bundle(u):
    return u if isinstance(u, BundlePoint) else BundlePoint.from_vector(u)


@dataclass(frozen=True)
class BasePoint:
    """Point ``(x^1, ..., x^n, x^{n+1})`` of R^{n+1} with its radius ``r``."""

    x: np.ndarray
    r: np.ndarray

    @classmethod
    def from_vector(cls, x):
        x = np.asarray(x, dtype=float)
        return cls(x, np.linalg.norm(x, axis=-1))

    @property
    def n(self):
        return self.x.shape[-1] - 1

    @property
    def element(self):
        """The algebra part ``x = x^n + x^mu e_mu``."""
        return self.x[..., :-1]

    @property
    def height(self):
        return self.x[..., -1]

    def radius_residual(self):
        """``|x|^2 + (x^{n+1})^2 - r^2`` relative to ``r^2``."""
        rsq = np.asarray(self.r) ** 2
        lhs = np.sum(self.x**2, axis=-1)
        return np.abs(lhs - rsq) / np.where(rsq > 0, rsq, 1.0)


@dataclass(frozen=True)
class FiberRotation:
    """Either a finite unit element ``g_elem`` or an antisymmetric table ``omega``."""

    g_elem: np.ndarray | None = None
    omega: np.ndarray | None = None

    def __post_init__(self):
        if (self.g_elem is None) == (self.omega is None):
            raise ValueError("give exactly one of g_elem or omega")
        if self.g_elem is not None:
            g = np.asarray(self.g_elem, dtype=float)
            if np.any(np.abs(norm(g) - 1.0) > UNIT_TOL):
                raise InvalidFiberElement(f"|G| = {norm(g)} is not 1")
            object.__setattr__(self, "g_elem", g)
        else:
            w = np.asarray(self.omega, dtype=float)
            if w.ndim != 2 or w.shape[0] != w.shape[1] or not np.allclose(w, -w.T, rtol=0, atol=1e-14):
                raise NonAntisymmetric("omega must be a square antisymmetric table")
            object.__setattr__(self, "omega", w)


def _as_rotation(G):
    return G if isinstance(G, FiberRotation) else FiberRotation(g_elem=G)


@dataclass(frozen=True)
class FiberCoords:
    """Fiber element ``g``, its coefficient vector ``v`` and stereographic ``y``."""

    g: np.ndarray
    v: np.ndarray
    y: np.ndarray


def stereographic_to_sphere(y):
    """``v_mu = 2 y_mu / (1+y^2)``, ``v_n = (1-y^2)/(1+y^2)``."""
    y = np.asarray(y, dtype=float)
    ysq = np.sum(y * y, axis=-1)[..., None]
    return np.concatenate([2.0 * y / (1.0 + ysq), (1.0 - ysq) / (1.0 + ysq)], axis=-1)


def sphere_to_stereographic(v, chart_eps=CHART_EPS):
    v = np.asarray(v, dtype=float)
    denom = 1.0 + v[..., -1:]
    if np.any(denom <= chart_eps):
        raise ChartSingularity("fiber element at the antipode -1 of the y-chart", "fiber-antipode")
    return v[..., :-1] / denom


def project(u):
    """Algebraic Hopf map ``x = 2 conj(u1) u2``, ``x^{n+1} = |u1|^2 - |u2|^2``."""
    u = as_bundle(u)
    x = 2.0 * multiply(conjugate(u.u1), u.u2)
    a = np.sum(u.u1**2, axis=-1)
    b = np.sum(u.u2**2, axis=-1)
    return BasePoint(np.concatenate([x, (a - b)[..., None]], axis=-1), a + b)


def project_spinor(rep, U):
    """Spinor form ``x^A = U^T Gamma^A U`` with ``U = (u2, u1)``."""
    U = np.asarray(U, dtype=float)
    if U.shape[-1] != rep.spinor_dim:
        raise DimensionMismatch(f"spinor of length {U.shape[-1]} for n={rep.n}")
    x = np.einsum("...i,aij,...j->...a", U, rep.big_gamma, U)
    return BasePoint(x, np.sum(U * U, axis=-1))


def _chart_radii(base, chart_eps):
    x = np.asarray(base.x, dtype=float)
    r = np.asarray(base.r, dtype=float)
    s = r + x[..., -1]
    if np.any(s <= chart_eps * r) or np.any(r <= 0):
        raise ChartSingularity("base point at (or within chart_eps of) the south pole x^{n+1} = -r")
    r1 = np.sqrt(s / 2.0)
    r2 = x[..., :-1] / np.sqrt(2.0 * s)[..., None]
    return r1, r2


def lift(x, g, chart_eps=CHART_EPS):
    """Inverse on the north chart: ``u1 = g r1``, ``u2 = g r2``."""
    base = x if isinstance(x, BasePoint) else BasePoint.from_vector(x)
    g = np.asarray(g, dtype=float)
    if g.shape[-1] != base.n:
        raise DimensionMismatch(f"fiber element of dimension {g.shape[-1]} for n={base.n}")
    if np.any(np.abs(norm(g) - 1.0) > UNIT_TOL):
        raise InvalidFiberElement("fiber element must have unit norm")
    r1, r2 = _chart_radii(base, chart_eps)
    return BundlePoint(g * r1[..., None], multiply(g, r2))


def fiber_coords(u, chart_eps=CHART_EPS):
    u = as_bundle(u)
    base = project(u)
    _chart_radii(base, chart_eps)
    r1 = np.sqrt(np.sum(u.u1**2, axis=-1))
    g = u.u1 / r1[..., None]
    return FiberCoords(g=g, v=g, y=sphere_to_stereographic(g, chart_eps))


def fiber_rotate(u, G):
    """Group action ``u_alpha -> G u_alpha`` (n = 2, 4)."""
    u = as_bundle(u)
    if u.n == 8:
        raise UnsupportedDimension("the octonionic fiber is not a group; use fiber_rotate_oct")
    G = _as_rotation(G).g_elem
    return BundlePoint(multiply(G, u.u1), multiply(G, u.u2))


def fiber_rotate_oct(u, G):
    """``u_alpha -> (G u1)(conj(u1) u_alpha) / |u1|^2``, evaluated in exactly this bracketing."""
    u = as_bundle(u)
    if u.n != 8:
        raise UnsupportedDimension("fiber_rotate_oct is defined for n = 8")
    G = _as_rotation(G).g_elem
    nsq = np.sum(u.u1**2, axis=-1)
    if np.any(nsq == 0.0):
        raise ChartSingularity("u1 = 0: the modified action needs u1 != 0")
    left = multiply(G, u.u1)
    cu1 = conjugate(u.u1)
    new = [multiply(left, multiply(cu1, ua)) / nsq[..., None] for ua in (u.u1, u.u2)]
    return BundlePoint(*new)


def naive_action(u, G):
    """``u_alpha -> G u_alpha`` without the dimension guard (for counterexamples at n = 8)."""
    u = as_bundle(u)
    G = _as_rotation(G).g_elem
    return BundlePoint(multiply(G, u.u1), multiply(G, u.u2))


def random_unit(n, rng, size=None):
    shape = (n,) if size is None else (size, n)
    g = rng.normal(size=shape)
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def projection_deviation(u, w):
    """Largest component of ``project(w) - project(u)``, relative to ``r(u)``."""
    a, b = project(u), project(w)
    return np.max(np.abs(a.x - b.x), axis=-1) / a.r


def naive_octonion_counterexample(trials=1000, seed=DEFAULT_SEED, threshold=1e-3):
    """Seeded search for a unit G and a point u where ``G u_alpha`` moves the base point.

    Returns the worst deviation, the first witness above ``threshold`` and its inputs.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    witness = None
    for trial in range(trials):
        G = random_unit(8, rng)
        u = BundlePoint.from_vector(rng.normal(size=16))
        dev = float(projection_deviation(u, naive_action(u, G)))
        worst = max(worst, dev)
        if witness is None and dev > threshold:
            witness = {"trial": trial, "G": G.tolist(), "u": u.vector().tolist(), "deviation": dev}
    return {"trials": trials, "seed": seed, "max_deviation": worst, "witness": witness}


def infinitesimal_rotate(rep, U, omega, eps):
    """``U + eps dU`` with ``dU = -(1/6) omega_AB (U^T Gamma^{ABCD} U) Gamma^{CD} U``.

    All four indices sum freely over ``1..n+1``.  Only the irreducible case
    n = 8 is accepted.
    """
    if rep.n != 8:
        raise UnsupportedDimension("the spinor form of the fiber action is used for n = 8")
    rot = omega if isinstance(omega, FiberRotation) else FiberRotation(omega=omega)
    w = rot.omega
    if w.shape != (rep.n + 1, rep.n + 1):
        raise DimensionMismatch(f"omega must be {rep.n + 1}x{rep.n + 1}")
    U = np.asarray(U, dtype=float)
    return U + eps * spinor_variation(rep, U, w)


def spinor_variation(rep, U, omega):
    g4 = gamma_quad_table(rep.n)
    g2 = gamma_pair_table(rep.n)
    # contract omega first: (omega_AB Gamma^{ABCD}) is one 9x9 table of 16x16 blocks
    wg4 = np.einsum("ab,abcdij->cdij", omega, g4, optimize=True)
    quad = np.einsum("...i,cdij,...j->...cd", U, wg4, U, optimize=True)
    return -np.einsum("...cd,cdij,...j->...i", quad, g2, U, optimize=True) / 6.0
