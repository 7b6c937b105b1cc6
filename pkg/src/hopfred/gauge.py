"""Monopole potentials carried by the Hopf bundles.

``A_ab = x_c Sigma^{cd}_ab xdot_d / (2 r (r + x^{n+1}))`` with ``c, d`` running over
the n algebra components of the base point; ``x^{n+1}`` only enters through
the denominator.  The velocity is stripped off, so ``PotentialTensor.coeffs`` has
shape ``(..., n, n, n+1)`` and its last column (d = n+1) is identically zero.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import structure_table
from .errors import ChartSingularity, UnsupportedDimension
from .hopf import CHART_EPS, BasePoint


@dataclass(frozen=True)
class PotentialTensor:
    n: int
    coeffs: np.ndarray

    def contract(self, xdot):
        """``A_ab = A_{ab,d} xdot_d``."""
        return np.einsum("...abd,...d->...ab", self.coeffs, np.asarray(xdot, dtype=float))


def potential(rep, x, chart_eps=CHART_EPS):
    base = x if isinstance(x, BasePoint) else BasePoint.from_vector(x)
    xv = np.asarray(base.x, dtype=float)
    r = np.asarray(base.r, dtype=float)
    s = r + xv[..., -1]
    if np.any(s <= chart_eps * r) or np.any(r <= 0):
        raise ChartSingularity("potential is singular on the south-pole string")
    n = rep.n
    pref = 1.0 / (2.0 * r * s)
    core = np.einsum("...c,cdab->...abd", xv[..., :n], rep.sigma) * pref[..., None, None, None]
    pad = np.zeros(core.shape[:-1] + (1,))
    return PotentialTensor(n, np.concatenate([core, pad], axis=-1))


@dataclass(frozen=True)
class ReducedPotential:
    """Independent components after reduction.

    n = 2: ``components`` is the Dirac potential ``A_{12,d}``, shape ``(..., 3)``.
    n = 4: ``components`` is ``tilde A_{lambda,d} = 1/2 eps_{lambda mu nu} A_{mu nu,d}``,
    shape ``(..., 3, 5)``; ``residual`` is the max of
    ``|eps_{lambda mu nu} A_{mu nu,d} - 2 A_{lambda 4,d}|``.
    """

    n: int
    components: np.ndarray
    residual: float


def reduce_potential(n, A):
    coeffs = A.coeffs if isinstance(A, PotentialTensor) else np.asarray(A, dtype=float)
    if n == 2:
        return ReducedPotential(2, coeffs[..., 0, 1, :], 0.0)
    if n == 4:
        eps = structure_table(4).c
        dual = np.einsum("lmn,...mnd->...ld", eps, coeffs[..., :3, :3, :])
        residual = float(np.abs(dual - 2.0 * coeffs[..., :3, 3, :]).max())
        return ReducedPotential(4, dual / 2.0, residual)
    raise UnsupportedDimension("only the n = 2 and n = 4 potentials reduce")


def d_form(y, A_eval):
    """Pullback of the potential to the fiber chart.

    ``D_mu = (A_{n mu}(1-y^2) + 2 y_nu A_{nu mu} + 2 y_nu A_{n nu} y_mu) / (1+y^2)^2``,
    normalized so that ``v_a A_ab vdot_b = 2 D_mu ydot_mu``.
    """
    y = np.asarray(y, dtype=float)
    A = np.asarray(A_eval, dtype=float)
    m = y.shape[-1]
    ysq = np.sum(y * y, axis=-1)
    a_n = A[..., m, :m]
    term = (
        a_n * (1.0 - ysq)[..., None]
        + 2.0 * np.einsum("...n,...nm->...m", y, A[..., :m, :m])
        + 2.0 * np.sum(y * a_n, axis=-1)[..., None] * y
    )
    return term / ((1.0 + ysq) ** 2)[..., None]


@dataclass(frozen=True)
class KillingTriple:
    h_plus: complex
    h_minus: complex
    h3: float
    z: complex

    def sphere_residual(self):
        return np.abs(self.h3**2 + 4.0 * self.h_plus * self.h_minus - 1.0)


def killing(z):
    """Killing potentials on S^2 in the chart z."""
    z = np.asarray(z, dtype=complex)
    zz = (z * np.conj(z)).real
    return KillingTriple(
        h_plus=z / (1.0 + zz),
        h_minus=np.conj(z) / (1.0 + zz),
        h3=(1.0 - zz) / (1.0 + zz),
        z=z,
    )
