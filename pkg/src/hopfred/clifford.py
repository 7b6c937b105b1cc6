"""Real matrix families built from the structure constants.

``lam[mu]``   n x n, right multiplication by ``e_mu`` (antisymmetric, squares to -1)
``gamma[c]``  n x n, left multiplication by ``e_c``; ``(xy)_a = x_c gamma[c]_{ab} y_b``
``big_gamma`` 2n x 2n Euclidean gamma matrices for the spinor form of the Hopf map
``sigma``     ``sigma[c, d]`` is ``Sigma^{cd}``, the rotation generators entering the
              monopole potential

Array indices are 0-based; index ``n-1`` is the real unit and ``n`` the extra
(n+1)-th gamma matrix.  Anticommutators are normalized with the factor 2,
``{Gamma^A, Gamma^B} = 2 delta^{AB}``, which is what ``(lambda^mu)^2 = -1`` forces.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .algebra import _permutation_sign, check_dimension, structure_table
from .errors import DimensionMismatch


@dataclass(frozen=True)
class MatrixRep:
    n: int
    lam: np.ndarray
    gamma: np.ndarray
    big_gamma: np.ndarray
    sigma: np.ndarray

    @property
    def spinor_dim(self):
        return 2 * self.n


def _lambda_family(n, c):
    lam = np.zeros((n - 1, n, n))
    re = n - 1
    for mu in range(n - 1):
        lam[mu, re, mu] = -1.0
        lam[mu, mu, re] = 1.0
        lam[mu, :re, :re] += c[mu]
    return lam


def _gamma_family(n, c):
    gam = np.zeros((n, n, n))
    re = n - 1
    gam[re] = np.eye(n)
    for mu in range(n - 1):
        gam[mu, re, mu] = -1.0
        gam[mu, mu, re] = 1.0
        gam[mu, :re, :re] -= c[mu]
    return gam


def _big_gamma_family(n, lam):
    eye, zero = np.eye(n), np.zeros((n, n))
    mats = [np.block([[zero, lam[mu]], [-lam[mu], zero]]) for mu in range(n - 1)]
    mats.append(np.block([[zero, eye], [eye, zero]]))
    mats.append(np.block([[-eye, zero], [zero, eye]]))
    return np.array(mats)


def _sigma_family(n, lam):
    sigma = np.zeros((n, n, n, n))
    re = n - 1
    for mu in range(n - 1):
        for nu in range(n - 1):
            sigma[mu, nu] = (lam[mu] @ lam[nu] - lam[nu] @ lam[mu]) / 2.0
        sigma[mu, re] = lam[mu]
        sigma[re, mu] = -lam[mu]
    return sigma


@lru_cache(maxsize=None)
def build_rep(n):
    n = check_dimension(n, (2, 4, 8))
    c = structure_table(n).c
    lam = _lambda_family(n, c)
    rep = MatrixRep(
        n=n,
        lam=lam,
        gamma=_gamma_family(n, c),
        big_gamma=_big_gamma_family(n, lam),
        sigma=_sigma_family(n, lam),
    )
    for arr in (rep.lam, rep.gamma, rep.big_gamma, rep.sigma):
        arr.setflags(write=False)
    return rep


def _anticommutator_deviation(mats, sign):
    k, d = mats.shape[0], mats.shape[-1]
    prod = np.einsum("aij,bjk->abik", mats, mats)
    anti = prod + prod.transpose(1, 0, 2, 3)
    target = sign * 2.0 * np.einsum("ab,ij->abij", np.eye(k), np.eye(d))
    return float(np.abs(anti - target).max()) if k else 0.0


def clifford_check(rep):
    """Max-abs deviations of every algebraic relation the families must satisfy."""
    mu_gamma = rep.gamma[: rep.n - 1]
    sig = rep.sigma
    return {
        "big_gamma_anticommutator": _anticommutator_deviation(rep.big_gamma, +1.0),
        "big_gamma_symmetry": float(np.abs(rep.big_gamma - rep.big_gamma.transpose(0, 2, 1)).max()),
        "lambda_anticommutator": _anticommutator_deviation(rep.lam, -1.0),
        "lambda_antisymmetry": float(np.abs(rep.lam + rep.lam.transpose(0, 2, 1)).max()),
        "gamma_anticommutator": _anticommutator_deviation(mu_gamma, -1.0),
        "gamma_antisymmetry": float(np.abs(mu_gamma + mu_gamma.transpose(0, 2, 1)).max()),
        "gamma_real_unit": float(np.abs(rep.gamma[-1] - np.eye(rep.n)).max()),
        "sigma_antisymmetry": float(np.abs(sig + sig.transpose(1, 0, 2, 3)).max()),
    }


def gamma_multiply(rep, x, y):
    """``(xy)_a = x_c (gamma^c)_{ab} y_b``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != rep.n or y.shape[-1] != rep.n:
        raise DimensionMismatch(f"expected dimension {rep.n}")
    return np.einsum("...c,cab,...b->...a", x, rep.gamma, y)


def antisym_product(rep, indices):
    """Totally antisymmetrized product ``Gamma^{A1...Ak}`` with weight 1/k!.

    ``indices`` are 1-based in ``1..n+1``.  Repeated indices give zero.
    """
    indices = tuple(int(i) for i in indices)
    top = rep.n + 1
    for i in indices:
        if not 1 <= i <= top:
            raise IndexError(f"gamma index {i} outside 1..{top}")
    k = len(indices)
    dim = rep.spinor_dim
    out = np.zeros((dim, dim))
    for perm in itertools.permutations(range(k)):
        m = np.eye(dim)
        for p in perm:
            m = m @ rep.big_gamma[indices[p] - 1]
        out += _permutation_sign(perm) * m
    return out / math.factorial(k)


@lru_cache(maxsize=None)
def gamma_pair_table(n):
    """``G2[A, B] = Gamma^{AB}``; for distinct anticommuting factors this is the plain product."""
    rep = build_rep(n)
    g = rep.big_gamma
    k = g.shape[0]
    out = np.einsum("aij,bjk->abik", g, g)
    out[np.arange(k), np.arange(k)] = 0.0
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def gamma_quad_table(n):
    """``G4[A, B, C, D] = Gamma^{ABCD}``, zero whenever two indices coincide."""
    g2 = gamma_pair_table(n)
    k = g2.shape[0]
    out = np.einsum("abij,cdjk->abcdik", g2, g2)
    idx = np.arange(k)
    distinct = (
        (idx[:, None, None, None] != idx[None, :, None, None])
        & (idx[:, None, None, None] != idx[None, None, :, None])
        & (idx[:, None, None, None] != idx[None, None, None, :])
        & (idx[None, :, None, None] != idx[None, None, :, None])
        & (idx[None, :, None, None] != idx[None, None, None, :])
        & (idx[None, None, :, None] != idx[None, None, None, :])
    )
    out *= distinct[..., None, None]
    out.setflags(write=False)
    return out
