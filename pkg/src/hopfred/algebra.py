"""Normed division algebras R, C, H, O from antisymmetric structure constants.

An element ``x = x^n + x^mu e_mu`` is stored as a real vector of length ``n``
ordered ``(x^1, ..., x^{n-1}, x^n)``: imaginary coefficients first, the real
part last.  Every function here broadcasts over leading axes, so a stack of
elements with shape ``(..., n)`` can be multiplied in one call.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch, DivisionByZero, UnsupportedDimension

DIMENSIONS = (1, 2, 4, 8)

# Unit entries of the octonion table, 1-based; everything else follows
# from total antisymmetry.
OCTONION_TRIPLES = (
    (1, 2, 3),
    (1, 4, 7),
    (1, 6, 5),
    (2, 4, 6),
    (2, 5, 7),
    (3, 5, 4),
    (3, 6, 7),
)


def check_dimension(n, allowed=DIMENSIONS):
    if n not in allowed:
        raise UnsupportedDimension(f"dimension {n!r} not in {allowed}")
    return int(n)


def _permutation_sign(perm):
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class StructureTable:
    """Constants ``C_{mu nu lambda}`` of ``e_mu e_nu = -delta_{mu nu} + C_{mu nu lambda} e_lambda``.

    ``c`` is stored 0-based with shape ``(n-1, n-1, n-1)``; use ``table(mu, nu, lam)``
    for 1-based lookups matching the usual index notation.
    """

    n: int
    c: np.ndarray

    def __call__(self, mu, nu, lam):
        m = self.n - 1
        for idx in (mu, nu, lam):
            if not 1 <= idx <= m:
                raise IndexError(f"index {idx} outside 1..{m}")
        return float(self.c[mu - 1, nu - 1, lam - 1])

    def generating_triples(self):
        """The unit entries the table is generated from (1-based)."""
        if self.n == 8:
            return OCTONION_TRIPLES
        if self.n == 4:
            return ((1, 2, 3),)
        return ()

    def nonzero_entries(self):
        """All ``(mu, nu, lam, value)`` with nonzero value, 1-based, lexicographic."""
        out = []
        for idx in zip(*np.nonzero(self.c)):
            out.append((int(idx[0]) + 1, int(idx[1]) + 1, int(idx[2]) + 1, float(self.c[idx])))
        return out


@lru_cache(maxsize=None)
def structure_table(n):
    n = check_dimension(n)
    m = max(n - 1, 0)
    c = np.zeros((m, m, m))
    triples = {8: OCTONION_TRIPLES, 4: ((1, 2, 3),)}.get(n, ())
    for triple in triples:
        for perm in itertools.permutations(range(3)):
            c[tuple(triple[i] - 1 for i in perm)] = _permutation_sign(perm)
    c.setflags(write=False)
    return StructureTable(n, c)


@lru_cache(maxsize=None)
def multiplication_tensor(n):
    """Tensor ``T`` with ``(xy)_c = x_a y_b T[a, b, c]`` (0-based, real unit last)."""
    n = check_dimension(n)
    c = structure_table(n).c
    t = np.zeros((n, n, n))
    re = n - 1
    t[re, re, re] = 1.0
    for mu in range(n - 1):
        t[re, mu, mu] = 1.0
        t[mu, re, mu] = 1.0
        t[mu, mu, re] = -1.0
        t[mu, :re, :re] += c[mu]
    t.setflags(write=False)
    return t


def _pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise DimensionMismatch(f"operands of dimension {x.shape[-1]} and {y.shape[-1]}")
    check_dimension(x.shape[-1])
    return x, y


def multiply(x, y):
    x, y = _pair(x, y)
    return np.einsum("...a,...b,abc->...c", x, y, multiplication_tensor(x.shape[-1]))


def conjugate(x):
    out = np.array(x, dtype=float)
    out[..., :-1] *= -1.0
    return out


def norm(x):
    return np.linalg.norm(np.asarray(x, dtype=float), axis=-1)


def inverse(x):
    x = np.asarray(x, dtype=float)
    nsq = np.sum(x * x, axis=-1)
    if np.any(nsq == 0.0):
        raise DivisionByZero("zero element has no inverse")
    return conjugate(x) / nsq[..., None]


def divide(x, y):
    """Right division ``x y^{-1}`` with ``y^{-1} = conj(y) / |y|^2``."""
    x, y = _pair(x, y)
    return multiply(x, inverse(y))


def associator(x, y, z):
    """``(xy)z - x(yz)``."""
    x, y = _pair(x, y)
    _, z = _pair(x, z)
    return multiply(multiply(x, y), z) - multiply(x, multiply(y, z))


def commutator(x, y):
    return multiply(x, y) - multiply(y, x)


def one(n):
    e = np.zeros(check_dimension(n))
    e[-1] = 1.0
    return e


def basis(n, k):
    """Unit ``e_k`` for ``k`` in ``1..n-1``; ``k = n`` gives the real unit."""
    n = check_dimension(n)
    if not 1 <= k <= n:
        raise IndexError(f"basis index {k} outside 1..{n}")
    e = np.zeros(n)
    e[k - 1] = 1.0
    return e


def from_parts(real, imag):
    """Build coefficients from a real part and the ``n-1`` imaginary ones."""
    imag = np.asarray(imag, dtype=float)
    real = np.asarray(real, dtype=float)
    real = np.broadcast_to(real, imag.shape[:-1])
    return np.concatenate([imag, real[..., None]], axis=-1)


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Convenience wrapper giving elements operator syntax.

    >>> e1, e2 = AlgebraElement.unit(8, 1), AlgebraElement.unit(8, 2)
    >>> (e1 * e2).coeff.tolist() == AlgebraElement.unit(8, 3).coeff.tolist()
    True
    """

    coeff: np.ndarray

    def __post_init__(self):
        coeff = np.array(self.coeff, dtype=float)
        check_dimension(coeff.shape[-1])
        object.__setattr__(self, "coeff", coeff)

    @classmethod
    def unit(cls, n, k):
        return cls(basis(n, k))

    @classmethod
    def real(cls, n, value=1.0):
        return cls(one(n) * value)

    @property
    def n(self):
        return self.coeff.shape[-1]

    @property
    def re(self):
        return self.coeff[..., -1]

    def _wrap(self, other):
        if isinstance(other, AlgebraElement):
            return other.coeff
        if np.isscalar(other):
            return one(self.n) * float(other)
        return np.asarray(other, dtype=float)

    def __mul__(self, other):
        if np.isscalar(other):
            return AlgebraElement(self.coeff * float(other))
        return AlgebraElement(multiply(self.coeff, self._wrap(other)))

    def __rmul__(self, other):
        if np.isscalar(other):
            return AlgebraElement(self.coeff * float(other))
        return AlgebraElement(multiply(self._wrap(other), self.coeff))

    def __truediv__(self, other):
        if np.isscalar(other):
            if other == 0:
                raise DivisionByZero("division by zero scalar")
            return AlgebraElement(self.coeff / float(other))
        return AlgebraElement(divide(self.coeff, self._wrap(other)))

    def __add__(self, other):
        return AlgebraElement(self.coeff + self._wrap(other))

    __radd__ = __add__

    def __sub__(self, other):
        return AlgebraElement(self.coeff - self._wrap(other))

    def __neg__(self):
        return AlgebraElement(-self.coeff)

    def conjugate(self):
        return AlgebraElement(conjugate(self.coeff))

    def norm(self):
        return norm(self.coeff)

    def inverse(self):
        return AlgebraElement(inverse(self.coeff))

    def allclose(self, other, atol=1e-12):
        return bool(np.allclose(self.coeff, self._wrap(other), rtol=0.0, atol=atol))

    def __repr__(self):
        return f"AlgebraElement({self.coeff.tolist()!r})"
