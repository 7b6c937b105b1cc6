"""Monopole potentials on the base spheres.

n = 2 gives the Dirac potential, whose curl is x/(2 r^3); n = 4 reduces to an
su(2) triple through eps A_{mu nu} = 2 A_{mu 4}; n = 8 stays so(8)-valued.
"""
import numpy as np

from hopfred.clifford import build_rep
from hopfred.gauge import potential, reduce_potential
from hopfred.verification import dirac_curl_check

x = np.array([0.3, 0.4, 0.5])
red = reduce_potential(2, potential(build_rep(2), x))
r = np.linalg.norm(x)
print("Dirac potential coefficients:", red.components)
print("closed form (-x2, x1, 0)/(2r(r+x3)):", np.array([-x[1], x[0], 0.0]) / (2 * r * (r + x[2])))
print("curl = x/(2r^3):", dirac_curl_check(trials=20).passed)

x5 = np.random.default_rng(3).normal(size=(100, 5))
x5[:, 4] = np.abs(x5[:, 4])
print("n=4 reduction residual:", reduce_potential(4, potential(build_rep(4), x5)).residual)

A8 = potential(build_rep(8), np.random.default_rng(4).normal(size=9) + np.r_[np.zeros(8), 3.0])
print("n=8 potential tensor shape:", A8.coeffs.shape)
