"""Tour of the four normed division algebras.

Multiplication comes from the structure constants, norms compose in every
dimension, and associativity is lost only at n = 8, where alternativity
survives.
"""
import numpy as np

from hopfred import algebra as alg

rng = np.random.default_rng(1)

print("octonion structure constants (generating triples):")
for a, b, c in alg.structure_table(8).generating_triples():
    print(f"  e{a} e{b} = e{c}")

for n in alg.DIMENSIONS:
    x, y, z = rng.normal(size=(3, 1000, n))
    comp = np.abs(alg.norm(alg.multiply(x, y)) - alg.norm(x) * alg.norm(y)).max()
    assoc = np.abs(alg.associator(x, y, z)).max()
    alt = np.abs(alg.associator(x, x, y)).max()
    print(f"n={n}: |xy|-|x||y| <= {comp:.1e}   max associator {assoc:.2e}   max (x,x,y) {alt:.1e}")

e1, e2, e4 = (alg.basis(8, k) for k in (1, 2, 4))
print("(e1 e2) e4 - e1 (e2 e4) =", alg.associator(e1, e2, e4))
