"""The three Hopf maps, their lift on the north chart, and the fiber actions.

For complex numbers and quaternions, left multiplication by a unit element
moves a point along its fiber.  For octonions it does not; the corrected
action (G u1)(conj(u1) u_a)/|u1|^2 does.
"""
import numpy as np

from hopfred.clifford import build_rep
from hopfred.hopf import (
    BundlePoint,
    fiber_coords,
    fiber_rotate,
    fiber_rotate_oct,
    lift,
    naive_action,
    naive_octonion_counterexample,
    project,
    project_spinor,
    projection_deviation,
    random_unit,
)

rng = np.random.default_rng(2)
for n in (2, 4, 8):
    u = BundlePoint.from_vector(rng.normal(size=2 * n))
    base = project(u)
    spin = project_spinor(build_rep(n), u.spinor()).x
    back = lift(base, fiber_coords(u).g)
    print(f"n={n}: r = R^2 ? {np.isclose(base.r, u.radius_sq())}   spinor form agrees: "
          f"{np.allclose(spin, base.x)}   lift recovers u: {np.allclose(back.vector(), u.vector())}")

    G = random_unit(n, rng)
    if n < 8:
        print(f"      G u moves x by {float(projection_deviation(u, fiber_rotate(u, G))):.1e}")
    else:
        print(f"      naive G u moves x by {float(projection_deviation(u, naive_action(u, G))):.2f}; "
              f"corrected action by {float(projection_deviation(u, fiber_rotate_oct(u, G))):.1e}")

found = naive_octonion_counterexample()
print("seeded search: first naive counterexample at trial", found["witness"]["trial"],
      f"with deviation {found['witness']['deviation']:.3f}")
