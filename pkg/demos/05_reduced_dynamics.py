"""Reduced systems: a charged particle on the base with the isospin frozen.

For n = 2 the Dirac-monopole Lagrangian with charge s = J_12 reproduces the
projected free flow exactly; flipping the sign of s does not.  For n = 4 the
first-order isospin Lagrangian keeps I.I and the so(4) structure.
"""
import numpy as np

from hopfred import dynamics as dyn
from hopfred import mechanics as mech
from hopfred.hopf import project

rng = np.random.default_rng(5)
u, ud = mech.sample_free_initial(2, rng)
st = mech.exact_phase_state(u, ud)
s = float(mech.j_matrix(st.y, st.p)[0, 1])
free = project(mech.free_flow(u, ud, np.arange(1001) * 1e-3)).x
for charge in (s, -s):
    traj = dyn.integrate_reduced(st, mech.LagrangianParams(dt=1e-3, steps=1000, s=charge), form="dirac")
    print(f"Dirac Lagrangian with s = {charge:+.3f}: max |x - x_free| = {np.abs(traj.x - free).max():.1e}")

st4, _ = mech.reduced_initial_state(4, 0.7, rng)
traj = dyn.integrate_reduced(st4, mech.LagrangianParams(dt=1e-3, steps=2000, s=0.7), n=4)
rep = dyn.drift_report(traj)
print("n=4, I = (0, 0, 0.7):")
for key in ("energy", "casimir", "I_3", "P_1"):
    e = rep.entries[key]
    print(f"  {key:8s} relative drift {e.max_rel:.1e} ({'conserved' if e.conserved else 'not conserved'})")
