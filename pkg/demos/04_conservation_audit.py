"""Which isospin generators survive along the free flow?

The free particle on R^{2n} is pulled back to (x, y, p).  For n = 2 and 4 every
I_mu is constant.  For n = 8 the individual I_mu wander while the Casimir I.I
stays put.
"""
from hopfred import dynamics as dyn
from hopfred import mechanics as mech

params = mech.LagrangianParams(dt=1e-3, steps=10_000)
for n in (2, 4, 8):
    rep = dyn.drift_report(dyn.free_pullback_trajectory(n, params, seed=0))
    print(f"n={n}: max relative drift of I_mu {rep.group_max('I'):.2e}   "
          f"of I.I {rep.entries['casimir'].max_rel:.2e}   of energy {rep.entries['energy'].max_rel:.1e}")

print()
for seed in range(10):
    rep = dyn.drift_report(dyn.free_pullback_trajectory(8, params, seed=seed))
    verdict = "I.I conserved" if rep.entries["casimir"].conserved else "I.I drifts"
    print(f"octonions, seed {seed}: I_mu drift {rep.group_max('I'):.2f}, {verdict}")
