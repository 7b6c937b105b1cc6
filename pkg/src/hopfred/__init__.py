"""Division algebras, Hopf maps, monopole potentials and the reduced particle systems."""
__version__ = "0.1.0"

from .algebra import AlgebraElement, associator, conjugate, inverse, multiply, norm, structure_table
from .clifford import build_rep, clifford_check
from .dynamics import ConservationReport, Trajectory, drift_report, free_pullback_trajectory, integrate_reduced
from .errors import HopfError
from .gauge import d_form, killing, potential, reduce_potential
from .hopf import BasePoint, BundlePoint, fiber_coords, fiber_rotate, fiber_rotate_oct, lift, project, project_spinor
from .mechanics import LagrangianParams, ObservableSet, PhaseState, generators, identity_checks, legendre, poisson

__all__ = [
    "AlgebraElement", "associator", "conjugate", "inverse", "multiply", "norm", "structure_table",
    "build_rep", "clifford_check",
    "ConservationReport", "Trajectory", "drift_report", "free_pullback_trajectory", "integrate_reduced",
    "HopfError",
    "d_form", "killing", "potential", "reduce_potential",
    "BasePoint", "BundlePoint", "fiber_coords", "fiber_rotate", "fiber_rotate_oct", "lift", "project", "project_spinor",
    "LagrangianParams", "ObservableSet", "PhaseState", "generators", "identity_checks", "legendre", "poisson",
]
