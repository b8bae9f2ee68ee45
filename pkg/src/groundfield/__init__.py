"""Ground states of ||grad phi + phi X||^2 and the Schroedinger potentials they solve.

A vector field X turns into the potential V = |X|^2 - div X + lambda; positive
solutions of grad phi + phi X = 0 are its ground states at energy lambda. The
package builds those states in closed form, generates excited states from
harmonic polynomials, and checks the resulting identities, inequalities and
eigenvalues against an independent finite-difference eigensolver.
"""
from .errors import *  # noqa: F401,F403
from .fields import (Admissibility, ComponentField, GradientField, PotentialFunction, RadialPowerField,
                     VectorField, admissibility, eval_field, field_div, field_norm_sq, scale_field,
                     schrodinger_potential)
from .grids import Grid, GridState
from .harmonics import (HarmonicPolynomial, SpectrumEntry, coulomb_spectrum, excited_state,
                        harmonic_basis, oscillator_spectrum, w_function)
from .oracle import (DiscreteOperator, RadialProblem, discretize, lambda_estimate, radial_solve, rayleigh,
                     smallest_eigenpair)
from .quadrature import QuadratureEstimate, radial_integral, sphere_poly_moment, tensor_grid_integral
from .states import (GroundState, field_from_state, jx_energy, normalize, product_state, scale_state,
                     solve_ground_state)
from .verify import VerificationReport, run_suite

__version__ = "0.1.0"
