"""Conformable calculus, weighted Lebesgue spaces and semigroup dynamics.

The toolkit demonstrates, with executable checks, that evolution driven by the
conformable derivative of order alpha is classical semigroup evolution
observed through the nonlinear clock ``s = t**alpha / alpha``, including the
transfer of hypercyclic orbits and spectral chaos criteria across the clock.
"""

from .errors import (ContractError, CriterionViolationError, DomainError,
                     GridMismatchError, NumericalFailureError,
                     SpectrumMembershipError, WindowTooSmallError)
from .kernel import (ClockPoint, ConvergenceReport, Order, ScalarFunction,
                     clock, clock_inverse, conformable_derivative,
                     conformable_integral, default_epsilons,
                     derivative_equivalence_check, factor_through_clock,
                     graded_weighted_quadrature)
from .spaces import (GridFunction, SpaceDescriptor, distance, distance_lp,
                     inner_product_alpha, inner_product_l2, make_grid,
                     norm_lp, norm_p_alpha, pairing, read_grid_function_csv,
                     u_p, u_p_inverse, write_grid_function_csv)
from .semigroups import (GeneratorEstimate, OperatorFamily,
                         alpha_from_classical, broken_alpha_family,
                         check_alpha_semigroup_law, classical_from_alpha,
                         estimate_alpha_generator, identity_family,
                         matrix_exponential_family, mild_solution,
                         multiplication_family, scalar_exponential_family,
                         write_mild_solution_csv)
from .translation import (HypercyclicCandidate, OrbitTrace, TargetList,
                          WeightCocycle, build_hypercyclic_candidate,
                          classical_shift, conformable_generator_check,
                          conformable_translation, conjugacy_check,
                          generator_apply, orbit_trace,
                          translation_isometry_check, weighted_orbit,
                          write_orbit_csv)
from .dsw import (DSWConfig, DSWReport, EigenFamily, SpectralRectangle,
                  analyticity_check, dsw_verdict, eigen_residual,
                  imag_axis_intersection, make_phi_library,
                  nondegeneracy_check, weighted_translation_eigenfamily,
                  write_dsw_report)

__version__ = "0.1.0"
