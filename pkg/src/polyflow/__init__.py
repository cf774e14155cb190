"""Closed polygons under linear polyharmonic flows, solved in closed form.

The flow X'' + beta X' = (-1)^(m+1) M^m X diagonalizes over the discrete
Fourier basis of the cycle graph, so evolution, two-point boundary problems,
target-seeking variants, and self-similar orbits all reduce to scalar
second-order mode ODEs.  An independent RK4 oracle certifies every closed
form; see the `verify` CLI subcommand.
"""

from .errors import (AllModesZeroError, DimensionMismatchError, DomainError,
                     NonFiniteStateError, NoSuchSolutionError, ParseError,
                     PolyflowError, QuadratureStepError, SingularBoundaryError,
                     SpanViolationError, TimeRangeError)
from .spectral import (CirculantOperator, basis_polygon, dft, eigenvalue,
                       eigenvalues, fourier_matrix, idft, real_basis,
                       second_difference)
from .geometry import (AffineMap, CodimSpectrum, Polygon, Trajectory,
                       apply_affine, decompose, planar_spectrum,
                       reconcile_vertex_counts, reconstruct, sup_distance)
from .flow import (DampingRegime, FlowSolution, LimitKind, LimitReport,
                   ModeSolution, classify, dominant_mode, mode_evaluate,
                   mode_solution, rescaled_limit, rescaled_polygon,
                   solve_explicit, solve_ivp, solve_two_point)
from .selfsimilar import (ResidualReport, Rotator, ScalingBranch,
                          ScalingProfile, TranslatorReport, planar_rotator,
                          scaling_profile, subplane_rotator, translator_check,
                          verify_self_similar)
from .yau import (DriftTarget, FunctionTarget, GreensKernel,
                  MovingTargetSolution, SampledTarget, YauProblem, YauSolution,
                  greens_kernel, simpson_rule, solve, solve_fixed_target,
                  solve_moving_target, solve_with_waypoint)
from .oracle import ForcedSystem, final_state, integrate
from .render import render_svg
from .io import (read_frames, read_polygon, read_trajectory, write_distances,
                 write_frames, write_polygon, write_trajectory)

__version__ = "0.1.0"
