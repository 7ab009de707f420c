"""Polytopal approximation of convex bodies.

Deviation functionals induced by intrinsic volumes, Wills functionals and
dual volumes; random inscribed/circumscribed polytopes with their scaled
limits; best-approximation solvers; and the dimensional-constant toolkit
with a numeric inequality verification suite.
"""

from .bodies import (Ball, Body, Cap, Ellipsoid, IntersectionBody, Polytope,
                     EMPTY, box_polytope, circumscribed_polygon, convex_hull,
                     dist, halfspace_intersection, make_cap, make_regular_polygon,
                     make_triangle_T, radial, rdist, support)
from .constants import (alpha, appendix_b_suite, beta, known_tiling_numbers,
                        tiling_number, what_hat, wills_ball)
from .deviations import (DeviationReport, MomentSequence, WillsReport,
                         delta1_comparison, delta_j, delta_lambda, delta_sigma,
                         dual_delta, dual_delta_lambda, dual_delta_sigma,
                         dual_wills, figure1_closed, figure1_curves, intersect,
                         intrinsic_vector, stochastic_wills, triangle_violation,
                         wills)
from .measures import (EstimatorResult, IntrinsicVolumeVector, ball_intrinsic_volume,
                       ball_surface, ball_volume, ball_volume_analytic, dual_volume,
                       intrinsic_volumes_exact, kubota_estimate, l1_metric, omega_q,
                       radial_steiner_fit, steiner_fit)
from .optimize import (BestApproxResult, OptimizerConfig, best_circumscribed,
                       best_inscribed, oracle_2d, simultaneous_ratio)
from .randpoly import (BoundaryDensity, HarnessResult, TrialSummary, curvature_H,
                       expectation_harness, random_circumscribed, random_inscribed,
                       sample_boundary, sample_sphere)

__version__ = "0.1.0"
