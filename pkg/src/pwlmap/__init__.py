"""Dynamics of the piecewise-linear area-preserving maps T_ab(x, y) = (F_ab(x) - y, x)."""
from .errors import (DivergedError, DomainError, InfeasibleError, PreconditionError,
                     SolverError, SparseCoverageError)
from .plane_map import (MapParams, OrbitSample, PlaneVec, Sign, SignWord, apply, apply_inverse,
                        cocycle_product, convert_parameters, iterate, power)
from .circle_map import (RotationEstimate, circle_apply, circle_derivative, detect_rational,
                         lift, lift_increment, rotation_number)
from .rational_dynamics import (FiniteOrder, HyperbolicPair, Irrational, PeriodicRay,
                                UniqueParabolic, Unresolved, classify, find_periodic_rays,
                                is_finite_order, lambda_relations_check, orbit_divergence_check,
                                periodic_type, symbolic_word)
from .families import (family_ex33, period_family32, rotnum_family32, rotnum_linear, solve_nu,
                       witness_upper_endpoint)
from .invariant_circle import (boundedness_probe, build_circle, linear_ellipse_oracle,
                               symmetry_defect)
from .scan import ScanConfig, rotation_curve, scan_grid

__version__ = "0.1.0"
