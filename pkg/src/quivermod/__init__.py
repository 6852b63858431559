"""Framed quiver representations and quotient-module Grassmannians over exact fields."""
from .fields import FieldSpec, Matrix, inverse, is_invertible, kernel_basis, rank, rref, solve
from .graded import (AlgebraPresentation, BasisElement, DimVector, FramedModule, VertexSet,
                     bigraded_component, build_framed_module, dim_vector_le, validate_algebra)
from .quivers import (Quiver, build_path_algebra_truncated, build_truncated_preprojective, double_quiver,
                      nilpotency_bound, quotient_by_two_sided_ideal, theta_components)
from .framed import (FramedRepPoint, GaugeElement, RepPoint, check_preprojective_relation,
                     enumerate_framed_points, gauge_act, is_nilpotent, is_stable, orbit_equal, validate_rep)
from .grassmannian import (GradedSubspace, QuotientPoint, enumerate_graded_subspaces,
                           enumerate_quotient_points, gaussian_binomial, induced_quotient_rep, is_submodule)
from .correspondence import (Instance, VerificationReport, count_points_both_sides, quotient_to_rep,
                             rep_to_quotient, verify_instance, verify_roundtrip)
from .parallel import BudgetExceeded

__version__ = "0.1.0"
