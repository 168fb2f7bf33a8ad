"""Inductive inference with knowledge sets and proper scoring rules."""

from .belief import (MassFunction, bel, belief_to_credal, compare_updating, conflict,
                     dempster_combine, plausibility)
from .credal import (CredalSet, LinearConstraint, condition_set, contains, from_constraints,
                     from_generators, intersect, is_empty, is_subset, prob_bounds, singleton,
                     vacuous)
from .errors import (CredalError, EmptySetError, FrameMismatchError, NullEventError,
                     TotalConflictError, ValidationError)
from .frame import (Dist, Event, Frame, RandVar, condition_dist, expectation, make_dist,
                    point_mass, prob, uniform)
from .inference import Estimate, GameBounds, decisional_maxmin, game_bounds, min_score_estimate
from .infosys import (BinaryChannel, InfoSystem, ProductFrame, best_prior, binary_family,
                      binary_joint, conditional_score, eq3_solve, min_score_joint,
                      posterior_transfer_gap, prior_study)
from .optim import CgOptions, LpProblem, LpSolution, cg_minimize, lp_solve, minimize_1d
from .scoring import (PayoffMatrix, ScoreRule, best_action, check_proper, decisional_score,
                      expected_score_G, log_score, quadratic_score, score, self_score_H)

__version__ = "0.1.0"
