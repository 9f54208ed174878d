"""Exact LASSO regularization paths and the diagnostics that go with them."""
from .errors import (CombinatorialOverflow, DegenerateProblem, EmptySupport, IterationCap,
                     LassoPathError, NotConverged, OutOfRange, ParseError, ProblemTooLarge,
                     RankDeficient, SpansBreakpoint)
from .homotopy import LassoPath, PathSegment, compute_path, compute_tau, evaluate
from .kkt import (ActiveModel, KktCertificate, LassoSolution, Status, certify_optimality,
                  oracle_estimator, solve_on_support)
from .linalg import DesignMatrix, GramFactor, extremal_singular_values, gram_factorize, gram_solve
from .oracle import ProxConfig, exact_combinatorial_solve, proximal_solve

__version__ = "0.1.0"
