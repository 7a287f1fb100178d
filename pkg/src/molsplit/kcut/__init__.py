"""Balanced vertex minimum k-cut: exact, oracle and heuristic solvers."""

from molsplit.kcut.backend import SOLVERS, KCutSolver, get_solver
from molsplit.kcut.bnb import solve_balanced_kcut
from molsplit.kcut.brute import brute_force_kcut
from molsplit.kcut.greedy import greedy_kcut
from molsplit.kcut.problem import (
    KCutProblem,
    KCutSolution,
    default_bounds,
    load_problem,
    make_solution,
    problem_from_dict,
    problem_to_dict,
    solution_to_dict,
)
from molsplit.kcut.verify import VerifyReport, Violation, ViolationKind, verify_kcut

__all__ = [
    "KCutProblem",
    "KCutSolution",
    "KCutSolver",
    "SOLVERS",
    "VerifyReport",
    "Violation",
    "ViolationKind",
    "brute_force_kcut",
    "default_bounds",
    "get_solver",
    "greedy_kcut",
    "load_problem",
    "make_solution",
    "problem_from_dict",
    "problem_to_dict",
    "solution_to_dict",
    "solve_balanced_kcut",
    "verify_kcut",
]
