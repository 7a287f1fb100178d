"""Solver abstraction so other k-cut engines (e.g. a MILP backend) can be plugged in."""

from __future__ import annotations

from abc import ABC, abstractmethod

from molsplit.errors import InputError
from molsplit.kcut.bnb import solve_balanced_kcut
from molsplit.kcut.brute import DEFAULT_CAP, brute_force_kcut
from molsplit.kcut.greedy import greedy_kcut
from molsplit.kcut.problem import KCutProblem, KCutSolution


class KCutSolver(ABC):
    """Base class for k-cut engines. Each implements a simple solve() method."""

    @abstractmethod
    def solve(self, problem: KCutProblem) -> KCutSolution:
        """Return a feasible solution or raise InfeasibleError / TimeBudgetError."""

    @property
    @abstractmethod
    def name(self) -> str:
        """Registry key of the solver."""


class BranchAndBoundSolver(KCutSolver):
    def __init__(self, use_greedy_incumbent: bool = True):
        self._seed = use_greedy_incumbent

    @property
    def name(self) -> str:
        return "bnb"

    def solve(self, problem: KCutProblem) -> KCutSolution:
        return solve_balanced_kcut(problem, use_greedy_incumbent=self._seed)


class BruteForceSolver(KCutSolver):
    def __init__(self, cap: int = DEFAULT_CAP):
        self._cap = cap

    @property
    def name(self) -> str:
        return "brute"

    def solve(self, problem: KCutProblem) -> KCutSolution:
        return brute_force_kcut(problem, cap=self._cap)


class GreedySolver(KCutSolver):
    @property
    def name(self) -> str:
        return "greedy"

    def solve(self, problem: KCutProblem) -> KCutSolution:
        return greedy_kcut(problem)


SOLVERS: dict[str, type[KCutSolver]] = {
    "bnb": BranchAndBoundSolver,
    "brute": BruteForceSolver,
    "greedy": GreedySolver,
}


def get_solver(name: str = "bnb", **kwargs) -> KCutSolver:
    """Factory: return a solver instance by name."""
    cls = SOLVERS.get(name.lower())
    if cls is None:
        raise InputError(f"Unknown solver '{name}'. Choose from: {', '.join(SOLVERS)}")
    return cls(**kwargs)
