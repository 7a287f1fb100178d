"""Independent feasibility check of a k-cut solution. Never raises."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from molsplit.kcut.problem import KCutProblem, KCutSolution


class ViolationKind(str, Enum):
    ASSIGNMENT = "assignment"
    CROSS_EDGE = "cross_edge"
    BOUND = "bound"
    OBJECTIVE = "objective"


@dataclass
class Violation:
    kind: ViolationKind
    message: str

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "message": self.message}


@dataclass
class VerifyReport:
    violations: list[Violation] = field(default_factory=list)
    partition_weights: list[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def kinds(self) -> set[ViolationKind]:
        return {v.kind for v in self.violations}

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "partition_weights": self.partition_weights,
            "violations": [v.to_dict() for v in self.violations],
        }


def verify_kcut(problem: KCutProblem, solution: KCutSolution, max_listed: int = 20) -> VerifyReport:
    """Check assignment domain, no cross-partition edges, bounds and kept weight.

    At most ``max_listed`` cross-edge violations are listed individually.
    """
    report = VerifyReport()
    assignment = list(solution.assignment)
    if len(assignment) != problem.n:
        report.violations.append(Violation(
            ViolationKind.ASSIGNMENT,
            f"assignment has {len(assignment)} entries for {problem.n} vertices",
        ))
        return report
    bad = [v for v, a in enumerate(assignment) if not (isinstance(a, (int, np.integer)) and 0 <= a <= problem.k)]
    if bad:
        report.violations.append(Violation(
            ViolationKind.ASSIGNMENT,
            f"vertices {bad[:max_listed]} have values outside 0..{problem.k}",
        ))
        return report

    crossing = [
        (u, v) for u, v in problem.edge_list()
        if assignment[u] and assignment[v] and assignment[u] != assignment[v]
    ]
    for u, v in crossing[:max_listed]:
        report.violations.append(Violation(
            ViolationKind.CROSS_EDGE,
            f"edge ({u}, {v}) joins partitions {assignment[u]} and {assignment[v]}",
        ))
    if len(crossing) > max_listed:
        report.violations.append(Violation(
            ViolationKind.CROSS_EDGE, f"... and {len(crossing) - max_listed} more crossing edges"
        ))

    weights = problem.weights
    part = [0] * problem.k
    for v, a in enumerate(assignment):
        if a:
            part[a - 1] += int(weights[v])
    report.partition_weights = part
    for i, (have, need) in enumerate(zip(part, problem.bounds), start=1):
        if have < need:
            report.violations.append(Violation(
                ViolationKind.BOUND, f"partition {i} weight {have} is below bound {need}"
            ))

    kept = sum(part)
    if kept != solution.kept_weight:
        report.violations.append(Violation(
            ViolationKind.OBJECTIVE,
            f"kept_weight {solution.kept_weight} does not match assigned weight {kept}",
        ))
    return report
