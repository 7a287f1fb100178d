"""
Exact branch and bound for the balanced vertex minimum k-cut.

Vertices are branched in a static order (weight desc, degree desc, index).
Every unassigned vertex is tracked in one of three states from the
partitions of its already-assigned neighbours:

  free       no neighbour in a partition: may join any partition or be removed
  single[p]  neighbours only in partition p: may join p or be removed
  forced     neighbours in two or more partitions: must be removed

Pruning uses kept + unassigned - forced as the upper bound, and drops any
node where some partition's deficit exceeds the free plus single[p] weight
that could still reach it. Empty partitions with equal bounds are
interchangeable, so only the lowest-indexed one is tried.
"""

from __future__ import annotations

import logging
import time

from molsplit.errors import InfeasibleError, TimeBudgetError
from molsplit.kcut.greedy import greedy_kcut
from molsplit.kcut.problem import KCutProblem, KCutSolution, make_solution

logger = logging.getLogger(__name__)

_CHECK_EVERY = 2048
_FREE, _FORCED = -1, -2


class _Search:
    def __init__(self, problem: KCutProblem):
        self.k = problem.k
        self.bounds = [0, *problem.bounds]  # 1-based
        self.w = [int(x) for x in problem.weights]
        self.adj = problem.adjacency()
        n = problem.n
        self.order = sorted(range(n), key=lambda v: (-self.w[v], -len(self.adj[v]), v))

        self.assign = [-1] * n
        self.cnt = [[0] * (self.k + 1) for _ in range(n)]
        self.part_w = [0] * (self.k + 1)
        self.kept = 0
        self.unassigned_w = sum(self.w)
        self.free_w = self.unassigned_w
        self.forced_w = 0
        self.single_w = [0] * (self.k + 1)
        self.state = [_FREE] * n

    # -- state bookkeeping ---------------------------------------------------

    def _classify(self, v: int) -> int:
        parts = [p for p in range(1, self.k + 1) if self.cnt[v][p]]
        if not parts:
            return _FREE
        if len(parts) == 1:
            return parts[0]
        return _FORCED

    def _leave(self, v: int) -> None:
        s, w = self.state[v], self.w[v]
        if s == _FREE:
            self.free_w -= w
        elif s == _FORCED:
            self.forced_w -= w
        else:
            self.single_w[s] -= w

    def _enter(self, v: int) -> None:
        s = self.state[v] = self._classify(v)
        w = self.w[v]
        if s == _FREE:
            self.free_w += w
        elif s == _FORCED:
            self.forced_w += w
        else:
            self.single_w[s] += w

    def do(self, v: int, p: int) -> None:
        self._leave(v)
        self.unassigned_w -= self.w[v]
        self.assign[v] = p
        if p:
            self.kept += self.w[v]
            self.part_w[p] += self.w[v]
            for u in self.adj[v]:
                if self.assign[u] < 0:
                    self._leave(u)
                    self.cnt[u][p] += 1
                    self._enter(u)
                else:
                    self.cnt[u][p] += 1

    def undo(self, v: int) -> None:
        p = self.assign[v]
        if p:
            for u in self.adj[v]:
                if self.assign[u] < 0:
                    self._leave(u)
                    self.cnt[u][p] -= 1
                    self._enter(u)
                else:
                    self.cnt[u][p] -= 1
            self.kept -= self.w[v]
            self.part_w[p] -= self.w[v]
        self.assign[v] = -1
        self.unassigned_w += self.w[v]
        self._enter(v)

    # -- branching -----------------------------------------------------------

    def domain(self, v: int) -> list[int]:
        s = self.state[v]
        if s == _FORCED:
            return [0]
        if s != _FREE:
            return [s, 0]
        seen_empty_bounds = set()
        candidates = []
        for p in range(1, self.k + 1):
            if self.part_w[p] == 0:
                if self.bounds[p] in seen_empty_bounds:
                    continue
                seen_empty_bounds.add(self.bounds[p])
            candidates.append(p)
        candidates.sort(key=lambda p: (self.part_w[p] - self.bounds[p], p))
        return [*candidates, 0]

    def pruned(self, best: int) -> bool:
        if self.kept + self.unassigned_w - self.forced_w <= best:
            return True
        for p in range(1, self.k + 1):
            deficit = self.bounds[p] - self.part_w[p]
            if deficit > 0 and deficit > self.free_w + self.single_w[p]:
                return True
        return False


def solve_balanced_kcut(problem: KCutProblem, use_greedy_incumbent: bool = True) -> KCutSolution:
    """Maximise kept weight subject to the no-crossing-edge and bound constraints.

    Returns an optimal solution when the search completes inside
    ``problem.time_budget`` and ``problem.node_limit``; otherwise the best
    incumbent with ``optimal=False``.
    """
    if sum(problem.bounds) > problem.total_weight:
        raise InfeasibleError(
            f"bounds sum to {sum(problem.bounds)} but total vertex weight is {problem.total_weight}"
        )
    n = problem.n
    if n == 0:
        return make_solution(problem, [], optimal=True)

    best_kept, best = -1, None
    if use_greedy_incumbent:
        try:
            incumbent = greedy_kcut(problem)
            best_kept, best = incumbent.kept_weight, list(incumbent.assignment)
            logger.debug("Greedy incumbent kept weight %d", best_kept)
        except InfeasibleError:
            logger.debug("Greedy found no incumbent")

    search = _Search(problem)
    deadline = None if problem.time_budget is None else time.monotonic() + problem.time_budget
    nodes, timed_out, limited = 0, False, False
    stack: list[list] = []  # [vertex, domain, next index]
    if not search.pruned(best_kept):
        v0 = search.order[0]
        stack.append([v0, search.domain(v0), 0])

    while stack:
        frame = stack[-1]
        v, domain, i = frame
        if search.assign[v] >= 0:
            search.undo(v)
        if i >= len(domain):
            stack.pop()
            continue
        frame[2] = i + 1
        search.do(v, domain[i])
        nodes += 1
        if problem.node_limit is not None and nodes >= problem.node_limit:
            limited = True
            break
        if deadline is not None and nodes % _CHECK_EVERY == 0 and time.monotonic() > deadline:
            timed_out = True
            break
        if search.pruned(best_kept):
            continue
        depth = len(stack)
        if depth == n:
            best_kept, best = search.kept, list(search.assign)
            logger.debug("New incumbent kept weight %d after %d nodes", best_kept, nodes)
            continue
        nxt = search.order[depth]
        stack.append([nxt, search.domain(nxt), 0])

    if best is None:
        if limited:
            raise TimeBudgetError(
                f"node limit of {problem.node_limit} reached without a feasible assignment"
            )
        if timed_out:
            raise TimeBudgetError(
                f"time budget of {problem.time_budget}s exhausted after {nodes} nodes "
                "without a feasible assignment"
            )
        raise InfeasibleError(
            f"no assignment meets bounds {list(problem.bounds)} without a crossing edge"
        )
    if timed_out:
        logger.warning(
            "Time budget of %ss exhausted after %d nodes; returning incumbent (kept %d/%d)",
            problem.time_budget, nodes, best_kept, problem.total_weight,
        )
    elif limited:
        logger.warning(
            "Node limit of %d reached; returning incumbent (kept %d/%d)",
            problem.node_limit, best_kept, problem.total_weight,
        )
    else:
        logger.info("Branch and bound proved optimality after %d nodes (kept %d)", nodes, best_kept)
    return make_solution(problem, best, optimal=not (timed_out or limited), nodes=nodes, timed_out=timed_out)
