"""
Backtracking search that maintains the configured consistency at every node.

Assignments are domain reductions to a singleton, so propagation needs no
special casing; each one seeds the propagation list with the assigned
variable. Binary branching refutes ``x = a`` by deleting ``a`` at the parent
level and propagating from ``x``.
"""
import logging
import math
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from csp.exceptions import ContractViolation, CSPError, SearchLimitReached
from csp.heuristics import DOM, DOM_WDEG
from csp.propagators import PropagatorConfig
from csp.session import Session
from csp.stats import SolverStats


logger = logging.getLogger(__name__)

BINARY = "binary"
D_WAY = "d_way"
BRANCHINGS = (BINARY, D_WAY)

LEX = "lex"
VAR_HEURISTICS = (DOM_WDEG, DOM, LEX)

FIRST_SOLUTION = "first_solution"
COUNT_ALL = "count_all"
UNSAT_CHECK = "unsat_check"
MODES = (FIRST_SOLUTION, COUNT_ALL, UNSAT_CHECK)

DEFAULT_COUNT_GUARD = 10**6


class Verdict(str, Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"
    LIMIT = "LIMIT"


@dataclass(frozen=True)
class SearchConfig:
    propagator: PropagatorConfig = field(default_factory=PropagatorConfig)
    branching: str = BINARY
    var_heuristic: str = DOM_WDEG
    value_order: str = "lexicographic"
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None
    mode: str = FIRST_SOLUTION

    def __post_init__(self):
        if self.branching not in BRANCHINGS:
            raise ValueError(f"Unknown branching: {self.branching}")
        if self.var_heuristic not in VAR_HEURISTICS:
            raise ValueError(f"Unknown variable heuristic: {self.var_heuristic}")
        if self.value_order != "lexicographic":
            raise ValueError("Only lexicographic value ordering is supported")
        if self.mode not in MODES:
            raise ValueError(f"Unknown search mode: {self.mode}")
        if self.node_limit is not None and self.node_limit <= 0:
            raise ValueError("node_limit must be positive")
        if self.time_limit is not None and self.time_limit <= 0:
            raise ValueError("time_limit must be positive")


@dataclass
class SearchResult:
    verdict: Verdict
    solutions: list
    solution_count: int
    stats: SolverStats
    bump_log: list

    @property
    def solution(self):
        return self.solutions[0] if self.solutions else None


class _LimitHit(Exception):
    pass


class Solver:
    """One search session over ``network``."""

    def __init__(self, network, config: SearchConfig = None):
        self.network = network
        self.config = config or SearchConfig()
        self.session = Session(network, self.config.propagator)
        self.domains = self.session.domains
        self.stats = self.session.stats
        self.assigned = self.session.assigned
        self.weights = self.session.weights
        self.solutions = []
        self.solution_count = 0
        self._deadline = None

    def solve(self) -> SearchResult:
        config = self.config
        stats = self.stats
        verdict = Verdict.UNSAT
        with stats.timed():
            if config.time_limit is not None:
                self._deadline = time.perf_counter() + config.time_limit
            if self.session.propagator.enforce():
                try:
                    if config.branching == BINARY:
                        self._binary()
                    else:
                        self._d_way()
                except _LimitHit:
                    verdict = Verdict.LIMIT
            if verdict is not Verdict.LIMIT and self.solution_count:
                verdict = Verdict.SAT
        logger.info(
            f"Search on {self.network.name or 'network'} with {config.propagator.label}: "
            f"{verdict.value}, nodes={stats.nodes}, cc={stats.cc}, "
            f"solutions={self.solution_count}, t={stats.elapsed:.3f}s"
        )
        return SearchResult(
            verdict=verdict,
            solutions=self.solutions,
            solution_count=self.solution_count,
            stats=stats,
            bump_log=list(stats.bumps),
        )

    def select_variable(self):
        """Next branching variable among undecided non-singleton ones, or None."""
        sizes = self.domains.sizes
        candidates = [
            x for x in range(self.network.n) if not self.assigned[x] and sizes[x] > 1
        ]
        if not candidates:
            return None
        h = self.config.var_heuristic
        if h == LEX:
            return candidates[0]
        if h == DOM:
            return min(candidates, key=lambda x: (sizes[x], x))

        def dom_wdeg(x):
            wdeg = self.weights.wdeg(x, self.assigned)
            return (sizes[x] / wdeg if wdeg else math.inf, x)

        return min(candidates, key=dom_wdeg)

    def _check_limits(self) -> None:
        if self.config.node_limit is not None and self.stats.nodes >= self.config.node_limit:
            logger.debug(f"Node limit {self.config.node_limit} reached")
            raise _LimitHit()
        if self._deadline is not None and time.perf_counter() >= self._deadline:
            logger.debug(f"Time limit {self.config.time_limit}s reached")
            raise _LimitHit()

    def _decide(self, x: int, a: int) -> bool:
        self._check_limits()
        self.stats.nodes += 1
        self.domains.push_level()
        self.assigned[x] = True
        self.domains.assign(x, a)
        return self.session.propagate_from(x)

    def _record_solution(self) -> bool:
        """Store the current all-singleton state; True when search should stop."""
        network = self.network
        domains = self.domains
        assignment = {
            v.name: v.values[domains.first(v.index)] for v in network.variables
        }
        if not verify_solution(network, assignment):
            raise CSPError(f"Propagation left an inconsistent singleton state: {assignment}")
        self.solution_count += 1
        self.solutions.append(assignment)
        return self.config.mode != COUNT_ALL

    def _binary(self) -> None:
        domains = self.domains
        decisions = []
        consistent = True
        while True:
            if consistent:
                x = self.select_variable()
                if x is None:
                    if self._record_solution():
                        return
                    consistent = False
                    continue
                a = domains.first(x)
                decisions.append((x, a))
                consistent = self._decide(x, a)
                continue
            if not decisions:
                return
            x, a = decisions.pop()
            self.assigned[x] = False
            domains.restore(len(decisions))
            if domains.remove_value(x, a):
                consistent = False
            else:
                consistent = self.session.propagate_from(x)

    def _d_way(self) -> None:
        domains = self.domains
        frames = []

        def open_frame():
            x = self.select_variable()
            if x is None:
                return self._record_solution()
            frames.append([x, domains.values(x), 0])
            return False

        if open_frame():
            return
        while frames:
            frame = frames[-1]
            x, values, cursor = frame
            domains.restore(len(frames) - 1)
            self.assigned[x] = False
            if cursor == len(values):
                frames.pop()
                continue
            frame[2] += 1
            if self._decide(x, values[cursor]) and open_frame():
                return


def solve(network, config: SearchConfig = None) -> SearchResult:
    return Solver(network, config).solve()


def count_solutions(network, config: SearchConfig = None, guard: int = DEFAULT_COUNT_GUARD) -> int:
    """Exact number of solutions; raises SearchLimitReached past ``guard`` nodes."""
    config = config or SearchConfig()
    node_limit = guard if config.node_limit is None else min(config.node_limit, guard)
    config = SearchConfig(
        propagator=config.propagator,
        branching=config.branching,
        var_heuristic=config.var_heuristic,
        node_limit=node_limit,
        time_limit=config.time_limit,
        mode=COUNT_ALL,
    )
    result = solve(network, config)
    if result.verdict is Verdict.LIMIT:
        raise SearchLimitReached(
            f"Counting stopped after {result.stats.nodes} nodes with {result.solution_count} solutions",
            result=result,
        )
    return result.solution_count


def verify_solution(network, assignment) -> bool:
    """
    Direct check of a total assignment against every constraint, outside the
    cc counter. ``assignment`` maps variable names (or indices) to values, or
    is a sequence of values in variable order.
    """
    if isinstance(assignment, dict):
        values = []
        for variable in network.variables:
            if variable.name in assignment:
                values.append(assignment[variable.name])
            elif variable.index in assignment:
                values.append(assignment[variable.index])
            else:
                raise ContractViolation(f"Assignment is missing variable {variable.name}")
    else:
        values = list(assignment)
        if len(values) != network.n:
            raise ContractViolation(
                f"Assignment has {len(values)} values for {network.n} variables"
            )
    for variable, value in zip(network.variables, values):
        if value not in variable.values:
            return False
    for constraint in network.constraints:
        if not constraint.relation.evaluate(values[constraint.x], values[constraint.y]):
            return False
    return True
