"""
Definitional closures used as ground truth for the propagators.

Nothing here touches the compiled tables, support stores or counters: every
test goes through ``relation.evaluate`` on actual domain values, and every
fixpoint is recomputed by plain repeated passes.
"""
import logging
import math
from dataclasses import dataclass

from csp.exceptions import GuardExceeded


logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_GUARD = 10**7


@dataclass
class ClosureResult:
    domains: list
    wipeout: bool
    passes: int

    def is_subset_of(self, other: "ClosureResult") -> bool:
        return all(mine <= theirs for mine, theirs in zip(self.domains, other.domains))


def _checkers(network) -> dict:
    """``(i, j) -> f(value_i, value_j)`` for both orientations of every constraint."""
    checks = {}
    for constraint in network.constraints:
        relation = constraint.relation
        checks[(constraint.x, constraint.y)] = relation.evaluate
        checks[(constraint.y, constraint.x)] = lambda b, a, evaluate=relation.evaluate: evaluate(a, b)
    return checks


def _initial(network, domains):
    if domains is None:
        return [set(v.values) for v in network.variables]
    return [set(values) for values in domains]


def _neighbors(network, checks):
    neighbors = [set() for _ in range(network.n)]
    for i, j in checks:
        neighbors[i].add(j)
    return [sorted(s) for s in neighbors]


def _closure(network, domains, keeps) -> ClosureResult:
    passes = 0
    while True:
        passes += 1
        changed = False
        for i in range(network.n):
            for a in sorted(domains[i]):
                if not keeps(i, a):
                    domains[i].discard(a)
                    changed = True
            if not domains[i]:
                return ClosureResult(domains, True, passes)
        if not changed:
            return ClosureResult(domains, False, passes)


def brute_ac(network, domains=None) -> ClosureResult:
    """Arc-consistent closure of ``domains`` (value sets; initial domains by default)."""
    checks = _checkers(network)
    neighbors = _neighbors(network, checks)
    current = _initial(network, domains)
    if any(not values for values in current):
        return ClosureResult(current, True, 0)

    def keeps(i, a):
        for j in neighbors[i]:
            check = checks[(i, j)]
            if not any(check(a, b) for b in current[j]):
                return False
        return True

    return _closure(network, current, keeps)


def brute_maxrpc(network, domains=None) -> ClosureResult:
    """
    maxRPC closure: a value stays only if, on every constraint c_ij, it has a
    support b such that every x_k constrained with both x_i and x_j holds a
    value compatible with a and b.
    """
    checks = _checkers(network)
    neighbors = _neighbors(network, checks)
    neighbor_sets = [set(ns) for ns in neighbors]
    current = _initial(network, domains)
    if any(not values for values in current):
        return ClosureResult(current, True, 0)

    def path_consistent(i, a, j, b):
        for k in neighbors[i]:
            if k == j or k not in neighbor_sets[j]:
                continue
            check_ik = checks[(i, k)]
            check_jk = checks[(j, k)]
            if not any(check_ik(a, c) and check_jk(b, c) for c in current[k]):
                return False
        return True

    def keeps(i, a):
        for j in neighbors[i]:
            check = checks[(i, j)]
            if not any(check(a, b) and path_consistent(i, a, j, b) for b in sorted(current[j])):
                return False
        return True

    return _closure(network, current, keeps)


def enumerate_solutions(network, guard: int = DEFAULT_ENUMERATION_GUARD) -> list:
    """Every satisfying total assignment, as value tuples in variable order."""
    space = math.prod(v.size for v in network.variables)
    if space > guard:
        raise GuardExceeded(f"Search space of {space} assignments exceeds the enumeration guard {guard}")

    checks = _checkers(network)
    earlier = [[j for j in range(i) if (i, j) in checks] for i in range(network.n)]
    domains = [v.values for v in network.variables]
    solutions = []
    assignment = []

    def extend(i):
        if i == network.n:
            solutions.append(tuple(assignment))
            return
        for a in domains[i]:
            if all(checks[(i, j)](a, assignment[j]) for j in earlier[i]):
                assignment.append(a)
                extend(i + 1)
                assignment.pop()

    extend(0)
    logger.debug(f"Enumerated {len(solutions)} solutions of {network.name or 'network'}")
    return solutions
