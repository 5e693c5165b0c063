"""
Propagation-list extraction policies, fail-first orderings for the four
places a coarse-grained maxRPC algorithm iterates over variables, and the
failure weights they read.
"""
import math

from csp.signals import wipeout


FIFO = "fifo"
DOM = "dom"
DEL_RATIO = "del_ratio"
WDEG = "wdeg"
DOM_WDEG = "dom_wdeg"

HEURISTICS = (FIFO, DOM, DEL_RATIO, WDEG, DOM_WDEG)
ORDERINGS = (DOM, DEL_RATIO, WDEG, DOM_WDEG)


def validate_heuristic(h, allow_fifo=False, allow_none=False):
    if h is None and allow_none:
        return None
    if h == FIFO and not allow_fifo:
        raise ValueError("fifo is only valid for propagation-list extraction")
    if h not in HEURISTICS:
        raise ValueError(f"Unknown heuristic: {h}")
    return h


class WeightTable:
    """dom/wdeg failure weights, one per constraint, starting at 1."""

    def __init__(self, network):
        self.network = network
        self.weights = [1] * network.e

    def weight(self, c: int) -> int:
        return self.weights[c]

    def bump(self, c: int) -> int:
        self.weights[c] += 1
        return self.weights[c]

    def reset(self) -> None:
        self.weights = [1] * self.network.e

    def wdeg(self, x: int, assigned=None) -> int:
        """Sum of weights of constraints on ``x`` whose other endpoint is unassigned."""
        total = 0
        for arc in self.network.adjacency[x]:
            if assigned is None or not assigned[arc.target]:
                total += self.weights[arc.constraint]
        return total


class PropagationList:
    """Insertion-ordered set of pending variables."""

    def __init__(self, variables=()):
        self._items = dict.fromkeys(variables)

    def add(self, x: int) -> None:
        self._items[x] = None

    def remove(self, x: int) -> None:
        del self._items[x]

    def oldest(self) -> int:
        return next(iter(self._items))

    def __contains__(self, x):
        return x in self._items

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def __bool__(self):
        return bool(self._items)

    def __repr__(self):
        return f"PropagationList({list(self._items)})"


class HeuristicState:
    """What the orderings read: current domains, weights and assigned flags."""

    def __init__(self, network, domains, weights=None, assigned=None):
        self.network = network
        self.domains = domains
        self.weights = weights if weights is not None else WeightTable(network)
        self.assigned = assigned if assigned is not None else [False] * network.n

    def dom(self, x: int) -> int:
        return self.domains.sizes[x]

    def del_ratio(self, x: int) -> float:
        return self.domains.sizes[x] / self.domains.initial_sizes[x]

    def wdeg(self, x: int) -> int:
        return self.weights.wdeg(x, self.assigned)

    def dom_wdeg(self, x: int) -> float:
        wdeg = self.wdeg(x)
        return self.domains.sizes[x] / wdeg if wdeg else math.inf


def variable_key(x: int, h: str, state: HeuristicState):
    """Sort key: smaller means "consider first"; ties fall back to the variable id."""
    if h == DOM:
        return (state.dom(x), x)
    if h == DEL_RATIO:
        return (state.del_ratio(x), x)
    if h == WDEG:
        return (-state.wdeg(x), x)
    if h == DOM_WDEG:
        return (state.dom_wdeg(x), x)
    return (x,)


def pick_from_list(queue: PropagationList, h: str, state: HeuristicState) -> int:
    if h == FIFO or h is None:
        return queue.oldest()
    return min(queue, key=lambda x: variable_key(x, h, state))


def order_neighbors_case1(x_j: int, h, state: HeuristicState) -> list:
    """Neighbors of ``x_j`` in the order their revision against ``x_j`` should run."""
    neighbors = state.network.neighbors(x_j)
    if h is None:
        return neighbors
    if h == WDEG:
        weights = state.weights.weights
        network = state.network
        return sorted(
            neighbors, key=lambda x_i: (-weights[network.arc(x_i, x_j).constraint], x_i)
        )
    return sorted(neighbors, key=lambda x_i: variable_key(x_i, h, state))


def triangle_key(x_i: int, x_j: int, h, state: HeuristicState):
    """Sort key over third variables x_k of a triangle with ``x_i`` and ``x_j``."""
    if h is None:
        return lambda k: k
    if h == DOM:
        return lambda k: (state.dom(k), k)
    if h == DEL_RATIO:
        return lambda k: (state.del_ratio(k), k)

    network = state.network
    weights = state.weights.weights

    def average_weight(k):
        return (
            weights[network.arc(x_i, k).constraint] + weights[network.arc(x_j, k).constraint]
        ) / 2

    if h == WDEG:
        return lambda k: (-average_weight(k), k)
    return lambda k: (state.dom(k) / average_weight(k), k)


def order_triangle_vars(x_i: int, x_j: int, h, case: int, state: HeuristicState) -> list:
    """Third variables of c_ij ordered for Case 2, 3 or 4."""
    if case not in (2, 3, 4):
        raise ValueError(f"Triangle orderings apply to cases 2-4, not {case}")
    third = [k for k, _, _ in state.network.arc(x_i, x_j).witnesses]
    if h is None:
        return third
    return sorted(third, key=triangle_key(x_i, x_j, h, state))


def bump_weight(c: int, weights: WeightTable, stats=None) -> int:
    weight = weights.bump(c)
    if stats is not None:
        stats.bumps.append((c, weight))
    wipeout.send(sender=WeightTable, constraint=c, weight=weight)
    return weight
