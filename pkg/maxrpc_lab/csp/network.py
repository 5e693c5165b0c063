import logging
from dataclasses import dataclass
from typing import Sequence

from csp.exceptions import NetworkError
from csp.relations import compile_table


logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Variable:
    index: int
    name: str
    values: tuple

    @property
    def size(self) -> int:
        return len(self.values)


class Arc:
    """
    One direction x_i -> x_j of a binary constraint.

    ``offset`` locates the arc's block in the flat support tables: the entry
    of value index ``a`` of ``source`` lives at ``offset + a``.
    ``witnesses`` lists, per third variable x_k of the constraint's triangles,
    the tuple ``(k, arc x_i -> x_k, arc x_j -> x_k)``.
    """

    __slots__ = ("index", "constraint", "source", "target", "table", "offset", "reverse", "witnesses")

    def __init__(self, index, constraint, source, target, table, offset):
        self.index = index
        self.constraint = constraint
        self.source = source
        self.target = target
        self.table = table
        self.offset = offset
        self.reverse = None
        self.witnesses = ()

    def allows(self, a: int, b: int) -> bool:
        return self.table.allows(a, b)

    def __repr__(self):
        return f"Arc({self.source}->{self.target}, c{self.constraint})"


@dataclass(frozen=True)
class Constraint:
    index: int
    x: int
    y: int
    relation: object
    forward: Arc
    backward: Arc

    @property
    def scope(self) -> tuple:
        return (self.x, self.y)


def is_consistent(arc: Arc, a: int, b: int, stats) -> bool:
    """
    One constraint check of ``(a, b)`` on ``arc`` (value indices). Propagators
    inline the same count-then-lookup in their scan loops.
    """
    assert 0 <= a and 0 <= b, "value indices must be within the initial domains"
    stats.cc += 1
    return arc.table.allows(a, b)


def build_triangles(network) -> list:
    """Per constraint c_ij, the ascending ids of every x_k with c_ik and c_jk present."""
    neighbors = [set(arc.target for arc in arcs) for arcs in network.adjacency]
    return [tuple(sorted(neighbors[c.x] & neighbors[c.y])) for c in network.constraints]


class ConstraintNetwork:
    """
    Immutable binary CSP. Values are addressed by their index in the sorted
    initial domain of their variable; ``variables[i].values`` maps back.
    """

    def __init__(self, variables, constraint_specs, name="", dense_ratio=0.5):
        self.name = name
        self.variables = tuple(variables)
        self._build_constraints(constraint_specs, dense_ratio)
        self.triangles = tuple(build_triangles(self))
        self._link_witnesses()
        logger.debug(
            f"Network {name or '<anonymous>'} built: n={self.n} d={self.d} e={self.e} "
            f"triangles={sum(len(t) for t in self.triangles)}"
        )

    @classmethod
    def build(cls, domains, constraints, names=None, name="", dense_ratio=0.5):
        """
        ``domains``: per variable, an iterable of integer values.
        ``constraints``: iterable of ``(i, j, relation)`` with variable indices.
        """
        variables = []
        for index, values in enumerate(domains):
            values = tuple(values)
            if not values:
                raise NetworkError(f"Variable {index} has an empty domain")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise NetworkError(f"Domain of variable {index} is not strictly increasing")
            label = names[index] if names else f"x{index}"
            variables.append(Variable(index, label, values))
        return cls(variables, list(constraints), name=name, dense_ratio=dense_ratio)

    def _build_constraints(self, specs, dense_ratio):
        n = len(self.variables)
        seen = set()
        constraints = []
        arcs = []
        offset = 0
        for index, (i, j, relation) in enumerate(specs):
            if not (0 <= i < n and 0 <= j < n):
                raise NetworkError(f"Constraint {index} references an unknown variable ({i}, {j})")
            if i == j:
                raise NetworkError(f"Constraint {index} is a self-loop on variable {i}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise NetworkError(f"Duplicate constraint on variables {key}")
            seen.add(key)
            self._check_tuples(index, i, j, relation)

            table = compile_table(
                relation, self.variables[i].values, self.variables[j].values, dense_ratio
            )
            forward = Arc(2 * index, index, i, j, table, offset)
            offset += self.variables[i].size
            backward = Arc(2 * index + 1, index, j, i, table.transposed(), offset)
            offset += self.variables[j].size
            forward.reverse = backward
            backward.reverse = forward
            arcs.extend((forward, backward))
            constraints.append(Constraint(index, i, j, relation, forward, backward))

        self.constraints = tuple(constraints)
        self.arcs = tuple(arcs)
        self.support_slots = offset

        outgoing = [[] for _ in range(n)]
        for arc in arcs:
            outgoing[arc.source].append(arc)
        self.adjacency = tuple(tuple(sorted(out, key=lambda a: a.target)) for out in outgoing)
        self._arc_index = [{arc.target: arc for arc in out} for out in self.adjacency]

    def _check_tuples(self, index, i, j, relation):
        pairs = getattr(relation, "pairs", None)
        if pairs is None:
            return
        xs = set(self.variables[i].values)
        ys = set(self.variables[j].values)
        for a, b in pairs:
            if a not in xs or b not in ys:
                raise NetworkError(
                    f"Constraint {index} lists tuple ({a}, {b}) outside the domains of "
                    f"{self.variables[i].name} and {self.variables[j].name}"
                )

    def _link_witnesses(self):
        for constraint, third in zip(self.constraints, self.triangles):
            for arc in (constraint.forward, constraint.backward):
                arc.witnesses = tuple(
                    (k, self.arc(arc.source, k), self.arc(arc.target, k)) for k in third
                )

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def d(self) -> int:
        return max((v.size for v in self.variables), default=0)

    @property
    def e(self) -> int:
        return len(self.constraints)

    def arc(self, x: int, y: int) -> Arc:
        return self._arc_index[x][y]

    def has_constraint(self, x: int, y: int) -> bool:
        return y in self._arc_index[x]

    def neighbors(self, x: int) -> list:
        return [arc.target for arc in self.adjacency[x]]

    def value(self, x: int, a: int) -> int:
        return self.variables[x].values[a]

    def index_of(self, x: int, value: int) -> int:
        return self.variables[x].values.index(value)

    def __repr__(self):
        return f"ConstraintNetwork({self.name!r}, n={self.n}, e={self.e})"


def network_from_pairs(n: int, d: int, constraints: Sequence, name="") -> ConstraintNetwork:
    """Shorthand for networks whose domains are all ``0..d-1``."""
    return ConstraintNetwork.build([range(d)] * n, constraints, name=name)
