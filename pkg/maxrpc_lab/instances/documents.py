"""
Format-independent instance documents.

An ``InstanceDoc`` is what every reader produces and every writer consumes:
named variables with integer domains, binary constraints given as allowed or
forbidden tuples or as a conjunction of difference atoms, and string-valued
provenance metadata.
"""
import logging
import re
from dataclasses import dataclass, field

from csp.network import ConstraintNetwork
from csp.relations import COMPARATORS, Atom, IntensionalRelation, conflicts, supports
from instances.exceptions import InstanceFormatError


logger = logging.getLogger(__name__)

SUPPORTS = "supports"
CONFLICTS = "conflicts"
PREDICATE = "predicate"
CONSTRAINT_KINDS = (SUPPORTS, CONFLICTS, PREDICATE)

NAME_PATTERN = re.compile(r"^[^\s#:@=]+$")
ATOM_PATTERN = re.compile(r"^(abs)?(eq|ne|lt|le|gt|ge):(-?\d+)$")


def format_atom(atom: Atom) -> str:
    """``ne:0`` for ``x - y != 0``, ``absgt:3`` for ``|x - y| > 3``."""
    return f"{'abs' if atom.absolute else ''}{atom.op}:{atom.k}"


def parse_atom(token: str) -> Atom:
    match = ATOM_PATTERN.match(token.strip())
    if not match:
        raise ValueError(f"Invalid atom {token!r}; expected [abs]<op>:<k> with op in {', '.join(COMPARATORS)}")
    absolute, op, k = match.groups()
    return Atom(op, int(k), absolute=bool(absolute))


@dataclass(frozen=True)
class ConstraintDoc:
    scope: tuple
    kind: str
    tuples: tuple = ()
    atoms: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))
        object.__setattr__(self, "tuples", tuple(sorted({(int(a), int(b)) for a, b in self.tuples})))
        object.__setattr__(self, "atoms", tuple(self.atoms))

    @property
    def x(self) -> str:
        return self.scope[0]

    @property
    def y(self) -> str:
        return self.scope[1]

    def relation(self):
        if self.kind == SUPPORTS:
            return supports(self.tuples)
        if self.kind == CONFLICTS:
            return conflicts(self.tuples)
        return IntensionalRelation(self.atoms)


@dataclass
class InstanceDoc:
    name: str
    # variable name -> sorted tuple of values, in declaration order
    variables: dict
    constraints: list
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.variables = {
            str(name): tuple(sorted({int(v) for v in values}))
            for name, values in self.variables.items()
        }
        self.constraints = list(self.constraints)
        self.meta = {str(k): str(v) for k, v in self.meta.items()}

    def validate(self) -> "InstanceDoc":
        if self.name and not NAME_PATTERN.match(self.name):
            raise InstanceFormatError(f"Invalid instance name {self.name!r}")
        for name, values in self.variables.items():
            if not NAME_PATTERN.match(name):
                raise InstanceFormatError(f"Invalid variable name {name!r}")
            if not values:
                raise InstanceFormatError("Empty domain", location=f"variable {name}")
        seen = set()
        for index, constraint in enumerate(self.constraints):
            location = f"constraint {index}"
            if len(constraint.scope) != 2:
                raise InstanceFormatError("Only binary constraints are supported", location=location)
            if constraint.kind not in CONSTRAINT_KINDS:
                raise InstanceFormatError(f"Unknown constraint kind {constraint.kind!r}", location=location)
            for name in constraint.scope:
                if name not in self.variables:
                    raise InstanceFormatError(f"Unknown variable {name!r}", location=location)
            x, y = constraint.scope
            if x == y:
                raise InstanceFormatError(f"Constraint on a single variable {x!r}", location=location)
            key = frozenset(constraint.scope)
            if key in seen:
                raise InstanceFormatError(f"Second constraint on the pair ({x}, {y})", location=location)
            seen.add(key)
            if constraint.kind == PREDICATE:
                if not constraint.atoms:
                    raise InstanceFormatError("Predicate without atoms", location=location)
            elif constraint.atoms:
                raise InstanceFormatError("Extensional constraint with atoms", location=location)
            xs, ys = set(self.variables[x]), set(self.variables[y])
            for a, b in constraint.tuples:
                if a not in xs or b not in ys:
                    raise InstanceFormatError(
                        f"Tuple ({a}, {b}) lies outside the domains of {x} and {y}", location=location
                    )
        return self

    @property
    def class_tag(self) -> str:
        return self.meta.get("class", "")

    def to_network(self, dense_ratio: float = 0.5) -> ConstraintNetwork:
        self.validate()
        names = list(self.variables)
        index = {name: i for i, name in enumerate(names)}
        network = ConstraintNetwork.build(
            [self.variables[name] for name in names],
            [(index[c.x], index[c.y], c.relation()) for c in self.constraints],
            names=names,
            name=self.name,
            dense_ratio=dense_ratio,
        )
        logger.debug(f"Built network for {self.name or 'instance'}: n={network.n} d={network.d} e={network.e}")
        return network
