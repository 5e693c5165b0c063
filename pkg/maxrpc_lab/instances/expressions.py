"""
XCSP 2.1 functional expressions over two variables, normalized to atoms.

An expression such as ``gt(abs(sub(X,Y)),3)`` or
``and(ne(X,Y),ne(abs(sub(X,Y)),2))`` is parsed into a small tree, its formal
parameters are bound to the constraint's scope or to integer constants, and
each comparison is reduced to ``(x - y) op k`` or ``|x - y| op k``. Anything
that does not reduce that way is rejected as unsupported.
"""
import re
from typing import NamedTuple

from csp.relations import MIRRORED, Atom
from instances.exceptions import InstanceParseError, UnsupportedFeatureError


TOKEN = re.compile(r"\s*(?:(-?\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")

COMPARISONS = ("eq", "ne", "lt", "le", "gt", "ge")
NEGATED = {"eq": "ne", "ne": "eq", "lt": "ge", "ge": "lt", "le": "gt", "gt": "le"}


class Call(NamedTuple):
    name: str
    args: tuple


class Ref(NamedTuple):
    name: str


class Term(NamedTuple):
    """``cx*x + cy*y + cabs*|x - y| + const``."""

    cx: int = 0
    cy: int = 0
    cabs: int = 0
    const: int = 0

    def __add__(self, other):
        return Term(*(a + b for a, b in zip(self, other)))

    def __neg__(self):
        return Term(*(-a for a in self))

    def __sub__(self, other):
        return self + (-other)


def tokenize(text: str):
    position = 0
    tokens = []
    text = text.strip()
    while position < len(text):
        match = TOKEN.match(text, position)
        number, name, symbol = match.groups()
        if symbol is not None and symbol not in "(),":
            raise InstanceParseError(f"Unexpected character {symbol!r}", location=f"expression offset {match.start(3)}")
        tokens.append(int(number) if number is not None else (name or symbol))
        position = match.end()
    return tokens


def parse_expression(text: str):
    """Tree of ``Call``/``Ref``/int nodes for a functional expression."""
    tokens = tokenize(text)
    position = 0

    def expect(token):
        nonlocal position
        if position >= len(tokens) or tokens[position] != token:
            found = tokens[position] if position < len(tokens) else "end of expression"
            raise InstanceParseError(f"Expected {token!r}, found {found!r} in {text!r}")
        position += 1

    def node():
        nonlocal position
        if position >= len(tokens):
            raise InstanceParseError(f"Unexpected end of expression {text!r}")
        token = tokens[position]
        position += 1
        if isinstance(token, int):
            return token
        if token in "(),":
            raise InstanceParseError(f"Unexpected {token!r} in {text!r}")
        if position < len(tokens) and tokens[position] == "(":
            position += 1
            args = [node()]
            while position < len(tokens) and tokens[position] == ",":
                position += 1
                args.append(node())
            expect(")")
            return Call(token, tuple(args))
        return Ref(token)

    tree = node()
    if position != len(tokens):
        raise InstanceParseError(f"Trailing tokens in {text!r}")
    return tree


def bind(tree, bindings: dict):
    """Replace formal parameter references with scope references or constants."""
    if isinstance(tree, Call):
        return Call(tree.name, tuple(bind(arg, bindings) for arg in tree.args))
    if isinstance(tree, Ref):
        if tree.name not in bindings:
            raise InstanceParseError(f"Unbound parameter {tree.name!r}")
        return bindings[tree.name]
    return tree


def _term(tree, x: str, y: str) -> Term:
    if isinstance(tree, int):
        return Term(const=tree)
    if isinstance(tree, Ref):
        if tree.name == x:
            return Term(cx=1)
        if tree.name == y:
            return Term(cy=1)
        raise UnsupportedFeatureError(f"Reference {tree.name!r} outside the constraint scope")
    name, args = tree
    if name == "add" and len(args) == 2:
        return _term(args[0], x, y) + _term(args[1], x, y)
    if name == "sub" and len(args) == 2:
        return _term(args[0], x, y) - _term(args[1], x, y)
    if name == "neg" and len(args) == 1:
        return -_term(args[0], x, y)
    if name == "abs" and len(args) == 1:
        inner = _term(args[0], x, y)
        if inner.cabs == 0 and inner.const == 0 and (inner.cx, inner.cy) in ((1, -1), (-1, 1)):
            return Term(cabs=1)
        raise UnsupportedFeatureError("abs() is only supported over the difference of the two variables")
    raise UnsupportedFeatureError(f"Function {name}/{len(args)} is not supported in binary predicates")


def _atom(op: str, term: Term) -> Atom:
    """Atom for ``term op 0``."""
    if term.cabs:
        if term.cx or term.cy or abs(term.cabs) != 1:
            raise UnsupportedFeatureError("Mixed absolute and linear terms are not supported")
        if term.cabs < 0:
            term, op = -term, MIRRORED[op]
        return Atom(op, -term.const, absolute=True)
    if (term.cx, term.cy) == (-1, 1):
        term, op = -term, MIRRORED[op]
    if (term.cx, term.cy) != (1, -1):
        raise UnsupportedFeatureError("Only comparisons of the difference of the two variables are supported")
    return Atom(op, -term.const)


def to_atoms(tree, x: str, y: str) -> tuple:
    """Conjunction of atoms equivalent to a bound boolean expression."""
    if not isinstance(tree, Call):
        raise UnsupportedFeatureError("Predicate expression is not a boolean function")
    name, args = tree
    if name == "and":
        atoms = []
        for arg in args:
            atoms.extend(to_atoms(arg, x, y))
        return tuple(atoms)
    if name == "not" and len(args) == 1:
        inner = args[0]
        if isinstance(inner, Call) and inner.name in COMPARISONS:
            return to_atoms(Call(NEGATED[inner.name], inner.args), x, y)
        raise UnsupportedFeatureError("not() is only supported over a single comparison")
    if name in COMPARISONS and len(args) == 2:
        return (_atom(name, _term(args[0], x, y) - _term(args[1], x, y)),)
    raise UnsupportedFeatureError(f"Boolean function {name}/{len(args)} is not supported")
