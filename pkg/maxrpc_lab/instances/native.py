"""
Line-oriented native instance format.

    # comment
    instance <name>
    meta <key>=<value>
    domain <var> <value|lo..hi> ...
    table <ref> <a>:<b> ...
    supports <x> <y> <a>:<b> ... | @<ref>
    conflicts <x> <y> <a>:<b> ... | @<ref>
    predicate <x> <y> <atom> ...

Atoms are ``[abs]<op>:<k>`` and read ``(x - y) op k`` or ``|x - y| op k``;
several atoms on one line form a conjunction. Tuples list values in scope
order. ``table`` lines name a tuple set that later constraint lines can
reference with ``@<ref>``. Blank lines and comments are ignored, and the
writer always emits tuples inline.
"""
import logging

from instances.documents import (
    CONFLICTS,
    PREDICATE,
    SUPPORTS,
    ConstraintDoc,
    InstanceDoc,
    format_atom,
    parse_atom,
)
from instances.exceptions import InstanceFormatError, InstanceParseError


logger = logging.getLogger(__name__)


def _parse_int(token: str, location: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceParseError(f"Expected an integer, got {token!r}", location=location)


def _parse_values(tokens, location):
    values = []
    for token in tokens:
        if ".." in token:
            lo, hi = token.split("..", 1)
            lo, hi = _parse_int(lo, location), _parse_int(hi, location)
            if hi < lo:
                raise InstanceParseError(f"Empty range {token!r}", location=location)
            values.extend(range(lo, hi + 1))
        else:
            values.append(_parse_int(token, location))
    return values


def _parse_tuples(tokens, location):
    tuples = []
    for token in tokens:
        # values may be negative, so split on the first colon after position 0
        split = token.find(":", 1)
        if split < 0:
            raise InstanceParseError(f"Expected a tuple a:b, got {token!r}", location=location)
        tuples.append((_parse_int(token[:split], location), _parse_int(token[split + 1 :], location)))
    return tuples


def parse_native(text: str) -> InstanceDoc:
    name = ""
    meta = {}
    variables = {}
    tables = {}
    constraints = []
    for number, raw in enumerate(text.splitlines(), start=1):
        location = f"line {number}"
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, *tokens = line.split()
        if keyword == "instance":
            if len(tokens) != 1:
                raise InstanceParseError("Expected: instance <name>", location=location)
            name = tokens[0]
        elif keyword == "meta":
            for token in tokens:
                if "=" not in token:
                    raise InstanceParseError(f"Expected key=value, got {token!r}", location=location)
                key, value = token.split("=", 1)
                meta[key] = value
        elif keyword == "domain":
            if not tokens:
                raise InstanceParseError("Expected: domain <var> <values>", location=location)
            var, *values = tokens
            if var in variables:
                raise InstanceParseError(f"Variable {var!r} declared twice", location=location)
            variables[var] = _parse_values(values, location)
        elif keyword == "table":
            if not tokens:
                raise InstanceParseError("Expected: table <ref> <tuples>", location=location)
            ref, *pairs = tokens
            tables[ref] = _parse_tuples(pairs, location)
        elif keyword in (SUPPORTS, CONFLICTS, PREDICATE):
            if len(tokens) < 2:
                raise InstanceParseError(f"Expected: {keyword} <x> <y> ...", location=location)
            x, y, *rest = tokens
            if keyword == PREDICATE:
                try:
                    atoms = tuple(parse_atom(token) for token in rest)
                except ValueError as exc:
                    raise InstanceParseError(str(exc), location=location)
                constraints.append(ConstraintDoc((x, y), PREDICATE, atoms=atoms))
                continue
            if len(rest) == 1 and rest[0].startswith("@"):
                ref = rest[0][1:]
                if ref not in tables:
                    raise InstanceParseError(f"Unknown table reference {rest[0]!r}", location=location)
                tuples = tables[ref]
            else:
                tuples = _parse_tuples(rest, location)
            constraints.append(ConstraintDoc((x, y), keyword, tuples=tuples))
        else:
            raise InstanceParseError(f"Unknown keyword {keyword!r}", location=location)

    doc = InstanceDoc(name=name, variables=variables, constraints=constraints, meta=meta)
    return doc.validate()


def _format_values(values) -> str:
    if len(values) > 2 and values[-1] - values[0] == len(values) - 1:
        return f"{values[0]}..{values[-1]}"
    return " ".join(str(v) for v in values)


def serialize_native(doc: InstanceDoc) -> str:
    lines = []
    if doc.name:
        lines.append(f"instance {doc.name}")
    for key, value in doc.meta.items():
        if any(ch.isspace() for ch in value) or "#" in value:
            raise InstanceFormatError(f"Metadata value {value!r} cannot be written natively", location=f"meta {key}")
        lines.append(f"meta {key}={value}")
    for var, values in doc.variables.items():
        lines.append(f"domain {var} {_format_values(values)}")
    for constraint in doc.constraints:
        x, y = constraint.scope
        if constraint.kind == PREDICATE:
            body = " ".join(format_atom(atom) for atom in constraint.atoms)
        else:
            body = " ".join(f"{a}:{b}" for a, b in constraint.tuples)
        lines.append(f"{constraint.kind} {x} {y} {body}".rstrip())
    return "\n".join(lines) + "\n"
