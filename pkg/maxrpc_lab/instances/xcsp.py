"""
Reader for the binary subset of XCSP 2.1.

Supported: ``<domains>`` with value lists and ``lo..hi`` ranges,
``<variables>``, ``<relations>`` of arity 2 with ``supports`` or
``conflicts`` semantics, ``<predicates>`` with a ``<functional>`` expression,
and ``<constraints>`` of arity 2 referencing either. Global constraints, soft
relations and any other arity are rejected with ``UnsupportedFeatureError``.
"""
import logging
import re
import xml.etree.ElementTree as ET

from instances.documents import CONFLICTS, PREDICATE, SUPPORTS, ConstraintDoc, InstanceDoc
from instances.exceptions import InstanceFormatError, InstanceParseError, UnsupportedFeatureError
from instances.expressions import Ref, bind, parse_expression, to_atoms


logger = logging.getLogger(__name__)


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _children(element, tag):
    return [child for child in element if _local(child.tag) == tag]


def _child(element, tag):
    found = _children(element, tag)
    return found[0] if found else None


def _section(root, parent, tag):
    element = _child(root, parent)
    return [] if element is None else _children(element, tag)


def _required(element, attribute, location):
    value = element.get(attribute)
    if value is None:
        raise InstanceParseError(f"Missing attribute {attribute!r}", location=location)
    return value


def _parse_int(token, location):
    try:
        return int(token)
    except ValueError:
        raise InstanceParseError(f"Expected an integer, got {token!r}", location=location)


def _parse_domain(text: str, location: str) -> list:
    values = []
    for token in (text or "").split():
        if ".." in token:
            lo, hi = token.split("..", 1)
            values.extend(range(_parse_int(lo, location), _parse_int(hi, location) + 1))
        else:
            values.append(_parse_int(token, location))
    return values


def _parse_tuples(text: str, location: str) -> list:
    tuples = []
    for chunk in (text or "").split("|"):
        tokens = chunk.split()
        if not tokens:
            continue
        if len(tokens) != 2:
            raise UnsupportedFeatureError(f"Tuple {chunk.strip()!r} is not binary", location=location)
        tuples.append((_parse_int(tokens[0], location), _parse_int(tokens[1], location)))
    return tuples


def _parse_formals(text: str, location: str) -> list:
    tokens = (text or "").split()
    if len(tokens) % 2:
        raise InstanceParseError("Predicate parameters must be 'int NAME' pairs", location=location)
    formals = []
    for kind, name in zip(tokens[::2], tokens[1::2]):
        if kind != "int":
            raise UnsupportedFeatureError(f"Parameter type {kind!r} is not supported", location=location)
        formals.append(name)
    return formals


def _sanitize(name: str) -> str:
    return re.sub(r"[\s#:@=]+", "_", name.strip())


def parse_xcsp(data, name: str = None) -> InstanceDoc:
    """Parse an XCSP 2.1 document given as bytes or text."""
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        line, column = exc.position
        raise InstanceParseError(str(exc), location=f"line {line}, column {column}")
    if _local(root.tag) != "instance":
        raise InstanceParseError(f"Root element is <{_local(root.tag)}>, expected <instance>", location="/")

    presentation = _child(root, "presentation")
    if presentation is not None and presentation.get("format", "XCSP 2.1") not in ("XCSP 2.1", "XCSP 2.0"):
        raise UnsupportedFeatureError(f"Format {presentation.get('format')!r}", location="/instance/presentation")
    title = name or (presentation.get("name") if presentation is not None else None) or ""
    title = _sanitize(title) if title and title != "?" else ""

    domains = {}
    for element in _section(root, "domains", "domain"):
        location = f"/instance/domains/domain[@name={element.get('name')}]"
        domains[_required(element, "name", location)] = _parse_domain(element.text, location)

    variables = {}
    variables_element = _child(root, "variables")
    if variables_element is None:
        raise InstanceParseError("Missing <variables>", location="/instance")
    for element in _children(variables_element, "variable"):
        location = f"/instance/variables/variable[@name={element.get('name')}]"
        var = _required(element, "name", location)
        domain = _required(element, "domain", location)
        if domain not in domains:
            raise InstanceFormatError(f"Unknown domain {domain!r}", location=location)
        variables[var] = domains[domain]

    relations = {}
    for element in _section(root, "relations", "relation"):
        location = f"/instance/relations/relation[@name={element.get('name')}]"
        if element.get("arity", "2") != "2":
            raise UnsupportedFeatureError(f"Relation of arity {element.get('arity')}", location=location)
        semantics = element.get("semantics", SUPPORTS)
        if semantics not in (SUPPORTS, CONFLICTS):
            raise UnsupportedFeatureError(f"Relation semantics {semantics!r}", location=location)
        relations[_required(element, "name", location)] = (semantics, _parse_tuples(element.text, location))

    predicates = {}
    for element in _section(root, "predicates", "predicate"):
        location = f"/instance/predicates/predicate[@name={element.get('name')}]"
        expression = _child(element, "expression")
        functional = _child(expression, "functional") if expression is not None else None
        if functional is None:
            raise UnsupportedFeatureError("Predicate without a <functional> expression", location=location)
        formals = _parse_formals(getattr(_child(element, "parameters"), "text", ""), location)
        try:
            tree = parse_expression(functional.text or "")
        except InstanceParseError as exc:
            raise InstanceParseError(str(exc), location=location)
        predicates[_required(element, "name", location)] = (formals, tree)

    constraints = []
    for element in _section(root, "constraints", "constraint"):
        location = f"/instance/constraints/constraint[@name={element.get('name')}]"
        scope = _required(element, "scope", location).split()
        if element.get("arity", str(len(scope))) != "2" or len(scope) != 2:
            raise UnsupportedFeatureError(f"Constraint of arity {len(scope)}", location=location)
        reference = _required(element, "reference", location)
        if reference.startswith("global:"):
            raise UnsupportedFeatureError(f"Global constraint {reference!r}", location=location)
        for var in scope:
            if var not in variables:
                raise InstanceFormatError(f"Unknown variable {var!r}", location=location)
        x, y = scope
        if reference in relations:
            semantics, tuples = relations[reference]
            xs, ys = set(variables[x]), set(variables[y])
            # shared relations may list tuples outside this scope's domains
            tuples = [(a, b) for a, b in tuples if a in xs and b in ys]
            constraints.append(ConstraintDoc((x, y), semantics, tuples=tuples))
        elif reference in predicates:
            formals, tree = predicates[reference]
            actual = getattr(_child(element, "parameters"), "text", "") or ""
            actual = actual.split()
            if len(actual) != len(formals):
                raise InstanceParseError(
                    f"Predicate {reference!r} expects {len(formals)} parameters, got {len(actual)}",
                    location=location,
                )
            bindings = {}
            for formal, token in zip(formals, actual):
                if token in scope:
                    bindings[formal] = Ref(token)
                else:
                    bindings[formal] = _parse_int(token, location)
            try:
                atoms = to_atoms(bind(tree, bindings), x, y)
            except InstanceFormatError as exc:
                raise type(exc)(str(exc), location=location)
            constraints.append(ConstraintDoc((x, y), PREDICATE, atoms=atoms))
        else:
            raise InstanceFormatError(f"Unknown reference {reference!r}", location=location)

    doc = InstanceDoc(name=title, variables=variables, constraints=constraints, meta={"format": "xcsp"})
    logger.debug(f"Parsed XCSP instance {title or '<unnamed>'}: {len(variables)} variables, {len(constraints)} constraints")
    return doc.validate()
