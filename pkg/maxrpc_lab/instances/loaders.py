"""
Reading and writing instance documents by file extension or generator spec.

Sources are file paths (``.xml`` XCSP, ``.csp`` native, ``.json``/``.yaml``/
``.yml`` structured) or generator specs such as
``gen:model-b:n=20,d=5,p1=0.5,p2=0.4,seed=3``.
"""
import json
import logging
from pathlib import Path

import yaml
from rest_framework import serializers

from instances.documents import InstanceDoc
from instances.exceptions import InstanceFormatError, InstanceParseError
from instances.generators import GENERATORS, model_b_like
from instances.native import parse_native, serialize_native
from instances.serializers import InstanceDocSerializer, document_to_data
from instances.xcsp import parse_xcsp


logger = logging.getLogger(__name__)

GENERATOR_PREFIX = "gen:"
FORMATS = ("native", "json", "yaml")
EXTENSIONS = {
    ".xml": "xcsp",
    ".csp": "native",
    ".json": "json",
    ".yaml": "yaml",
    ".yml": "yaml",
}


def _coerce(value: str):
    lowered = value.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    return value


def parse_generator_spec(spec: str) -> InstanceDoc:
    """Document for ``gen:<family>:k=v,...``; ``like=<name>`` rebuilds a named model B instance."""
    body = spec[len(GENERATOR_PREFIX):] if spec.startswith(GENERATOR_PREFIX) else spec
    family, _, params = body.partition(":")
    kwargs = {}
    for item in filter(None, params.split(",")):
        if "=" not in item:
            raise InstanceFormatError(f"Expected key=value, got {item!r}", location=spec)
        key, value = item.split("=", 1)
        kwargs[key.strip()] = value.strip() if key.strip() == "like" else _coerce(value.strip())
    if family == "model-b" and "like" in kwargs:
        like = kwargs.pop("like")
        try:
            return model_b_like(like, **kwargs)
        except (TypeError, ValueError) as exc:
            raise InstanceFormatError(str(exc), location=spec)
    if family not in GENERATORS:
        raise InstanceFormatError(f"Unknown generator {family!r}; choose from {', '.join(GENERATORS)}", location=spec)
    try:
        return GENERATORS[family](**kwargs)
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(str(exc), location=spec)


def document_from_data(data, location=None) -> InstanceDoc:
    serializer = InstanceDocSerializer(data=data)
    try:
        serializer.is_valid(raise_exception=True)
    except serializers.ValidationError as exc:
        raise InstanceFormatError(f"Invalid instance document: {exc.detail}", location=location)
    return serializer.save()


def parse_text(text: str, fmt: str, location=None) -> InstanceDoc:
    if fmt == "xcsp":
        return parse_xcsp(text)
    if fmt == "native":
        return parse_native(text)
    try:
        data = json.loads(text) if fmt == "json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise InstanceParseError(str(exc), location=location)
    return document_from_data(data, location=location)


def read_document(path) -> InstanceDoc:
    path = Path(path)
    fmt = EXTENSIONS.get(path.suffix.lower())
    if fmt is None:
        raise InstanceFormatError(f"Cannot infer the instance format from {path.suffix!r}", location=str(path))
    if fmt == "xcsp":
        doc = parse_xcsp(path.read_bytes(), name=None)
    else:
        doc = parse_text(path.read_text(), fmt, location=str(path))
    if not doc.name:
        doc.name = path.stem
    doc.meta.setdefault("source", str(path))
    return doc


def load_source(source: str) -> InstanceDoc:
    if source.startswith(GENERATOR_PREFIX):
        doc = parse_generator_spec(source)
    else:
        doc = read_document(source)
    logger.info(f"Loaded instance {doc.name} from {source}")
    return doc


def dump_document(doc: InstanceDoc, fmt: str = "native") -> str:
    if fmt == "native":
        return serialize_native(doc)
    data = document_to_data(doc)
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    if fmt == "yaml":
        return yaml.safe_dump(data, sort_keys=False)
    raise ValueError(f"Unknown output format {fmt!r}; choose from {', '.join(FORMATS)}")
