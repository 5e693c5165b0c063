import glob
import re
import statistics
from pathlib import Path

from instances.generators import MODEL_B_NAME
from instances.loaders import GENERATOR_PREFIX


# generator families whose functions take a seed
SEEDED_FAMILIES = ("model-b", "geometric")

CLASS_PATTERNS = (
    (re.compile(r"^(scen|graph)\d+"), "rlfap"),
    (re.compile(r"queens"), "queens"),
    (re.compile(r"^geo"), "geometric"),
    (MODEL_B_NAME, "modelB"),
)


def seed_generator_spec(spec: str, seed: int) -> str:
    """Append ``seed=`` to a seeded generator spec that does not fix one."""
    family, _, params = spec[len(GENERATOR_PREFIX):].partition(":")
    if family not in SEEDED_FAMILIES or "like=" in params:
        return spec
    keys = {item.split("=", 1)[0].strip() for item in params.split(",") if "=" in item}
    if "seed" in keys:
        return spec
    return f"{GENERATOR_PREFIX}{family}:{params + ',' if params else ''}seed={seed}"


def expand_sources(sources, seed=None) -> list:
    """
    Files, globs and generator specs in the given order. Globs expand to
    their sorted matches; a pattern that matches nothing stays as given so
    loading it reports the problem.
    """
    expanded = []
    for source in sources:
        if source.startswith(GENERATOR_PREFIX):
            expanded.append(seed_generator_spec(source, seed) if seed is not None else source)
        elif any(char in source for char in "*?["):
            matches = sorted(glob.glob(source))
            expanded.extend(matches or [source])
        else:
            expanded.append(source)
    return expanded


def class_tag(doc, source: str = "") -> str:
    """Declared ``class`` meta, else a tag inferred from the instance or file name."""
    if doc is not None and doc.class_tag:
        return doc.class_tag
    name = doc.name if doc is not None and doc.name else Path(source).stem
    for pattern, tag in CLASS_PATTERNS:
        if pattern.search(name):
            return tag
    if source.startswith(GENERATOR_PREFIX):
        return source[len(GENERATOR_PREFIX):].partition(":")[0]
    return re.split(r"[-_\d]", name, maxsplit=1)[0] or name


def median(values) -> float:
    return statistics.median(values)
