"""
Bench manifests: which instances to run, with which algorithms and limits.

A manifest is a JSON or YAML mapping validated by
``bench.serializers.BenchManifestSerializer``::

    name: rlfap-preprocessing
    mode: preprocess            # or search
    sources: [data/*.xml, "gen:model-b:n=30,d=8,p1=0.4,p2=0.5"]
    algorithms: [maxrpc3, lmaxrpc3rm+h, {id: maxrpc3rm, case2_ordering: dom}]
    repetitions: 3
    seed: 7                     # default seed for generator specs without one
    oracle_check: true
"""
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

import yaml
from django.conf import settings
from rest_framework import serializers

from csp.algorithms import algorithm_config
from csp.heuristics import HEURISTICS, ORDERINGS
from csp.propagators import PropagatorConfig
from csp.search import SearchConfig
from bench.exceptions import ManifestError


logger = logging.getLogger(__name__)

PREPROCESS = "preprocess"
SEARCH = "search"
BENCH_MODES = (PREPROCESS, SEARCH)


@dataclass(frozen=True)
class AlgorithmEntry:
    label: str
    config: PropagatorConfig
    id: str
    light: bool = False
    overrides: dict = field(default_factory=dict, hash=False, compare=False)

    @classmethod
    def build(cls, name: str, light: bool = False, **overrides) -> "AlgorithmEntry":
        config = algorithm_config(name, light=light, **overrides)
        label = config.label + "".join(f"[{key}={value}]" for key, value in sorted(overrides.items()))
        return cls(label=label, config=config, id=name, light=light, overrides=dict(overrides))

    def as_data(self) -> dict:
        return {"id": self.id, "light": self.light, "overrides": dict(self.overrides)}

    @classmethod
    def from_data(cls, data: dict) -> "AlgorithmEntry":
        return cls.build(data["id"], light=data.get("light", False), **data.get("overrides", {}))


@dataclass
class BenchManifest:
    sources: list
    algorithms: list
    name: str = ""
    mode: str = PREPROCESS
    branching: Optional[str] = None
    var_heuristic: Optional[str] = None
    search_mode: Optional[str] = None
    node_limit: Optional[int] = None
    time_limit: Optional[float] = None
    repetitions: int = 1
    seed: Optional[int] = None
    oracle_check: bool = False
    output_format: str = "csv"
    output_path: Optional[str] = None

    def with_settings_defaults(self) -> "BenchManifest":
        """Fill unset search options and limits from ``settings.MAXRPC_LAB``."""
        lab = settings.MAXRPC_LAB
        self.branching = self.branching or lab["DEFAULT_BRANCHING"]
        self.var_heuristic = self.var_heuristic or lab["DEFAULT_VAR_HEURISTIC"]
        self.search_mode = self.search_mode or "first_solution"
        if self.node_limit is None:
            self.node_limit = lab["NODE_LIMIT"]
        if self.time_limit is None:
            self.time_limit = lab["TIME_LIMIT"]
        return self

    def search_options(self) -> dict:
        return {
            "branching": self.branching or "binary",
            "var_heuristic": self.var_heuristic or "dom_wdeg",
            "mode": self.search_mode or "first_solution",
            "node_limit": self.node_limit,
            "time_limit": self.time_limit,
        }

    def search_config(self, entry: AlgorithmEntry) -> SearchConfig:
        return SearchConfig(propagator=entry.config, **self.search_options())

    def as_data(self) -> dict:
        data = asdict(self)
        data["algorithms"] = [entry.label for entry in self.algorithms]
        return data


def manifest_from_data(data, location=None) -> BenchManifest:
    from bench.serializers import BenchManifestSerializer

    serializer = BenchManifestSerializer(data=data)
    try:
        serializer.is_valid(raise_exception=True)
    except serializers.ValidationError as exc:
        prefix = f"{location}: " if location else ""
        raise ManifestError(f"{prefix}Invalid bench manifest: {exc.detail}")
    return serializer.save()


def load_manifest(path) -> BenchManifest:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ManifestError(f"Cannot read manifest {path}: {exc}")
    try:
        data = json.loads(text) if path.suffix.lower() == ".json" else yaml.safe_load(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise ManifestError(f"{path}: {exc}")
    manifest = manifest_from_data(data, location=str(path))
    if not manifest.name:
        manifest.name = path.stem
    logger.info(f"Loaded manifest {manifest.name}: {len(manifest.sources)} sources, {len(manifest.algorithms)} algorithms")
    return manifest


def add_algorithm_arguments(parser) -> None:
    """Flags shared by the ``preprocess`` and ``solve`` commands."""
    parser.add_argument("instances", nargs="*", help="Instance files, globs or gen: specs")
    parser.add_argument("--manifest", help="JSON or YAML bench manifest")
    parser.add_argument(
        "--algorithm",
        action="append",
        dest="algorithms",
        metavar="ID",
        help="Algorithm id, repeatable (e.g. maxrpc3, lmaxrpc3rm+h, ac3rm)",
    )
    parser.add_argument("--light", action="store_true", help="Use the light version of full maxRPC variants")
    parser.add_argument("--queue-heuristic", choices=HEURISTICS)
    for case in (1, 2, 3, 4):
        parser.add_argument(f"--case{case}", choices=ORDERINGS)
    parser.add_argument("--no-shortcuts", action="store_true", help="Disable LastAC shortcuts")
    parser.add_argument("--repetitions", type=int, help="Runs per instance and algorithm (median t)")
    parser.add_argument("--seed", type=int, help="Seed for generator specs without one")
    parser.add_argument("--oracle-check", action="store_true", help="Cross-check results with the brute-force oracle")
    parser.add_argument("--format", choices=("csv", "markdown"), help="Report format (default csv)")
    parser.add_argument("--out", help="Report file (default: stdout)")


def manifest_from_options(options: dict, mode: str) -> BenchManifest:
    """Manifest from command flags, layered over ``--manifest`` when given."""
    if options.get("manifest"):
        manifest = load_manifest(options["manifest"])
        if options.get("instances"):
            manifest.sources = list(options["instances"])
    else:
        if not options.get("instances"):
            raise ManifestError("No instances given; pass instance paths or --manifest")
        manifest = BenchManifest(sources=list(options["instances"]), algorithms=[])

    overrides = {
        "queue_heuristic": options.get("queue_heuristic"),
        "case1_ordering": options.get("case1"),
        "case2_ordering": options.get("case2"),
        "case3_ordering": options.get("case3"),
        "case4_ordering": options.get("case4"),
    }
    if options.get("no_shortcuts"):
        overrides["use_last_ac_shortcuts"] = False
    overrides = {key: value for key, value in overrides.items() if value is not None}
    names = options.get("algorithms")
    if names or not manifest.algorithms:
        names = names or [settings.MAXRPC_LAB["DEFAULT_ALGORITHM"]]
        try:
            manifest.algorithms = [AlgorithmEntry.build(name, light=options.get("light", False), **overrides) for name in names]
        except ValueError as exc:
            raise ManifestError(str(exc))

    manifest.mode = mode
    for key, attr in (
        ("branching", "branching"),
        ("var_heuristic", "var_heuristic"),
        ("search_mode", "search_mode"),
        ("node_limit", "node_limit"),
        ("time_limit", "time_limit"),
        ("repetitions", "repetitions"),
        ("seed", "seed"),
        ("format", "output_format"),
        ("out", "output_path"),
    ):
        if options.get(key) is not None:
            setattr(manifest, attr, options[key])
    if options.get("oracle_check"):
        manifest.oracle_check = True
    if manifest.repetitions < 1:
        raise ManifestError("--repetitions must be at least 1")
    manifest.with_settings_defaults()
    try:
        manifest.search_config(manifest.algorithms[0])
    except ValueError as exc:
        raise ManifestError(str(exc))
    return manifest
