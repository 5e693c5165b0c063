"""
Seeded generators for random binary CSPs (model B, geometric) and n-queens.

Every generator is a pure function of its parameters and seed; the parameters
are echoed into the document metadata.
"""
import itertools
import logging
import math
import re

import numpy as np

from csp.relations import Atom
from instances.documents import CONFLICTS, PREDICATE, ConstraintDoc, InstanceDoc


logger = logging.getLogger(__name__)

MODEL_B_NAME = re.compile(r"rand-2-(\d+)-(\d+)-(\d+)-(\d+)-(\d+)")


def _variable_names(n: int) -> list:
    return [f"x{i}" for i in range(n)]


def _check_size(n: int, d: int, min_n: int = 2) -> None:
    if n < min_n:
        raise ValueError(f"n must be at least {min_n}, got {n}")
    if d < 1:
        raise ValueError(f"d must be at least 1, got {d}")


def _check_tightness(p2: float) -> None:
    if not 0 <= p2 < 1:
        raise ValueError(f"Tightness p2 must be in [0, 1), got {p2}")


def _random_conflicts(rng, d: int, count: int, planted=None) -> list:
    """``count`` distinct forbidden pairs over ``0..d-1``, never the planted pair."""
    candidates = [(a, b) for a in range(d) for b in range(d) if (a, b) != planted]
    count = min(count, len(candidates))
    picks = rng.choice(len(candidates), size=count, replace=False)
    return [candidates[i] for i in sorted(picks.tolist())]


def _with_conflicts(rng, pairs, n, d, p2, forced):
    planted = rng.integers(0, d, size=n).tolist() if forced else None
    names = _variable_names(n)
    count = round(p2 * d * d)
    constraints = []
    for i, j in pairs:
        hidden = (planted[i], planted[j]) if forced else None
        tuples = _random_conflicts(rng, d, count, hidden)
        constraints.append(ConstraintDoc((names[i], names[j]), CONFLICTS, tuples=tuples))
    return constraints, planted


def gen_model_b(n: int, d: int, p1: float, p2: float, seed: int = 0, forced: bool = False, name: str = None) -> InstanceDoc:
    """
    Model B: exactly round(p1 * n(n-1)/2) distinct constrained pairs, each
    forbidding exactly round(p2 * d^2) distinct tuples. ``forced`` plants a
    random solution whose tuples are never forbidden.
    """
    _check_size(n, d)
    if not 0 < p1 <= 1:
        raise ValueError(f"Density p1 must be in (0, 1], got {p1}")
    _check_tightness(p2)

    rng = np.random.default_rng(seed)
    all_pairs = list(itertools.combinations(range(n), 2))
    count = round(p1 * len(all_pairs))
    picks = rng.choice(len(all_pairs), size=count, replace=False)
    pairs = [all_pairs[i] for i in sorted(picks.tolist())]
    constraints, planted = _with_conflicts(rng, pairs, n, d, p2, forced)

    meta = {
        "generator": "model-b",
        "class": "modelB-forced" if forced else "modelB",
        "n": n,
        "d": d,
        "p1": p1,
        "p2": p2,
        "seed": seed,
        "forced": forced,
    }
    if forced:
        meta["planted"] = ",".join(str(v) for v in planted)
    name = name or f"modelb-{n}-{d}-{p1}-{p2}-s{seed}{'-forced' if forced else ''}"
    logger.debug(f"Generated {name}: {len(constraints)} constraints, {round(p2 * d * d)} conflicts each")
    return InstanceDoc(
        name=name,
        variables={v: range(d) for v in _variable_names(n)},
        constraints=constraints,
        meta=meta,
    )


def gen_geometric(n: int, d: int, dist: float, p2: float, seed: int = 0, forced: bool = False, name: str = None) -> InstanceDoc:
    """
    n random points in the unit square; a constraint joins every two points
    closer than ``dist`` (capped at sqrt(2), which no two points reach).
    """
    _check_size(n, d)
    if dist <= 0:
        raise ValueError(f"dist must be positive, got {dist}")
    _check_tightness(p2)
    dist = min(dist, math.sqrt(2))

    rng = np.random.default_rng(seed)
    points = rng.random((n, 2))
    deltas = points[:, None, :] - points[None, :, :]
    distances = np.sqrt((deltas**2).sum(axis=-1))
    pairs = [(i, j) for i, j in itertools.combinations(range(n), 2) if distances[i, j] < dist]
    constraints, planted = _with_conflicts(rng, pairs, n, d, p2, forced)

    meta = {
        "generator": "geometric",
        "class": "geometric-forced" if forced else "geometric",
        "n": n,
        "d": d,
        "dist": dist,
        "p2": p2,
        "seed": seed,
        "forced": forced,
    }
    if forced:
        meta["planted"] = ",".join(str(v) for v in planted)
    name = name or f"geo-{n}-{d}-{dist:g}-{p2}-s{seed}{'-forced' if forced else ''}"
    return InstanceDoc(
        name=name,
        variables={v: range(d) for v in _variable_names(n)},
        constraints=constraints,
        meta=meta,
    )


def gen_queens(n: int) -> InstanceDoc:
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    names = [f"q{i}" for i in range(n)]
    constraints = [
        ConstraintDoc(
            (names[i], names[j]),
            PREDICATE,
            atoms=(Atom("ne", 0), Atom("ne", j - i, absolute=True)),
        )
        for i, j in itertools.combinations(range(n), 2)
    ]
    return InstanceDoc(
        name=f"queens-{n}",
        variables={v: range(n) for v in names},
        constraints=constraints,
        meta={"generator": "queens", "class": "queens", "n": n},
    )


def parse_model_b_name(name: str) -> dict:
    """
    Parameters implied by a ``rand-2-<n>-<d>-<e>-<t>-<index>`` name, where ``e``
    is the number of constraints and ``t`` the tightness in thousandths.
    """
    match = MODEL_B_NAME.search(name)
    if not match:
        raise ValueError(f"{name!r} does not follow the rand-2-n-d-e-t-index naming")
    n, d, e, t, index = (int(g) for g in match.groups())
    pairs = n * (n - 1) // 2
    if not 0 < e <= pairs:
        raise ValueError(f"{name!r} implies {e} constraints on {n} variables")
    return {"n": n, "d": d, "e": e, "p1": e / pairs, "p2": t / 1000, "index": index}


def model_b_like(name: str, seed: int = None, forced: bool = False) -> InstanceDoc:
    """A model B instance with the parameters encoded in ``name``; not the repository instance itself."""
    params = parse_model_b_name(name)
    seed = params["index"] if seed is None else seed
    doc = gen_model_b(params["n"], params["d"], params["p1"], params["p2"], seed=seed, forced=forced)
    doc.meta["like"] = name
    return doc


GENERATORS = {
    "model-b": gen_model_b,
    "geometric": gen_geometric,
    "queens": gen_queens,
}


def random_suite(count: int, seed: int = 0, n=(3, 8), d=(2, 5), p1=(0.3, 1.0), p2=(0.1, 0.7)):
    """
    ``count`` small model B instances with parameters drawn uniformly from the
    given inclusive ranges; instance ``i`` depends only on ``seed`` and ``i``.
    """
    for index in range(count):
        rng = np.random.default_rng([seed, index])
        yield gen_model_b(
            int(rng.integers(n[0], n[1] + 1)),
            int(rng.integers(d[0], d[1] + 1)),
            round(float(rng.uniform(*p1)), 3),
            round(float(rng.uniform(*p2)), 3),
            seed=int(rng.integers(0, 2**31)),
            name=f"suite-{seed}-{index}",
        )


def critical_tightness(n: int, d: int, p1: float) -> float:
    """Expected solubility phase-transition tightness 1 - d^(-2 / (p1 (n - 1)))."""
    return 1 - d ** (-2 / (p1 * (n - 1)))


def search_suite(count: int = 30, seed: int = 0, n: int = 15, d: int = 6):
    """
    Mixed search benchmark: model B near the phase transition, geometric
    instances at the same tightness, and queens 8 to 12, in rotation.
    """
    queens_sizes = (8, 9, 10, 11, 12)
    for index in range(count):
        rng = np.random.default_rng([seed, index, 1])
        family = index % 3
        if family == 0:
            p1 = round(float(rng.uniform(0.3, 0.6)), 3)
            p2 = round(min(critical_tightness(n, d, p1), 0.9), 3)
            yield gen_model_b(n, d, p1, p2, seed=int(rng.integers(0, 2**31)))
        elif family == 1:
            yield gen_geometric(n, d, 0.5, 0.3, seed=int(rng.integers(0, 2**31)))
        else:
            yield gen_queens(queens_sizes[(index // 3) % len(queens_sizes)])
