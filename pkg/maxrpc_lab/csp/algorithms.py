"""Named algorithm configurations, as used on the command line and in manifests."""
from csp.heuristics import DOM_WDEG, FIFO
from csp.propagators import PropagatorConfig, Variant


HEURISTIC_SUFFIX = "+h"

ALGORITHMS = {
    "maxrpc3": dict(variant=Variant.MAXRPC3),
    "lmaxrpc3": dict(variant=Variant.MAXRPC3, light=True),
    "maxrpc3rm": dict(variant=Variant.MAXRPC3RM),
    "lmaxrpc3rm": dict(variant=Variant.MAXRPC3RM, light=True),
    "maxrpc2": dict(variant=Variant.MAXRPC2_EMU),
    "lmaxrpc2": dict(variant=Variant.MAXRPC2_EMU, light=True),
    "maxrpcrm": dict(variant=Variant.MAXRPCRM_EMU),
    "lmaxrpcrm": dict(variant=Variant.MAXRPCRM_EMU, light=True),
    "ac3rm": dict(variant=Variant.AC3RM),
}


def algorithm_names(with_heuristics=True) -> list:
    names = list(ALGORITHMS)
    if with_heuristics:
        names += [name + HEURISTIC_SUFFIX for name in ALGORITHMS]
    return names


def algorithm_config(name: str, light: bool = False, **overrides) -> PropagatorConfig:
    """
    Configuration for an algorithm id such as ``lmaxrpc3rm+h``.

    ``+h`` selects dom/wdeg for propagation-list extraction and Case 1;
    ``light`` turns a full maxRPC variant into its light version. Remaining
    keyword arguments override config fields (``None`` values are ignored).
    """
    key = name.strip().lower()
    heuristic = key.endswith(HEURISTIC_SUFFIX)
    if heuristic:
        key = key[: -len(HEURISTIC_SUFFIX)]
    if key not in ALGORITHMS:
        raise ValueError(f"Unknown algorithm: {name}")
    options = dict(ALGORITHMS[key])
    if light and options["variant"] is not Variant.AC3RM:
        options["light"] = True
    if heuristic:
        options.update(queue_heuristic=DOM_WDEG, case1_ordering=DOM_WDEG)
    options.update({k: v for k, v in overrides.items() if v is not None})
    options.setdefault("queue_heuristic", FIFO)
    return PropagatorConfig(**options)
