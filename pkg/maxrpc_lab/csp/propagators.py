"""
Coarse-grained propagators over a propagation list of variables.

``MaxRPCPropagator`` is one engine for maxRPC3 (incremental LastPC/LastAC),
maxRPC3rm (the same tables as residues), their light versions, and flag-based
emulations of maxRPC2 and maxRPCrm. ``AC3rmPropagator`` is the arc
consistency baseline with one residue per (arc, value).

Both follow the same contract: a revision pass over the neighbors of each
extracted variable, deletions done by the caller of the support tests, and a
weight bump on the failing constraint right before FAILURE is returned.
"""
import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

from csp.domains import NIL
from csp.heuristics import (
    FIFO,
    PropagationList,
    HeuristicState,
    bump_weight,
    order_neighbors_case1,
    pick_from_list,
    triangle_key,
    validate_heuristic,
)
from csp.supports import SupportMode


logger = logging.getLogger(__name__)


class Variant(str, Enum):
    MAXRPC3 = "maxrpc3"
    MAXRPC3RM = "maxrpc3rm"
    MAXRPC2_EMU = "maxrpc2"
    MAXRPCRM_EMU = "maxrpcrm"
    AC3RM = "ac3rm"


INCREMENTAL_VARIANTS = (Variant.MAXRPC3, Variant.MAXRPC2_EMU)
LAST_AC_VARIANTS = (Variant.MAXRPC3, Variant.MAXRPC3RM)
EMULATIONS = (Variant.MAXRPC2_EMU, Variant.MAXRPCRM_EMU)
LIGHT_RESIDUAL_VARIANTS = (Variant.MAXRPC3RM, Variant.MAXRPCRM_EMU)


@dataclass(frozen=True)
class PropagatorConfig:
    variant: Variant = Variant.MAXRPC3RM
    light: bool = False
    use_last_ac_shortcuts: bool = True
    use_bidirectionality: bool = True
    queue_heuristic: str = FIFO
    case1_ordering: Optional[str] = None
    case2_ordering: Optional[str] = None
    case3_ordering: Optional[str] = None
    case4_ordering: Optional[str] = None
    audit_scans: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        validate_heuristic(self.queue_heuristic, allow_fifo=True)
        for h in (self.case1_ordering, self.case2_ordering, self.case3_ordering, self.case4_ordering):
            validate_heuristic(h, allow_none=True)
        # the emulated algorithms have no LastAC structure to take shortcuts with
        if self.variant in EMULATIONS:
            object.__setattr__(self, "use_last_ac_shortcuts", False)
        if self.variant in INCREMENTAL_VARIANTS:
            object.__setattr__(self, "use_bidirectionality", False)
        # light residual runs cache only the smallest PC-support, as lmaxrpc3 does
        if self.light and self.variant in LIGHT_RESIDUAL_VARIANTS:
            object.__setattr__(self, "use_bidirectionality", False)

    @property
    def support_mode(self) -> SupportMode:
        if self.variant in INCREMENTAL_VARIANTS:
            return SupportMode.INCREMENTAL
        return SupportMode.RESIDUAL

    @property
    def incremental(self) -> bool:
        return self.support_mode is SupportMode.INCREMENTAL

    @property
    def uses_last_ac(self) -> bool:
        return self.variant in LAST_AC_VARIANTS

    def with_options(self, **changes) -> "PropagatorConfig":
        return replace(self, **changes)

    @property
    def label(self) -> str:
        if self.variant is Variant.AC3RM:
            name = "ac3rm"
        else:
            name = ("l" if self.light else "") + self.variant.value
        if self.queue_heuristic != FIFO or self.case1_ordering:
            name += "+h"
        return name


class Propagator:
    """Shared propagation-list loop; subclasses decide whether a value survives."""

    def __init__(self, network, domains, supports, stats, config, weights=None, assigned=None):
        self.network = network
        self.domains = domains
        self.supports = supports
        self.stats = stats
        self.config = config
        self.state = HeuristicState(network, domains, weights, assigned)
        self.weights = self.state.weights
        self.present = domains.present
        self.last_pc = supports.last_pc
        self.last_ac = supports.last_ac
        self.queue = PropagationList()

    def initialize(self) -> bool:
        raise NotImplementedError

    def keeps(self, arc, a_i: int) -> bool:
        raise NotImplementedError

    def propagate(self, queue: PropagationList = None) -> bool:
        """Run to fixpoint from ``queue``; False on a domain wipeout."""
        queue = self.queue if queue is None else queue
        self.queue = queue
        network = self.network
        config = self.config
        domains = self.domains
        while queue:
            x_j = pick_from_list(queue, config.queue_heuristic, self.state)
            queue.remove(x_j)
            if config.case1_ordering is None:
                arcs = [arc.reverse for arc in network.adjacency[x_j]]
            else:
                arcs = [
                    network.arc(x_i, x_j)
                    for x_i in order_neighbors_case1(x_j, config.case1_ordering, self.state)
                ]
            for arc in arcs:
                x_i = arc.source
                if self.revise(arc):
                    queue.add(x_i)
                    if domains.sizes[x_i] == 0:
                        self.fail(arc)
                        return False
        return True

    def revise(self, arc) -> bool:
        """Delete every value of ``arc.source`` that ``keeps`` rejects."""
        x_i = arc.source
        domains = self.domains
        deleted = False
        for a_i in domains.iter_values(x_i):
            if not self.keeps(arc, a_i):
                domains.remove_value(x_i, a_i)
                deleted = True
        return deleted

    def fail(self, arc) -> None:
        weight = bump_weight(arc.constraint, self.weights, self.stats)
        self.queue = PropagationList()
        logger.debug(
            f"Domain of variable {arc.source} wiped out revising against {arc.target}; "
            f"constraint {arc.constraint} weight {weight}"
        )

    def enforce(self) -> bool:
        """Stand-alone (preprocessing) run: initialization followed by propagation."""
        return self.initialize() and self.propagate()


class MaxRPCPropagator(Propagator):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        config = self.config
        self.incremental = config.incremental
        self.rm = not self.incremental
        self.last_ac_on = config.uses_last_ac
        self.seek_ac = self.incremental and self.last_ac_on
        self.shortcuts = config.use_last_ac_shortcuts
        self.bidirectional = self.rm and config.use_bidirectionality
        self.audit = config.audit_scans and self.incremental and self.supports.scan_marks is not None

    def initialize(self) -> bool:
        """Check every value against every incident constraint from scratch."""
        network = self.network
        domains = self.domains
        queue = PropagationList()
        for x_i in range(network.n):
            arcs = network.adjacency[x_i]
            for a_i in domains.iter_values(x_i):
                for arc in arcs:
                    if not self.search_pc_sup(arc, a_i, force=True):
                        domains.remove_value(x_i, a_i)
                        queue.add(x_i)
                        if domains.sizes[x_i] == 0:
                            self.fail(arc)
                            return False
                        break
        self.queue = queue
        return True

    def keeps(self, arc, a_i: int) -> bool:
        if not self.search_pc_sup(arc, a_i):
            return False
        return self.config.light or self.check_pc_wit(arc, a_i)

    def witnesses(self, arc, h):
        if h is None:
            return arc.witnesses
        key = triangle_key(arc.source, arc.target, h, self.state)
        return sorted(arc.witnesses, key=lambda w: key(w[0]))

    def search_pc_sup(self, arc, a_i: int, force: bool = False) -> bool:
        """Is there a PC-support for ``a_i`` on ``arc``? (validity test, then scan)"""
        last = self.last_pc[arc.offset + a_i]
        if not force and last != NIL and self.present[arc.target][last]:
            return True
        return self.scan_pc_support(arc, a_i, self.config.case2_ordering)

    def scan_start(self, arc, a_i: int) -> int:
        if self.rm:
            return 0
        index = arc.offset + a_i
        last = self.last_pc[index]
        if not self.last_ac_on:
            return last + 1
        ac = self.last_ac[index]
        if ac != NIL and self.present[arc.target][ac]:
            return max(last + 1, ac)
        return max(last + 1, ac + 1)

    def scan_pc_support(self, arc, a_i: int, h) -> bool:
        """Scan D(x_j) from the mode's start value for a new PC-support of ``a_i``."""
        x_j = arc.target
        row = self.present[x_j]
        allows = arc.table.allows
        stats = self.stats
        supports = self.supports
        index = arc.offset + a_i
        update_ac = self.seek_ac
        for a_j in range(self.scan_start(arc, a_i), len(row)):
            if not row[a_j]:
                continue
            if self.audit and not supports.mark_scan(index, a_j):
                stats.scan_revisits += 1
            stats.cc += 1
            if not allows(a_i, a_j):
                continue
            if update_ac:
                ac = self.last_ac[index]
                if ac > self.last_pc[index] and not row[ac]:
                    supports.set_ac(index, a_j)
            if self.search_pc_wit(arc, a_i, a_j, h):
                supports.set_pc(index, a_j)
                if self.rm:
                    if self.last_ac_on:
                        supports.set_ac(index, a_j)
                    if self.bidirectional:
                        supports.set_pc(arc.reverse.offset + a_j, a_i)
                return True
        return False

    def search_pc_wit(self, arc, a_i: int, a_j: int, h=None) -> bool:
        """Does every third variable of c_ij hold a PC-witness for ``(a_i, a_j)``?"""
        present = self.present
        last_ac = self.last_ac
        stats = self.stats
        for x_k, arc_ik, arc_jk in self.witnesses(arc, h):
            row = present[x_k]
            index_ik = arc_ik.offset + a_i
            index_jk = arc_jk.offset + a_j
            if self.shortcuts:
                ac = last_ac[index_ik]
                if ac != NIL and row[ac]:
                    stats.cc += 1
                    if arc_jk.table.allows(a_j, ac):
                        continue
                ac = last_ac[index_jk]
                if ac != NIL and row[ac]:
                    stats.cc += 1
                    if arc_ik.table.allows(a_i, ac):
                        continue
            if self.seek_ac:
                if not self.seek_ac_support(arc_ik, a_i) or not self.seek_ac_support(arc_jk, a_j):
                    return False
                start = max(last_ac[index_ik], last_ac[index_jk])
            else:
                start = 0
            allows_ik = arc_ik.table.allows
            allows_jk = arc_jk.table.allows
            for a_k in range(start, len(row)):
                if not row[a_k]:
                    continue
                stats.cc += 1
                if not allows_ik(a_i, a_k):
                    continue
                stats.cc += 1
                if allows_jk(a_j, a_k):
                    if self.rm and self.last_ac_on:
                        self.supports.set_ac(index_ik, a_k)
                        self.supports.set_ac(index_jk, a_k)
                    break
            else:
                return False
        return True

    def check_pc_wit(self, arc, a_i: int) -> bool:
        """Has ``a_i`` kept, for every x_k in a triangle with c_ij, a PC-support whose pair still has a witness in D(x_j)?"""
        x_j = arc.target
        row_j = self.present[x_j]
        present = self.present
        last_pc = self.last_pc
        last_ac = self.last_ac
        stats = self.stats
        index_ij = arc.offset + a_i
        for x_k, arc_ik, arc_jk in self.witnesses(arc, self.config.case3_ordering):
            witness = False
            a_k = last_pc[arc_ik.offset + a_i]
            if a_k != NIL and present[x_k][a_k]:
                arc_kj = arc_jk.reverse
                index_kj = arc_kj.offset + a_k
                if self.shortcuts:
                    ac = last_ac[index_ij]
                    if ac != NIL and row_j[ac]:
                        stats.cc += 1
                        witness = arc_kj.table.allows(a_k, ac)
                    if not witness:
                        ac = last_ac[index_kj]
                        if ac != NIL and row_j[ac]:
                            stats.cc += 1
                            witness = arc.table.allows(a_i, ac)
                if not witness:
                    scan = True
                    start = 0
                    if self.seek_ac:
                        if self.seek_ac_support(arc, a_i) and self.seek_ac_support(arc_kj, a_k):
                            start = max(last_ac[index_ij], last_ac[index_kj])
                        else:
                            scan = False
                    if scan:
                        witness = self.scan_witness(arc, arc_kj, a_i, a_k, start)
            if not witness and not self.scan_pc_support(arc_ik, a_i, self.config.case4_ordering):
                return False
        return True

    def scan_witness(self, arc_ij, arc_kj, a_i: int, a_k: int, start: int) -> bool:
        """Scan D(x_j) from ``start`` for a value compatible with both ``a_i`` and ``a_k``."""
        row = self.present[arc_ij.target]
        allows_ij = arc_ij.table.allows
        allows_kj = arc_kj.table.allows
        stats = self.stats
        for a_j in range(start, len(row)):
            if not row[a_j]:
                continue
            stats.cc += 1
            if not allows_ij(a_i, a_j):
                continue
            stats.cc += 1
            if allows_kj(a_k, a_j):
                if self.rm and self.last_ac_on:
                    self.supports.set_ac(arc_ij.offset + a_i, a_j)
                    self.supports.set_ac(arc_kj.offset + a_k, a_j)
                return True
        return False

    def seek_ac_support(self, arc, a: int) -> bool:
        """Lexicographically smallest AC-support of ``a`` on ``arc`` (incremental LastAC)."""
        index = arc.offset + a
        row = self.present[arc.target]
        ac = self.last_ac[index]
        if ac != NIL and row[ac]:
            return True
        allows = arc.table.allows
        stats = self.stats
        for b in range(ac + 1, len(row)):
            if not row[b]:
                continue
            stats.cc += 1
            if allows(a, b):
                self.supports.set_ac(index, b)
                return True
        return False


class AC3rmPropagator(Propagator):
    """AC-3 with one (multidirectional) residue per (arc, value) in LastAC."""

    def initialize(self) -> bool:
        self.queue = PropagationList(range(self.network.n))
        return True

    def keeps(self, arc, a_i: int) -> bool:
        index = arc.offset + a_i
        row = self.present[arc.target]
        residue = self.last_ac[index]
        if residue != NIL and row[residue]:
            return True
        allows = arc.table.allows
        stats = self.stats
        for a_j in range(len(row)):
            if not row[a_j]:
                continue
            stats.cc += 1
            if allows(a_i, a_j):
                self.supports.set_ac(index, a_j)
                if self.config.use_bidirectionality:
                    self.supports.set_ac(arc.reverse.offset + a_j, a_i)
                return True
        return False


def make_propagator(network, domains, supports, stats, config, weights=None, assigned=None):
    cls = AC3rmPropagator if config.variant is Variant.AC3RM else MaxRPCPropagator
    return cls(network, domains, supports, stats, config, weights=weights, assigned=assigned)
