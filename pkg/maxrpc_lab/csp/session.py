import logging

from csp.domains import DomainStore
from csp.heuristics import PropagationList, WeightTable
from csp.propagators import PropagatorConfig, make_propagator
from csp.stats import SolverStats
from csp.supports import SupportStore


logger = logging.getLogger(__name__)


class Session:
    """
    Private solver state for one run over a shared, immutable network:
    domains with their trail, support tables, weights and counters.
    """

    def __init__(self, network, config: PropagatorConfig = None, weights: WeightTable = None):
        self.network = network
        self.config = config or PropagatorConfig()
        self.stats = SolverStats()
        self.domains = DomainStore(network, self.stats)
        self.supports = SupportStore(
            network, self.domains, self.config.support_mode, audit=self.config.audit_scans
        )
        self.weights = weights or WeightTable(network)
        self.assigned = [False] * network.n
        self.propagator = make_propagator(
            network,
            self.domains,
            self.supports,
            self.stats,
            self.config,
            weights=self.weights,
            assigned=self.assigned,
        )

    def preprocess(self) -> bool:
        """Stand-alone enforcement at the root; False iff some domain wipes out."""
        with self.stats.timed():
            consistent = self.propagator.enforce()
        logger.info(
            f"Preprocessed {self.network.name or 'network'} with {self.config.label}: "
            f"{'consistent' if consistent else 'wipeout'}, cc={self.stats.cc}, "
            f"deletions={self.stats.deletions}"
        )
        return consistent

    def propagate_from(self, *variables) -> bool:
        return self.propagator.propagate(PropagationList(variables))

    def propagate_all(self) -> bool:
        return self.propagator.propagate(PropagationList(range(self.network.n)))

    def value_sets(self) -> list:
        return self.domains.as_value_sets()
