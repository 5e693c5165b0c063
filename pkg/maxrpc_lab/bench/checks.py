"""
Oracle cross-checks for single runs and the randomized acceptance suite
behind ``manage.py oracle_check``.
"""
import logging
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from csp.algorithms import algorithm_config
from csp.exceptions import GuardExceeded
from csp.heuristics import DOM
from csp.oracle import brute_ac, brute_maxrpc, enumerate_solutions
from csp.propagators import Variant
from csp.search import COUNT_ALL, SearchConfig, Verdict, count_solutions, solve, verify_solution
from csp.session import Session
from csp.network import network_from_pairs
from csp.relations import compare
from instances.generators import gen_queens, random_suite, search_suite


logger = logging.getLogger(__name__)

OK = "OK"
MISMATCH = "MISMATCH"
SKIPPED = "SKIPPED"

FULL = ("maxrpc3", "maxrpc3rm", "maxrpc2", "maxrpcrm")
LIGHT = ("lmaxrpc3", "lmaxrpc3rm", "lmaxrpc2", "lmaxrpcrm")
INCREMENTAL = ("maxrpc3", "lmaxrpc3", "maxrpc2", "lmaxrpc2")


def _subset(smaller, larger) -> bool:
    return all(a <= b for a, b in zip(smaller, larger))


def fixpoint_check(network, config, consistent: bool, value_sets) -> str:
    """
    Full maxRPC variants must hit the maxRPC closure exactly, ac3rm the AC
    closure; light variants must sit between the two.
    """
    strong = brute_maxrpc(network)
    if config.variant is Variant.AC3RM:
        weak = brute_ac(network)
        return OK if consistent != weak.wipeout and (weak.wipeout or value_sets == weak.domains) else MISMATCH
    if not config.light:
        return OK if consistent != strong.wipeout and (strong.wipeout or value_sets == strong.domains) else MISMATCH
    weak = brute_ac(network)
    if not consistent:
        return OK if strong.wipeout else MISMATCH
    if weak.wipeout or not _subset(value_sets, weak.domains):
        return MISMATCH
    return OK if strong.wipeout or _subset(strong.domains, value_sets) else MISMATCH


def solution_check(network, result, guard: int) -> str:
    """Verify reported solutions; refutations are confirmed by enumeration when it fits the guard."""
    if result.verdict is Verdict.SAT:
        return OK if all(verify_solution(network, s) for s in result.solutions) else MISMATCH
    if result.verdict is Verdict.UNSAT:
        try:
            return OK if not enumerate_solutions(network, guard=guard) else MISMATCH
        except GuardExceeded:
            return SKIPPED
    return SKIPPED


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    failures: list = field(default_factory=list)
    detail: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        self.failures.append(message)


def _closure(network, name, **overrides):
    session = Session(network, algorithm_config(name, **overrides))
    return session, session.propagator.enforce()


def oracle_equivalence(networks) -> CheckResult:
    check = CheckResult("oracle_equivalence")
    for network in networks:
        strong, weak = brute_maxrpc(network), brute_ac(network)
        for name, expected in (("maxrpc3", strong), ("maxrpc3rm", strong), ("ac3rm", weak)):
            session, consistent = _closure(network, name)
            check.checked += 1
            if consistent == expected.wipeout or (consistent and session.value_sets() != expected.domains):
                check.fail(f"{name} on {network.name}")
    return check


def inclusion_chain(networks) -> CheckResult:
    """Light variants sit between AC and maxRPC, and the residual ones prune exactly like lmaxrpc3."""
    check = CheckResult("inclusion_chain")
    for network in networks:
        strong, weak = brute_maxrpc(network), brute_ac(network)
        incremental, ok_incremental = _closure(network, "lmaxrpc3")
        check.checked += 1
        for name in ("lmaxrpc3rm", "lmaxrpcrm"):
            residual, ok_residual = _closure(network, name)
            if ok_incremental != ok_residual or (ok_incremental and incremental.value_sets() != residual.value_sets()):
                check.fail(f"lmaxrpc3 and {name} differ on {network.name}")
        if not ok_incremental:
            if not strong.wipeout:
                check.fail(f"light wipeout without maxRPC wipeout on {network.name}")
            continue
        domains = incremental.value_sets()
        if weak.wipeout or not _subset(domains, weak.domains):
            check.fail(f"light closure not within AC on {network.name}")
        elif not strong.wipeout and not _subset(strong.domains, domains):
            check.fail(f"light closure stronger than maxRPC on {network.name}")
    return check


def idempotence(networks) -> CheckResult:
    check = CheckResult("idempotence")
    for network in networks:
        for name in FULL + LIGHT + ("ac3rm",):
            session, consistent = _closure(network, name)
            if not consistent:
                continue
            check.checked += 1
            deletions = session.stats.deletions
            if not session.propagate_all() or session.stats.deletions != deletions:
                check.fail(f"{name} on {network.name}")
    return check


def deletion_parity(networks, names=("maxrpc3", "maxrpc3rm"), steps: int = 60, seed: int = 0) -> CheckResult:
    """
    Drive sessions of ``names`` through the same random decisions and
    backtracks; after every propagation call all must hold the same domains.
    """
    check = CheckResult("deletion_parity")
    rng = np.random.default_rng(seed)
    for network in networks:
        sessions = [Session(network, algorithm_config(name)) for name in names]
        outcomes = [session.propagator.enforce() for session in sessions]
        check.checked += 1
        if len(set(outcomes)) > 1 or (outcomes[0] and len({s.domains.snapshot() for s in sessions}) > 1):
            check.fail(f"preprocessing differs on {network.name}")
            continue
        if not outcomes[0]:
            continue
        lead = sessions[0].domains
        depth = 0
        for _ in range(steps):
            open_vars = [x for x in range(network.n) if lead.sizes[x] > 1]
            if open_vars and (depth == 0 or rng.random() < 0.6):
                x = open_vars[int(rng.integers(len(open_vars)))]
                values = lead.values(x)
                a = values[int(rng.integers(len(values)))]
                depth += 1
                for session in sessions:
                    session.domains.push_level()
                    session.domains.assign(x, a)
                outcomes = [session.propagate_from(x) for session in sessions]
                check.checked += 1
                if len(set(outcomes)) > 1 or (outcomes[0] and len({s.domains.snapshot() for s in sessions}) > 1):
                    check.fail(f"{' and '.join(names)} differ after deciding x{x}={a} on {network.name}")
                    break
                if outcomes[0]:
                    continue
            if depth == 0:
                break
            depth -= 1
            for session in sessions:
                session.domains.restore(depth)
    return check


def shortcut_neutrality(networks) -> CheckResult:
    check = CheckResult("shortcut_neutrality")
    for network in networks:
        for name in ("maxrpc3", "maxrpc3rm", "lmaxrpc3", "lmaxrpc3rm"):
            with_shortcuts, ok_with = _closure(network, name)
            without, ok_without = _closure(network, name, use_last_ac_shortcuts=False)
            check.checked += 1
            if ok_with != ok_without or with_shortcuts.domains.snapshot() != without.domains.snapshot():
                check.fail(f"{name} on {network.name}")
    return check


def wipeout_sanity() -> CheckResult:
    check = CheckResult("wipeout_sanity")
    network = network_from_pairs(3, 2, [(0, 1, compare("ne")), (1, 2, compare("ne")), (0, 2, compare("ne"))], name="neq-triangle")
    for name in FULL + LIGHT:
        _, consistent = _closure(network, name)
        check.checked += 1
        if consistent:
            check.fail(f"{name} keeps the not-equal triangle")
    if brute_ac(network).domains != [{0, 1}] * 3 or not brute_maxrpc(network).wipeout:
        check.fail("oracle disagrees on the not-equal triangle")
    return check


def amortization(networks) -> CheckResult:
    check = CheckResult("amortization")
    for network in networks:
        for name in INCREMENTAL:
            config = SearchConfig(propagator=algorithm_config(name, audit_scans=True), mode=COUNT_ALL, node_limit=10_000)
            result = solve(network, config)
            check.checked += 1
            if result.stats.scan_revisits:
                check.fail(f"{name} rescanned {result.stats.scan_revisits} values on {network.name}")
    return check


def trail_integrity(networks, events: int = 10_000, seed: int = 0) -> CheckResult:
    """Random dive/backtrack walks comparing domains and incremental tables with snapshots."""
    check = CheckResult("trail_integrity")
    rng = np.random.default_rng(seed)
    candidates = [network for network in networks if network.n <= 6]
    while candidates and check.checked < events:
        network = candidates[int(rng.integers(len(candidates)))]
        session = Session(network, algorithm_config(("maxrpc3", "lmaxrpc3", "maxrpc2")[int(rng.integers(3))]))
        if not session.propagator.enforce():
            continue
        domains, supports = session.domains, session.supports
        saved = []
        for _ in range(100):
            open_vars = [x for x in range(network.n) if domains.sizes[x] > 1]
            if open_vars and (not saved or rng.random() < 0.6):
                saved.append((domains.snapshot(), supports.snapshot()))
                domains.push_level()
                x = open_vars[int(rng.integers(len(open_vars)))]
                values = domains.values(x)
                domains.assign(x, values[int(rng.integers(len(values)))])
                if session.propagate_from(x):
                    continue
            if not saved:
                break
            expected = saved.pop()
            domains.restore(len(saved))
            check.checked += 1
            if (domains.snapshot(), supports.snapshot()) != expected:
                check.fail(f"state differs after backtracking to level {len(saved)} on {network.name}")
    return check


def search_correctness(networks, guard: int) -> CheckResult:
    check = CheckResult("search_correctness")
    config = SearchConfig(propagator=algorithm_config("lmaxrpc3rm"))
    for network in networks:
        try:
            expected = len(enumerate_solutions(network, guard=guard))
        except GuardExceeded:
            continue
        check.checked += 1
        count = count_solutions(network, config)
        if count != expected:
            check.fail(f"{network.name}: {count} solutions, enumeration finds {expected}")
    for n, expected in ((3, 0), (5, 10)):
        check.checked += 1
        if count_solutions(gen_queens(n).to_network(), config) != expected:
            check.fail(f"queens-{n} count is not {expected}")
    return check


def node_parity(networks) -> tuple:
    """Parity of both residual light variants and of both full maxRPC3 variants, plus their cc ratios."""
    parity = CheckResult("node_parity")
    reduction = CheckResult("check_reduction")
    totals = {"lmaxrpc3rm": 0, "lmaxrpcrm": 0}
    ratios = []
    for network in networks:
        runs = {name: solve(network, SearchConfig(propagator=algorithm_config(name))) for name in totals}
        parity.checked += 1
        if runs["lmaxrpc3rm"].stats.nodes != runs["lmaxrpcrm"].stats.nodes:
            parity.fail(f"light residual variants differ on {network.name}")
        for name, result in runs.items():
            totals[name] += result.stats.cc
        if runs["lmaxrpcrm"].stats.cc:
            ratios.append(runs["lmaxrpc3rm"].stats.cc / runs["lmaxrpcrm"].stats.cc)

        full = [
            solve(network, SearchConfig(propagator=algorithm_config(name), var_heuristic=DOM))
            for name in ("maxrpc3", "maxrpc3rm")
        ]
        parity.checked += 1
        if full[0].stats.nodes != full[1].stats.nodes:
            parity.fail(f"maxrpc3 and maxrpc3rm differ on {network.name}")

    reduction.checked = len(networks)
    median = statistics.median(ratios) if ratios else 0.0
    if totals["lmaxrpc3rm"] >= totals["lmaxrpcrm"]:
        reduction.fail(f"total cc {totals['lmaxrpc3rm']} is not below {totals['lmaxrpcrm']}")
    if median > 0.8:
        reduction.fail(f"median cc ratio {median:.3f} above 0.8")
    reduction.detail = f"total cc {totals['lmaxrpc3rm']} vs {totals['lmaxrpcrm']}, median ratio {median:.3f}"
    return parity, reduction


def queens_smoke(n: int = 20) -> CheckResult:
    check = CheckResult("queens_smoke", checked=1)
    network = gen_queens(n).to_network()
    started = time.perf_counter()
    result = solve(network, SearchConfig(propagator=algorithm_config("lmaxrpc3rm")))
    elapsed = time.perf_counter() - started
    if result.verdict is not Verdict.SAT or not verify_solution(network, result.solution):
        check.fail(f"queens-{n} not solved")
    check.detail = f"{elapsed:.2f}s, {result.stats.nodes} nodes"
    return check


def run_acceptance(count: int, seed: int = 0, search: bool = False, guard: int = 10**7, dense_ratio: float = 0.5) -> list:
    networks = [doc.to_network(dense_ratio) for doc in random_suite(count, seed=seed)]
    logger.info(f"Acceptance suite: {count} instances, seed {seed}, search={search}")
    checks = [
        oracle_equivalence(networks),
        inclusion_chain(networks),
        idempotence(networks),
        shortcut_neutrality(networks),
        deletion_parity(networks[:200], seed=seed),
        wipeout_sanity(),
    ]
    if search:
        suite = [doc.to_network(dense_ratio) for doc in search_suite(30, seed=seed)]
        parity, reduction = node_parity(suite)
        checks += [
            search_correctness(networks[:200], guard),
            parity,
            reduction,
            trail_integrity(networks, seed=seed),
            amortization(networks[:100]),
            queens_smoke(),
        ]
    for check in checks:
        if check.passed:
            logger.info(f"{check.name}: passed ({check.checked} checked) {check.detail}")
        else:
            logger.warning(f"{check.name}: {len(check.failures)} failures, first: {check.failures[0]}")
    return checks
