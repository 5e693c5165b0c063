import random

from django.test import SimpleTestCase

from csp.algorithms import algorithm_config
from csp.exceptions import ContractViolation, SearchLimitReached
from csp.heuristics import DOM
from csp.network import ConstraintNetwork, network_from_pairs
from csp.oracle import enumerate_solutions
from csp.relations import compare
from csp.search import (
    BINARY,
    COUNT_ALL,
    D_WAY,
    LEX,
    SearchConfig,
    Solver,
    Verdict,
    count_solutions,
    solve,
    verify_solution,
)
from csp.session import Session
from csp.tests.utils import neq_triangle, suite_networks
from instances.generators import gen_queens, search_suite


def search_config(name="lmaxrpc3rm", **options):
    return SearchConfig(propagator=algorithm_config(name), **options)


class VerifySolutionTest(SimpleTestCase):
    def setUp(self):
        self.queens = gen_queens(4).to_network()

    def test_valid_and_invalid_assignments(self):
        self.assertTrue(verify_solution(self.queens, [1, 3, 0, 2]))
        self.assertTrue(verify_solution(self.queens, {"q0": 2, "q1": 0, "q2": 3, "q3": 1}))
        self.assertFalse(verify_solution(self.queens, [0, 2, 0, 2]))
        network = network_from_pairs(2, 2, [(0, 1, compare("ne"))])
        self.assertFalse(verify_solution(network, [1, 1]))

    def test_values_outside_domains_fail(self):
        self.assertFalse(verify_solution(self.queens, [1, 3, 0, 7]))

    def test_partial_assignments_are_contract_violations(self):
        with self.assertRaises(ContractViolation):
            verify_solution(self.queens, [1, 3])
        with self.assertRaises(ContractViolation):
            verify_solution(self.queens, {"q0": 1})

    def test_checks_are_not_counted(self):
        solver = Solver(self.queens, search_config())
        verify_solution(self.queens, [1, 3, 0, 2])
        self.assertEqual(solver.stats.cc, 0)


class SearchConfigTest(SimpleTestCase):
    def test_validation(self):
        for options in (
            {"branching": "k_way"},
            {"var_heuristic": "wdeg"},
            {"value_order": "random"},
            {"mode": "optimize"},
            {"node_limit": 0},
            {"time_limit": -1.0},
        ):
            with self.assertRaises(ValueError, msg=options):
                SearchConfig(**options)


class SolveTest(SimpleTestCase):
    def test_queens_counts(self):
        for n, expected in ((1, 1), (3, 0), (4, 2), (5, 10), (6, 4)):
            network = gen_queens(n).to_network()
            self.assertEqual(count_solutions(network, search_config()), expected, msg=f"queens-{n}")

    def test_neq_triangle_is_refuted_at_the_root(self):
        result = solve(neq_triangle(2), search_config())
        self.assertEqual(result.verdict, Verdict.UNSAT)
        self.assertEqual(result.stats.nodes, 0)
        self.assertIsNone(result.solution)
        self.assertEqual(len(result.bump_log), 1)

    def test_solved_instance_needs_no_nodes(self):
        network = ConstraintNetwork.build([[0], [1], [2]], [(0, 1, compare("ne")), (1, 2, compare("lt"))])
        result = solve(network, search_config())
        self.assertEqual(result.verdict, Verdict.SAT)
        self.assertEqual(result.stats.nodes, 0)
        self.assertEqual(result.solution, {"x0": 0, "x1": 1, "x2": 2})

    def test_two_values_not_equal(self):
        network = network_from_pairs(2, 2, [(0, 1, compare("ne"))])
        self.assertEqual(count_solutions(network), 2)
        result = solve(network, search_config(mode=COUNT_ALL))
        self.assertEqual(result.solutions, [{"x0": 0, "x1": 1}, {"x0": 1, "x1": 0}])

    def test_first_solution_is_verified(self):
        network = gen_queens(8).to_network()
        for branching in (BINARY, D_WAY):
            result = solve(network, search_config(branching=branching))
            self.assertEqual(result.verdict, Verdict.SAT)
            self.assertTrue(verify_solution(network, result.solution))
            self.assertEqual(result.solution_count, 1)

    def test_queens_20_smoke(self):
        network = gen_queens(20).to_network()
        result = solve(network, search_config())
        self.assertEqual(result.verdict, Verdict.SAT)
        self.assertTrue(verify_solution(network, result.solution))

    def test_limits(self):
        network = gen_queens(8).to_network()
        result = solve(network, search_config(mode=COUNT_ALL, node_limit=3))
        self.assertEqual(result.verdict, Verdict.LIMIT)
        self.assertEqual(result.stats.nodes, 3)
        result = solve(network, search_config(mode=COUNT_ALL, time_limit=1e-9))
        self.assertEqual(result.verdict, Verdict.LIMIT)
        with self.assertRaises(SearchLimitReached) as ctx:
            count_solutions(network, search_config(), guard=5)
        self.assertEqual(ctx.exception.result.verdict, Verdict.LIMIT)


class SearchAgainstEnumerationTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.networks = suite_networks(60, seed=5)
        cls.expected = [len(enumerate_solutions(network)) for network in cls.networks]

    def test_counts_match_for_every_consistency(self):
        for name in ("lmaxrpc3rm", "maxrpc3", "maxrpc3rm+h", "lmaxrpc2", "ac3rm"):
            for network, expected in zip(self.networks, self.expected):
                count = count_solutions(network, search_config(name))
                self.assertEqual(count, expected, msg=f"{name} on {network.name}")

    def test_branching_and_variable_orderings_agree(self):
        for network, expected in zip(self.networks[:30], self.expected):
            for options in ({"branching": D_WAY}, {"var_heuristic": DOM}, {"var_heuristic": LEX, "branching": D_WAY}):
                self.assertEqual(count_solutions(network, search_config(**options)), expected, msg=str(options))

    def test_verdicts_agree(self):
        for network, expected in zip(self.networks, self.expected):
            result = solve(network, search_config("maxrpc3"))
            self.assertEqual(result.verdict, Verdict.SAT if expected else Verdict.UNSAT)


class NodeParityTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.networks = [doc.to_network() for doc in search_suite(6, seed=1, n=12, d=5)]

    def test_residual_light_variants_visit_the_same_nodes(self):
        for network in self.networks:
            fast = solve(network, search_config("lmaxrpc3rm"))
            emulated = solve(network, search_config("lmaxrpcrm"))
            self.assertEqual(fast.verdict, emulated.verdict, msg=network.name)
            self.assertEqual(fast.stats.nodes, emulated.stats.nodes, msg=network.name)

    def test_incremental_and_residual_maxrpc3_visit_the_same_nodes(self):
        for network in self.networks:
            incremental = solve(network, search_config("maxrpc3", var_heuristic=DOM))
            residual = solve(network, search_config("maxrpc3rm", var_heuristic=DOM))
            self.assertEqual(incremental.verdict, residual.verdict, msg=network.name)
            self.assertEqual(incremental.stats.nodes, residual.stats.nodes, msg=network.name)
            self.assertEqual(incremental.solution, residual.solution, msg=network.name)


class BacktrackingTest(SimpleTestCase):
    def test_random_traces_restore_state_exactly(self):
        rng = random.Random(7)
        events = 0
        for network in suite_networks(40, seed=21):
            if network.n > 6:
                continue
            for name in ("maxrpc3", "lmaxrpc3", "maxrpc2"):
                session = Session(network, algorithm_config(name))
                if not session.preprocess():
                    continue
                domains, supports = session.domains, session.supports
                saved = []
                for _ in range(60):
                    open_vars = [x for x in range(network.n) if domains.sizes[x] > 1]
                    if open_vars and (not saved or rng.random() < 0.6):
                        saved.append((domains.snapshot(), supports.snapshot(), domains.level))
                        domains.push_level()
                        x = rng.choice(open_vars)
                        domains.assign(x, rng.choice(domains.values(x)))
                        if session.propagate_from(x):
                            continue
                    if not saved:
                        break
                    snapshot = saved.pop()
                    domains.restore(len(saved))
                    self.assertEqual((domains.snapshot(), supports.snapshot(), domains.level), snapshot)
                    events += 1
        self.assertGreater(events, 100)

    def test_search_scans_never_revisit_a_value(self):
        for network in suite_networks(30, seed=8):
            for name in ("maxrpc3", "lmaxrpc3", "maxrpc2"):
                config = SearchConfig(propagator=algorithm_config(name, audit_scans=True), mode=COUNT_ALL)
                result = solve(network, config)
                self.assertEqual(result.stats.scan_revisits, 0, msg=f"{name} on {network.name}")

    def test_failures_bump_weights(self):
        network = gen_queens(6).to_network()
        result = solve(network, search_config("ac3rm", mode=COUNT_ALL))
        self.assertTrue(result.bump_log)
        self.assertEqual(len(result.bump_log), len(result.stats.bumps))
