from django.test import SimpleTestCase

from csp.exceptions import GuardExceeded
from csp.network import network_from_pairs
from csp.oracle import brute_ac, brute_maxrpc, enumerate_solutions
from csp.relations import compare, supports
from csp.tests.utils import eq_triangle, lt_chain, neq_triangle, pc_gap, suite_networks
from instances.generators import gen_queens


class BruteACTest(SimpleTestCase):
    def test_strict_chain(self):
        result = brute_ac(lt_chain(3))
        self.assertEqual(result.domains, [{0}, {1}, {2}])
        self.assertFalse(result.wipeout)
        self.assertGreater(result.passes, 1)

    def test_no_constraints_is_identity(self):
        network = network_from_pairs(3, 4, [])
        result = brute_ac(network)
        self.assertEqual(result.domains, [set(range(4))] * 3)
        self.assertEqual(result.passes, 1)

    def test_empty_relation_wipes_out(self):
        network = network_from_pairs(2, 3, [(0, 1, supports([]))])
        self.assertTrue(brute_ac(network).wipeout)

    def test_explicit_starting_domains(self):
        result = brute_ac(lt_chain(3), domains=[{0, 1, 2}, {0, 2}, {0, 1, 2}])
        self.assertTrue(result.wipeout)


class BruteMaxRPCTest(SimpleTestCase):
    def test_triangles(self):
        self.assertTrue(brute_maxrpc(neq_triangle(2)).wipeout)
        self.assertFalse(brute_maxrpc(neq_triangle(3)).wipeout)
        self.assertEqual(brute_maxrpc(eq_triangle(2)).domains, [{0, 1}] * 3)

    def test_pc_gap(self):
        self.assertEqual(brute_maxrpc(pc_gap()).domains, [{1}, {0, 1}, {1}])
        self.assertEqual(brute_ac(pc_gap()).domains, [{0, 1}] * 3)

    def test_without_triangles_equals_ac(self):
        network = network_from_pairs(4, 3, [(0, 1, compare("lt")), (1, 2, compare("ne")), (2, 3, compare("gt"))])
        self.assertEqual(brute_maxrpc(network).domains, brute_ac(network).domains)

    def test_properties_on_random_networks(self):
        for network in suite_networks(60, seed=3):
            strong = brute_maxrpc(network)
            weak = brute_ac(network)
            if weak.wipeout:
                self.assertTrue(strong.wipeout)
                continue
            if not strong.wipeout:
                self.assertTrue(strong.is_subset_of(weak))
                again = brute_maxrpc(network, strong.domains)
                self.assertEqual(again.domains, strong.domains)
                self.assertEqual(again.passes, 1)
            for solution in enumerate_solutions(network):
                self.assertFalse(strong.wipeout)
                for values, value in zip(strong.domains, solution):
                    self.assertIn(value, values)


class EnumerationTest(SimpleTestCase):
    def test_small_cases(self):
        network = network_from_pairs(2, 2, [(0, 1, compare("ne"))])
        self.assertEqual(set(enumerate_solutions(network)), {(0, 1), (1, 0)})
        self.assertEqual(len(enumerate_solutions(gen_queens(4).to_network())), 2)
        self.assertEqual(enumerate_solutions(neq_triangle(2)), [])

    def test_guard(self):
        with self.assertRaises(GuardExceeded):
            enumerate_solutions(network_from_pairs(8, 10, []), guard=10**7)
