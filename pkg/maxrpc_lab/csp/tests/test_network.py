import numpy as np
from django.test import SimpleTestCase

from csp.domains import NIL, DomainStore
from csp.exceptions import ContractViolation, NetworkError
from csp.network import ConstraintNetwork, is_consistent, network_from_pairs
from csp.relations import (
    DenseTable,
    PairTable,
    compare,
    compile_table,
    conflicts,
    conjunction,
    distance,
    supports,
)
from csp.stats import SolverStats
from csp.tests.utils import neq_triangle


class RelationTest(SimpleTestCase):
    def test_intensional_relations_evaluate_on_values(self):
        self.assertTrue(compare("lt").evaluate(1, 2))
        self.assertFalse(compare("lt").evaluate(2, 2))
        self.assertTrue(compare("eq", 2).evaluate(5, 3))
        self.assertTrue(distance("gt", 3).evaluate(0, 4))
        self.assertFalse(distance("gt", 3).evaluate(0, 3))
        queens = conjunction(compare("ne"), distance("ne", 2))
        self.assertFalse(queens.evaluate(1, 3))
        self.assertTrue(queens.evaluate(1, 2))

    def test_swapped_relations_mirror_arguments(self):
        for relation in (compare("lt", 1), distance("le", 2), supports([(0, 1), (2, 0)])):
            mirrored = relation.swapped()
            for a in range(3):
                for b in range(3):
                    self.assertEqual(relation.evaluate(a, b), mirrored.evaluate(b, a))

    def test_grid_matches_evaluate(self):
        xs, ys = [0, 2, 5], [1, 2, 7]
        for relation in (compare("ge"), distance("ne", 3), conflicts([(2, 2), (5, 7)])):
            grid = relation.grid(xs, ys)
            for i, a in enumerate(xs):
                for j, b in enumerate(ys):
                    self.assertEqual(bool(grid[i, j]), relation.evaluate(a, b))

    def test_compile_table_picks_storage_by_density(self):
        sparse = compile_table(supports([(0, 0)]), range(4), range(4))
        dense = compile_table(conflicts([(0, 0)]), range(4), range(4))
        intensional = compile_table(compare("eq"), range(4), range(4))
        self.assertIsInstance(sparse, PairTable)
        self.assertIsInstance(dense, DenseTable)
        self.assertIsInstance(intensional, DenseTable)
        self.assertTrue(sparse.allows(0, 0))
        self.assertFalse(dense.allows(0, 0))
        self.assertEqual(dense.count(), 15)
        self.assertEqual(intensional.transposed().count(), 4)
        self.assertTrue(np.array_equal(dense.transposed().matrix, dense.matrix.T))


class NetworkBuildTest(SimpleTestCase):
    def test_arcs_and_support_offsets(self):
        network = ConstraintNetwork.build(
            [range(3), range(2), range(4)],
            [(0, 1, compare("ne")), (2, 1, compare("lt"))],
        )
        self.assertEqual((network.n, network.d, network.e), (3, 4, 2))
        forward, backward = network.constraints[0].forward, network.constraints[0].backward
        self.assertIs(forward.reverse, backward)
        self.assertEqual((forward.source, forward.target), (0, 1))
        self.assertEqual(forward.offset, 0)
        self.assertEqual(backward.offset, 3)
        self.assertEqual(network.constraints[1].forward.offset, 5)
        self.assertEqual(network.support_slots, 3 + 2 + 4 + 2)
        self.assertIs(network.arc(1, 2), network.constraints[1].backward)
        self.assertEqual(network.neighbors(1), [0, 2])
        self.assertFalse(network.has_constraint(0, 2))

    def test_triangles(self):
        network = neq_triangle(2)
        self.assertEqual(network.triangles, ((2,), (0,), (1,)))
        arc = network.arc(0, 1)
        self.assertEqual([k for k, _, _ in arc.witnesses], [2])
        k, arc_ik, arc_jk = arc.witnesses[0]
        self.assertEqual((arc_ik.source, arc_ik.target, arc_jk.source, arc_jk.target), (0, 2, 1, 2))

    def test_values_are_indices_into_sorted_domains(self):
        network = ConstraintNetwork.build([[3, 7, 9], [7, 8]], [(0, 1, compare("eq"))])
        arc = network.arc(0, 1)
        self.assertTrue(arc.allows(1, 0))
        self.assertFalse(arc.allows(0, 0))
        self.assertEqual(network.value(0, 2), 9)
        self.assertEqual(network.index_of(1, 8), 1)

    def test_invalid_networks(self):
        cases = [
            ([range(2), []], [], "empty domain"),
            ([[1, 0], range(2)], [], "unsorted domain"),
            ([range(2), range(2)], [(0, 0, compare("ne"))], "self-loop"),
            ([range(2), range(2)], [(0, 1, compare("ne")), (1, 0, compare("lt"))], "duplicate pair"),
            ([range(2), range(2)], [(0, 2, compare("ne"))], "unknown variable"),
            ([range(2), range(2)], [(0, 1, supports([(0, 5)]))], "out-of-range tuple"),
        ]
        for domains, constraints, label in cases:
            with self.assertRaises(NetworkError, msg=label):
                ConstraintNetwork.build(domains, constraints)

    def test_constraint_checks_are_counted(self):
        network = network_from_pairs(2, 2, [(0, 1, compare("ne"))])
        stats = SolverStats()
        arc = network.arc(0, 1)
        self.assertTrue(is_consistent(arc, 0, 1, stats))
        self.assertFalse(is_consistent(arc, 1, 1, stats))
        self.assertEqual(stats.cc, 2)


class DomainStoreTest(SimpleTestCase):
    def setUp(self):
        self.network = network_from_pairs(3, 4, [(0, 1, compare("ne"))])
        self.domains = DomainStore(self.network)

    def test_removal_and_queries(self):
        domains = self.domains
        self.assertFalse(domains.remove_value(0, 1))
        self.assertEqual(domains.values(0), [0, 2, 3])
        self.assertEqual(list(domains.iter_values(0, 1)), [2, 3])
        self.assertEqual(domains.first(0), 0)
        self.assertFalse(domains.contains(0, 1))
        self.assertEqual(domains.stats.deletions, 1)
        with self.assertRaises(ContractViolation):
            domains.remove_value(0, 1)

    def test_wipeout_is_reported(self):
        domains = self.domains
        for a in range(3):
            self.assertFalse(domains.remove_value(2, a))
        self.assertTrue(domains.remove_value(2, 3))
        self.assertTrue(domains.is_empty(2))
        self.assertEqual(domains.first(2), NIL)

    def test_restore_undoes_levels_in_reverse(self):
        domains = self.domains
        domains.remove_value(1, 0)
        root = domains.snapshot()
        domains.push_level()
        domains.assign(0, 2)
        domains.push_level()
        domains.remove_value(1, 3)
        self.assertEqual(domains.values(0), [2])
        domains.restore(1)
        self.assertEqual(domains.values(0), [2])
        self.assertEqual(domains.values(1), [1, 2, 3])
        domains.restore(0)
        self.assertEqual(domains.snapshot(), root)
        self.assertEqual(domains.sizes, [4, 3, 4])
        with self.assertRaises(ContractViolation):
            domains.restore(2)

    def test_assign_requires_a_present_value(self):
        self.domains.remove_value(0, 3)
        with self.assertRaises(ContractViolation):
            self.domains.assign(0, 3)

    def test_value_sets_use_actual_values(self):
        network = ConstraintNetwork.build([[10, 20], [5]], [])
        domains = DomainStore(network)
        domains.remove_value(0, 0)
        self.assertEqual(domains.as_value_sets(), [{20}, {5}])
