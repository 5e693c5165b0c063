import math

from django.test import SimpleTestCase

from csp.domains import DomainStore
from csp.heuristics import (
    DEL_RATIO,
    DOM,
    DOM_WDEG,
    FIFO,
    WDEG,
    HeuristicState,
    PropagationList,
    WeightTable,
    bump_weight,
    order_neighbors_case1,
    order_triangle_vars,
    pick_from_list,
    validate_heuristic,
)
from csp.network import ConstraintNetwork
from csp.relations import compare
from csp.signals import wipeout
from csp.stats import SolverStats


def square_with_diagonal():
    # 0-1, 1-2, 2-3, 3-0 and the diagonal 0-2: triangles (0, 1, 2) and (0, 2, 3)
    return ConstraintNetwork.build(
        [range(4), range(3), range(4), range(2)],
        [
            (0, 1, compare("ne")),
            (1, 2, compare("ne")),
            (2, 3, compare("ne")),
            (3, 0, compare("ne")),
            (0, 2, compare("ne")),
        ],
    )


class WeightTableTest(SimpleTestCase):
    def test_wdeg_skips_assigned_neighbours(self):
        network = square_with_diagonal()
        weights = WeightTable(network)
        weights.bump(4)
        self.assertEqual(weights.wdeg(0), 4)
        assigned = [False, False, True, False]
        self.assertEqual(weights.wdeg(0, assigned), 2)
        weights.reset()
        self.assertEqual(weights.weights, [1] * 5)

    def test_bump_weight_logs_and_signals(self):
        network = square_with_diagonal()
        weights = WeightTable(network)
        stats = SolverStats()
        received = []

        def listener(sender, constraint, weight, **kwargs):
            received.append((constraint, weight))

        wipeout.connect(listener)
        try:
            bump_weight(3, weights, stats)
            bump_weight(3, weights, stats)
        finally:
            wipeout.disconnect(listener)
        self.assertEqual(stats.bumps, [(3, 2), (3, 3)])
        self.assertEqual(received, [(3, 2), (3, 3)])
        self.assertEqual(stats.as_dict()["bumps"], 2)


class PropagationListTest(SimpleTestCase):
    def test_set_semantics_and_insertion_order(self):
        queue = PropagationList([3, 1])
        queue.add(2)
        queue.add(3)
        self.assertEqual(list(queue), [3, 1, 2])
        self.assertEqual(queue.oldest(), 3)
        queue.remove(3)
        self.assertEqual(len(queue), 2)
        self.assertIn(1, queue)
        self.assertNotIn(3, queue)


class OrderingTest(SimpleTestCase):
    def setUp(self):
        self.network = square_with_diagonal()
        self.domains = DomainStore(self.network)
        self.state = HeuristicState(self.network, self.domains)

    def test_validation(self):
        self.assertEqual(validate_heuristic(FIFO, allow_fifo=True), FIFO)
        self.assertIsNone(validate_heuristic(None, allow_none=True))
        with self.assertRaises(ValueError):
            validate_heuristic(FIFO)
        with self.assertRaises(ValueError):
            validate_heuristic("random")

    def test_pick_from_list(self):
        queue = PropagationList([2, 0, 3])
        self.assertEqual(pick_from_list(queue, FIFO, self.state), 2)
        # dom: |D(3)| = 2 is the smallest
        self.assertEqual(pick_from_list(queue, DOM, self.state), 3)
        self.domains.remove_value(0, 0)
        self.domains.remove_value(0, 1)
        # tie on dom between 0 and 3 falls back to the smaller id
        self.assertEqual(pick_from_list(queue, DOM, self.state), 0)
        # del_ratio: 2/4 for x0, 2/2 for x3, 4/4 for x2
        self.assertEqual(pick_from_list(queue, DEL_RATIO, self.state), 0)

    def test_dom_wdeg_is_infinite_without_weight(self):
        assigned = [True, False, True, False]
        state = HeuristicState(self.network, self.domains, assigned=assigned)
        self.assertEqual(state.wdeg(3), 0)
        self.assertEqual(state.dom_wdeg(3), math.inf)
        self.assertEqual(state.dom_wdeg(1), math.inf)
        self.assertEqual(HeuristicState(self.network, self.domains).dom_wdeg(0), 4 / 3)

    def test_case1_orders_neighbours(self):
        self.assertEqual(order_neighbors_case1(0, None, self.state), [1, 2, 3])
        self.assertEqual(order_neighbors_case1(0, DOM, self.state), [3, 1, 2])
        self.state.weights.bump(self.network.arc(2, 0).constraint)
        self.assertEqual(order_neighbors_case1(0, WDEG, self.state), [2, 1, 3])

    def test_triangle_orderings(self):
        self.assertEqual(order_triangle_vars(0, 2, None, 2, self.state), [1, 3])
        self.assertEqual(order_triangle_vars(0, 2, DOM, 3, self.state), [3, 1])
        # weight x0-x1 up: average weight of x1's pair is highest
        self.state.weights.bump(self.network.arc(0, 1).constraint)
        self.assertEqual(order_triangle_vars(0, 2, WDEG, 4, self.state), [1, 3])
        # dom/wdeg: x1 -> 3 / 1.5 = 2, x3 -> 2 / 1 = 2; tie broken by id
        self.assertEqual(order_triangle_vars(0, 2, DOM_WDEG, 2, self.state), [1, 3])
        with self.assertRaises(ValueError):
            order_triangle_vars(0, 2, DOM, 1, self.state)
