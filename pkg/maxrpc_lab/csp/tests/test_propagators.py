from unittest import mock

from django.test import SimpleTestCase

from csp.algorithms import algorithm_config, algorithm_names
from csp.heuristics import DOM, DOM_WDEG, FIFO, PropagationList, WDEG
from csp.network import network_from_pairs
from csp.oracle import brute_ac, brute_maxrpc
from csp.propagators import PropagatorConfig, Variant
from csp.relations import compare
from csp.session import Session
from csp.supports import AC, PC, SupportMode, is_valid
from csp.tests.utils import eq_triangle, lt_chain, neq_triangle, pc_gap, preprocess, suite_networks, witness_clique


SUITE_SIZE = 200

FULL = ("maxrpc3", "maxrpc3rm", "maxrpc2", "maxrpcrm")
LIGHT = ("lmaxrpc3", "lmaxrpc3rm", "lmaxrpc2", "lmaxrpcrm")
MAXRPC = FULL + LIGHT


def closure(network, name, **overrides):
    session, consistent = preprocess(network, algorithm_config(name, **overrides))
    return session, consistent


def subset(smaller, larger):
    return all(a <= b for a, b in zip(smaller, larger))


class AlgorithmConfigTest(SimpleTestCase):
    def test_names(self):
        names = algorithm_names()
        self.assertEqual(len(names), 18)
        self.assertIn("lmaxrpc3rm+h", names)
        self.assertEqual(len(algorithm_names(with_heuristics=False)), 9)

    def test_heuristic_suffix_and_light_flag(self):
        config = algorithm_config("maxrpc3rm+h", light=True)
        self.assertTrue(config.light)
        self.assertEqual(config.queue_heuristic, DOM_WDEG)
        self.assertEqual(config.case1_ordering, DOM_WDEG)
        self.assertEqual(config.label, "lmaxrpc3rm+h")
        self.assertEqual(algorithm_config("ac3rm", light=True).label, "ac3rm")
        self.assertEqual(algorithm_config("maxrpc3", case2_ordering=None).case2_ordering, None)
        with self.assertRaises(ValueError):
            algorithm_config("maxrpc4")

    def test_emulations_force_their_flags(self):
        for name in ("maxrpc2", "maxrpcrm", "lmaxrpcrm"):
            self.assertFalse(algorithm_config(name).use_last_ac_shortcuts)
        self.assertFalse(algorithm_config("maxrpc3").use_bidirectionality)
        self.assertFalse(algorithm_config("maxrpc2").use_bidirectionality)
        self.assertTrue(algorithm_config("maxrpc3rm").use_bidirectionality)
        self.assertTrue(algorithm_config("maxrpcrm").use_bidirectionality)
        self.assertIs(algorithm_config("maxrpc2").support_mode, SupportMode.INCREMENTAL)
        self.assertIs(algorithm_config("lmaxrpcrm").support_mode, SupportMode.RESIDUAL)
        self.assertFalse(algorithm_config("maxrpcrm").uses_last_ac)

    def test_light_residual_ids_keep_forward_residues_only(self):
        for name in ("lmaxrpc3rm", "lmaxrpc3rm+h", "lmaxrpcrm", "lmaxrpcrm+h"):
            self.assertFalse(algorithm_config(name).use_bidirectionality, msg=name)
        self.assertFalse(algorithm_config("maxrpc3rm", light=True).use_bidirectionality)
        self.assertFalse(algorithm_config("lmaxrpc3rm", use_bidirectionality=True).use_bidirectionality)

    def test_invalid_heuristics(self):
        with self.assertRaises(ValueError):
            PropagatorConfig(queue_heuristic="lifo")
        with self.assertRaises(ValueError):
            PropagatorConfig(case1_ordering=FIFO)


class HandBuiltNetworkTest(SimpleTestCase):
    def test_neq_triangle_is_refuted_by_every_maxrpc_variant(self):
        network = neq_triangle(2)
        for name in MAXRPC:
            session, consistent = closure(network, name)
            self.assertFalse(consistent, msg=name)
            self.assertEqual(len(session.stats.bumps), 1, msg=name)
        _, consistent = closure(network, "ac3rm")
        self.assertTrue(consistent)
        ac = brute_ac(network)
        self.assertFalse(ac.wipeout)
        self.assertEqual(ac.domains, [{0, 1}] * 3)
        self.assertTrue(brute_maxrpc(network).wipeout)

    def test_eq_triangle_keeps_everything(self):
        network = eq_triangle(2)
        for name in MAXRPC + ("ac3rm",):
            session, consistent = closure(network, name)
            self.assertTrue(consistent)
            self.assertEqual(session.stats.deletions, 0, msg=name)
            self.assertEqual(session.value_sets(), [{0, 1}] * 3)

    def test_pc_gap_separates_maxrpc_from_ac(self):
        network = pc_gap()
        for name in MAXRPC:
            session, _ = closure(network, name)
            self.assertEqual(session.value_sets(), [{1}, {0, 1}, {1}], msg=name)
        session, _ = closure(network, "ac3rm")
        self.assertEqual(session.value_sets(), [{0, 1}] * 3)

    def test_without_triangles_maxrpc_is_ac(self):
        network = lt_chain(3)
        for name in MAXRPC + ("ac3rm",):
            session, _ = closure(network, name)
            self.assertEqual(session.value_sets(), [{0}, {1}, {2}], msg=name)

    def test_wipeout_bumps_the_failing_constraint(self):
        # x0 < x1 over a single value cannot hold
        network = network_from_pairs(3, 1, [(0, 1, compare("lt")), (1, 2, compare("ne"))])
        for name in ("maxrpc3", "lmaxrpc3rm", "ac3rm"):
            session, consistent = closure(network, name)
            self.assertFalse(consistent)
            self.assertEqual(session.stats.bumps, [(0, 2)], msg=name)
            self.assertEqual(session.weights.weights, [2, 1])


class SupportFunctionTest(SimpleTestCase):
    def propagator(self, network, name):
        session = Session(network, algorithm_config(name))
        return session, session.propagator

    def test_valid_last_pc_costs_no_checks(self):
        network = eq_triangle(2)
        for name in ("maxrpc3", "maxrpc3rm"):
            session, propagator = self.propagator(network, name)
            self.assertTrue(session.preprocess())
            arc = network.arc(0, 1)
            self.assertTrue(is_valid(session.supports.get(PC, arc, 0), 1, session.domains))
            cc = session.stats.cc
            self.assertTrue(propagator.search_pc_sup(arc, 0))
            self.assertEqual(session.stats.cc, cc, msg=name)

    def test_no_support_left_in_a_single_value_domain(self):
        network = network_from_pairs(2, 2, [(0, 1, compare("ne"))])
        session, propagator = self.propagator(network, "maxrpc3")
        session.domains.remove_value(1, 1)
        self.assertFalse(propagator.search_pc_sup(network.arc(0, 1), 0))

    def test_incremental_scan_resumes_above_the_lost_support(self):
        network = network_from_pairs(2, 4, [(0, 1, compare("ne"))])
        arc = network.arc(0, 1)
        session, propagator = self.propagator(network, "maxrpc3")
        session.supports.set(PC, arc, 0, 2)
        session.domains.remove_value(1, 2)
        self.assertFalse(is_valid(session.supports.get(PC, arc, 0), 1, session.domains))
        self.assertEqual(propagator.scan_start(arc, 0), 3)
        self.assertTrue(propagator.search_pc_sup(arc, 0))
        self.assertEqual(session.stats.cc, 1)
        self.assertEqual(session.supports.get(PC, arc, 0), 3)

        # scanning from scratch on the same state rechecks 0 and stops at 1
        session, propagator = self.propagator(network, "maxrpc3rm")
        session.supports.set(PC, arc, 0, 2)
        session.domains.remove_value(1, 2)
        self.assertTrue(propagator.search_pc_sup(arc, 0))
        self.assertEqual(session.stats.cc, 2)
        self.assertEqual(session.supports.get(PC, arc, 0), 1)

    def test_seek_ac_support_on_less_than(self):
        network = network_from_pairs(2, 3, [(0, 1, compare("lt"))])
        arc = network.arc(0, 1)
        session, propagator = self.propagator(network, "maxrpc3")
        self.assertTrue(propagator.seek_ac_support(arc, 1))
        self.assertEqual(session.supports.get(AC, arc, 1), 2)
        self.assertEqual(session.stats.cc, 3)
        self.assertFalse(propagator.seek_ac_support(arc, 2))
        cc = session.stats.cc
        self.assertTrue(propagator.seek_ac_support(arc, 1))
        self.assertEqual(session.stats.cc, cc)

    def test_search_pc_wit(self):
        network = network_from_pairs(2, 2, [(0, 1, compare("ne"))])
        session, propagator = self.propagator(network, "maxrpc3rm")
        self.assertTrue(propagator.search_pc_wit(network.arc(0, 1), 0, 1))
        self.assertEqual(session.stats.cc, 0)

        network = neq_triangle(2)
        _, propagator = self.propagator(network, "maxrpc3rm")
        self.assertFalse(propagator.search_pc_wit(network.arc(0, 1), 0, 1))

    def test_residual_witness_is_written_to_both_last_ac_entries(self):
        network = eq_triangle(2)
        session, propagator = self.propagator(network, "maxrpc3rm")
        self.assertTrue(propagator.search_pc_wit(network.arc(0, 1), 0, 0))
        self.assertEqual(session.supports.get(AC, network.arc(0, 2), 0), 0)
        self.assertEqual(session.supports.get(AC, network.arc(1, 2), 0), 0)

    def clique_after_losing_witness(self, name):
        network = witness_clique()
        session, propagator = self.propagator(network, name)
        self.assertTrue(session.preprocess())
        self.assertEqual(session.stats.deletions, 0)
        self.assertEqual(session.supports.get(PC, network.arc(0, 3), 0), 0)
        session.domains.push_level()
        session.domains.remove_value(2, 0)
        return network, session, propagator

    def test_check_pc_wit_detects_witness_loss(self):
        for name in ("maxrpc3", "maxrpc3rm"):
            network, session, propagator = self.clique_after_losing_witness(name)
            arc = network.arc(0, 2)
            # w=0 still has y=1 as PC-support, but (w=0, z=0) lost its only witness
            self.assertTrue(propagator.search_pc_sup(arc, 0))
            self.assertFalse(propagator.check_pc_wit(arc, 0), msg=name)

            network, session, propagator = self.clique_after_losing_witness(name)
            self.assertTrue(session.propagate_from(2))
            self.assertEqual(session.value_sets()[0], {1}, msg=name)

    def test_failed_ac_support_skips_the_witness_scan(self):
        network, session, propagator = self.clique_after_losing_witness("maxrpc3")
        arc = network.arc(0, 2)
        witness_patch = mock.patch.object(propagator, "scan_witness", wraps=propagator.scan_witness)
        support_patch = mock.patch.object(propagator, "scan_pc_support", wraps=propagator.scan_pc_support)
        with witness_patch as scan_witness, support_patch as scan_pc_support:
            self.assertFalse(propagator.check_pc_wit(arc, 0))
        # z=0 has no AC-support left in y, so only the replacement search in z runs for it
        self.assertFalse([c for c in scan_witness.call_args_list if c.args[1].source == 3])
        self.assertIn((0, 3), [(c.args[0].source, c.args[0].target) for c in scan_pc_support.call_args_list])


class RandomSuiteTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.networks = suite_networks(SUITE_SIZE, seed=11)
        cls.maxrpc = [brute_maxrpc(network) for network in cls.networks]
        cls.ac = [brute_ac(network) for network in cls.networks]

    def assertMatchesOracle(self, name, **overrides):
        for network, expected in zip(self.networks, self.maxrpc):
            session, consistent = closure(network, name, **overrides)
            self.assertEqual(consistent, not expected.wipeout, msg=f"{name} on {network.name}")
            if consistent:
                self.assertEqual(session.value_sets(), expected.domains, msg=f"{name} on {network.name}")

    def test_full_variants_equal_the_oracle(self):
        for name in FULL:
            self.assertMatchesOracle(name)

    def test_orderings_do_not_change_the_fixpoint(self):
        self.assertMatchesOracle(
            "maxrpc3rm+h", case2_ordering=DOM, case3_ordering=WDEG, case4_ordering=DOM_WDEG
        )
        self.assertMatchesOracle("maxrpc3", queue_heuristic=DOM, case1_ordering=WDEG)
        self.assertMatchesOracle("maxrpc3rm", use_bidirectionality=False)

    def test_ac3rm_equals_the_ac_oracle(self):
        for network, expected in zip(self.networks, self.ac):
            session, consistent = closure(network, "ac3rm")
            self.assertEqual(consistent, not expected.wipeout)
            if consistent:
                self.assertEqual(session.value_sets(), expected.domains)

    def test_inclusion_chain(self):
        for network, strong, weak in zip(self.networks, self.maxrpc, self.ac):
            for name in LIGHT:
                session, consistent = closure(network, name)
                if weak.wipeout:
                    self.assertFalse(consistent)
                    continue
                if not consistent:
                    self.assertTrue(strong.wipeout, msg=f"{name} on {network.name}")
                    continue
                domains = session.value_sets()
                self.assertTrue(subset(domains, weak.domains), msg=f"{name} on {network.name}")
                if not strong.wipeout:
                    self.assertTrue(subset(strong.domains, domains), msg=f"{name} on {network.name}")

    def test_light_incremental_and_residual_agree(self):
        for network in self.networks:
            incremental, ok_incremental = closure(network, "lmaxrpc3")
            for name in ("lmaxrpc3rm", "lmaxrpcrm", "lmaxrpc2"):
                other, ok_other = closure(network, name)
                self.assertEqual(ok_incremental, ok_other, msg=f"{name} on {network.name}")
                if ok_incremental:
                    self.assertEqual(incremental.value_sets(), other.value_sets(), msg=f"{name} on {network.name}")

    def test_idempotence(self):
        for network in self.networks[:80]:
            for name in MAXRPC + ("ac3rm",):
                session, consistent = closure(network, name)
                if not consistent:
                    continue
                deletions = session.stats.deletions
                self.assertTrue(session.propagate_all())
                self.assertEqual(session.stats.deletions, deletions, msg=f"{name} on {network.name}")

    def test_shortcuts_change_checks_only(self):
        for network in self.networks:
            for name in ("maxrpc3", "maxrpc3rm", "lmaxrpc3", "lmaxrpc3rm"):
                with_shortcuts, ok_with = closure(network, name)
                without, ok_without = closure(network, name, use_last_ac_shortcuts=False)
                self.assertEqual(ok_with, ok_without)
                self.assertEqual(with_shortcuts.stats.deletions, without.stats.deletions)
                self.assertEqual(with_shortcuts.domains.snapshot(), without.domains.snapshot())

    def test_incremental_scans_never_revisit_a_value(self):
        for network in self.networks[:100]:
            for name in ("maxrpc3", "maxrpc2", "lmaxrpc3"):
                session, _ = closure(network, name, audit_scans=True)
                self.assertEqual(session.stats.scan_revisits, 0, msg=f"{name} on {network.name}")

    def test_residual_emulation_spends_more_checks(self):
        total = {"lmaxrpc3rm": 0, "lmaxrpcrm": 0, "maxrpc3": 0, "maxrpc2": 0}
        for network in self.networks:
            for name in total:
                session, _ = closure(network, name)
                total[name] += session.stats.cc
        self.assertLess(total["lmaxrpc3rm"], total["lmaxrpcrm"])
        self.assertLessEqual(total["maxrpc3"], total["maxrpc2"])


class PropagateFromTest(SimpleTestCase):
    def test_deletions_after_preprocessing_propagate(self):
        network = network_from_pairs(3, 3, [(0, 1, compare("lt")), (1, 2, compare("lt"))])
        for name in ("maxrpc3", "maxrpc3rm", "ac3rm"):
            session = Session(network, algorithm_config(name))
            self.assertTrue(session.preprocess())
            self.assertEqual(session.value_sets(), [{0}, {1}, {2}])

        network = network_from_pairs(3, 3, [(0, 1, compare("ne")), (1, 2, compare("ne"))])
        session = Session(network, algorithm_config("maxrpc3"))
        self.assertTrue(session.preprocess())
        session.domains.push_level()
        session.domains.assign(1, 0)
        self.assertTrue(session.propagate_from(1))
        self.assertEqual(session.value_sets(), [{1, 2}, {0}, {1, 2}])
        session.domains.restore(0)
        self.assertEqual(session.value_sets(), [{0, 1, 2}] * 3)

    def test_empty_propagation_list_is_a_no_op(self):
        session = Session(neq_triangle(3), algorithm_config("maxrpc3rm"))
        self.assertTrue(session.propagator.propagate(PropagationList()))
        self.assertEqual(session.stats.cc, 0)

    def test_variants_are_wired_to_their_propagators(self):
        self.assertEqual(type(Session(neq_triangle(3), PropagatorConfig(variant=Variant.AC3RM)).propagator).__name__, "AC3rmPropagator")
        self.assertEqual(type(Session(neq_triangle(3)).propagator).__name__, "MaxRPCPropagator")
