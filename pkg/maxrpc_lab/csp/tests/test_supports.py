from django.test import SimpleTestCase

from csp.domains import NIL, DomainStore
from csp.network import network_from_pairs
from csp.relations import compare
from csp.supports import AC, PC, SupportMode, SupportStore, is_valid


class SupportStoreTest(SimpleTestCase):
    def setUp(self):
        self.network = network_from_pairs(2, 3, [(0, 1, compare("ne"))])
        self.domains = DomainStore(self.network)
        self.arc = self.network.arc(0, 1)

    def test_entries_start_nil(self):
        store = SupportStore(self.network, self.domains)
        self.assertEqual(store.last_pc, [NIL] * 6)
        self.assertEqual(store.last_ac, [NIL] * 6)
        self.assertEqual(store.get(PC, self.arc, 2), NIL)

    def test_incremental_entries_are_restored(self):
        store = SupportStore(self.network, self.domains, SupportMode.INCREMENTAL)
        store.set(PC, self.arc, 0, 1)
        before = store.snapshot()
        self.domains.push_level()
        store.set(PC, self.arc, 0, 2)
        store.set(AC, self.arc.reverse, 1, 0)
        self.domains.remove_value(1, 1)
        self.assertEqual(store.get(PC, self.arc, 0), 2)
        self.domains.restore(0)
        self.assertEqual(store.snapshot(), before)
        self.assertTrue(self.domains.contains(1, 1))

    def test_unchanged_writes_are_not_trailed(self):
        store = SupportStore(self.network, self.domains, SupportMode.INCREMENTAL)
        store.set_pc(0, 1)
        trail = len(self.domains.trail)
        store.set_pc(0, 1)
        self.assertEqual(len(self.domains.trail), trail)

    def test_residues_survive_backtracking(self):
        store = SupportStore(self.network, self.domains, SupportMode.RESIDUAL)
        self.domains.push_level()
        store.set(PC, self.arc, 0, 2)
        store.set(AC, self.arc, 0, 1)
        self.domains.restore(0)
        self.assertEqual(store.get(PC, self.arc, 0), 2)
        self.assertEqual(store.get(AC, self.arc, 0), 1)
        self.assertEqual(self.domains.trail, [])

    def test_scan_marks(self):
        store = SupportStore(self.network, self.domains, SupportMode.INCREMENTAL, audit=True)
        self.domains.push_level()
        self.assertTrue(store.mark_scan(0, 0))
        self.assertTrue(store.mark_scan(0, 2))
        self.assertFalse(store.mark_scan(0, 1))
        self.domains.restore(0)
        self.assertTrue(store.mark_scan(0, 1))

    def test_validity(self):
        self.assertFalse(is_valid(NIL, 1, self.domains))
        self.assertTrue(is_valid(2, 1, self.domains))
        self.domains.remove_value(1, 2)
        self.assertFalse(is_valid(2, 1, self.domains))
