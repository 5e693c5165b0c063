from enum import Enum

from csp.domains import NIL


PC = "pc"
AC = "ac"


class SupportMode(str, Enum):
    INCREMENTAL = "incremental"
    RESIDUAL = "residual"


class SupportStore:
    """
    LastPC and LastAC tables, one entry per (directed arc, source value),
    stored flat at ``arc.offset + a``. Every entry starts at NIL.

    In incremental mode each overwrite is trailed on the domain store's trail
    and undone by ``DomainStore.restore``; in residual mode entries persist
    across backtracking and are only hints whose validity callers re-test.
    With ``audit`` a third trailed table keeps, per entry, the highest value
    index scanned for a PC-support on the current branch.
    """

    def __init__(self, network, domains, mode=SupportMode.RESIDUAL, audit=False):
        self.mode = SupportMode(mode)
        self.incremental = self.mode is SupportMode.INCREMENTAL
        self.domains = domains
        self.last_pc = [NIL] * network.support_slots
        self.last_ac = [NIL] * network.support_slots
        self.scan_marks = [NIL] * network.support_slots if audit else None
        self._tables = {PC: self.last_pc, AC: self.last_ac}

    def get(self, table: str, arc, a: int) -> int:
        """Entry for value index ``a`` on ``arc``. Propagators read the flat lists directly instead."""
        return self._tables[table][arc.offset + a]

    def set(self, table: str, arc, a: int, value: int) -> None:
        """Arc-addressed form of ``set_pc`` / ``set_ac``, which propagators call with flat indices."""
        if table == PC:
            self.set_pc(arc.offset + a, value)
        else:
            self.set_ac(arc.offset + a, value)

    def set_pc(self, index: int, value: int) -> None:
        old = self.last_pc[index]
        if old == value:
            return
        if self.incremental:
            self.domains.record(self, (PC, index), old)
        self.last_pc[index] = value

    def set_ac(self, index: int, value: int) -> None:
        old = self.last_ac[index]
        if old == value:
            return
        if self.incremental:
            self.domains.record(self, (AC, index), old)
        self.last_ac[index] = value

    def mark_scan(self, index: int, value: int) -> bool:
        """Record a PC-support scan of ``value``; False if it was already scanned on this branch."""
        mark = self.scan_marks[index]
        if value <= mark:
            return False
        self.domains.record(self, ("mark", index), mark)
        self.scan_marks[index] = value
        return True

    def _undo(self, key, old) -> None:
        table, index = key
        if table == "mark":
            self.scan_marks[index] = old
        else:
            self._tables[table][index] = old

    def snapshot(self) -> tuple:
        return tuple(self.last_pc), tuple(self.last_ac)


def is_valid(entry: int, x: int, domains) -> bool:
    """
    True iff ``entry`` is not NIL and still in D(x). Propagators inline this
    test against ``domains.present`` in their scan loops.
    """
    return entry != NIL and domains.present[x][entry]
