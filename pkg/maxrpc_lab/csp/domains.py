from csp.exceptions import ContractViolation
from csp.stats import SolverStats


NIL = -1


class DomainStore:
    """
    Current domains as membership flags over the initial value indices, plus
    the session's single trail.

    Trail records are ``(level, owner, key, old)``; ``restore`` pops records
    of levels above the target and hands each back to ``owner._undo``. The
    support store trails its entries here too, so one pass undoes both in
    reverse order.
    """

    def __init__(self, network, stats: SolverStats = None):
        self.network = network
        self.stats = stats if stats is not None else SolverStats()
        self.present = [[True] * v.size for v in network.variables]
        self.sizes = [v.size for v in network.variables]
        self.initial_sizes = tuple(self.sizes)
        self.trail = []
        self.level = 0

    def contains(self, x: int, a: int) -> bool:
        return 0 <= a < len(self.present[x]) and self.present[x][a]

    def size(self, x: int) -> int:
        return self.sizes[x]

    def is_empty(self, x: int) -> bool:
        return self.sizes[x] == 0

    def iter_values(self, x: int, start: int = 0):
        """Current values of ``x`` that are ``>= start``, ascending."""
        row = self.present[x]
        for a in range(max(start, 0), len(row)):
            if row[a]:
                yield a

    def values(self, x: int) -> list:
        row = self.present[x]
        return [a for a in range(len(row)) if row[a]]

    def first(self, x: int) -> int:
        for a in self.iter_values(x):
            return a
        return NIL

    def push_level(self) -> int:
        self.level += 1
        return self.level

    def remove_value(self, x: int, a: int, level: int = None) -> bool:
        """Delete ``a`` from D(x); returns True iff D(x) became empty."""
        row = self.present[x]
        if not row[a]:
            raise ContractViolation(f"Value index {a} is not in the domain of variable {x}")
        row[a] = False
        self.sizes[x] -= 1
        self.trail.append((self.level if level is None else level, self, (x, a), True))
        self.stats.deletions += 1
        return self.sizes[x] == 0

    def assign(self, x: int, a: int) -> None:
        """Reduce D(x) to ``{a}`` at the current level."""
        if not self.present[x][a]:
            raise ContractViolation(f"Cannot assign absent value index {a} to variable {x}")
        for b in self.values(x):
            if b != a:
                self.remove_value(x, b)

    def record(self, owner, key, old) -> None:
        self.trail.append((self.level, owner, key, old))

    def restore(self, level: int) -> None:
        if level > self.level:
            raise ContractViolation(f"Cannot restore to level {level} above current level {self.level}")
        trail = self.trail
        while trail and trail[-1][0] > level:
            _, owner, key, old = trail.pop()
            owner._undo(key, old)
        self.level = level

    def _undo(self, key, old) -> None:
        x, a = key
        self.present[x][a] = True
        self.sizes[x] += 1

    def snapshot(self) -> tuple:
        return tuple(tuple(row) for row in self.present)

    def as_value_sets(self) -> list:
        """Current domains as sets of actual values."""
        return [
            {variable.values[a] for a in self.values(variable.index)}
            for variable in self.network.variables
        ]
