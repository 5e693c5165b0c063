import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field


@dataclass
class SolverStats:
    """Counters of one solver session."""

    cc: int = 0
    nodes: int = 0
    deletions: int = 0
    elapsed: float = 0.0
    # (constraint index, weight after the bump), in bump order
    bumps: list = field(default_factory=list)
    scan_revisits: int = 0

    @contextmanager
    def timed(self):
        started = time.perf_counter()
        try:
            yield self
        finally:
            self.elapsed += time.perf_counter() - started

    def as_dict(self) -> dict:
        data = asdict(self)
        data["bumps"] = len(self.bumps)
        return data
