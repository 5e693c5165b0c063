from csp.exceptions import CSPError


class BenchError(CSPError):
    """Harness-level failure: the batch itself cannot run."""


class ManifestError(BenchError):
    """A bench manifest is missing, unreadable or invalid."""


class NonDeterministicRun(BenchError):
    """Repetitions of one run disagreed on checks or nodes."""
