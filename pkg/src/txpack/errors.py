"""Exception hierarchy shared across the package."""


class TxpackError(Exception):
    """Base class for all txpack errors."""


class ValidationError(TxpackError):
    """Bad input data: malformed mempool files, invalid parameters."""


class ZeroLatencyError(ValidationError):
    """Raised when lambda = 0 is passed to the closed-form solver.

    The marginal formula divides by lambda; callers wanting the
    zero-latency limit should use the greedy best response instead.
    """

    def __init__(self, msg="zero-latency regime; use limit behavior (greedy top-k)"):
        super().__init__(msg)


class MempoolFitsInBlock(TxpackError):
    """Total mempool capacity does not exceed the block capacity.

    Not a failure: the optimal strategy is to package everything.
    Top-level entry points translate this into the all-ones profile.
    """


class InvariantViolation(TxpackError):
    """An internal mathematical identity failed to hold within tolerance."""


class RejectionBudgetExceeded(TxpackError):
    """The rejection sampler ran out of attempts."""

    def __init__(self, attempts, acceptance_estimate):
        self.attempts = attempts
        self.acceptance_estimate = acceptance_estimate
        super().__init__(
            f"no accepted draw in {attempts} attempts "
            f"(empirical acceptance ~ {acceptance_estimate:.3g})"
        )
