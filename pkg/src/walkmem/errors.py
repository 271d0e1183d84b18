"""Exception types shared across the package."""


class WalkmemError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class EdgeListParseError(WalkmemError):
    """Malformed edge-list input."""

    code = "parse-error"

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class EmptyGraphError(WalkmemError):
    code = "empty-graph"


class GenerationError(WalkmemError):
    """Random-network generation failed (e.g. connectivity retry budget)."""

    code = "generation-error"


class DisconnectedGraphError(WalkmemError):
    code = "disconnected-graph"


class DeadEndError(WalkmemError):
    """A walker reached a node with no outgoing arcs."""

    code = "dead-end"

    def __init__(self, node, state=None):
        message = f"node {node} has no outgoing arcs"
        if state is not None:
            message += f" (reached from arc state {state})"
        super().__init__(message)
        self.node = node
        self.state = state


class StrategyUsageError(WalkmemError):
    """Strategy passed to an incompatible chain builder, or bad parameters."""

    code = "strategy-usage"


class ArcBudgetError(WalkmemError):
    """Graph exceeds the exact-solver arc-state budget."""

    code = "arc-budget"


class UnreachableTargetError(WalkmemError):
    """The absorbing system for a target is singular: some transient state
    never reaches the target under the chosen strategy."""

    code = "unreachable-target"


class ReducibleChainError(WalkmemError):
    """Chain is not irreducible, so no unique stationary distribution."""

    code = "reducible-chain"


class SolverResidualError(WalkmemError):
    """A linear solve failed its residual check."""

    code = "solver-residual"


class CensoringError(WalkmemError):
    """Too many simulated trajectories hit the step cap."""

    code = "censoring"


class ExperimentError(WalkmemError):
    """A sweep cell failed; the message carries the cell coordinates."""

    code = "experiment-error"


class DatasetMissingError(WalkmemError):
    code = "dataset-missing"


class ChecksumMismatchError(WalkmemError):
    code = "checksum-mismatch"
