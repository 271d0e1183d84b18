"""Transition kernels for the seven walk strategies.

Two memoryless walks (u-rw, id-rw) depend only on the current node; five
one-step-memory walks (f-rwm, id-rwm, 2h-rwm, p-rwm, pid-rwm) condition on
the arc state (previous node r, current node s). Kernels are pure functions
evaluated lazily per state; chain builders and the simulator assemble them.

Directed conventions: neighborhoods are out-neighborhoods; the backtracking
penalty or exclusion applies only when the reciprocal arc (s, r) exists;
the degree k_t used for inverse-degree weighting defaults to out-degree.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
import scipy.sparse as sp

from .errors import DeadEndError, StrategyUsageError
from .graph import Graph, two_hop_counts

STRATEGY_KINDS = ("u-rw", "id-rw", "f-rwm", "id-rwm", "2h-rwm",
                  "p-rwm", "pid-rwm")
MEMORYLESS_KINDS = frozenset({"u-rw", "id-rw"})
_DEGREE_CONVENTIONS = ("out", "in", "total")

# which named parameters each strategy accepts in the string grammar
_PARAMS = {
    "p-rwm": ("alpha", "beta"),
    "pid-rwm": ("alpha",),
}

DEFAULT_ALPHA = 10.0
DEFAULT_BETA = 0.01


@dataclass(frozen=True)
class StrategySpec:
    """A walk strategy plus its parameters.

    alpha boosts candidates outside the previous node's neighborhood
    (p-rwm, pid-rwm); beta prices an immediate return (p-rwm);
    degree_convention selects which degree inverse-degree weighting uses
    on directed graphs.
    """

    kind: str
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA
    degree_convention: str = "out"

    def __post_init__(self):
        if self.kind not in STRATEGY_KINDS:
            raise StrategyUsageError(
                f"unknown strategy {self.kind!r}; expected one of "
                f"{', '.join(STRATEGY_KINDS)}")
        if not self.alpha > 0:
            raise StrategyUsageError("alpha must be positive")
        if self.beta < 0:
            raise StrategyUsageError("beta must be nonnegative")
        if self.degree_convention not in _DEGREE_CONVENTIONS:
            raise StrategyUsageError(
                f"degree convention must be one of {_DEGREE_CONVENTIONS}")

    @property
    def has_memory(self) -> bool:
        return self.kind not in MEMORYLESS_KINDS

    @property
    def label(self) -> str:
        """Canonical string form, round-trippable through parse_strategy."""
        if self.kind == "p-rwm":
            return f"p-rwm(alpha={self.alpha:g},beta={self.beta:g})"
        if self.kind == "pid-rwm":
            return f"pid-rwm(alpha={self.alpha:g})"
        return self.kind

    def __str__(self) -> str:
        return self.label


def parse_strategy(text: str) -> StrategySpec:
    """Parse the CLI strategy grammar, e.g. "pid-rwm(alpha=10)" or "u-rw"."""
    s = text.strip().lower()
    name, sep, rest = s.partition("(")
    name = name.strip()
    kwargs: dict[str, float] = {}
    if sep:
        if not rest.endswith(")"):
            raise StrategyUsageError(f"unbalanced parentheses in {text!r}")
        body = rest[:-1].strip()
        if body:
            for item in body.split(","):
                key, eq, val = item.partition("=")
                key = key.strip()
                if not eq or not val.strip():
                    raise StrategyUsageError(
                        f"expected key=value parameters in {text!r}")
                allowed = _PARAMS.get(name, ())
                if key not in allowed:
                    raise StrategyUsageError(
                        f"strategy {name!r} does not take parameter {key!r}")
                try:
                    kwargs[key] = float(val)
                except ValueError:
                    raise StrategyUsageError(
                        f"parameter {key!r} in {text!r} is not a number"
                    ) from None
    return StrategySpec(kind=name, **kwargs)


@dataclass(frozen=True)
class TransitionDistribution:
    """Candidate next nodes and their probabilities for one state."""

    nodes: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        if len(self.nodes) != len(self.probs) or len(self.nodes) == 0:
            raise ValueError("nodes and probs must be equal-length, nonempty")
        if np.any(self.probs < 0):
            raise ValueError("negative transition probability")
        total = float(self.probs.sum())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total}, not 1")

    def as_dict(self) -> dict[int, float]:
        return {int(t): float(p) for t, p in zip(self.nodes, self.probs)}


def _normalized(nodes: np.ndarray, weights: np.ndarray) -> TransitionDistribution:
    return TransitionDistribution(nodes, weights / weights.sum())


def _out_or_raise(g: Graph, s: int) -> np.ndarray:
    nbrs = g.out_neighbors(s)
    if len(nbrs) == 0:
        raise DeadEndError(s)
    return nbrs


def _require_arc(g: Graph, r: int, s: int) -> None:
    if not g.has_arc(r, s):
        raise ValueError(f"state ({r}, {s}) is not an arc of the graph")


# -- memoryless kernels -------------------------------------------------------

def uniform_kernel(g: Graph, s: int) -> TransitionDistribution:
    """Equal probability 1/k_s on each out-neighbor."""
    nbrs = _out_or_raise(g, s)
    return TransitionDistribution(nbrs, np.full(len(nbrs), 1.0 / len(nbrs)))


def inverse_degree_kernel(g: Graph, s: int, conv: str = "out", *,
                          degrees: Optional[np.ndarray] = None) -> TransitionDistribution:
    """Probability proportional to 1/k_t over out-neighbors."""
    nbrs = _out_or_raise(g, s)
    deg = g.degrees(conv) if degrees is None else degrees
    return _normalized(nbrs, 1.0 / deg[nbrs])


# -- one-step-memory kernels ---------------------------------------------------

def forward_memory_kernel(g: Graph, r: int, s: int) -> TransitionDistribution:
    """Uniform over the neighbors of s other than r; forced return when r is
    the only neighbor. Without a reciprocal arc the exclusion is vacuous."""
    _require_arc(g, r, s)
    nbrs = _out_or_raise(g, s)
    cand = nbrs[nbrs != r]
    if len(cand) == 0:
        return TransitionDistribution(np.array([r]), np.array([1.0]))
    return TransitionDistribution(cand, np.full(len(cand), 1.0 / len(cand)))


def inverse_degree_memory_kernel(g: Graph, r: int, s: int, conv: str = "out", *,
                                 degrees: Optional[np.ndarray] = None) -> TransitionDistribution:
    """Inverse-degree weights over the neighbors of s other than r."""
    _require_arc(g, r, s)
    nbrs = _out_or_raise(g, s)
    cand = nbrs[nbrs != r]
    if len(cand) == 0:
        return TransitionDistribution(np.array([r]), np.array([1.0]))
    deg = g.degrees(conv) if degrees is None else degrees
    return _normalized(cand, 1.0 / deg[cand])


def two_hop_memory_kernel(g: Graph, r: int, s: int,
                          b: Optional[sp.spmatrix] = None) -> TransitionDistribution:
    """Weights 1/b_rt over all neighbors of s, b counting two-hop walks.

    Backtracking is allowed (weight 1/b_rr). Every candidate has b_rt >= 1
    through the walk r -> s -> t; a zero count would mean the state is not a
    valid arc, so it is rejected."""
    _require_arc(g, r, s)
    nbrs = _out_or_raise(g, s)
    if b is None:
        b = two_hop_counts(g)
    counts = np.asarray(b[np.full(len(nbrs), r), nbrs]).ravel().astype(np.float64)
    if np.any(counts == 0):
        t = int(nbrs[counts == 0][0])
        raise ValueError(
            f"no two-hop walk from {r} to candidate {t}; state ({r}, {s}) "
            "is inconsistent with the two-hop matrix")
    return _normalized(nbrs, 1.0 / counts)


def persistent_kernel(g: Graph, r: int, s: int, alpha: float = DEFAULT_ALPHA,
                      beta: float = DEFAULT_BETA) -> TransitionDistribution:
    """Return weight beta, common neighbors of r and s weight 1, fresh
    candidates weight alpha, normalized. Forced return when no candidate
    other than r exists."""
    _require_arc(g, r, s)
    nbrs = _out_or_raise(g, s)
    cand = nbrs[nbrs != r]
    if len(cand) == 0:
        return TransitionDistribution(np.array([r]), np.array([1.0]))
    common = np.isin(cand, g.out_neighbors(r), assume_unique=True)
    weights = np.where(common, 1.0, alpha)
    if beta > 0 and g.has_arc(s, r):
        cand = np.concatenate([cand, [r]])
        weights = np.concatenate([weights, [beta]])
    return _normalized(cand, weights)


def persistent_inverse_degree_kernel(g: Graph, r: int, s: int,
                                     alpha: float = DEFAULT_ALPHA,
                                     conv: str = "out", *,
                                     degrees: Optional[np.ndarray] = None) -> TransitionDistribution:
    """Weights 1/k_t on common neighbors of r and s, alpha/k_t on the rest,
    backtracking excluded; forced return when r is the only neighbor."""
    _require_arc(g, r, s)
    nbrs = _out_or_raise(g, s)
    cand = nbrs[nbrs != r]
    if len(cand) == 0:
        return TransitionDistribution(np.array([r]), np.array([1.0]))
    deg = g.degrees(conv) if degrees is None else degrees
    common = np.isin(cand, g.out_neighbors(r), assume_unique=True)
    weights = np.where(common, 1.0, alpha) / deg[cand]
    return _normalized(cand, weights)


# -- dispatch ------------------------------------------------------------------

def memoryless_distribution(g: Graph, spec: StrategySpec,
                            s: int) -> TransitionDistribution:
    """Kernel of a memoryless strategy at node s."""
    if spec.kind == "u-rw":
        return uniform_kernel(g, s)
    if spec.kind == "id-rw":
        return inverse_degree_kernel(g, s, spec.degree_convention)
    raise StrategyUsageError(
        f"{spec.kind} has memory; its kernel needs the previous node")


def make_kernel(g: Graph, spec: StrategySpec) -> Callable[[int, int], TransitionDistribution]:
    """Bind a strategy to a graph as a callable (r, s) -> distribution.

    Memoryless strategies ignore r. Shared per-graph structures (degree
    vector, two-hop counts) are computed once here.
    """
    conv = spec.degree_convention
    kind = spec.kind
    if kind == "u-rw":
        return lambda r, s: uniform_kernel(g, s)
    if kind == "id-rw":
        deg = g.degrees(conv)
        return lambda r, s: inverse_degree_kernel(g, s, conv, degrees=deg)
    if kind == "f-rwm":
        return lambda r, s: forward_memory_kernel(g, r, s)
    if kind == "id-rwm":
        deg = g.degrees(conv)
        return lambda r, s: inverse_degree_memory_kernel(g, r, s, conv,
                                                         degrees=deg)
    if kind == "2h-rwm":
        b = two_hop_counts(g)
        return lambda r, s: two_hop_memory_kernel(g, r, s, b)
    if kind == "p-rwm":
        alpha, beta = spec.alpha, spec.beta
        return lambda r, s: persistent_kernel(g, r, s, alpha, beta)
    alpha, deg = spec.alpha, g.degrees(conv)
    return lambda r, s: persistent_inverse_degree_kernel(g, r, s, alpha, conv,
                                                         degrees=deg)
