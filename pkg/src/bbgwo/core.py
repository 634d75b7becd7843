"""Shared types, seeded randomness and box-bounds handling.

Every stochastic routine in the package draws from an explicitly passed
:class:`RngStream`. Streams wrap numpy's ``Generator`` over the PCG64 bit
generator, so a given seed reproduces the same draw sequence on any platform
running the same numpy major version.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "AgentState",
    "Bounds",
    "Population",
    "RngStream",
    "clamp_to_bounds",
    "make_rng",
    "normal",
    "uniform",
]


@dataclass(frozen=True)
class Bounds:
    """Axis-aligned box ``[lower[j], upper[j]]`` for every dimension ``j``."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError(
                f"bounds must be 1-D and of equal length, got {lower.shape} and {upper.shape}"
            )
        if not np.all(lower < upper):
            raise ValueError("every lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def box(cls, low: float, high: float, dimension: int) -> Bounds:
        return cls(np.full(dimension, float(low)), np.full(dimension, float(high)))

    @property
    def dimension(self) -> int:
        return self.lower.size

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bounds):
            return NotImplemented
        return np.array_equal(self.lower, other.lower) and np.array_equal(self.upper, other.upper)

    __hash__ = None  # type: ignore[assignment]


class RngStream:
    """Single-owner pseudorandom stream (PCG64).

    Do not share one stream between concurrent tasks; give each task its own
    stream, e.g. ``make_rng(base_seed + trial_index)``.
    """

    def __init__(self, seed: int) -> None:
        self.seed = int(seed)
        self.generator = np.random.Generator(np.random.PCG64(self.seed))

    def random(self, size=None):
        return self.generator.random(size)

    def uniform(self, lo, hi, size=None):
        return self.generator.uniform(lo, hi, size)

    def standard_normal(self, size=None):
        return self.generator.standard_normal(size)

    def normal(self, mu, sigma, size=None):
        # mu + sigma * z keeps sigma == 0 draws exactly equal to mu.
        z = self.generator.standard_normal(size if size is not None else np.broadcast(mu, sigma).shape)
        return np.asarray(mu) + np.asarray(sigma) * z

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed})"


def make_rng(seed: int) -> RngStream:
    """Return a fresh deterministic stream for ``seed``."""
    return RngStream(seed)


def uniform(rng: RngStream, lo: float, hi: float) -> float:
    """Draw one value from ``U[lo, hi)``; a degenerate range returns ``lo``."""
    if lo > hi:
        raise ValueError(f"invalid range: lo={lo} > hi={hi}")
    if lo == hi:
        return float(lo)
    return float(rng.uniform(lo, hi))


def normal(rng: RngStream, mu: float, sigma: float) -> float:
    """Draw one value from ``N(mu, sigma**2)``; ``sigma == 0`` returns ``mu`` exactly."""
    if sigma < 0:
        raise ValueError(f"sigma must be non-negative, got {sigma}")
    if sigma == 0:
        return float(mu)
    return float(rng.normal(mu, sigma))


def clamp_to_bounds(x, b: Bounds) -> np.ndarray:
    """Clip each component of ``x`` into its bound interval.

    ``x`` may be a single position of length D or a stack of positions with
    trailing dimension D.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1:] != (b.dimension,):
        raise ValueError(f"position has {x.shape[-1] if x.ndim else 0} components, bounds have {b.dimension}")
    return np.clip(x, b.lower, b.upper)


@dataclass
class AgentState:
    position: np.ndarray
    fitness: float = float("nan")
    evaluated: bool = False

    def evaluate(self, objective) -> float:
        self.fitness = float(objective(self.position))
        self.evaluated = True
        return self.fitness


@dataclass
class Population:
    """Agents plus the three best-known positions (``p1``, ``p2``, ``p3``).

    Positions are kept as one ``(N, D)`` array for vectorised updates;
    :meth:`agents` exposes them as :class:`AgentState` records.
    """

    positions: np.ndarray
    fitness: np.ndarray
    leaders: np.ndarray = field(default=None)  # type: ignore[assignment]
    leader_fitness: np.ndarray = field(default=None)  # type: ignore[assignment]

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    def agents(self) -> list[AgentState]:
        return [
            AgentState(self.positions[i].copy(), float(self.fitness[i]), True)
            for i in range(self.size)
        ]
