"""GWO, bare-bones GWO and bare-bones PSO sharing one synchronous loop.

Each iteration updates every agent from the same frozen guide information
(leaders for GWO/BBGWO, personal/swarm bests for BBPSO), clamps the new
positions into the box, evaluates them all, then refreshes the guides.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .benchmarks import BenchmarkSpec
from .core import Population, RngStream, clamp_to_bounds, make_rng

__all__ = [
    "BbpsoMemory",
    "OptimizerId",
    "RunConfig",
    "RunResult",
    "bbgwo_step",
    "bbpso_step",
    "gwo_step",
    "run",
    "select_leaders",
    "step_parameter",
]


class OptimizerId(str, enum.Enum):
    GWO = "gwo"
    BBGWO = "bbgwo"
    BBPSO = "bbpso"

    @classmethod
    def parse(cls, value) -> OptimizerId:
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(
                f"unknown optimizer {value!r}; choose one of {[m.value for m in cls]}"
            ) from None


@dataclass(frozen=True)
class RunConfig:
    optimizer: OptimizerId = OptimizerId.BBGWO
    population_size: int = 20
    max_iterations: int = 500
    seed: int = 0
    # False reproduces the literal pseudocode: leaders are re-picked from the
    # current agents only and the best-ever position can be lost.
    elitist_leaders: bool = True

    def __post_init__(self) -> None:
        object.__setattr__(self, "optimizer", OptimizerId.parse(self.optimizer))
        if self.population_size < 3:
            raise ValueError(f"population_size must be >= 3, got {self.population_size}")
        if self.max_iterations < 0:
            raise ValueError(f"max_iterations must be >= 0, got {self.max_iterations}")


@dataclass
class RunResult:
    best_position: np.ndarray
    best_fitness: float
    fitness_trace: np.ndarray
    evaluations_used: int
    optimizer: str = ""
    function_id: Optional[int] = None
    seed: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "optimizer": self.optimizer,
            "function_id": self.function_id,
            "seed": self.seed,
            "best_fitness": float(self.best_fitness),
            "best_position": [float(v) for v in self.best_position],
            "evaluations_used": int(self.evaluations_used),
            "fitness_trace": [float(v) for v in self.fitness_trace],
        }


@dataclass
class BbpsoMemory:
    """Personal bests of every particle and the swarm best."""

    personal_best: np.ndarray
    personal_fitness: np.ndarray
    swarm_best: np.ndarray = field(default=None)  # type: ignore[assignment]
    swarm_fitness: float = float("inf")

    def __post_init__(self) -> None:
        if self.swarm_best is None:
            self._refresh_swarm_best()

    def _refresh_swarm_best(self) -> None:
        i = int(np.argmin(self.personal_fitness))
        self.swarm_best = self.personal_best[i].copy()
        self.swarm_fitness = float(self.personal_fitness[i])

    def update(self, positions: np.ndarray, fitness: np.ndarray) -> None:
        improved = fitness < self.personal_fitness
        self.personal_best[improved] = positions[improved]
        self.personal_fitness[improved] = fitness[improved]
        self._refresh_swarm_best()


def step_parameter(t: int, T: int) -> float:
    """Linearly decaying step size: 2 at ``t = 0``, 0 at ``t = T``."""
    if T < 1:
        raise ValueError(f"T must be >= 1, got {T}")
    if not 0 <= t <= T:
        raise ValueError(f"iteration {t} outside [0, {T}]")
    return 2.0 * (1.0 - t / T)


def select_leaders(fitness, positions=None):
    """Indices of the three lowest-fitness agents, best first.

    Ties go to the lower index. If ``positions`` is given, the leader
    positions are returned as a ``(3, D)`` array alongside the indices.
    """
    fitness = np.asarray(fitness, dtype=float)
    if fitness.size < 3:
        raise ValueError(f"need at least 3 evaluated agents to pick leaders, got {fitness.size}")
    order = np.argsort(fitness, kind="stable")[:3]
    if positions is None:
        return order
    return order, np.asarray(positions)[order]


def _check_step_size(a: float) -> None:
    if a < 0:
        raise ValueError(f"step parameter a must be non-negative, got {a}")


def gwo_step(x, leaders, a: float, rng: RngStream) -> np.ndarray:
    """Classic GWO move of one agent (``x`` shape ``(D,)``) or many (``(N, D)``).

    Fresh ``A ~ U[-a, a]`` and ``C ~ U[0, 2]`` are drawn per leader and per
    component; the new position is the mean of ``p_k + A |C p_k - x|``.
    Bounds are not applied here.
    """
    _check_step_size(a)
    x = np.asarray(x, dtype=float)
    leaders = np.asarray(leaders, dtype=float)
    shape = (3,) + x.shape
    A = rng.uniform(-a, a, shape)
    C = rng.uniform(0.0, 2.0, shape)
    p = leaders.reshape((3,) + (1,) * (x.ndim - 1) + (x.shape[-1],))
    moves = p + A * np.abs(C * p - x)
    return (moves[0] + moves[1] + moves[2]) / 3.0


def bbgwo_step(x, leaders, a: float, rng: RngStream) -> np.ndarray:
    """Bare-bones GWO move: one normal draw per component.

    The mean is the leader average and the standard deviation is
    ``a / (3 sqrt 3) * sqrt(sum_k (x - p_k)**2 + p_k**2 / 3)``, the exact
    first two moments of the classic move.
    """
    _check_step_size(a)
    x = np.asarray(x, dtype=float)
    leaders = np.asarray(leaders, dtype=float)
    if leaders.shape != (3, x.shape[-1]):
        raise ValueError(f"leaders must have shape (3, {x.shape[-1]}), got {leaders.shape}")
    p = leaders.reshape((3,) + (1,) * (x.ndim - 1) + (x.shape[-1],))
    mu = (leaders[0] + leaders[1] + leaders[2]) / 3.0
    spread = np.sum((x - p) ** 2 + p**2 / 3.0, axis=0)
    sigma = a / (3.0 * np.sqrt(3.0)) * np.sqrt(spread)
    return mu + sigma * rng.standard_normal(x.shape)


def bbpso_step(agent_index, memory: BbpsoMemory, rng: RngStream) -> np.ndarray:
    """Bare-bones PSO draw ``N((pbest + gbest)/2, |gbest - pbest|**2)``.

    ``agent_index`` may be an int or an index array (use ``slice(None)`` for
    the whole swarm).
    """
    pbest = memory.personal_best[agent_index]
    gbest = memory.swarm_best
    mu = (pbest + gbest) / 2.0
    sigma = np.abs(gbest - pbest)
    return mu + sigma * rng.standard_normal(np.shape(pbest))


def _initial_population(objective: BenchmarkSpec, n: int, rng: RngStream) -> Population:
    lo, hi = objective.bounds.lower, objective.bounds.upper
    positions = lo + (hi - lo) * rng.random((n, objective.dimension))
    fitness = objective.evaluate_batch(positions)
    return Population(positions, fitness)


def _refresh_leaders(pop: Population, elitist: bool) -> None:
    if elitist and pop.leaders is not None:
        pool_x = np.concatenate([pop.positions, pop.leaders])
        pool_f = np.concatenate([pop.fitness, pop.leader_fitness])
    else:
        pool_x, pool_f = pop.positions, pop.fitness
    idx, leaders = select_leaders(pool_f, pool_x)
    pop.leaders = leaders.copy()
    pop.leader_fitness = pool_f[idx].copy()


def run(config: RunConfig, objective: BenchmarkSpec, rng: Optional[RngStream] = None) -> RunResult:
    """Run one optimisation and return the best-so-far trace.

    ``fitness_trace[0]`` is the best of the random initial population and
    ``fitness_trace[t]`` the best seen after iteration ``t``. Uses
    ``make_rng(config.seed)`` when ``rng`` is omitted.
    """
    if rng is None:
        rng = make_rng(config.seed)
    n, T = config.population_size, config.max_iterations
    bounds = objective.bounds

    pop = _initial_population(objective, n, rng)
    best = int(np.argmin(pop.fitness))
    best_x, best_f = pop.positions[best].copy(), float(pop.fitness[best])
    trace = np.empty(T + 1)
    trace[0] = best_f

    memory = None
    if config.optimizer is OptimizerId.BBPSO:
        memory = BbpsoMemory(pop.positions.copy(), pop.fitness.copy())
    else:
        _refresh_leaders(pop, config.elitist_leaders)
        step = gwo_step if config.optimizer is OptimizerId.GWO else bbgwo_step

    for t in range(T):
        if memory is not None:
            new = bbpso_step(slice(None), memory, rng)
        else:
            new = step(pop.positions, pop.leaders, step_parameter(t, T), rng)
        pop.positions = clamp_to_bounds(new, bounds)
        pop.fitness = objective.evaluate_batch(pop.positions)

        if memory is not None:
            memory.update(pop.positions, pop.fitness)
        else:
            _refresh_leaders(pop, config.elitist_leaders)

        i = int(np.argmin(pop.fitness))
        if pop.fitness[i] < best_f:
            best_x, best_f = pop.positions[i].copy(), float(pop.fitness[i])
        trace[t + 1] = best_f

    return RunResult(
        best_position=best_x,
        best_fitness=best_f,
        fitness_trace=trace,
        evaluations_used=n * (T + 1),
        optimizer=config.optimizer.value,
        function_id=objective.id,
        seed=rng.seed,
    )
