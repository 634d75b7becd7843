"""The twelve classical test functions used in the GWO/BBGWO comparison.

All evaluators accept either a single point of shape ``(D,)`` or a batch of
points of shape ``(..., D)`` and reduce over the last axis.

Notes on individual rows
------------------------
* Function 5 is the step function ``sum(floor(x + 0.5)**2)``; the printed
  table repeats the sphere expression for this row, which cannot produce the
  reported integer-scale averages.
* Function 6 keeps the table's reference minimum -7286.2 for success
  counting, although the textbook optimum of the D=30 Schwefel function is
  lower. No argmin is recorded for it.
* Function 12 needs constant vectors ``p`` and ``q`` (length 6) that are not
  published. They must be supplied by the caller; the function is excluded
  from default experiment plans.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import Bounds

__all__ = [
    "BenchmarkSpec",
    "ackley",
    "evaluate",
    "get",
    "griewank",
    "michalewicz",
    "parameter_fit",
    "rastrigin",
    "registry",
    "rosenbrock_variant",
    "schwefel_1_2",
    "schwefel_2_22",
    "schwefel_2_26",
    "six_hump_camel",
    "sphere",
    "step",
]


def sphere(x):
    x = np.asarray(x, dtype=float)
    return np.sum(x**2, axis=-1)


def schwefel_2_22(x):
    x = np.abs(np.asarray(x, dtype=float))
    return np.sum(x, axis=-1) + np.prod(x, axis=-1)


def schwefel_1_2(x):
    x = np.asarray(x, dtype=float)
    return np.sum(np.cumsum(x, axis=-1) ** 2, axis=-1)


def rosenbrock_variant(x):
    """``sum_{j<D} (x_j - x_{j+1}**2)**2 + sum_j (x_j - 1)**2``, minimum 0 at ones.

    This is the form printed in the function table, not the usual
    ``100 (x_{j+1} - x_j**2)**2`` Rosenbrock.
    """
    x = np.asarray(x, dtype=float)
    return np.sum((x[..., :-1] - x[..., 1:] ** 2) ** 2, axis=-1) + np.sum((x - 1.0) ** 2, axis=-1)


def step(x):
    x = np.asarray(x, dtype=float)
    return np.sum(np.floor(x + 0.5) ** 2, axis=-1)


def schwefel_2_26(x):
    x = np.asarray(x, dtype=float)
    return -np.sum(x * np.sin(np.sqrt(np.abs(x))), axis=-1)


def rastrigin(x):
    x = np.asarray(x, dtype=float)
    return np.sum(x**2 - 10.0 * np.cos(2.0 * np.pi * x) + 10.0, axis=-1)


def ackley(x):
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    s1 = np.sqrt(np.sum(x**2, axis=-1) / d)
    s2 = np.sum(np.cos(2.0 * np.pi * x), axis=-1) / d
    return 20.0 + np.e - 20.0 * np.exp(-0.2 * s1) - np.exp(s2)


def griewank(x):
    x = np.asarray(x, dtype=float)
    j = np.arange(1, x.shape[-1] + 1)
    return 1.0 + np.sum(x**2, axis=-1) / 4000.0 - np.prod(np.cos(x / np.sqrt(j)), axis=-1)


def michalewicz(x, exponent: int = 20):
    x = np.asarray(x, dtype=float)
    j = np.arange(1, x.shape[-1] + 1)
    return -np.sum(np.sin(x) * np.sin(j * x**2 / np.pi) ** exponent, axis=-1)


def six_hump_camel(x):
    x = np.asarray(x, dtype=float)
    x1, x2 = x[..., 0], x[..., 1]
    return 4 * x1**2 - 2.1 * x1**4 + x1**6 / 3 + x1 * x2 - 4 * x2**2 + 4 * x2**4


def parameter_fit(x, p, q):
    """Function 12 as printed: ``sum_i [q_i - x_i e^{+r_i} - x_i e^{-r_i}]**2``.

    Here ``r_i = (p_i - x_i)**2 / (2 x_i**2)``. Overflow (including the
    ``x_i -> 0`` limit) saturates to the largest finite float.
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        r = (p - x) ** 2 / (2.0 * x**2)
        term = q - x * np.exp(r) - x * np.exp(-r)
        out = np.sum(term**2, axis=-1)
    big = np.finfo(float).max
    return np.nan_to_num(out, nan=big, posinf=big)


@dataclass(frozen=True, eq=False)
class BenchmarkSpec:
    """A box-constrained test problem.

    ``func`` maps an array of shape ``(..., D)`` to objective values of shape
    ``(...)``. Custom objectives can be wrapped in a spec directly.
    """

    id: int
    name: str
    dimension: int
    bounds: Bounds
    reference_minimum: float
    func: Callable
    argmin: Optional[np.ndarray] = None
    multimodal: bool = False

    def __call__(self, x) -> float:
        return evaluate(self, x)

    def evaluate_batch(self, x) -> np.ndarray:
        """Evaluate an ``(N, D)`` stack without per-point validation."""
        return np.asarray(self.func(x), dtype=float)

    def describe(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "dimension": self.dimension,
            "lower": float(self.bounds.lower[0]),
            "upper": float(self.bounds.upper[0]),
            "minimum": self.reference_minimum,
            "multimodal": self.multimodal,
        }


def evaluate(spec: BenchmarkSpec, x) -> float:
    """Evaluate ``spec`` at a single point ``x`` of length ``spec.dimension``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (spec.dimension,):
        raise ValueError(
            f"function {spec.id} ({spec.name}) expects a vector of length {spec.dimension}, got shape {x.shape}"
        )
    if not np.all(np.isfinite(x)):
        raise ValueError("input contains non-finite components")
    return float(spec.func(x))


def _needs_constants(x):
    raise ValueError("function 12 requires constant vectors p and q (length 6); pass f12_params")


def registry(f12_params: Optional[dict] = None) -> list[BenchmarkSpec]:
    """Return the 12 benchmark specs, ordered by id.

    ``f12_params`` is a mapping with keys ``"p"`` and ``"q"``, each of length
    6. Without it function 12 is still listed but raises on evaluation.
    """
    b = Bounds.box
    d = 30
    specs = [
        BenchmarkSpec(1, "sphere", d, b(-100, 100, d), 0.0, sphere, np.zeros(d)),
        BenchmarkSpec(2, "schwefel_2_22", d, b(-10, 10, d), 0.0, schwefel_2_22, np.zeros(d)),
        BenchmarkSpec(3, "schwefel_1_2", d, b(-100, 100, d), 0.0, schwefel_1_2, np.zeros(d)),
        BenchmarkSpec(4, "rosenbrock_variant", d, b(-30, 30, d), 0.0, rosenbrock_variant, np.ones(d)),
        BenchmarkSpec(5, "step", d, b(-100, 100, d), 0.0, step, np.zeros(d)),
        BenchmarkSpec(6, "schwefel_2_26", d, b(-500, 500, d), -7286.2, schwefel_2_26, None, True),
        BenchmarkSpec(7, "rastrigin", d, b(-10, 10, d), 0.0, rastrigin, np.zeros(d), True),
        BenchmarkSpec(8, "ackley", d, b(-20, 20, d), 0.0, ackley, np.zeros(d), True),
        BenchmarkSpec(9, "griewank", d, b(-600, 600, d), 0.0, griewank, np.zeros(d), True),
        BenchmarkSpec(10, "michalewicz", d, b(0, np.pi, d), -29.6248, michalewicz, None, True),
        BenchmarkSpec(
            11, "six_hump_camel", 2, b(-5, 5, 2), -1.0316, six_hump_camel,
            np.array([0.08984201, -0.71265640]), True,
        ),
    ]
    if f12_params is None:
        f12 = _needs_constants
    else:
        p = np.asarray(f12_params["p"], dtype=float)
        q = np.asarray(f12_params["q"], dtype=float)
        if p.shape != (6,) or q.shape != (6,):
            raise ValueError("function 12 constants p and q must each have length 6")

        def f12(x, p=p, q=q):
            return parameter_fit(x, p, q)

    specs.append(BenchmarkSpec(12, "parameter_fit", 6, b(0, 10, 6), 0.0, f12, None, True))
    return specs


def get(function_id: int, f12_params: Optional[dict] = None) -> BenchmarkSpec:
    if not 1 <= int(function_id) <= 12:
        raise KeyError(f"unknown benchmark function id {function_id}; valid ids are 1-12")
    return registry(f12_params)[int(function_id) - 1]
