"""Grey wolf optimizer, its bare-bones normal variant, and the exact update distribution."""
from .benchmarks import BenchmarkSpec, evaluate, registry
from .core import Bounds, RngStream, clamp_to_bounds, make_rng, normal, uniform
from .optimizers import OptimizerId, RunConfig, RunResult, run

__version__ = "0.1.0"
