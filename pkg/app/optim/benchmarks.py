"""
Benchmark functions with a known global minimum of 0 at the origin.
"""
from typing import Callable, Dict, NamedTuple

import numpy as np

from app.optim.core import ObjectiveSpec


def sphere(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(np.sum(x**2))


def rastrigin(x) -> float:
    x = np.asarray(x, dtype=float)
    return float(10 * x.size + np.sum(x**2 - 10 * np.cos(2 * np.pi * x)))


def ackley(x) -> float:
    x = np.asarray(x, dtype=float)
    out = (
        -20 * np.exp(-0.2 * np.sqrt(np.mean(x**2)))
        - np.exp(np.mean(np.cos(2 * np.pi * x)))
        + 20
        + np.exp(1)
    )
    return float(max(out, 0.0))


class Benchmark(NamedTuple):
    function: Callable
    bound: float


BENCHMARKS: Dict[str, Benchmark] = {
    "sphere": Benchmark(sphere, 5.12),
    "rastrigin": Benchmark(rastrigin, 5.12),
    "ackley": Benchmark(ackley, 32.768),
}


def benchmark_objective(name: str, dimension: int) -> ObjectiveSpec:
    benchmark = BENCHMARKS[name]
    return ObjectiveSpec.box(dimension, -benchmark.bound, benchmark.bound, benchmark.function, name=name)
