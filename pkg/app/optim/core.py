from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from app.exceptions import ConfigurationError, DimensionError

Vector = np.ndarray


class RngStream:
    """
    Seeded random stream backed by a numpy Generator.

    Child streams are spawned from the SeedSequence, so spawning in a fixed
    order gives the same draws regardless of how the children are scheduled.
    """

    def __init__(self, seed: Union[int, np.random.SeedSequence]):
        if isinstance(seed, np.random.SeedSequence):
            self.seed_sequence = seed
        else:
            self.seed_sequence = np.random.SeedSequence(int(seed))
        self.seed = int(self.seed_sequence.entropy)
        self.generator = np.random.default_rng(self.seed_sequence)

    def spawn(self, n: int) -> List["RngStream"]:
        return [RngStream(child) for child in self.seed_sequence.spawn(n)]

    def random(self, size=None):
        return self.generator.random(size)

    def uniform(self, low, high, size=None):
        return self.generator.uniform(low, high, size)

    def direction(self, d: int) -> Vector:
        # random sign times random magnitude, every component in [-1, 1]
        sign = 2.0 * np.round(self.generator.random(d)) - 1.0
        return sign * self.generator.random(d)

    def random_state(self) -> int:
        """An int seed for libraries that take a `random_state`."""
        return int(self.generator.integers(0, 2**31 - 1))


@dataclass
class ObjectiveSpec:
    dimension: int
    lower_bound: Vector
    upper_bound: Vector
    evaluate_fn: Callable[[Vector], float]
    name: str = "objective"
    evaluations: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise ConfigurationError("dimension must be a positive integer")
        self.lower_bound = _broadcast_bound(self.lower_bound, self.dimension, "lower_bound")
        self.upper_bound = _broadcast_bound(self.upper_bound, self.dimension, "upper_bound")
        if np.any(self.lower_bound > self.upper_bound):
            raise ConfigurationError("lower_bound must not exceed upper_bound")

    @classmethod
    def box(cls, dimension: int, low: float, high: float, evaluate_fn, name: str = "objective") -> "ObjectiveSpec":
        return cls(
            dimension=dimension,
            lower_bound=np.full(dimension, float(low)),
            upper_bound=np.full(dimension, float(high)),
            evaluate_fn=evaluate_fn,
            name=name,
        )

    @property
    def width(self) -> Vector:
        return self.upper_bound - self.lower_bound

    def evaluate(self, position: Vector) -> float:
        check_dimension(position, self.dimension)
        self.evaluations += 1
        return float(self.evaluate_fn(position))

    def random_position(self, rng: RngStream) -> Vector:
        return self.lower_bound + rng.random(self.dimension) * self.width


def _broadcast_bound(bound, dimension: int, name: str) -> Vector:
    arr = np.asarray(bound, dtype=float)
    if arr.ndim == 0:
        return np.full(dimension, float(arr))
    if arr.shape != (dimension,):
        raise DimensionError(f"{name} has the wrong length", dimension, arr.shape[0])
    return arr.copy()


def check_dimension(vector: Vector, dimension: int, name: str = "position"):
    length = np.shape(vector)[0] if np.ndim(vector) else 0
    if np.ndim(vector) != 1 or length != dimension:
        raise DimensionError(f"{name} has the wrong length", dimension, length)


def clamp(position: Sequence[float], spec: ObjectiveSpec) -> Vector:
    position = np.asarray(position, dtype=float)
    check_dimension(position, spec.dimension)
    return np.clip(position, spec.lower_bound, spec.upper_bound)


def within_bounds(position: Vector, spec: ObjectiveSpec) -> bool:
    return bool(np.all(position >= spec.lower_bound) and np.all(position <= spec.upper_bound))


@dataclass
class Candidate:
    position: Vector
    loss: float = float("inf")
    evaluated: bool = False
    # set when the last group update did not improve the loss
    stalled: bool = False

    def evaluate(self, spec: ObjectiveSpec) -> "Candidate":
        self.loss = spec.evaluate(self.position)
        self.evaluated = True
        return self

    def move_to(self, position: Vector, spec: ObjectiveSpec) -> float:
        """Moves to `position`, re-evaluates and returns the previous loss."""
        previous = self.loss
        self.position = position
        self.evaluate(spec)
        return previous


@dataclass
class Population:
    members: List[Candidate]
    ranking: List[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.ranking:
            self.ranking = list(range(len(self.members)))

    def __len__(self):
        return len(self.members)

    def rank(self) -> "Population":
        # stable sort over the previous ranking breaks ties by prior rank
        self.ranking = sorted(self.ranking, key=lambda i: self.members[i].loss)
        return self

    @property
    def ranked(self) -> List[Candidate]:
        return [self.members[i] for i in self.ranking]

    @property
    def best(self) -> Candidate:
        return self.members[self.ranking[0]]

    def positions(self) -> np.ndarray:
        """Positions stacked in rank order, row 0 is rank 1."""
        return np.vstack([c.position for c in self.ranked])

    def losses(self) -> List[float]:
        return [c.loss for c in self.ranked]


@dataclass
class StopCriterion:
    max_iterations: int

    def __post_init__(self):
        if self.max_iterations < 0:
            raise ConfigurationError("max_iterations must be non-negative")

    def reached(self, iteration: int) -> bool:
        return iteration >= self.max_iterations


@dataclass
class OptimizationResult:
    optimizer: str
    best_position: Vector
    best_loss: float
    initial_best_loss: float
    trace: List[float]
    evaluations: int
    climate_events: int = 0

    @property
    def iterations(self) -> int:
        return len(self.trace)


def init_population(n: int, spec: ObjectiveSpec, rng: RngStream) -> Population:
    if n < 2:
        raise ConfigurationError(f"population size must be at least 2, got {n}")

    members = [Candidate(position=spec.random_position(rng)) for _ in range(n)]
    for member in members:
        member.evaluate(spec)

    return Population(members=members).rank()


def new_candidate(spec: ObjectiveSpec, rng: RngStream, position: Optional[Vector] = None) -> Candidate:
    candidate = Candidate(position=spec.random_position(rng) if position is None else position)
    return candidate.evaluate(spec)
