"""
Canonical particle swarm optimization with a constriction factor.
"""
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from app import logger
from app.exceptions import ConfigurationError
from app.models.optimizer import PsoConfig
from app.optim.core import (ObjectiveSpec, OptimizationResult, RngStream,
                            StopCriterion, Vector, check_dimension, clamp)


@dataclass
class Particle:
    position: Vector
    velocity: Vector
    best_position: Vector
    best_loss: float
    loss: float

    @classmethod
    def spawn(cls, spec: ObjectiveSpec, rng: RngStream) -> "Particle":
        position = spec.random_position(rng)
        # initial speed is bounded by a tenth of the box width
        limit = spec.width / 10
        velocity = rng.uniform(-limit, limit)
        loss = spec.evaluate(position)
        return cls(position=position, velocity=velocity, best_position=position.copy(),
                   best_loss=loss, loss=loss)


def constriction_factor(c1: float, c2: float) -> float:
    phi = c1 + c2
    if phi <= 4:
        raise ConfigurationError("c1 + c2 must exceed 4 for a constriction factor")
    return 2.0 / abs(2.0 - phi - math.sqrt(phi * phi - 4.0 * phi))


def update_velocity(
    particle: Particle,
    global_best: Vector,
    cfg: PsoConfig,
    rng: Optional[RngStream] = None,
    coefficients: Optional[Tuple[float, float]] = None,
) -> Vector:
    """
    v' = chi * (v + c1 r1 (p_best - x) + c2 r2 (g_best - x))

    One scalar pair (r1, r2) is drawn per particle update; `coefficients`
    pins the pair.
    """
    d = particle.position.shape[0]
    check_dimension(particle.velocity, d, "velocity")
    check_dimension(particle.best_position, d, "local best")
    check_dimension(global_best, d, "global best")

    if coefficients is None:
        r1, r2 = rng.random(2)
    else:
        r1, r2 = coefficients

    cognitive = cfg.c1 * r1 * (particle.best_position - particle.position)
    social = cfg.c2 * r2 * (global_best - particle.position)
    return cfg.chi * (particle.velocity + cognitive + social)


def update_position(particle: Particle, velocity: Vector, spec: ObjectiveSpec) -> Vector:
    check_dimension(velocity, particle.position.shape[0], "velocity")
    return clamp(particle.position + velocity, spec)


def step(particle: Particle, global_best: Vector, cfg: PsoConfig, spec: ObjectiveSpec,
         rng: Optional[RngStream] = None, coefficients: Optional[Tuple[float, float]] = None) -> Particle:
    """Moves one particle and refreshes its loss and local best."""
    particle.velocity = update_velocity(particle, global_best, cfg, rng, coefficients)
    particle.position = update_position(particle, particle.velocity, spec)
    particle.loss = spec.evaluate(particle.position)
    if particle.loss < particle.best_loss:
        particle.best_loss = particle.loss
        particle.best_position = particle.position.copy()
    return particle


def run_pso(spec: ObjectiveSpec, cfg: PsoConfig, rng: RngStream) -> OptimizationResult:
    evaluations_before = spec.evaluations
    swarm = [Particle.spawn(spec, rng) for _ in range(cfg.n)]

    leader = min(range(cfg.n), key=lambda i: swarm[i].best_loss)
    gbest_position = swarm[leader].best_position.copy()
    gbest_loss = swarm[leader].best_loss
    initial_loss = gbest_loss

    logger.debug(f"PSO started on {spec.name} (d={spec.dimension}, n={cfg.n}, iters={cfg.iters})")

    stop = StopCriterion(cfg.iters)
    trace = []
    while not stop.reached(len(trace)):
        for particle in swarm:
            step(particle, gbest_position, cfg, spec, rng)
            if cfg.strict_order and particle.loss < gbest_loss:
                gbest_loss = particle.loss
                gbest_position = particle.position.copy()

        if not cfg.strict_order:
            # applied in particle-index order after the sweep
            for particle in swarm:
                if particle.loss < gbest_loss:
                    gbest_loss = particle.loss
                    gbest_position = particle.position.copy()

        trace.append(gbest_loss)

    logger.debug(f"PSO finished on {spec.name}, best loss {gbest_loss:.6g}")

    return OptimizationResult(
        optimizer="pso",
        best_position=gbest_position,
        best_loss=gbest_loss,
        initial_best_loss=initial_loss,
        trace=trace,
        evaluations=spec.evaluations - evaluations_before,
    )
