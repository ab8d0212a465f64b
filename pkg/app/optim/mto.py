"""
Mother Tree Optimization and its climate-change variant.

Agents are ranked by ascending loss, rank 1 being the Top Mother Tree (TMT).
The remaining ranks are split into the First Partially Connected Trees
(FPCT), the Fully Connected Trees (FCT) and the Last Partially Connected
Trees (LPCT), each moving by a weighted pull towards better-ranked agents.
Ranks are 1-based throughout this module to match the group arithmetic.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple, Union

import numpy as np

from app import logger
from app.exceptions import ConfigurationError, InternalError
from app.models.optimizer import MtoConfig
from app.optim.core import (Candidate, ObjectiveSpec, OptimizationResult,
                            Population, RngStream, Vector, clamp,
                            init_population, new_candidate)


class Group(str, Enum):
    tmt = "tmt"
    fpct = "fpct"
    fct = "fct"
    lpct = "lpct"


@dataclass(frozen=True)
class GroupTopology:
    n_t: int
    n_os: int
    n_frs: int
    n_nfrs: int
    n_fcts: int
    n_pcts: int
    tmt: Tuple[int, int]
    fpct: Tuple[int, int]
    fct: Tuple[int, int]
    lpct: Tuple[int, int]

    def ranges(self) -> Dict[Group, Tuple[int, int]]:
        return {Group.tmt: self.tmt, Group.fpct: self.fpct, Group.fct: self.fct, Group.lpct: self.lpct}

    def group_of(self, rank: int) -> Group:
        for group, (first, last) in self.ranges().items():
            if first <= rank <= last:
                return group
        raise InternalError(f"rank {rank} is outside [1, {self.n_t}]")


def group_topology(n_t: int) -> GroupTopology:
    if n_t < 6 or n_t % 2:
        raise ConfigurationError(f"population size must be an even integer >= 6, got {n_t}")

    half = n_t // 2
    n_frs = half + 1
    return GroupTopology(
        n_t=n_t,
        n_os=half - 1,
        n_frs=n_frs,
        n_nfrs=n_t - n_frs,
        n_fcts=3,
        n_pcts=n_t - 4,
        tmt=(1, 1),
        fpct=(2, half - 1),
        fct=(half, half + 2),
        lpct=(half + 3, n_t),
    )


def _snapshot(ranked: Union[Population, np.ndarray]) -> np.ndarray:
    if isinstance(ranked, Population):
        return ranked.positions()
    return np.asarray(ranked, dtype=float)


def _check_rank(n: int, group: Group, topology: GroupTopology):
    first, last = topology.ranges()[group]
    if not first <= n <= last:
        raise InternalError(f"rank {n} is outside the {group.value} range [{first}, {last}]")


def _pull(snapshot: np.ndarray, n: int, first: int, last: int) -> Vector:
    x_n = snapshot[n - 1]
    total = np.zeros_like(x_n)
    for i in range(first, last + 1):
        total += (snapshot[i - 1] - x_n) / (n - i + 1)
    return x_n + total


def update_tmt(best: Candidate, cfg: MtoConfig, spec: ObjectiveSpec, rng: RngStream) -> Candidate:
    """
    Two exploitation moves of the top agent, first by the root signal then
    by the network step, each drawing a fresh direction. A move is kept only
    when it does not increase the loss.
    """
    for step in (cfg.delta, cfg.mfn_delta):
        proposal = clamp(best.position + step * rng.direction(spec.dimension), spec)
        loss = spec.evaluate(proposal)
        if loss <= best.loss:
            best.position = proposal
            best.loss = loss
            best.evaluated = True
    return best


def update_fpct(n: int, ranked, cfg: MtoConfig, spec: ObjectiveSpec) -> Vector:
    snapshot = _snapshot(ranked)
    _check_rank(n, Group.fpct, group_topology(snapshot.shape[0]))
    return clamp(_pull(snapshot, n, 1, n - 1), spec)


def update_fct(n: int, ranked, cfg: MtoConfig, spec: ObjectiveSpec) -> Vector:
    snapshot = _snapshot(ranked)
    topology = group_topology(snapshot.shape[0])
    _check_rank(n, Group.fct, topology)
    return clamp(_pull(snapshot, n, n - topology.n_os, n - 1), spec)


def update_lpct(n: int, ranked, cfg: MtoConfig, spec: ObjectiveSpec) -> Vector:
    snapshot = _snapshot(ranked)
    topology = group_topology(snapshot.shape[0])
    _check_rank(n, Group.lpct, topology)
    return clamp(_pull(snapshot, n, n - topology.n_os, topology.n_t - topology.n_os), spec)


def apply_defense(position: Vector, cfg: MtoConfig, spec: ObjectiveSpec, rng: RngStream) -> Vector:
    return clamp(position + cfg.phi * rng.direction(spec.dimension), spec)


def mto_sweep(population: Population, cfg: MtoConfig, spec: ObjectiveSpec, rng: RngStream) -> Population:
    """
    One kin recognition signal: every agent moves by its group rule, reading
    the positions ranked at the start of the sweep, then the population is
    re-ranked.
    """
    topology = group_topology(len(population))
    ranked = population.ranked
    snapshot = population.positions()

    update_tmt(ranked[0], cfg, spec, rng)
    ranked[0].stalled = False

    for n in range(2, topology.n_t + 1):
        candidate = ranked[n - 1]
        group = topology.group_of(n)
        defended = False

        if group == Group.fpct:
            if cfg.defense and candidate.stalled:
                position = apply_defense(candidate.position, cfg, spec, rng)
                defended = True
            else:
                position = update_fpct(n, snapshot, cfg, spec)
        elif group == Group.fct:
            position = update_fct(n, snapshot, cfg, spec)
        else:
            position = update_lpct(n, snapshot, cfg, spec)

        previous = candidate.move_to(position, spec)
        # the flag only describes a failed FPCT move in the sweep just done
        candidate.stalled = group == Group.fpct and not defended and candidate.loss >= previous

    return population.rank()


def climate_event(population: Population, cfg: MtoConfig, spec: ObjectiveSpec, rng: RngStream) -> Population:
    """
    Distorts the best (1 - el) share of the agents by a component-wise random
    factor in [0, 1] and replaces the rest with fresh random agents.
    """
    size = len(population)
    n_replace = math.floor(cfg.el * size + 1e-9)
    n_keep = size - n_replace

    for index in population.ranking[:n_keep]:
        candidate = population.members[index]
        candidate.position = clamp(candidate.position * rng.random(spec.dimension), spec)
        candidate.stalled = False
        candidate.evaluate(spec)

    for index in population.ranking[n_keep:]:
        population.members[index] = new_candidate(spec, rng)

    logger.debug(f"Climate event on {spec.name}: {n_keep} distorted, {n_replace} replaced")
    return population.rank()


def run_mto(spec: ObjectiveSpec, cfg: MtoConfig, rng: RngStream) -> OptimizationResult:
    name = "mto" if cfg.is_plain else "mtocl"
    evaluations_before = spec.evaluations

    population = init_population(cfg.n_t, spec, rng)
    initial_loss = population.best.loss
    epochs = cfg.epoch_lengths()

    logger.debug(f"{name.upper()} started on {spec.name} (d={spec.dimension}, "
                 f"n_t={cfg.n_t}, epochs={epochs})")

    trace = []
    events = 0
    for epoch, sweeps in enumerate(epochs):
        for _ in range(sweeps):
            mto_sweep(population, cfg, spec, rng)
            trace.append(population.best.loss)

        if epoch < len(epochs) - 1:
            climate_event(population, cfg, spec, rng)
            events += 1

    best = population.best
    logger.debug(f"{name.upper()} finished on {spec.name}, best loss {best.loss:.6g}")

    return OptimizationResult(
        optimizer=name,
        best_position=best.position.copy(),
        best_loss=best.loss,
        initial_best_loss=initial_loss,
        trace=trace,
        evaluations=spec.evaluations - evaluations_before,
        climate_events=events,
    )
