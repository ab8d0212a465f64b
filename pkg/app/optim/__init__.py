from typing import Union

from app.models.optimizer import MtoConfig, OptimizerName, OptimizerSettings, PsoConfig

from .core import (Candidate, ObjectiveSpec, OptimizationResult,  # noqa
                   Population, RngStream, StopCriterion, clamp,
                   init_population)
from .mto import run_mto
from .pso import run_pso


def run_optimizer(
    name: Union[OptimizerName, str],
    spec: ObjectiveSpec,
    settings: OptimizerSettings,
    rng: RngStream,
) -> OptimizationResult:
    name = OptimizerName(name)
    cfg: Union[PsoConfig, MtoConfig] = settings.for_optimizer(name)
    if name == OptimizerName.pso:
        return run_pso(spec, cfg, rng)
    return run_mto(spec, cfg, rng)


__all__ = [
    "Candidate",
    "ObjectiveSpec",
    "OptimizationResult",
    "Population",
    "RngStream",
    "StopCriterion",
    "clamp",
    "init_population",
    "run_optimizer",
    "run_pso",
    "run_mto",
]
