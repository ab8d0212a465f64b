from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class OptimizerName(str, Enum):
    pso = "pso"
    mto = "mto"
    mtocl = "mtocl"


class PsoConfig(BaseModel):
    chi: float = Field(0.72984, gt=0, lt=1, description="constriction factor")
    c1: float = Field(2.02, gt=0, description="cognitive acceleration coefficient")
    c2: float = Field(2.02, gt=0, description="social acceleration coefficient")
    n: int = Field(20, ge=2, description="particle count")
    iters: int = Field(500, ge=0)
    # update the global best inside the particle loop instead of after the sweep
    strict_order: bool = False

    model_config = ConfigDict(frozen=True, json_schema_extra={
        "example": {"chi": 0.72984, "c1": 2.02, "c2": 2.02, "n": 20, "iters": 500}
    })


class MtoConfig(BaseModel):
    n_t: int = Field(20, description="population size N_T")
    delta: float = Field(1.0, ge=0, description="root signal step")
    mfn_delta: float = Field(0.3, ge=0, description="mycorrhizal fungi network step")
    phi: float = Field(1.0, ge=0, description="defense deviation step")
    defense: bool = True
    cl: int = Field(5, ge=0, description="climate change events, 0 for plain MTO")
    el: float = Field(0.2, ge=0, lt=1, description="elimination fraction")
    iters: int = Field(500, ge=0, description="total sweep budget")
    k_rs: Optional[int] = Field(None, ge=0, description="sweeps per epoch, derived from iters when unset")

    model_config = ConfigDict(frozen=True, json_schema_extra={
        "example": {
            "n_t": 20, "delta": 1.0, "mfn_delta": 0.3, "phi": 1.0,
            "cl": 5, "el": 0.2, "iters": 500,
        }
    })

    @field_validator("n_t")
    @classmethod
    def validate_n_t(cls, v: int) -> int:
        if v < 6 or v % 2:
            raise ValueError("n_t must be an even integer >= 6")
        return v

    @property
    def is_plain(self) -> bool:
        return self.cl == 0

    def epoch_lengths(self) -> List[int]:
        """
        Sweep count of every epoch; a climate event separates consecutive epochs.

        Without an explicit k_rs the iters budget is split evenly over cl + 1
        epochs and the remainder goes to the last one.
        """
        epochs = self.cl + 1
        if self.k_rs is not None:
            return [self.k_rs] * epochs

        base, remainder = divmod(self.iters, epochs)
        lengths = [base] * epochs
        lengths[-1] += remainder
        return lengths


class OptimizerSettings(BaseModel):
    pso: PsoConfig = PsoConfig()
    mto: MtoConfig = MtoConfig()

    model_config = ConfigDict(frozen=True)

    def for_optimizer(self, name: OptimizerName):
        if name == OptimizerName.pso:
            return self.pso
        if name == OptimizerName.mto:
            return self.mto.model_copy(update={"cl": 0})
        return self.mto
