import math
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator

WEIGHT_BOUND = 5.0


class NetworkTopology(BaseModel):
    input_size: int = Field(gt=0)
    hidden_sizes: List[int] = []
    # two sigmoid output nodes, one per class
    output_size: int = Field(2, ge=2, le=2)
    hidden_activation: str = "relu"
    output_activation: str = "sigmoid"

    model_config = ConfigDict(frozen=True, json_schema_extra={
        "example": {"input_size": 9, "hidden_sizes": [9, 5], "output_size": 2}
    })

    @field_validator("hidden_sizes")
    @classmethod
    def validate_hidden_sizes(cls, v: List[int]) -> List[int]:
        if any(size < 1 for size in v):
            raise ValueError("hidden layer sizes must be positive")
        return v

    @classmethod
    def default_for(cls, input_size: int, hidden_sizes: Optional[List[int]] = None) -> "NetworkTopology":
        if hidden_sizes is None:
            hidden_sizes = [input_size, math.ceil(input_size / 2)]
        return cls(input_size=input_size, hidden_sizes=hidden_sizes)

    @property
    def layer_sizes(self) -> List[int]:
        return [self.input_size, *self.hidden_sizes, self.output_size]

    def layer_shapes(self) -> List[Tuple[int, int]]:
        sizes = self.layer_sizes
        return list(zip(sizes[:-1], sizes[1:]))

    @property
    def parameter_count(self) -> int:
        return sum(fan_in * fan_out + fan_out for fan_in, fan_out in self.layer_shapes())
