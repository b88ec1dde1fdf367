"""Experiment configuration (JSON, versioned, unknown fields rejected)."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .directions import DirectionModel
from .ppp import MAX_COUNT, ByCount, ByTime
from .rates import RateFunction
from .rng import MAX_SEED

__all__ = ["SCHEMA_VERSION", "ExperimentConfig", "load_config"]

SCHEMA_VERSION = 1


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class PowerLawRate(_Strict):
    kind: Literal["PowerLaw"]
    alpha: float = Field(gt=0.0, le=1.0)


class LogPowerRate(_Strict):
    kind: Literal["LogPower"]
    beta: float = Field(gt=0.0)


class ConstantRate(_Strict):
    kind: Literal["Constant"]
    level: float = Field(gt=0.0)


RateSpec = Annotated[Union[PowerLawRate, LogPowerRate, ConstantRate], Field(discriminator="kind")]


class CountStop(_Strict):
    by: Literal["count"]
    n: int = Field(ge=1, le=MAX_COUNT)


class TimeStop(_Strict):
    by: Literal["time"]
    T: float = Field(gt=0.0, allow_inf_nan=False)


StopSpec = Annotated[Union[CountStop, TimeStop], Field(discriminator="by")]


class ExperimentConfig(_Strict):
    """Everything needed to reproduce a Monte Carlo run."""

    schema_version: Literal[1] = SCHEMA_VERSION
    model: Literal["A", "B"]
    dimension: int = Field(ge=1)
    rate: RateSpec
    stop: StopSpec
    replicas: int = Field(ge=1)
    rho: float = Field(default=1.0, gt=0.0, allow_inf_nan=False)
    master_seed: int = Field(ge=0, le=MAX_SEED)
    outputs: str
    checkpoints: Optional[list[int]] = None
    trajectory_dumps: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def _check_model_dimension(self):
        if self.model == "B" and self.dimension < 2:
            raise ValueError("dimension: Model B needs dimension >= 2")
        return self

    @field_validator("checkpoints")
    @classmethod
    def _check_checkpoints(cls, v):
        if v is None:
            return v
        if any(c < 1 for c in v) or sorted(set(v)) != list(v):
            raise ValueError("checkpoints must be strictly increasing turn indices >= 1")
        return v

    def rate_function(self) -> RateFunction:
        return RateFunction(**self.rate.model_dump())

    def direction_model(self) -> DirectionModel:
        if self.model == "A":
            return DirectionModel.orthogonal(self.dimension)
        return DirectionModel.sphere(self.dimension)

    def stop_condition(self):
        if isinstance(self.stop, CountStop):
            return ByCount(self.stop.n)
        return ByTime(self.stop.T)

    @property
    def region(self) -> str:
        return "Box" if self.model == "A" else "PlanarDisc"

    def resolved_checkpoints(self) -> list[int]:
        """Explicit checkpoints, or powers of two up to the turn count (``ByCount`` only)."""
        if self.checkpoints is not None:
            return list(self.checkpoints)
        if isinstance(self.stop, CountStop):
            out, c = [], 1
            while c <= self.stop.n:
                out.append(c)
                c *= 2
            return out
        return []

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


def load_config(path) -> ExperimentConfig:
    """Read and validate a config file; raises ``pydantic.ValidationError`` or ``ValueError``."""
    text = Path(path).read_text(encoding="utf-8")
    data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    return ExperimentConfig.model_validate(data)
