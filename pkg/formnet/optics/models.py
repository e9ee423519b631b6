"""
Pydantic models for the surrogate interferometer: channels, forward configuration, disturbances.
"""

import math
from enum import Enum
from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from formnet.jsonio import FORMAT_VERSION, model_digest
from formnet.surfaces import MIN_GRID_SIZE

from .config import MAX_ABS_GAIN


class DesignId(str, Enum):
    ASPHERE = "asphere"
    FREEFORM = "freeform"


class ChannelConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    shear: Tuple[float, float] = (0.0, 0.0)
    theta: float = 0.0  # obliquity angle, rad
    mask_center: Tuple[float, float] = (0.0, 0.0)
    mask_radius: float = 1.0

    @field_validator("theta")
    @classmethod
    def _check_theta(cls, v: float) -> float:
        if not abs(v) < math.pi / 2:
            raise ValueError(f"|theta| must be < pi/2, got {v}")
        return v

    @field_validator("mask_radius")
    @classmethod
    def _check_radius(cls, v: float) -> float:
        if not v > 0:
            raise ValueError(f"mask_radius must be > 0, got {v}")
        return v

    @property
    def gain(self) -> float:
        """Obliquity gain a = 2 / cos(theta)."""
        return 2.0 / math.cos(self.theta)


class ForwardConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    format_version: int = FORMAT_VERSION
    M: int
    K: int
    beta: float
    channels: List[ChannelConfig]
    design: DesignId

    @model_validator(mode="after")
    def _check(self) -> "ForwardConfig":
        if self.M < MIN_GRID_SIZE:
            raise ValueError(f"M must be >= {MIN_GRID_SIZE}, got {self.M}")
        if self.K != len(self.channels) or self.K < 1:
            raise ValueError(f"K={self.K} does not match {len(self.channels)} channels")
        if not (self.beta >= 0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be finite and >= 0, got {self.beta}")
        return self

    def digest(self) -> str:
        return model_digest(self)


class Disturbance(BaseModel):
    """Per-channel gain g_k and additive Zernike offsets θ_{k,j} (nm), offsets[k][i] ↔ Noll j = 2 + i."""

    model_config = ConfigDict(frozen=True)

    format_version: int = FORMAT_VERSION
    gains: List[float]
    offsets: List[List[float]]

    @model_validator(mode="after")
    def _check(self) -> "Disturbance":
        if len(self.offsets) != len(self.gains):
            raise ValueError("offsets must have one row per channel")
        widths = {len(row) for row in self.offsets}
        if len(widths) > 1:
            raise ValueError("all channels must carry the same number of offset coefficients")
        for g in self.gains:
            if not (math.isfinite(g) and abs(g) < MAX_ABS_GAIN):
                raise ValueError(f"gain must be finite with |g| < {MAX_ABS_GAIN}, got {g}")
        if not all(math.isfinite(c) for row in self.offsets for c in row):
            raise ValueError("offset coefficients must be finite")
        return self

    @property
    def K(self) -> int:
        return len(self.gains)

    @property
    def j_dist(self) -> int:
        """Highest Noll index carried by the offsets (1 when there are none)."""
        return 1 + (len(self.offsets[0]) if self.offsets else 0)

    @classmethod
    def zeros(cls, K: int, j_dist: int = 1) -> "Disturbance":
        return cls(gains=[0.0] * K, offsets=[[0.0] * max(j_dist - 1, 0) for _ in range(K)])

    def offset_indices(self) -> List[int]:
        return list(range(2, self.j_dist + 1))
