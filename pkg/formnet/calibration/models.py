"""
Pydantic models for calibration specimens and disturbance estimates.
"""

import math
from typing import List

from pydantic import BaseModel, ConfigDict, model_validator

from formnet.jsonio import FORMAT_VERSION
from formnet.surfaces import OPLField, SurfaceGrid


class CalibrationSpecimen(BaseModel):
    """Exactly known defocus cap A·(x² + y²) and its measurement by the disturbed system."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    amplitude_nm: float
    topo: SurfaceGrid
    measured: OPLField


class DisturbanceEstimate(BaseModel):
    """Estimated ĝ_k and θ̂_{k,j} (offsets[k][i] ↔ Noll j = 2 + i) with per-channel residual RMS in nm."""

    model_config = ConfigDict(frozen=True)

    format_version: int = FORMAT_VERSION
    gains: List[float]
    offsets: List[List[float]]
    residual_rms: List[float]

    @model_validator(mode="after")
    def _check(self) -> "DisturbanceEstimate":
        K = len(self.gains)
        if len(self.offsets) != K or len(self.residual_rms) != K:
            raise ValueError("gains, offsets and residual_rms need one entry per channel")
        values = list(self.gains) + [c for row in self.offsets for c in row] + list(self.residual_rms)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("estimate entries must be finite")
        if any(r < 0 for r in self.residual_rms):
            raise ValueError("residual RMS must be >= 0")
        return self

    @property
    def K(self) -> int:
        return len(self.gains)

    @property
    def j_dist(self) -> int:
        return 1 + (len(self.offsets[0]) if self.offsets else 0)

    def offset_indices(self) -> List[int]:
        return list(range(2, self.j_dist + 1))

    @classmethod
    def zeros(cls, K: int, j_dist: int = 1) -> "DisturbanceEstimate":
        return cls(
            gains=[0.0] * K,
            offsets=[[0.0] * max(j_dist - 1, 0) for _ in range(K)],
            residual_rms=[0.0] * K,
        )
