"""
Pydantic models for datasets and normalization statistics.
"""

import math
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from formnet.jsonio import FORMAT_VERSION, sha256_hex
from formnet.optics import ForwardConfig, channel_masks
from formnet.surfaces import OPLField, SurfaceGrid, disc_mask

from .config import (
    SAMPLING_COEFF_BOUND,
    SAMPLING_J_MAX,
    SAMPLING_J_MIN,
    SAMPLING_RMS_MAX_NM,
    SAMPLING_RMS_MIN_NM,
    STORAGE_DTYPE,
)


class SamplingConfig(BaseModel):
    """Distribution of the difference topographies ΔT."""

    model_config = ConfigDict(frozen=True)

    j_min: int = SAMPLING_J_MIN
    j_max: int = SAMPLING_J_MAX
    rms_min_nm: float = SAMPLING_RMS_MIN_NM
    rms_max_nm: float = SAMPLING_RMS_MAX_NM
    coeff_bound: float = SAMPLING_COEFF_BOUND

    @model_validator(mode="after")
    def _check(self) -> "SamplingConfig":
        if not 1 <= self.j_min <= self.j_max:
            raise ValueError(f"Need 1 <= j_min <= j_max, got {self.j_min}, {self.j_max}")
        if not 0 < self.rms_min_nm <= self.rms_max_nm:
            raise ValueError("Need 0 < rms_min_nm <= rms_max_nm")
        if self.coeff_bound < 0:
            raise ValueError("coeff_bound must be >= 0")
        return self


class DatasetMeta(BaseModel):
    model_config = ConfigDict(frozen=True)

    format_version: int = FORMAT_VERSION
    design: str
    seed: int
    n_samples: int
    M: int
    K: int
    forward_config: ForwardConfig
    forward_config_digest: str
    sampling: SamplingConfig
    content_digest: str
    parent_digest: Optional[str] = None
    source_indices: Optional[List[int]] = None


def content_digest(inputs: np.ndarray, targets: np.ndarray) -> str:
    payload = inputs.astype(STORAGE_DTYPE, copy=False).tobytes(order="C") + targets.astype(
        STORAGE_DTYPE, copy=False
    ).tobytes(order="C")
    return sha256_hex(payload)


class Dataset(BaseModel):
    """inputs N×K×M×M (ΔL, nm) and targets N×M×M (ΔT, nm), binary32."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    inputs: np.ndarray
    targets: np.ndarray
    meta: DatasetMeta

    @field_validator("inputs", "targets")
    @classmethod
    def _as_float32(cls, v: np.ndarray) -> np.ndarray:
        return np.ascontiguousarray(v, dtype=np.float32)

    @model_validator(mode="after")
    def _check_shapes(self) -> "Dataset":
        N, K, M = self.meta.n_samples, self.meta.K, self.meta.M
        if self.inputs.shape != (N, K, M, M):
            raise ValueError(f"inputs shape {self.inputs.shape} != {(N, K, M, M)}")
        if self.targets.shape != (N, M, M):
            raise ValueError(f"targets shape {self.targets.shape} != {(N, M, M)}")
        return self

    @property
    def N(self) -> int:
        return self.meta.n_samples

    @property
    def digest(self) -> str:
        return self.meta.content_digest

    def input_masks(self) -> np.ndarray:
        return channel_masks(self.meta.forward_config)

    def target_mask(self) -> np.ndarray:
        return disc_mask(self.meta.M)

    def delta_opd(self, i: int) -> OPLField:
        return OPLField(values=self.inputs[i].astype(np.float64), mask=self.input_masks())

    def delta_topography(self, i: int) -> SurfaceGrid:
        return SurfaceGrid(values=self.targets[i].astype(np.float64))


class NormStats(BaseModel):
    """Training-set statistics in nm: per input channel (in-mask pixels) and for targets (in-disc pixels)."""

    model_config = ConfigDict(frozen=True)

    input_mean: List[float]
    input_std: List[float]
    target_mean: float
    target_std: float

    @model_validator(mode="after")
    def _check(self) -> "NormStats":
        if len(self.input_mean) != len(self.input_std):
            raise ValueError("input_mean and input_std need one entry per channel")
        for s in list(self.input_std) + [self.target_std]:
            if not (math.isfinite(s) and s > 0):
                raise ValueError(f"standard deviations must be finite and > 0, got {s}")
        return self

    @property
    def K(self) -> int:
        return len(self.input_mean)
