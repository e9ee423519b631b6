"""
Pydantic models for network configuration, training, and trained models.
"""

import math
from typing import List, Optional, Tuple

import torch
from pydantic import BaseModel, ConfigDict, Field, model_validator

from formnet.dataset import NormStats
from formnet.errors import InvalidConfigError
from formnet.jsonio import FORMAT_VERSION, sha256_hex

from .config import (
    ADAM_BETA1,
    ADAM_BETA2,
    ADAM_EPS,
    DEFAULT_BASE_WIDTH,
    DEFAULT_BATCH_SIZE,
    DEFAULT_DEPTH,
    DEFAULT_DROP_FACTOR,
    DEFAULT_DROP_PERIOD,
    DEFAULT_EPOCHS,
    DEFAULT_LR0,
    DEFAULT_WEIGHT_DECAY,
    KERNEL_SIZE,
    MODEL_DTYPE,
)


class UNetConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    depth: int = DEFAULT_DEPTH
    base_width: int = DEFAULT_BASE_WIDTH
    in_channels: int = 1
    out_channels: int = 1
    kernel: int = KERNEL_SIZE

    @model_validator(mode="after")
    def _check(self) -> "UNetConfig":
        if self.depth < 1 or self.base_width < 1 or self.in_channels < 1:
            raise ValueError("depth, base_width and in_channels must all be >= 1")
        if self.out_channels != 1 or self.kernel != KERNEL_SIZE:
            raise ValueError(f"Only out_channels=1 and kernel={KERNEL_SIZE} are supported")
        return self

    def width(self, stage: int) -> int:
        """Feature channels at encoder stage `stage` (stage == depth is the bottleneck)."""
        return self.base_width * 2**stage

    def check_spatial(self, size: int) -> None:
        if size % (2**self.depth) != 0:
            raise InvalidConfigError(f"Spatial size {size} is not divisible by 2^depth = {2**self.depth}")


class TrainConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    epochs: int = DEFAULT_EPOCHS
    batch_size: int = DEFAULT_BATCH_SIZE
    lr0: float = DEFAULT_LR0
    drop_factor: float = DEFAULT_DROP_FACTOR
    drop_period: int = DEFAULT_DROP_PERIOD
    weight_decay: float = DEFAULT_WEIGHT_DECAY
    seed: int = 0
    beta1: float = ADAM_BETA1
    beta2: float = ADAM_BETA2
    eps: float = ADAM_EPS

    @model_validator(mode="after")
    def _check(self) -> "TrainConfig":
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")
        if not self.lr0 > 0:
            raise ValueError(f"lr0 must be > 0, got {self.lr0}")
        if not 0 < self.drop_factor <= 1:
            raise ValueError(f"drop_factor must lie in (0, 1], got {self.drop_factor}")
        if self.drop_period < 1:
            raise ValueError(f"drop_period must be >= 1, got {self.drop_period}")
        if not (self.weight_decay >= 0 and math.isfinite(self.weight_decay)):
            raise ValueError(f"weight_decay must be finite and >= 0, got {self.weight_decay}")
        if not (0 <= self.beta1 < 1 and 0 <= self.beta2 < 1 and self.eps > 0):
            raise ValueError("Adam constants need 0 <= beta1, beta2 < 1 and eps > 0")
        return self


class EpochRecord(BaseModel):
    epoch: int
    loss: float
    lr: float
    # wall time stays out of model files so they are bitwise repeatable
    seconds: float = Field(default=0.0, exclude=True)


class TrainHistory(BaseModel):
    records: List[EpochRecord] = []

    def __len__(self) -> int:
        return len(self.records)

    @property
    def losses(self) -> List[float]:
        return [r.loss for r in self.records]


class LayerEntry(BaseModel):
    name: str
    shape: Tuple[int, ...]


class ModelHeader(BaseModel):
    """First line of a model file."""

    format_version: int = FORMAT_VERSION
    unet: UNetConfig
    train: Optional[TrainConfig] = None
    norm: NormStats
    history: Optional[TrainHistory] = None
    layers: List[LayerEntry]
    digest: str


class TrainedModel(BaseModel):
    """Network parameters together with everything needed to apply them."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    net: torch.nn.Module
    norm: NormStats
    unet: UNetConfig
    train: Optional[TrainConfig] = None
    history: Optional[TrainHistory] = None

    def parameter_bytes(self) -> bytes:
        return b"".join(
            t.detach().cpu().numpy().astype(MODEL_DTYPE, copy=False).tobytes(order="C")
            for t in self.net.state_dict().values()
        )

    def digest(self) -> str:
        return sha256_hex(self.parameter_bytes())
