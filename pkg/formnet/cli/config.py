"""
Scale presets and pipeline constants for the command-line surface.
"""

import os
from typing import Dict, Optional

from pydantic import BaseModel, ConfigDict

from formnet.errors import InvalidConfigError
from formnet.network import TrainConfig, UNetConfig
from formnet.network.config import DEFAULT_DROP_FACTOR, DEFAULT_DROP_PERIOD, DEFAULT_LR0, DEFAULT_WEIGHT_DECAY
from formnet.optics import DesignId


class DesignTraining(BaseModel):
    """Per-design optimizer settings of a scale preset."""

    model_config = ConfigDict(frozen=True)

    batch_size: int
    lr0: float = DEFAULT_LR0
    drop_factor: float = DEFAULT_DROP_FACTOR
    drop_period: int = DEFAULT_DROP_PERIOD
    weight_decay: float = DEFAULT_WEIGHT_DECAY


def _positive(value: Optional[int], flag: str) -> Optional[int]:
    if value is not None and value < 1:
        raise InvalidConfigError(f"{flag} must be >= 1, got {value}")
    return value


class ScalePreset(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_samples: int
    depth: int
    base_width: int
    epochs: int
    training: Dict[DesignId, DesignTraining]

    def sample_count(self, n: Optional[int] = None) -> int:
        n = _positive(n, "n_samples")
        return self.n_samples if n is None else n

    def unet_config(
        self, in_channels: int, depth: Optional[int] = None, base_width: Optional[int] = None
    ) -> UNetConfig:
        depth = _positive(depth, "depth")
        base_width = _positive(base_width, "base_width")
        return UNetConfig(
            depth=self.depth if depth is None else depth,
            base_width=self.base_width if base_width is None else base_width,
            in_channels=in_channels,
        )

    def train_config(
        self,
        design: DesignId,
        seed: int,
        epochs: Optional[int] = None,
        batch_size: Optional[int] = None,
        lr0: Optional[float] = None,
        drop_factor: Optional[float] = None,
        drop_period: Optional[int] = None,
        weight_decay: Optional[float] = None,
    ) -> TrainConfig:
        """Preset values for `design`; any explicit argument wins, None falls back to the preset."""
        _positive(epochs, "epochs")
        _positive(batch_size, "batch_size")
        _positive(drop_period, "drop_period")
        base = self.training[design]
        overrides = {
            "epochs": epochs,
            "batch_size": batch_size,
            "lr0": lr0,
            "drop_factor": drop_factor,
            "drop_period": drop_period,
            "weight_decay": weight_decay,
        }
        values = {"epochs": self.epochs, **base.model_dump()}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return TrainConfig(seed=seed, **values)


SCALE_PRESETS: Dict[str, ScalePreset] = {
    "desk": ScalePreset(
        n_samples=4000,
        depth=3,
        base_width=16,
        epochs=10,
        training={
            DesignId.ASPHERE: DesignTraining(batch_size=32),
            DesignId.FREEFORM: DesignTraining(batch_size=32),
        },
    ),
    # ~22000 samples with the per-design optimizer settings of the long training runs
    "paper": ScalePreset(
        n_samples=22000,
        depth=3,
        base_width=16,
        epochs=15,
        training={
            DesignId.ASPHERE: DesignTraining(batch_size=8, drop_factor=0.5, drop_period=3, weight_decay=0.0005),
            DesignId.FREEFORM: DesignTraining(batch_size=64, drop_factor=0.75, drop_period=5, weight_decay=0.004),
        },
    ),
}

DEFAULT_SCALE = "desk"
DEFAULT_WORKERS = os.cpu_count() or 1
TEST_FRACTION = 0.10

# reproduce: held-out topographies for the disturbed / calibrated columns, heatmaps of the first few
DISTURBED_EVAL_SAMPLES = 30
HEATMAP_SAMPLES = 3

MANIFEST_FILE = "manifest.json"
MANIFEST_SUFFIX = ".manifest.json"


def get_preset(scale: str) -> ScalePreset:
    try:
        return SCALE_PRESETS[scale]
    except KeyError:
        raise InvalidConfigError(f"Unknown scale {scale!r}; expected one of {sorted(SCALE_PRESETS)}") from None
