"""
Versioned JSON files for disturbance estimates.
"""

from pathlib import Path

from formnet.jsonio import read_model, write_model

from .models import DisturbanceEstimate


def save_estimate(est: DisturbanceEstimate, path: Path) -> Path:
    return write_model(est, path)


def load_estimate(path: Path) -> DisturbanceEstimate:
    return read_model(path, DisturbanceEstimate)
