"""
Versioned JSON files for forward configurations and disturbances.
"""

from pathlib import Path

from formnet.jsonio import read_model, write_model

from .models import Disturbance, ForwardConfig


def save_forward_config(cfg: ForwardConfig, path: Path) -> Path:
    return write_model(cfg, path)


def load_forward_config(path: Path) -> ForwardConfig:
    return read_model(path, ForwardConfig)


def save_disturbance(d: Disturbance, path: Path) -> Path:
    return write_model(d, path)


def load_disturbance(path: Path) -> Disturbance:
    return read_model(path, Disturbance)
