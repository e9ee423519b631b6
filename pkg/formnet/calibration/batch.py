"""
Disturbed and hybrid network inputs for a stack of difference topographies (T_s = T_d + ΔT).
"""

from typing import Callable

import numpy as np

from formnet.optics import Disturbance, ForwardConfig, design_topography
from formnet.surfaces import OPLField, SurfaceGrid

from .hybrid import disturbed_delta_opd, hybrid_delta_opd
from .models import DisturbanceEstimate


def _map_specimens(targets: np.ndarray, cfg: ForwardConfig, fn: Callable[[SurfaceGrid], OPLField]) -> np.ndarray:
    design = design_topography(cfg.design, cfg.M)
    out = np.zeros((targets.shape[0], cfg.K, cfg.M, cfg.M), dtype=np.float32)
    for i, delta in enumerate(targets):
        out[i] = fn(design + SurfaceGrid(values=delta)).values
    return out


def disturbed_inputs(targets: np.ndarray, cfg: ForwardConfig, d_true: Disturbance) -> np.ndarray:
    """[N, M, M] ΔT → [N, K, M, M] uncalibrated ΔL."""
    return _map_specimens(targets, cfg, lambda T_s: disturbed_delta_opd(T_s, cfg, d_true))


def hybrid_inputs(targets: np.ndarray, cfg: ForwardConfig, d_true: Disturbance, est: DisturbanceEstimate) -> np.ndarray:
    """[N, M, M] ΔT → [N, K, M, M] hybrid ΔL."""
    return _map_specimens(targets, cfg, lambda T_s: hybrid_delta_opd(T_s, cfg, d_true, est))
