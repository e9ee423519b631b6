"""
Surrogate forward model: per-channel optical path length differences of a topography.

Per channel k, at pixels inside (mask_k ∩ disc):
    L_k = a_k · T' + beta · T'^2,   a_k = 2 / cos(theta_k)
where T' is the bilinear sample of T at (x − dx_k, y − dy_k), zero once the sample point leaves the disc.
"""

import logging
from typing import Tuple

import numpy as np
from scipy.ndimage import map_coordinates

from formnet.errors import InvalidShapeError
from formnet.surfaces import OPLField, SurfaceGrid, circle_mask, disc_mask, pixel_coordinates

from .designs import design_topography
from .models import ChannelConfig, ForwardConfig

logger = logging.getLogger(__name__)


def channel_masks(cfg: ForwardConfig) -> np.ndarray:
    """K×M×M boolean masks (channel mask ∩ disc)."""
    inside = disc_mask(cfg.M)
    return np.stack([circle_mask(cfg.M, ch.mask_center, ch.mask_radius) & inside for ch in cfg.channels])


def sheared_sample(values: np.ndarray, shear: Tuple[float, float]) -> np.ndarray:
    """Bilinear sample of a grid at (x − dx, y − dy) for every pixel center; 0 outside the disc."""
    M = values.shape[0]
    x, y = pixel_coordinates(M)
    dx, dy = shear
    xs = x - dx
    ys = y - dy
    if dx == 0.0 and dy == 0.0:
        sampled = values.astype(np.float64, copy=True)
    else:
        cols = (xs * M + M - 1.0) / 2.0
        rows = (ys * M + M - 1.0) / 2.0
        sampled = map_coordinates(values, [rows, cols], order=1, mode="constant", cval=0.0, prefilter=False)
    sampled[xs * xs + ys * ys > 1.0] = 0.0
    return sampled


def opd_law(gain: float, beta: float, sample: np.ndarray) -> np.ndarray:
    return gain * sample + beta * sample * sample


def delta_opd_law(gain: float, beta: float, design_sample: np.ndarray, delta_sample: np.ndarray) -> np.ndarray:
    """Expanded difference a·ΔT' + beta·(2·T_d'·ΔT' + ΔT'^2)."""
    return gain * delta_sample + beta * (2.0 * design_sample * delta_sample + delta_sample * delta_sample)


def _check_size(T: SurfaceGrid, cfg: ForwardConfig) -> None:
    if T.M != cfg.M:
        raise InvalidShapeError(f"Topography grid M={T.M} does not match forward config M={cfg.M}")


def _channel_opd(T: np.ndarray, ch: ChannelConfig, beta: float) -> np.ndarray:
    return opd_law(ch.gain, beta, sheared_sample(T, ch.shear))


def forward_opd(T: SurfaceGrid, cfg: ForwardConfig) -> OPLField:
    """Optical path length differences L of topography T, one image per channel."""
    _check_size(T, cfg)
    masks = channel_masks(cfg)
    values = np.stack([_channel_opd(T.values, ch, cfg.beta) for ch in cfg.channels])
    return OPLField(values=np.where(masks, values, 0.0), mask=masks)


def delta_opd_perfect(delta_T: SurfaceGrid, cfg: ForwardConfig) -> OPLField:
    """ΔL = forward_opd(T_d + ΔT) − forward_opd(T_d) for the perfect system, T_d from cfg.design."""
    _check_size(delta_T, cfg)
    design = design_topography(cfg.design, cfg.M).values
    masks = channel_masks(cfg)
    channels = []
    for ch in cfg.channels:
        design_sample = sheared_sample(design, ch.shear)
        delta_sample = sheared_sample(delta_T.values, ch.shear)
        channels.append(delta_opd_law(ch.gain, cfg.beta, design_sample, delta_sample))
    return OPLField(values=np.where(masks, np.stack(channels), 0.0), mask=masks)
