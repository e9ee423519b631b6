"""
Network inputs built from disturbed measurements, with and without the calibrated model.
"""

import logging

import numpy as np

from formnet.errors import DegenerateGainError, InvalidShapeError
from formnet.optics import (
    Disturbance,
    ForwardConfig,
    apply_disturbance,
    design_topography,
    forward_opd,
    offset_fields,
)
from formnet.surfaces import OPLField, SurfaceGrid

from .config import MIN_GAIN_FACTOR
from .models import DisturbanceEstimate

logger = logging.getLogger(__name__)


def measure(T_s: SurfaceGrid, cfg: ForwardConfig, d_true: Disturbance) -> OPLField:
    """What the disturbed instrument reports for specimen T_s."""
    return apply_disturbance(forward_opd(T_s, cfg), d_true, cfg)


def disturbed_delta_opd(T_s: SurfaceGrid, cfg: ForwardConfig, d_true: Disturbance) -> OPLField:
    """Uncalibrated input: disturbed measurement minus the perfect-system model of the design."""
    measured = measure(T_s, cfg, d_true)
    design_opd = forward_opd(design_topography(cfg.design, cfg.M), cfg)
    return OPLField(values=measured.values - design_opd.values, mask=measured.mask)


def calibrated_delta_opd(measured: OPLField, cfg: ForwardConfig, est: DisturbanceEstimate) -> OPLField:
    """ΔL_k = [measured_k − (1 + ĝ_k)·L_d,k − Σ_j θ̂_{k,j} Z_j] / (1 + ĝ_k)."""
    if est.K != measured.K or cfg.K != measured.K:
        raise InvalidShapeError(f"Estimate ({est.K} channels) does not match field with {measured.K} channels")
    factors = 1.0 + np.asarray(est.gains, dtype=np.float64)
    for k, f in enumerate(factors):
        if abs(f) < MIN_GAIN_FACTOR:
            raise DegenerateGainError(f"Estimated gain factor 1 + g = {f} vanishes for channel {k}", channel=k)
    design_opd = forward_opd(design_topography(cfg.design, cfg.M), cfg).values
    offsets = offset_fields(est.offsets, est.offset_indices(), cfg.M)
    scale = factors[:, None, None]
    values = (measured.values - scale * design_opd - offsets) / scale
    return OPLField(values=np.where(measured.mask, values, 0.0), mask=measured.mask)


def hybrid_delta_opd(
    T_s: SurfaceGrid,
    cfg: ForwardConfig,
    d_true: Disturbance,
    est: DisturbanceEstimate,
) -> OPLField:
    """Hybrid-method input for specimen T_s: disturbed measurement corrected by the calibrated model."""
    return calibrated_delta_opd(measure(T_s, cfg, d_true), cfg, est)
