"""
Surrogate tilted-wave interferometer: design topographies, per-channel optical path length
differences, and the disturbance model of a non-perfect system.
"""

from .designs import DesignTopography, default_forward_config, design_topography, get_design
from .disturbance import apply_disturbance, offset_fields, sample_disturbance
from .forward import (
    channel_masks,
    delta_opd_law,
    delta_opd_perfect,
    forward_opd,
    opd_law,
    sheared_sample,
)
from .models import ChannelConfig, DesignId, Disturbance, ForwardConfig
from .storage import load_disturbance, load_forward_config, save_disturbance, save_forward_config

__all__ = [
    "ChannelConfig",
    "DesignId",
    "Disturbance",
    "ForwardConfig",
    "DesignTopography",
    "get_design",
    "design_topography",
    "default_forward_config",
    "channel_masks",
    "sheared_sample",
    "opd_law",
    "delta_opd_law",
    "forward_opd",
    "delta_opd_perfect",
    "apply_disturbance",
    "offset_fields",
    "sample_disturbance",
    "save_forward_config",
    "load_forward_config",
    "save_disturbance",
    "load_disturbance",
]
