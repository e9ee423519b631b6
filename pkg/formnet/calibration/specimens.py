"""
Calibration set: known spherical (defocus-cap) specimens measured by the disturbed system.
"""

import logging
from typing import List, Sequence

import numpy as np

from formnet.errors import IdentifiabilityError
from formnet.optics import Disturbance, ForwardConfig, apply_disturbance, forward_opd
from formnet.surfaces import SurfaceGrid, disc_mask, pixel_coordinates

from .config import DEFAULT_AMPLITUDES_NM
from .models import CalibrationSpecimen

logger = logging.getLogger(__name__)


def defocus_cap(amplitude_nm: float, M: int) -> SurfaceGrid:
    """A·(x² + y²) inside the disc, 0 outside."""
    x, y = pixel_coordinates(M)
    return SurfaceGrid(values=np.where(disc_mask(M), amplitude_nm * (x * x + y * y), 0.0))


def check_identifiable(amplitudes: Sequence[float]) -> None:
    if len({abs(float(a)) for a in amplitudes}) < 2:
        raise IdentifiabilityError(
            f"Calibration needs at least two amplitudes of distinct magnitude, got {list(amplitudes)}"
        )


def generate_calibration_set(
    cfg: ForwardConfig,
    d: Disturbance,
    amplitudes: Sequence[float] = DEFAULT_AMPLITUDES_NM,
) -> List[CalibrationSpecimen]:
    check_identifiable(amplitudes)
    specimens = []
    for a in amplitudes:
        topo = defocus_cap(float(a), cfg.M)
        measured = apply_disturbance(forward_opd(topo, cfg), d, cfg)
        specimens.append(CalibrationSpecimen(amplitude_nm=float(a), topo=topo, measured=measured))
    logger.info("Generated %d calibration specimens (M=%d, K=%d)", len(specimens), cfg.M, cfg.K)
    return specimens
