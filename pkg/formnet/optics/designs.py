"""
Design topographies T_d. Each design knows its sag law and its default channel layout;
designs are looked up by identifier like the other pluggable backends in the toolkit.
"""

import logging
import math
from abc import ABC, abstractmethod
from functools import lru_cache
from typing import Dict, List, Union

import numpy as np

from formnet.errors import InvalidInputError
from formnet.surfaces import SurfaceGrid, disc_mask, pixel_coordinates

from .config import (
    ASPHERE_A4,
    ASPHERE_APERTURE_RADIUS_MM,
    ASPHERE_CHANNELS,
    ASPHERE_CONIC,
    ASPHERE_CURVATURE_PER_MM,
    DEFAULT_BETA,
    DEFAULT_GRID_SIZE,
    FREEFORM_APERTURE_RADIUS_MM,
    FREEFORM_CAPS,
    FREEFORM_CHANNELS,
    NM_PER_MM,
)
from .models import ChannelConfig, DesignId, ForwardConfig

logger = logging.getLogger(__name__)


def _conic_sag(c: float, kappa: float, rho: np.ndarray) -> np.ndarray:
    return c * rho**2 / (1.0 + np.sqrt(1.0 - (1.0 + kappa) * c**2 * rho**2))


class DesignTopography(ABC):
    """Interface for sag_nm (unit-disc coordinates → nm) and the design's default channels."""

    design_id: DesignId

    @abstractmethod
    def sag_nm(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def channel_layout(self) -> List[dict]:
        ...

    def channels(self) -> List[ChannelConfig]:
        return [
            ChannelConfig(
                shear=tuple(c["shear"]),
                theta=math.radians(c["theta_deg"]),
                mask_center=tuple(c["mask_center"]),
                mask_radius=c["mask_radius"],
            )
            for c in self.channel_layout()
        ]


class AsphereDesign(DesignTopography):
    """Rotationally symmetric conic-plus-A4 asphere."""

    design_id = DesignId.ASPHERE

    def sag_nm(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        rho = np.sqrt(x * x + y * y) * ASPHERE_APERTURE_RADIUS_MM
        z_mm = _conic_sag(ASPHERE_CURVATURE_PER_MM, ASPHERE_CONIC, rho) + ASPHERE_A4 * rho**4
        return z_mm * NM_PER_MM

    def channel_layout(self) -> List[dict]:
        return ASPHERE_CHANNELS


class FreeformDesign(DesignTopography):
    """Multi-spherical artefact: three off-axis spherical caps, referenced to the vertex."""

    design_id = DesignId.FREEFORM

    def _raw_sag_mm(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        total = np.zeros(np.broadcast(x, y).shape, dtype=np.float64)
        for cap in FREEFORM_CAPS:
            cx, cy = cap["center"]
            rho = np.hypot(x - cx, y - cy) * FREEFORM_APERTURE_RADIUS_MM
            total += _conic_sag(cap["curvature_per_mm"], 0.0, rho)
        return total

    def sag_nm(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        vertex = self._raw_sag_mm(np.zeros(1), np.zeros(1))[0]
        return (self._raw_sag_mm(x, y) - vertex) * NM_PER_MM

    def channel_layout(self) -> List[dict]:
        return FREEFORM_CHANNELS


_DESIGNS: Dict[DesignId, DesignTopography] = {
    DesignId.ASPHERE: AsphereDesign(),
    DesignId.FREEFORM: FreeformDesign(),
}


def get_design(design: Union[str, DesignId]) -> DesignTopography:
    try:
        return _DESIGNS[DesignId(design)]
    except ValueError:
        raise InvalidInputError(f"Unknown design {design!r}; expected one of {[d.value for d in DesignId]}") from None


@lru_cache(maxsize=16)
def _design_values(design: DesignId, M: int) -> np.ndarray:
    x, y = pixel_coordinates(M)
    values = np.where(disc_mask(M), get_design(design).sag_nm(x, y), 0.0)
    values.setflags(write=False)
    return values


def design_topography(design: Union[str, DesignId], M: int) -> SurfaceGrid:
    """Deterministic design sag T_d (nm) on the M×M grid, zero outside the disc."""
    design_id = get_design(design).design_id
    return SurfaceGrid(values=_design_values(design_id, M).copy())


def default_forward_config(design: Union[str, DesignId], M: int = DEFAULT_GRID_SIZE, beta: float = DEFAULT_BETA) -> ForwardConfig:
    d = get_design(design)
    channels = d.channels()
    return ForwardConfig(M=M, K=len(channels), beta=beta, channels=channels, design=d.design_id)
