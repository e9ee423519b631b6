"""
Disturbance model of the non-perfect interferometer: per-channel gain plus additive low-order Zernike offsets.
"""

import logging

import numpy as np

from formnet.errors import InvalidShapeError
from formnet.surfaces import OPLField
from formnet.zernike import basis_stack

from .config import DEFAULT_J_DIST, DISTURBANCE_GAIN_BOUND, DISTURBANCE_OFFSET_BOUND_NM
from .models import Disturbance, ForwardConfig

logger = logging.getLogger(__name__)


def offset_fields(offsets: list[list[float]], js: list[int], M: int) -> np.ndarray:
    """K×M×M additive offset images Σ_j θ_{k,j} Z_j (unmasked)."""
    K = len(offsets)
    if not js:
        return np.zeros((K, M, M), dtype=np.float64)
    coeffs = np.asarray(offsets, dtype=np.float64).reshape(K, len(js))
    return np.tensordot(coeffs, basis_stack(js, M), axes=1)


def apply_disturbance(L: OPLField, d: Disturbance, cfg: ForwardConfig) -> OPLField:
    """L̃_k = (1 + g_k)·L_k + Σ_j θ_{k,j}·Z_j inside (mask ∩ disc); zero elsewhere."""
    if d.K != L.K or cfg.K != L.K or cfg.M != L.M:
        raise InvalidShapeError(f"Disturbance ({d.K} channels) / config (K={cfg.K}, M={cfg.M}) do not match field {L.values.shape}")
    gains = 1.0 + np.asarray(d.gains, dtype=np.float64)[:, None, None]
    disturbed = gains * L.values + offset_fields(d.offsets, d.offset_indices(), L.M)
    return OPLField(values=np.where(L.mask, disturbed, 0.0), mask=L.mask)


def sample_disturbance(cfg: ForwardConfig, seed: int, j_dist: int = DEFAULT_J_DIST) -> Disturbance:
    """Seeded disturbance: g_k ~ U(−0.02, 0.02), θ_{k,j} ~ U(−300, 300) nm for j = 2..j_dist."""
    rng = np.random.default_rng(seed)
    gains = rng.uniform(-DISTURBANCE_GAIN_BOUND, DISTURBANCE_GAIN_BOUND, size=cfg.K)
    offsets = rng.uniform(-DISTURBANCE_OFFSET_BOUND_NM, DISTURBANCE_OFFSET_BOUND_NM, size=(cfg.K, max(j_dist - 1, 0)))
    d = Disturbance(gains=gains.tolist(), offsets=offsets.tolist())
    logger.debug("Sampled disturbance seed=%s gains=%s", seed, d.gains)
    return d
