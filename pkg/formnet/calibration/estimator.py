"""
Linear least-squares estimation of the disturbance from the calibration set.

Per channel: measured ≈ (1 + g)·L_model + Σ_j θ_j·Z_j over the in-mask pixels of every specimen,
rewritten as measured − L_model = g·L_model + Σ_j θ_j·Z_j and solved by QR.
"""

import logging
from typing import List, Sequence

import numpy as np

from formnet.errors import InvalidInputError
from formnet.optics import ForwardConfig, forward_opd
from formnet.zernike import basis_stack, solve_least_squares

from .config import DEFAULT_J_DIST
from .models import CalibrationSpecimen, DisturbanceEstimate
from .specimens import check_identifiable

logger = logging.getLogger(__name__)


def _channel_system(
    cal: Sequence[CalibrationSpecimen],
    model_fields: Sequence[np.ndarray],
    modes: np.ndarray,
    k: int,
) -> tuple[np.ndarray, np.ndarray]:
    blocks = []
    rhs = []
    for spec, model in zip(cal, model_fields):
        mask = spec.measured.mask[k]
        l_model = model[k][mask]
        columns = [l_model] + [mode[mask] for mode in modes]
        blocks.append(np.stack(columns, axis=1))
        rhs.append(spec.measured.values[k][mask] - l_model)
    return np.concatenate(blocks, axis=0), np.concatenate(rhs)


def estimate_disturbance(
    cal: Sequence[CalibrationSpecimen],
    cfg: ForwardConfig,
    j_dist: int = DEFAULT_J_DIST,
) -> DisturbanceEstimate:
    if j_dist < 1:
        raise InvalidInputError(f"j_dist must be >= 1, got {j_dist}")
    check_identifiable([spec.amplitude_nm for spec in cal])
    model_fields = [forward_opd(spec.topo, cfg).values for spec in cal]
    js = list(range(2, j_dist + 1))
    modes = basis_stack(js, cfg.M)

    gains: List[float] = []
    offsets: List[List[float]] = []
    residual_rms: List[float] = []
    for k in range(cfg.K):
        A, b = _channel_system(cal, model_fields, modes, k)
        solution = solve_least_squares(A, b, channel=k)
        residual = b - A @ solution
        rms = float(np.sqrt(np.mean(residual * residual)))
        gains.append(float(solution[0]))
        offsets.append([float(c) for c in solution[1:]])
        residual_rms.append(rms)
        logger.info("Calibrated channel %d: gain=%.3e residual_rms=%.3e nm", k, solution[0], rms)
    return DisturbanceEstimate(gains=gains, offsets=offsets, residual_rms=residual_rms)
