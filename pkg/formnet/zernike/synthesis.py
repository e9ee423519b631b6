"""
Synthesis of surfaces from Zernike coefficients and least-squares fitting back to coefficients.
"""

import logging
import math
from typing import Mapping, Union

import numpy as np
from scipy.linalg import qr, solve_triangular

from formnet.errors import ConditioningError, InvalidInputError
from formnet.surfaces import SurfaceGrid, disc_mask

from .basis import basis_matrix, basis_stack
from .config import RANK_TOLERANCE
from .models import ZernikeCoeffs

logger = logging.getLogger(__name__)

CoeffsLike = Union[ZernikeCoeffs, Mapping[int, float]]


def _as_mapping(coeffs: CoeffsLike) -> Mapping[int, float]:
    if isinstance(coeffs, ZernikeCoeffs):
        return coeffs.coefficients
    return coeffs


def synthesize_surface(coeffs: CoeffsLike, M: int) -> SurfaceGrid:
    """Σ_j c_j · Z_j on an M×M grid (linear in the coefficients)."""
    mapping = _as_mapping(coeffs)
    for j, c in mapping.items():
        if not math.isfinite(c):
            raise InvalidInputError(f"Coefficient for j={j} is not finite: {c}")
    js = sorted(mapping)
    if not js:
        return SurfaceGrid.zeros(M)
    weights = np.array([mapping[j] for j in js], dtype=np.float64)
    values = np.tensordot(weights, basis_stack(js, M), axes=1)
    return SurfaceGrid(values=values)


def solve_least_squares(A: np.ndarray, b: np.ndarray, *, channel: int | None = None) -> np.ndarray:
    """QR-based least squares; raises ConditioningError on rank deficiency."""
    rows, cols = A.shape
    where = f" (channel {channel})" if channel is not None else ""
    if rows < cols:
        raise ConditioningError(f"Underdetermined system{where}: {rows} equations for {cols} unknowns", channel=channel)
    if cols == 0:
        return np.zeros(0, dtype=np.float64)
    Q, R = qr(A, mode="economic")
    diag = np.abs(np.diag(R))
    if diag.max() == 0.0 or diag.min() <= RANK_TOLERANCE * diag.max():
        raise ConditioningError(f"Rank-deficient design matrix{where}", channel=channel)
    return solve_triangular(R, Q.T @ b)


def fit_zernike(grid: SurfaceGrid, j_max: int) -> ZernikeCoeffs:
    """Least-squares projection of the in-disc pixels onto modes j = 1..j_max."""
    if j_max < 1:
        raise InvalidInputError(f"j_max must be >= 1, got {j_max}")
    js = list(range(1, j_max + 1))
    A = basis_matrix(js, grid.M)
    b = grid.values[disc_mask(grid.M)]
    solution = solve_least_squares(A, b)
    return ZernikeCoeffs(coefficients={j: float(c) for j, c in zip(js, solution)})
