"""
Evaluation and grid rendering of Noll-normalized Zernike polynomials.
"""

import logging
from functools import lru_cache
from math import factorial
from typing import Sequence, Tuple, Union

import numpy as np

from formnet.errors import DomainError
from formnet.surfaces import SurfaceGrid, disc_mask, pixel_coordinates

from .config import BASIS_CACHE_SIZE
from .indexing import noll_to_nm
from .models import ZernikeIndex

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def _radial(n: int, m: int, r: np.ndarray) -> np.ndarray:
    m = abs(m)
    out = np.zeros_like(r, dtype=np.float64)
    for k in range((n - m) // 2 + 1):
        coef = (-1) ** k * factorial(n - k) / (
            factorial(k) * factorial((n + m) // 2 - k) * factorial((n - m) // 2 - k)
        )
        out += coef * r ** (n - 2 * k)
    return out


def _zernike_values(n: int, m: int, r: np.ndarray, phi: np.ndarray) -> np.ndarray:
    radial = _radial(n, m, r)
    if m == 0:
        return np.sqrt(n + 1.0) * radial
    norm = np.sqrt(2.0 * (n + 1))
    if m > 0:
        return norm * radial * np.cos(m * phi)
    return norm * radial * np.sin(-m * phi)


def eval_zernike(idx: ZernikeIndex, r: ArrayLike, phi: ArrayLike) -> ArrayLike:
    """Noll-normalized Zernike value at polar coordinates (r in [0, 1], phi in rad)."""
    r_arr = np.asarray(r, dtype=np.float64)
    phi_arr = np.asarray(phi, dtype=np.float64)
    if np.any(r_arr < 0.0) or np.any(r_arr > 1.0) or not np.all(np.isfinite(r_arr)):
        raise DomainError("Zernike radius must lie in [0, 1]")
    values = _zernike_values(idx.n, idx.m, r_arr, phi_arr)
    if values.ndim == 0:
        return float(values)
    return values


@lru_cache(maxsize=BASIS_CACHE_SIZE)
def _polar_in_disc(M: int) -> Tuple[np.ndarray, np.ndarray]:
    x, y = pixel_coordinates(M)
    inside = disc_mask(M)
    r = np.sqrt(x[inside] ** 2 + y[inside] ** 2)
    phi = np.arctan2(y[inside], x[inside])
    return r, phi


@lru_cache(maxsize=BASIS_CACHE_SIZE)
def _rendered(j: int, M: int) -> np.ndarray:
    n, m = noll_to_nm(j)
    r, phi = _polar_in_disc(M)
    grid = np.zeros((M, M), dtype=np.float64)
    grid[disc_mask(M)] = _zernike_values(n, m, r, phi)
    grid.setflags(write=False)
    return grid


def render_basis(j: int, M: int) -> SurfaceGrid:
    """Mode j on an M×M grid, exactly 0 outside the disc."""
    return SurfaceGrid(values=_rendered(j, M).copy())


def basis_matrix(js: Sequence[int], M: int) -> np.ndarray:
    """Design matrix of in-disc pixel values, one column per Noll index (P × len(js))."""
    inside = disc_mask(M)
    if not js:
        return np.zeros((int(inside.sum()), 0), dtype=np.float64)
    return np.stack([_rendered(j, M)[inside] for j in js], axis=1)


def basis_stack(js: Sequence[int], M: int) -> np.ndarray:
    """Rendered modes as a len(js)×M×M array."""
    if not js:
        return np.zeros((0, M, M), dtype=np.float64)
    return np.stack([_rendered(j, M) for j in js], axis=0)
