"""
Zernike basis on the unit disc: Noll indexing, evaluation, grid rendering, synthesis and fitting.
"""

from .basis import basis_matrix, basis_stack, eval_zernike, render_basis
from .indexing import nm_to_noll, noll_to_nm, zernike_name
from .models import ZernikeCoeffs, ZernikeIndex
from .synthesis import fit_zernike, solve_least_squares, synthesize_surface

__all__ = [
    "ZernikeIndex",
    "ZernikeCoeffs",
    "noll_to_nm",
    "nm_to_noll",
    "zernike_name",
    "eval_zernike",
    "render_basis",
    "basis_matrix",
    "basis_stack",
    "synthesize_surface",
    "fit_zernike",
    "solve_least_squares",
]
