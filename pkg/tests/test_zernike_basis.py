"""Tests for Zernike evaluation, rendering, synthesis and fitting."""
import math

import numpy as np
import pytest


def test_eval_piston_and_defocus():
    """Piston is 1 everywhere; defocus is √3 on the rim."""
    from formnet.zernike import ZernikeIndex, eval_zernike

    piston = ZernikeIndex.from_noll(1)
    defocus = ZernikeIndex.from_noll(4)
    assert eval_zernike(piston, 0.3, 1.2) == pytest.approx(1.0)
    assert eval_zernike(defocus, 1.0, 0.7) == pytest.approx(math.sqrt(3.0), abs=1e-12)
    assert eval_zernike(defocus, 0.0, 0.0) == pytest.approx(-math.sqrt(3.0), abs=1e-12)


@pytest.mark.parametrize("r", [-0.1, 1.0001])
def test_eval_outside_unit_disc_is_domain_error(r):
    """Radii outside [0, 1] are rejected."""
    from formnet.errors import DomainError
    from formnet.zernike import ZernikeIndex, eval_zernike

    with pytest.raises(DomainError):
        eval_zernike(ZernikeIndex.from_noll(4), r, 0.0)


def test_render_defocus_center_and_mask():
    """Defocus at the central pixels is ≈ −√3 and every out-of-disc pixel is exactly 0."""
    from formnet.surfaces import disc_mask
    from formnet.zernike import render_basis

    grid = render_basis(4, 64)
    center = grid.values[31:33, 31:33]
    assert np.allclose(center, -math.sqrt(3.0), atol=5e-3)
    for j in (1, 4, 7, 22, 36):
        values = render_basis(j, 64).values
        assert np.all(values[~disc_mask(64)] == 0.0)


def test_render_defocus_rotation_invariant():
    """m = 0 modes are invariant under a 90° rotation of the pixel lattice."""
    from formnet.zernike import render_basis

    values = render_basis(4, 64).values
    assert np.allclose(np.rot90(values), values, atol=1e-12)


def test_gram_matrix_is_identity():
    """Area-averaged Gram matrix of modes 1..36 on a 256×256 grid is identity within 5e−3."""
    from formnet.zernike import basis_matrix

    B = basis_matrix(list(range(1, 37)), 256)
    gram = B.T @ B / B.shape[0]
    assert np.max(np.abs(gram - np.eye(36))) < 5e-3


def test_synthesize_empty_and_linear():
    """Empty coefficients give zeros; a single mode scales the rendered basis."""
    from formnet.zernike import ZernikeCoeffs, render_basis, synthesize_surface

    assert np.all(synthesize_surface(ZernikeCoeffs(), 32).values == 0.0)
    surface = synthesize_surface({4: 100.0}, 32)
    assert np.allclose(surface.values, 100.0 * render_basis(4, 32).values, rtol=0, atol=1e-12)


def test_synthesize_is_additive():
    """synthesize({4: a, 5: b}) = synthesize({4: a}) + synthesize({5: b})."""
    from formnet.zernike import synthesize_surface

    a, b = 123.4, -56.7
    both = synthesize_surface({4: a, 5: b}, 32).values
    parts = synthesize_surface({4: a}, 32).values + synthesize_surface({5: b}, 32).values
    assert np.allclose(both, parts, rtol=0, atol=1e-10)


def test_synthesize_rejects_non_finite():
    """Non-finite coefficients are invalid input."""
    from formnet.errors import InvalidInputError
    from formnet.zernike import synthesize_surface

    with pytest.raises(InvalidInputError):
        synthesize_surface({4: float("inf")}, 16)


def test_fit_round_trip():
    """fit(synthesize(C)) recovers C within 1e−6 nm for j ≤ 36 at M = 64."""
    from formnet.zernike import fit_zernike, synthesize_surface

    rng = np.random.default_rng(3)
    coeffs = {j: float(c) for j, c in zip(range(1, 37), rng.uniform(-300, 300, size=36))}
    fitted = fit_zernike(synthesize_surface(coeffs, 64), 36)
    for j, c in coeffs.items():
        assert abs(fitted.get(j) - c) < 1e-6


def test_fit_zero_grid():
    """An all-zero grid fits to all-zero coefficients."""
    from formnet.surfaces import SurfaceGrid
    from formnet.zernike import fit_zernike

    fitted = fit_zernike(SurfaceGrid.zeros(32), 10)
    assert all(abs(c) < 1e-12 for c in fitted.coefficients.values())


def test_fit_leaves_residual_for_higher_mode():
    """Fitting mode j_max + 1 with modes 1..j_max leaves a positive residual."""
    from formnet.surfaces import disc_mask
    from formnet.zernike import fit_zernike, render_basis, synthesize_surface

    target = render_basis(11, 64)
    fitted = fit_zernike(target, 10)
    residual = (target.values - synthesize_surface(fitted, 64).values)[disc_mask(64)]
    assert np.sqrt(np.mean(residual**2)) > 0.5


def test_fit_rank_deficient_raises_conditioning_error():
    """Too few in-disc pixels for the requested modes is a conditioning error."""
    from formnet.errors import ConditioningError
    from formnet.surfaces import SurfaceGrid
    from formnet.zernike import fit_zernike

    with pytest.raises(ConditioningError):
        fit_zernike(SurfaceGrid.zeros(8), 100)
