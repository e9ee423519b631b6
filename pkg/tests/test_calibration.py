"""Tests for calibration from spherical specimens and the hybrid inputs built from it."""
import numpy as np
import pytest


@pytest.fixture
def cfg32():
    """Asphere forward config on a 32×32 grid."""
    from formnet.optics import default_forward_config

    return default_forward_config("asphere", M=32)


def _exact_estimate(d):
    from formnet.calibration import DisturbanceEstimate

    return DisturbanceEstimate(gains=d.gains, offsets=d.offsets, residual_rms=[0.0] * d.K)


def test_defocus_cap_shape():
    """A·(x² + y²) inside the disc, zero outside."""
    from formnet.calibration import defocus_cap
    from formnet.surfaces import disc_mask, pixel_coordinates

    cap = defocus_cap(1000.0, 16).values
    x, y = pixel_coordinates(16)
    inside = disc_mask(16)
    assert np.allclose(cap[inside], 1000.0 * (x * x + y * y)[inside])
    assert np.all(cap[~inside] == 0.0)


def test_calibration_set_requires_two_magnitudes(cfg32):
    """Amplitudes of a single magnitude cannot separate gain from offsets."""
    from formnet.calibration import generate_calibration_set
    from formnet.errors import IdentifiabilityError
    from formnet.optics import Disturbance

    with pytest.raises(IdentifiabilityError):
        generate_calibration_set(cfg32, Disturbance.zeros(cfg32.K, 10), amplitudes=[5e3, -5e3])


def test_calibration_set_measures_with_disturbance(cfg32):
    """Each specimen carries its exact topography and the disturbed measurement of it."""
    from formnet.calibration import defocus_cap, generate_calibration_set, measure
    from formnet.optics import sample_disturbance

    d = sample_disturbance(cfg32, 1)
    cal = generate_calibration_set(cfg32, d, amplitudes=[1e4, -2e4])
    assert [s.amplitude_nm for s in cal] == [1e4, -2e4]
    expected = measure(defocus_cap(-2e4, 32), cfg32, d)
    assert np.array_equal(cal[1].measured.values, expected.values)


def test_zero_disturbance_estimates_zero(cfg32):
    """A perfect instrument calibrates to zero gains and offsets with no residual."""
    from formnet.calibration import estimate_disturbance, generate_calibration_set
    from formnet.optics import Disturbance

    est = estimate_disturbance(generate_calibration_set(cfg32, Disturbance.zeros(cfg32.K, 10)), cfg32)
    assert np.allclose(est.gains, 0.0, atol=1e-9)
    assert np.allclose(est.offsets, 0.0, atol=1e-6)
    assert all(r < 1e-6 for r in est.residual_rms)


def test_calibration_recovers_random_disturbances(cfg32):
    """Noiseless calibration with matching order recovers gains within 1e−6 and offsets within 1e−3 nm."""
    from formnet.calibration import estimate_disturbance, generate_calibration_set
    from formnet.optics import sample_disturbance

    for seed in range(100):
        d = sample_disturbance(cfg32, seed, j_dist=10)
        est = estimate_disturbance(generate_calibration_set(cfg32, d), cfg32, j_dist=10)
        assert np.max(np.abs(np.subtract(est.gains, d.gains))) < 1e-6
        assert np.max(np.abs(np.subtract(est.offsets, d.offsets))) < 1e-3


def test_residual_is_non_increasing_in_model_order(cfg32):
    """Nested models: a larger j_dist never fits worse."""
    from formnet.calibration import estimate_disturbance, generate_calibration_set
    from formnet.optics import sample_disturbance

    cal = generate_calibration_set(cfg32, sample_disturbance(cfg32, 4, j_dist=10))
    residuals = [np.array(estimate_disturbance(cal, cfg32, j_dist=j).residual_rms) for j in range(2, 11)]
    for lower, higher in zip(residuals, residuals[1:]):
        assert np.all(higher <= lower + 1e-9)


def test_under_order_leaves_residual(cfg32):
    """Estimating fewer modes than the disturbance carries reports a positive residual."""
    from formnet.calibration import estimate_disturbance, generate_calibration_set
    from formnet.optics import sample_disturbance

    cal = generate_calibration_set(cfg32, sample_disturbance(cfg32, 4, j_dist=10))
    est = estimate_disturbance(cal, cfg32, j_dist=4)
    assert est.j_dist == 4
    assert all(r > 1e-3 for r in est.residual_rms)


def test_hybrid_cancels_disturbance(cfg32):
    """With exact estimates the hybrid input equals the perfect-system ΔL within 1e−3 nm RMS."""
    from formnet.calibration import hybrid_delta_opd
    from formnet.optics import delta_opd_perfect, design_topography, sample_disturbance
    from formnet.zernike import synthesize_surface

    d = sample_disturbance(cfg32, 9)
    est = _exact_estimate(d)
    design = design_topography("asphere", 32)
    rng = np.random.default_rng(2)
    for _ in range(50):
        delta = synthesize_surface({j: float(c) for j, c in zip(range(2, 37), rng.uniform(-50, 50, 35))}, 32)
        hybrid = hybrid_delta_opd(design + delta, cfg32, d, est).values
        perfect = delta_opd_perfect(delta, cfg32).values
        assert np.sqrt(np.mean((hybrid - perfect) ** 2)) < 1e-3


def test_disturbed_input_differs_from_perfect(cfg32):
    """Without calibration the disturbance shows up in ΔL."""
    from formnet.calibration import disturbed_delta_opd
    from formnet.optics import delta_opd_perfect, design_topography, sample_disturbance
    from formnet.zernike import synthesize_surface

    d = sample_disturbance(cfg32, 9)
    delta = synthesize_surface({4: 100.0}, 32)
    disturbed = disturbed_delta_opd(design_topography("asphere", 32) + delta, cfg32, d).values
    perfect = delta_opd_perfect(delta, cfg32).values
    assert np.sqrt(np.mean((disturbed - perfect) ** 2)) > 1.0


def test_batch_inputs(cfg32):
    """disturbed_inputs and hybrid_inputs map [N, M, M] targets to [N, K, M, M] float32 inputs."""
    from formnet.calibration import disturbed_inputs, hybrid_inputs
    from formnet.optics import delta_opd_perfect, sample_disturbance
    from formnet.surfaces import SurfaceGrid
    from formnet.zernike import synthesize_surface

    d = sample_disturbance(cfg32, 3)
    targets = np.stack([synthesize_surface({4: 50.0 * (i + 1)}, 32).values for i in range(3)])
    hybrid = hybrid_inputs(targets, cfg32, d, _exact_estimate(d))
    disturbed = disturbed_inputs(targets, cfg32, d)
    assert hybrid.shape == disturbed.shape == (3, cfg32.K, 32, 32)
    assert hybrid.dtype == np.float32
    perfect = delta_opd_perfect(SurfaceGrid(values=targets[2]), cfg32).values
    assert np.allclose(hybrid[2], perfect, rtol=0, atol=0.05)


def test_vanishing_gain_is_degenerate(cfg32):
    """An estimated gain of −1 makes the correction undefined."""
    from formnet.calibration import DisturbanceEstimate, calibrated_delta_opd, measure
    from formnet.errors import DegenerateGainError
    from formnet.optics import Disturbance, design_topography

    measured = measure(design_topography("asphere", 32), cfg32, Disturbance.zeros(cfg32.K))
    est = DisturbanceEstimate(gains=[0.0, -1.0, 0.0, 0.0], offsets=[[], [], [], []], residual_rms=[0.0] * 4)
    with pytest.raises(DegenerateGainError) as exc:
        calibrated_delta_opd(measured, cfg32, est)
    assert exc.value.channel == 1


def test_estimate_validation_and_storage(tmp_path, cfg32):
    """Negative residuals are rejected; saved estimates load back equal."""
    from formnet.calibration import DisturbanceEstimate, estimate_disturbance, generate_calibration_set, load_estimate, save_estimate
    from formnet.optics import sample_disturbance

    with pytest.raises(ValueError):
        DisturbanceEstimate(gains=[0.0], offsets=[[0.0]], residual_rms=[-1.0])
    est = estimate_disturbance(generate_calibration_set(cfg32, sample_disturbance(cfg32, 2)), cfg32)
    assert load_estimate(save_estimate(est, tmp_path / "estimate.json")) == est


def test_disturbance_corrupts_inputs_by_hundreds_of_nm():
    """A flawless freeform specimen reads as several hundred nm of ΔL on the disturbed system."""
    from formnet.calibration import disturbed_delta_opd
    from formnet.optics import default_forward_config, design_topography, sample_disturbance
    from formnet.surfaces import disc_mask

    cfg = default_forward_config("freeform", M=32)
    design = design_topography("freeform", 32)
    disc = disc_mask(32)
    rms = []
    for seed in range(20):
        d = sample_disturbance(cfg, seed)
        assert max(abs(v) for row in d.offsets for v in row) <= 300.0
        values = disturbed_delta_opd(design, cfg, d).values[0]
        rms.append(float(np.sqrt(np.mean(values[disc] ** 2))))
    assert float(np.median(rms)) > 250.0


@pytest.mark.slow
def test_uncalibrated_error_triples_on_small_model(tmp_path):
    """Even a small trained model loses at least 3× its perfect-system RMSE without calibration."""
    import json

    from formnet.cli import run_reproduce

    out = run_reproduce("freeform", tmp_path / "run", grid_size=32, n_samples=1200, epochs=6, seed=0)
    columns = json.loads((out / "comparison.json").read_text(encoding="utf-8"))["columns"]
    assert columns["disturbed"]["rmse_nm"] >= 3.0 * columns["perfect"]["rmse_nm"]
