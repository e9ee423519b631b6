"""
Seeded generation of (ΔL, ΔT) samples for the perfect system.
Each sample draws from its own stream seeded by (seed, index), so results do not depend on worker count.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Tuple, Union

import numpy as np

from formnet.errors import InvalidConfigError, InvalidInputError
from formnet.jsonio import FORMAT_VERSION
from formnet.optics import DesignId, ForwardConfig, delta_opd_perfect, get_design
from formnet.surfaces import SurfaceGrid
from formnet.zernike import synthesize_surface

from .models import Dataset, DatasetMeta, SamplingConfig, content_digest

logger = logging.getLogger(__name__)


def sample_difference_topography(rng: np.random.Generator, sampling: SamplingConfig, M: int) -> SurfaceGrid:
    """Random weighted Zernike sum rescaled to an in-disc RMS drawn log-uniformly."""
    target_rms = float(np.exp(rng.uniform(np.log(sampling.rms_min_nm), np.log(sampling.rms_max_nm))))
    js = range(sampling.j_min, sampling.j_max + 1)
    raw = rng.uniform(-sampling.coeff_bound, sampling.coeff_bound, size=len(js))
    surface = synthesize_surface(dict(zip(js, raw.tolist())), M)
    rms = surface.rms_in_disc()
    if rms == 0.0:
        return surface
    return surface.scaled(target_rms / rms)


def _generate_sample(seed: int, index: int, cfg: ForwardConfig, sampling: SamplingConfig) -> Tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng([seed, index])
    delta_T = sample_difference_topography(rng, sampling, cfg.M)
    delta_L = delta_opd_perfect(delta_T, cfg)
    return delta_L.values, delta_T.values


def generate_dataset(
    design: Union[str, DesignId],
    N: int,
    seed: int,
    cfg: ForwardConfig,
    sampling: Optional[SamplingConfig] = None,
    workers: int = 1,
) -> Dataset:
    """N samples of ΔT and their perfect-system ΔL; a pure function of (design, N, seed, cfg, sampling)."""
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")
    design_id = get_design(design).design_id
    if cfg.design != design_id:
        raise InvalidConfigError(f"Forward config is for design {cfg.design.value!r}, not {design_id.value!r}")
    sampling = sampling or SamplingConfig()

    inputs = np.zeros((N, cfg.K, cfg.M, cfg.M), dtype=np.float32)
    targets = np.zeros((N, cfg.M, cfg.M), dtype=np.float32)

    def work(i: int) -> Tuple[np.ndarray, np.ndarray]:
        return _generate_sample(seed, i, cfg, sampling)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(work, range(N))
            for i, (dl, dt) in enumerate(results):
                inputs[i], targets[i] = dl, dt
    else:
        for i in range(N):
            inputs[i], targets[i] = work(i)

    meta = DatasetMeta(
        format_version=FORMAT_VERSION,
        design=design_id.value,
        seed=seed,
        n_samples=N,
        M=cfg.M,
        K=cfg.K,
        forward_config=cfg,
        forward_config_digest=cfg.digest(),
        sampling=sampling,
        content_digest=content_digest(inputs, targets),
    )
    logger.info("Generated %d samples for design=%s seed=%s (M=%d, K=%d)", N, design_id.value, seed, cfg.M, cfg.K)
    return Dataset(inputs=inputs, targets=targets, meta=meta)
