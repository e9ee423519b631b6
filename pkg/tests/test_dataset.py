"""Tests for dataset generation, splitting, normalization and storage."""
import json

import numpy as np
import pytest


def test_generation_is_deterministic(freeform_cfg, tiny_dataset):
    """Same (design, N, seed, cfg) gives bitwise-identical arrays and digest."""
    from formnet.dataset import generate_dataset

    again = generate_dataset("freeform", 12, 7, freeform_cfg)
    assert np.array_equal(again.inputs, tiny_dataset.inputs)
    assert np.array_equal(again.targets, tiny_dataset.targets)
    assert again.digest == tiny_dataset.digest
    other = generate_dataset("freeform", 12, 8, freeform_cfg)
    assert other.digest != tiny_dataset.digest


def test_generation_independent_of_workers(freeform_cfg, tiny_dataset):
    """Worker count does not change the samples."""
    from formnet.dataset import generate_dataset

    parallel = generate_dataset("freeform", 12, 7, freeform_cfg, workers=4)
    assert parallel.digest == tiny_dataset.digest


def test_generation_prefix_stable(freeform_cfg, tiny_dataset):
    """Sample i depends only on (seed, i): a smaller N yields a prefix."""
    from formnet.dataset import generate_dataset

    prefix = generate_dataset("freeform", 5, 7, freeform_cfg)
    assert np.array_equal(prefix.targets, tiny_dataset.targets[:5])


def test_samples_are_consistent_with_forward_model(freeform_cfg, tiny_dataset):
    """Each input is the perfect-system ΔL of its target; targets vanish outside the disc."""
    from formnet.optics import delta_opd_perfect

    for i in (0, 5, 11):
        expected = delta_opd_perfect(tiny_dataset.delta_topography(i), freeform_cfg).values
        assert np.allclose(tiny_dataset.inputs[i], expected, rtol=1e-5, atol=1e-3)
    assert np.all(tiny_dataset.targets[:, ~tiny_dataset.target_mask()] == 0.0)


def test_sample_rms_within_range(tiny_dataset):
    """Every ΔT has an in-disc RMS inside the log-uniform sampling range."""
    disc = tiny_dataset.target_mask()
    for t in tiny_dataset.targets:
        rms = float(np.sqrt(np.mean(t[disc].astype(np.float64) ** 2)))
        assert 50.0 * (1 - 1e-4) <= rms <= 700.0 * (1 + 1e-4)


def test_generation_rejects_bad_requests(freeform_cfg):
    """A config for another design, or N < 1, is refused."""
    from formnet.dataset import generate_dataset
    from formnet.errors import InvalidConfigError, InvalidInputError

    with pytest.raises(InvalidConfigError):
        generate_dataset("asphere", 4, 0, freeform_cfg)
    with pytest.raises(InvalidInputError):
        generate_dataset("freeform", 0, 0, freeform_cfg)


def test_sampling_config_validation():
    """j_min > j_max and an empty RMS range are invalid."""
    from formnet.dataset import SamplingConfig

    with pytest.raises(ValueError):
        SamplingConfig(j_min=10, j_max=4)
    with pytest.raises(ValueError):
        SamplingConfig(rms_min_nm=0.0)


def test_split_indices_partition():
    """Train and test are disjoint, exhaustive and sorted; test size rounds N·f."""
    from formnet.dataset import split_indices

    train, test = split_indices(10, 0.25, 3)
    assert len(test) == 3 and len(train) == 7
    assert sorted(np.concatenate([train, test]).tolist()) == list(range(10))
    assert np.all(np.diff(train) > 0) and np.all(np.diff(test) > 0)
    again = split_indices(10, 0.25, 3)
    assert np.array_equal(again[0], train) and np.array_equal(again[1], test)


@pytest.mark.parametrize("N,frac", [(10, 0.0), (10, 1.0), (10, -0.1), (1, 0.1), (2, 0.9)])
def test_split_rejects_empty_sides(N, frac):
    """Fractions outside (0, 1) or splits with an empty side are invalid."""
    from formnet.dataset import split_indices
    from formnet.errors import InvalidSplitError

    with pytest.raises(InvalidSplitError):
        split_indices(N, frac, 0)


def test_split_dataset_records_provenance(tiny_dataset):
    """Subsets carry their parent digest and source indices."""
    from formnet.dataset import split_dataset

    train, test = split_dataset(tiny_dataset, 0.25, 1)
    assert train.N + test.N == tiny_dataset.N
    assert test.meta.parent_digest == tiny_dataset.digest
    for pos, src in enumerate(test.meta.source_indices):
        assert np.array_equal(test.targets[pos], tiny_dataset.targets[src])
    assert set(train.meta.source_indices).isdisjoint(test.meta.source_indices)


def test_normalization_statistics(tiny_dataset):
    """Normalized training inputs and targets have zero mean and unit std on their masks."""
    from formnet.dataset import compute_norm_stats, normalize_inputs, normalize_targets

    stats = compute_norm_stats(tiny_dataset)
    masks = tiny_dataset.input_masks()
    disc = tiny_dataset.target_mask()
    x = normalize_inputs(tiny_dataset.inputs, masks, stats)
    y = normalize_targets(tiny_dataset.targets, disc, stats)
    assert x.dtype == np.float32 and y.dtype == np.float32
    inside = x[:, 0][:, masks[0]].astype(np.float64)
    assert abs(inside.mean()) < 1e-4 and abs(inside.std() - 1.0) < 1e-4
    assert abs(y[:, disc].astype(np.float64).std() - 1.0) < 1e-4
    assert np.all(x[:, 0][:, ~masks[0]] == 0.0)
    assert np.all(y[:, ~disc] == 0.0)


def test_denormalization_inverts_on_masks(tiny_dataset):
    """denormalize(normalize(x)) ≈ x inside the masks and 0 outside."""
    from formnet.dataset import (
        compute_norm_stats,
        denormalize_inputs,
        denormalize_targets,
        normalize_inputs,
        normalize_targets,
    )

    stats = compute_norm_stats(tiny_dataset)
    masks = tiny_dataset.input_masks()
    disc = tiny_dataset.target_mask()
    back = denormalize_inputs(normalize_inputs(tiny_dataset.inputs, masks, stats), masks, stats)
    assert np.allclose(back, tiny_dataset.inputs, rtol=1e-4, atol=1e-2)
    t_back = denormalize_targets(normalize_targets(tiny_dataset.targets, disc, stats), disc, stats)
    assert np.allclose(t_back, tiny_dataset.targets, rtol=1e-4, atol=1e-2)
    assert np.all(t_back[:, ~disc] == 0.0)


def test_degenerate_channel(tiny_dataset):
    """A zero-variance input channel names itself in the error."""
    from formnet.dataset import Dataset, compute_norm_stats
    from formnet.errors import DegenerateChannelError

    flat = Dataset(inputs=np.zeros_like(tiny_dataset.inputs), targets=tiny_dataset.targets, meta=tiny_dataset.meta)
    with pytest.raises(DegenerateChannelError) as exc:
        compute_norm_stats(flat)
    assert exc.value.channel == "0"


def test_norm_stats_validation():
    """Zero standard deviations are rejected."""
    from formnet.dataset import NormStats

    with pytest.raises(ValueError):
        NormStats(input_mean=[0.0], input_std=[0.0], target_mean=0.0, target_std=1.0)


def test_dataset_save_load(tmp_path, tiny_dataset):
    """Save then load returns bitwise-equal arrays and equal metadata."""
    from formnet.dataset import load_dataset, save_dataset

    loaded = load_dataset(save_dataset(tiny_dataset, tmp_path / "data"))
    assert np.array_equal(loaded.inputs, tiny_dataset.inputs)
    assert np.array_equal(loaded.targets, tiny_dataset.targets)
    assert loaded.meta == tiny_dataset.meta


def test_dataset_directory_layout(tmp_path, tiny_dataset):
    """A dataset directory holds exactly meta, inputs.bin and targets.bin; meta is JSON text."""
    from formnet.dataset import save_dataset

    path = save_dataset(tiny_dataset, tmp_path / "data")
    assert sorted(p.name for p in path.iterdir()) == ["inputs.bin", "meta", "targets.bin"]
    meta = json.loads((path / "meta").read_text(encoding="utf-8"))
    assert meta["format_version"] == 1
    assert (path / "inputs.bin").stat().st_size == tiny_dataset.inputs.size * 4
    assert (path / "targets.bin").stat().st_size == tiny_dataset.targets.size * 4


def test_dataset_truncated_and_oversized(tmp_path, tiny_dataset):
    """Short array files are truncated; long ones are a format error."""
    from formnet.dataset import load_dataset, save_dataset
    from formnet.dataset.config import INPUTS_FILE, TARGETS_FILE
    from formnet.errors import FormatError, TruncatedFileError

    path = save_dataset(tiny_dataset, tmp_path / "short")
    raw = (path / INPUTS_FILE).read_bytes()
    (path / INPUTS_FILE).write_bytes(raw[:-4])
    with pytest.raises(TruncatedFileError):
        load_dataset(path)

    path = save_dataset(tiny_dataset, tmp_path / "long")
    (path / TARGETS_FILE).write_bytes((path / TARGETS_FILE).read_bytes() + b"\0\0\0\0")
    with pytest.raises(FormatError):
        load_dataset(path)


def test_dataset_digest_mismatch(tmp_path, tiny_dataset):
    """Changed array bytes are detected through the content digest."""
    from formnet.dataset import load_dataset, save_dataset
    from formnet.dataset.config import TARGETS_FILE
    from formnet.errors import DigestMismatchError

    path = save_dataset(tiny_dataset, tmp_path / "data")
    raw = bytearray((path / TARGETS_FILE).read_bytes())
    raw[0] ^= 0x01
    (path / TARGETS_FILE).write_bytes(bytes(raw))
    with pytest.raises(DigestMismatchError):
        load_dataset(path)


def test_dataset_version_mismatch(tmp_path, tiny_dataset):
    """Metadata with another format_version is refused."""
    from formnet.dataset import load_dataset, save_dataset
    from formnet.dataset.config import META_FILE
    from formnet.errors import VersionMismatchError

    path = save_dataset(tiny_dataset, tmp_path / "data")
    meta = json.loads((path / META_FILE).read_text(encoding="utf-8"))
    meta["format_version"] = 2
    (path / META_FILE).write_text(json.dumps(meta), encoding="utf-8")
    with pytest.raises(VersionMismatchError):
        load_dataset(path)
