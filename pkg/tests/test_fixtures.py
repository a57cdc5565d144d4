"""Synthetic sequence generator and its pseudo-random streams"""
import math

import numpy as np
import pytest

from errors import InvalidSpec
from fixtures.generator import (
    FLAT_LEVEL,
    FixtureSpec,
    base_texture,
    gaussian_stream,
    generate,
    metadata_lines,
    splitmix64_stream,
    uniform_stream,
)
from frames.frame import quantize_samples
from metrics.quality import psnr
from metrics.report import evaluate_sequence
from run_config import build_config

MASK = (1 << 64) - 1


def scalar_splitmix64(key: int, count: int):
    """Plain-integer reference of the SplitMix64 counter stream"""
    out = []
    for i in range(count):
        z = (key + (i + 1) * 0x9E3779B97F4A7C15) & MASK
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        out.append(z ^ (z >> 31))
    return out


class TestStreams:

    @pytest.mark.parametrize("key", [0, 1, 0xD1B54A32D192ED03, MASK])
    def test_splitmix_matches_scalar_reference(self, key):
        assert [int(z) for z in splitmix64_stream(key, 16)] == scalar_splitmix64(key, 16)

    def test_uniform_range(self):
        u = uniform_stream(42, 10000)
        assert u.min() >= 0.0 and u.max() < 1.0

    def test_uniform_uses_top_53_bits(self):
        [z] = scalar_splitmix64(9, 1)
        assert uniform_stream(9, 1)[0] == (z >> 11) * 2.0 ** -53

    def test_gaussian_moments(self):
        g = gaussian_stream(7, 200000)
        assert abs(g.mean()) < 0.01
        assert g.std() == pytest.approx(1.0, abs=0.01)

    def test_gaussian_prefix_is_stable(self):
        assert np.array_equal(gaussian_stream(3, 5), gaussian_stream(3, 6)[:5])


class TestFixtureSpec:

    @pytest.mark.parametrize("kwargs", [
        {"kind": "zoom"},
        {"frame_count": 0},
        {"width": 0},
        {"noise_sigma": -1.0},
        {"shift_per_frame": (0.5, 0)},
        {"texture_seed": -1},
    ])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidSpec):
            FixtureSpec(**kwargs)


class TestGenerate:

    def test_same_seed_same_frames(self):
        spec = FixtureSpec(width=48, height=40, frame_count=4, texture_seed=11)
        a, _ = generate(spec)
        b, _ = generate(spec)
        assert all(np.array_equal(x.data, y.data) for x, y in zip(a, b))

    def test_different_seed_different_frames(self):
        a, _ = generate(FixtureSpec(width=32, height=32, frame_count=1, texture_seed=1))
        b, _ = generate(FixtureSpec(width=32, height=32, frame_count=1, texture_seed=2))
        assert not np.array_equal(a[0].data, b[0].data)

    def test_samples_are_integer_bytes(self):
        seq, _ = generate(FixtureSpec(width=32, height=32, frame_count=3, noise_sigma=40.0))
        for frame in seq:
            assert np.array_equal(frame.data, np.round(frame.data))
            assert frame.data.min() >= 0 and frame.data.max() <= 255

    def test_texture_headroom(self):
        seq, _ = generate(FixtureSpec(width=64, height=64, frame_count=1, noise_sigma=0.0))
        assert seq[0].data.min() == 32.0 and seq[0].data.max() == 223.0

    def test_flat(self):
        seq, truth = generate(FixtureSpec(kind="flat", width=24, height=16, frame_count=5))
        assert truth is None
        assert len(seq) == 5
        assert all(np.all(frame.data == FLAT_LEVEL) for frame in seq)
        report = evaluate_sequence(seq)
        assert (report.itf_db, report.mofm_px) == (99.0, 0.0)
        assert report.isi == pytest.approx(1.0, abs=1e-9)

    def test_noiseless_static_sequence_is_constant(self):
        seq, truth = generate(FixtureSpec(width=32, height=32, frame_count=4, noise_sigma=0.0))
        assert all(np.array_equal(frame.data, seq[0].data) for frame in seq)
        assert len(truth) == 3 and not any(f.u.any() or f.v.any() for f in truth)
        report = evaluate_sequence(seq)
        assert report.itf_db == 99.0 and report.mofm_px <= 1e-3

    def test_static_noise_pairwise_psnr(self):
        sigma = 10.0
        seq, _ = generate(FixtureSpec(width=256, height=256, frame_count=3, noise_sigma=sigma))
        expected = 10 * math.log10(255.0 ** 2 / (2 * sigma ** 2))
        for t, prev, curr in seq.pairs():
            assert psnr(prev, curr) == pytest.approx(expected, abs=0.7)

    def test_translation_frames_are_shifted_crops(self):
        spec = FixtureSpec(kind="global-translation", width=40, height=30, frame_count=3,
                           noise_sigma=0.0, shift_per_frame=(2, 1))
        seq, truth = generate(spec)
        a, b = seq[0].plane(), seq[1].plane()
        assert np.array_equal(b[1:, 2:], a[:-1, :-2])
        assert float(truth[0].u[0, 0]) == -2.0 and float(truth[0].v[0, 0]) == -1.0

    def test_translation_starts_from_the_base_texture(self):
        spec = FixtureSpec(kind="global-translation", width=48, height=32, frame_count=4,
                           shift_per_frame=(3, 0), texture_seed=6)
        seq, _ = generate(spec)
        expected = quantize_samples(base_texture(48, 32, 6)).astype(np.float64)
        assert np.array_equal(seq[0].plane(), expected)
        # Columns uncovered by the shift repeat the texture's left edge
        assert np.array_equal(seq[2].plane()[:, :6], np.repeat(expected[:, :1], 6, axis=1))
        assert np.array_equal(seq[2].plane()[:, 6:], expected[:, :-6])

    def test_translation_ignores_noise_sigma(self):
        spec = FixtureSpec(kind="global-translation", width=32, height=32, frame_count=3,
                           noise_sigma=10.0, shift_per_frame=(2, 0))
        assert spec.noise_sigma == 0.0
        noisy, _ = generate(spec)
        clean, _ = generate(FixtureSpec(kind="global-translation", width=32, height=32, frame_count=3,
                                        noise_sigma=0.0, shift_per_frame=(2, 0)))
        assert all(np.array_equal(a.data, b.data) for a, b in zip(noisy, clean))

    def test_cli_defaults_keep_translation_noise_free(self):
        config = build_config("genseq", {"kind": "global-translation", "shift-x": "2"})
        assert config.fixture_spec().noise_sigma == 0.0

    def test_metadata_lines(self):
        spec = FixtureSpec(kind="global-translation", width=8, height=8, frame_count=2,
                           shift_per_frame=(3, 0), texture_seed=7)
        lines = metadata_lines(spec)
        assert "seed = 7" in lines
        assert "shift_x = 3" in lines
        assert "ground_truth_flow = pair_%06d.flo" in lines
        assert any(line.startswith("flow_convention = backward") for line in lines)
