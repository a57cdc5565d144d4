"""Shared fixtures for the Steady test suite"""
import os
import sys

import numpy as np
import pytest

# Run from the repo root like `python app.py`
sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))

from fixtures.generator import FixtureSpec, base_texture, generate
from flow.horn_schunck import FlowParams
from frames.frame import Frame, SequenceHandle


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def texture():
    """64x64 band-limited texture in [32, 223]"""
    return base_texture(64, 64, seed=5)


@pytest.fixture
def texture_frame(texture):
    return Frame(texture)


@pytest.fixture
def quick_flow():
    """Cheap estimator settings for tests that only need a plausible flow"""
    return FlowParams(iterations_per_level=20, warps_per_level=2)


@pytest.fixture
def noisy_sequence():
    """Small static base plus per-frame Gaussian noise"""
    seq, _ = generate(FixtureSpec(kind="static-noise", width=64, height=64, frame_count=12, noise_sigma=10.0))
    return seq


@pytest.fixture
def constant_sequence():
    def build(value: float, count: int, width: int = 32, height: int = 32) -> SequenceHandle:
        return SequenceHandle([Frame(np.full((height, width), value)) for _ in range(count)])
    return build
