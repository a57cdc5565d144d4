# fixtures/generator.py - Synthetic sequences with known flow and controlled flicker
"""
Pseudo-random contract (shared by every implementation of the fixtures):

    SplitMix64 counter stream for a 64-bit key:
        z_i  = key + (i + 1) * 0x9E3779B97F4A7C15          (mod 2^64)
        z_i ^= z_i >> 30;  z_i *= 0xBF58476D1CE4E5B9
        z_i ^= z_i >> 27;  z_i *= 0x94D049BB133111EB
        z_i ^= z_i >> 31
    uniform  U_i = (z_i >> 11) * 2^-53                      in [0, 1)
    gaussian (Box-Muller on consecutive uniforms)
        r = sqrt(-2 ln(1 - U_2k)),  g_2k = r cos(2 pi U_2k+1),  g_2k+1 = r sin(2 pi U_2k+1)

    texture key       = seed XOR 0xD1B54A32D192ED03
    noise key, frame t = seed XOR t

Samples are quantized with round-half-away-from-zero and clamped to [0, 255].
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.ndimage import gaussian_filter

from errors import InvalidSpec
from flow.field import FlowField
from frames.frame import Frame, SequenceHandle, quantize_samples

logger = logging.getLogger(__name__)

KINDS = ("static-noise", "global-translation", "flat")

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
MIX_2 = np.uint64(0x94D049BB133111EB)
TEXTURE_SALT = 0xD1B54A32D192ED03

TEXTURE_BLUR_SIGMA = 2.0
TEXTURE_LOW = 32.0
TEXTURE_HIGH = 223.0
FLAT_LEVEL = 128.0

# Backward flow on frame t's grid pointing into frame t-1
FLOW_CONVENTION = "backward: pixel x of frame t matches x + f(x) in frame t-1"


@dataclass(frozen=True)
class FixtureSpec:
    kind: str = "static-noise"
    width: int = 256
    height: int = 256
    frame_count: int = 64
    noise_sigma: float = 10.0
    shift_per_frame: Tuple[int, int] = (0, 0)
    texture_seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown fixture kind {self.kind!r}, expected one of {', '.join(KINDS)}")
        if self.width < 1 or self.height < 1:
            raise InvalidSpec(f"fixture size must be positive, got {self.width}x{self.height}")
        if self.frame_count < 1:
            raise InvalidSpec(f"frame_count must be >= 1, got {self.frame_count}")
        if not np.isfinite(self.noise_sigma) or self.noise_sigma < 0:
            raise InvalidSpec(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        # Translation frames are noise-free shifted copies of the texture
        if self.kind == "global-translation":
            object.__setattr__(self, "noise_sigma", 0.0)
        dx, dy = self.shift_per_frame
        if int(dx) != dx or int(dy) != dy:
            raise InvalidSpec(f"shift_per_frame must be whole pixels, got {self.shift_per_frame}")
        object.__setattr__(self, "shift_per_frame", (int(dx), int(dy)))
        if not 0 <= self.texture_seed <= MASK64:
            raise InvalidSpec(f"texture_seed must fit in 64 bits, got {self.texture_seed}")


def splitmix64_stream(key: int, count: int) -> np.ndarray:
    """First `count` outputs of the SplitMix64 counter stream for key"""
    counters = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(key & MASK64) + counters * GOLDEN_GAMMA
        z = (z ^ (z >> np.uint64(30))) * MIX_1
        z = (z ^ (z >> np.uint64(27))) * MIX_2
        z = z ^ (z >> np.uint64(31))
    return z


def uniform_stream(key: int, count: int) -> np.ndarray:
    return (splitmix64_stream(key, count) >> np.uint64(11)).astype(np.float64) * (2.0 ** -53)


def gaussian_stream(key: int, count: int) -> np.ndarray:
    """Standard normal samples by Box-Muller over the uniform stream"""
    pairs = (count + 1) // 2
    u = uniform_stream(key, 2 * pairs)
    radius = np.sqrt(-2.0 * np.log(1.0 - u[0::2]))
    angle = 2.0 * np.pi * u[1::2]
    out = np.empty(2 * pairs, dtype=np.float64)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]


def base_texture(width: int, height: int, seed: int) -> np.ndarray:
    """Band-limited random field: white noise, Gaussian blur sigma=2, rescaled to [32, 223]"""
    noise = uniform_stream(seed ^ TEXTURE_SALT, width * height).reshape(height, width)
    blurred = gaussian_filter(noise, TEXTURE_BLUR_SIGMA, mode="reflect")
    low, high = blurred.min(), blurred.max()
    if high <= low:
        return np.full((height, width), 0.5 * (TEXTURE_LOW + TEXTURE_HIGH))
    return TEXTURE_LOW + (blurred - low) * ((TEXTURE_HIGH - TEXTURE_LOW) / (high - low))


def translated_crop(canvas: np.ndarray, top: int, left: int, height: int, width: int) -> np.ndarray:
    """height x width window of canvas at (top, left), clamp-to-edge outside the canvas"""
    rows = np.clip(np.arange(top, top + height), 0, canvas.shape[0] - 1)
    cols = np.clip(np.arange(left, left + width), 0, canvas.shape[1] - 1)
    return canvas[np.ix_(rows, cols)]


def _frame(samples: np.ndarray) -> Frame:
    return Frame(quantize_samples(samples).astype(np.float64))


def _static_noise(spec: FixtureSpec) -> List[Frame]:
    base = base_texture(spec.width, spec.height, spec.texture_seed)
    frames = []
    for t in range(spec.frame_count):
        if spec.noise_sigma > 0:
            noise = gaussian_stream(spec.texture_seed ^ t, base.size).reshape(base.shape)
            frames.append(_frame(base + spec.noise_sigma * noise))
        else:
            frames.append(_frame(base))
    return frames


def _global_translation(spec: FixtureSpec) -> List[Frame]:
    dx, dy = spec.shift_per_frame
    base = base_texture(spec.width, spec.height, spec.texture_seed)
    # Content moves by (dx, dy) per frame: frame_t(x) = base(x - t * shift), clamped to the edge
    return [
        _frame(translated_crop(base, -t * dy, -t * dx, spec.height, spec.width))
        for t in range(spec.frame_count)
    ]


def ground_truth_flows(spec: FixtureSpec) -> Optional[List[FlowField]]:
    """Backward flow for every pair (t-1, t); None for flat sequences"""
    pairs = spec.frame_count - 1
    if spec.kind == "flat":
        return None
    if spec.kind == "static-noise":
        return [FlowField.zeros(spec.width, spec.height) for _ in range(pairs)]
    dx, dy = spec.shift_per_frame
    return [FlowField.constant(spec.width, spec.height, -dx, -dy) for _ in range(pairs)]


def generate(spec: FixtureSpec) -> Tuple[SequenceHandle, Optional[List[FlowField]]]:
    """
    Build a synthetic sequence

    Args:
        spec: What to generate

    Returns:
        (sequence, ground-truth backward flows or None)
    """
    if spec.kind == "static-noise":
        frames = _static_noise(spec)
    elif spec.kind == "global-translation":
        frames = _global_translation(spec)
    else:
        frames = [Frame(np.full((spec.height, spec.width), FLAT_LEVEL)) for _ in range(spec.frame_count)]

    sequence = SequenceHandle(frames, [f"frame_{t:06d}" for t in range(spec.frame_count)])
    logger.info(
        "🧪 Generated %s fixture: %d frames %dx%d (sigma=%.2f, shift=%s, seed=%d)",
        spec.kind, spec.frame_count, spec.width, spec.height,
        spec.noise_sigma, spec.shift_per_frame, spec.texture_seed,
    )
    return sequence, ground_truth_flows(spec)


def metadata_lines(spec: FixtureSpec) -> List[str]:
    """key = value description of a fixture, written next to its frames"""
    truth = "none" if spec.kind == "flat" else "pair_%06d.flo"
    return [
        f"kind = {spec.kind}",
        f"width = {spec.width}",
        f"height = {spec.height}",
        f"frames = {spec.frame_count}",
        f"noise_sigma = {spec.noise_sigma!r}",
        f"shift_x = {spec.shift_per_frame[0]}",
        f"shift_y = {spec.shift_per_frame[1]}",
        f"seed = {spec.texture_seed}",
        "prng = splitmix64 + box-muller",
        f"flow_convention = {FLOW_CONVENTION}",
        f"ground_truth_flow = {truth}",
    ]
