# frames/frame.py - Frame and sequence containers
from dataclasses import dataclass, field
from typing import List, Sequence

import numpy as np

from errors import DimensionMismatch, InvalidParams, NoFrames

# BT.601 luma weights
LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114], dtype=np.float64)


@dataclass(frozen=True, eq=False)
class Frame:
    """
    One image of a sequence.

    Samples are stored as float64 in [0, 255] with shape (height, width, channels)
    and channels in {1, 3}. The array is copied and locked on construction.
    """
    data: np.ndarray

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64, copy=True)
        if data.ndim == 2:
            data = data[:, :, np.newaxis]
        if data.ndim != 3 or data.shape[2] not in (1, 3):
            raise InvalidParams(f"frame must be HxW, HxWx1 or HxWx3, got shape {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise InvalidParams(f"frame must have positive size, got {data.shape[1]}x{data.shape[0]}")
        if not np.all(np.isfinite(data)):
            raise InvalidParams("frame samples must be finite")
        if data.min() < 0.0 or data.max() > 255.0:
            raise InvalidParams(
                f"frame samples must lie in [0, 255], got [{data.min():.4f}, {data.max():.4f}]"
            )
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    @property
    def size(self):
        """(width, height, channels)"""
        return self.width, self.height, self.channels

    def plane(self, channel: int = 0) -> np.ndarray:
        return self.data[:, :, channel]

    def same_shape(self, other: "Frame") -> bool:
        return self.data.shape == other.data.shape


@dataclass(frozen=True, eq=False)
class SequenceHandle:
    """Ordered, validated run of same-sized frames with their source file names"""
    frames: List[Frame]
    source_names: List[str] = field(default_factory=list)

    def __post_init__(self):
        frames = list(self.frames)
        if not frames:
            raise NoFrames("a sequence needs at least one frame")
        first = frames[0]
        for index, frame in enumerate(frames[1:], start=1):
            if not frame.same_shape(first):
                raise DimensionMismatch(
                    f"frame {index} is {frame.width}x{frame.height}x{frame.channels}, "
                    f"expected {first.width}x{first.height}x{first.channels}"
                )
        names = list(self.source_names) or [f"frame_{i:06d}" for i in range(len(frames))]
        if len(names) != len(frames):
            raise InvalidParams(f"{len(names)} source names for {len(frames)} frames")
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "source_names", names)

    def __len__(self):
        return len(self.frames)

    def __getitem__(self, index) -> Frame:
        return self.frames[index]

    def __iter__(self):
        return iter(self.frames)

    @property
    def width(self) -> int:
        return self.frames[0].width

    @property
    def height(self) -> int:
        return self.frames[0].height

    @property
    def channels(self) -> int:
        return self.frames[0].channels

    def pairs(self):
        """Consecutive (t-1, t) frame pairs tagged with the later index t"""
        for t in range(1, len(self.frames)):
            yield t, self.frames[t - 1], self.frames[t]


def to_luma(frame: Frame) -> Frame:
    """BT.601 luma of an RGB frame; luma frames pass through unchanged"""
    if frame.channels == 1:
        return frame
    luma = frame.data @ LUMA_WEIGHTS
    # Weights sum to one, rounding may still nudge 255 past the edge
    return Frame(np.clip(luma, 0.0, 255.0))


def quantize_samples(samples) -> np.ndarray:
    """Round half away from zero, then clamp to the 8-bit range"""
    values = np.asarray(samples, dtype=np.float64)
    rounded = np.sign(values) * np.floor(np.abs(values) + 0.5)
    return np.clip(rounded, 0, 255).astype(np.uint8)


def frames_from_arrays(arrays: Sequence[np.ndarray], names: Sequence[str] = ()) -> SequenceHandle:
    return SequenceHandle([Frame(a) for a in arrays], list(names))


def requantize(sequence: SequenceHandle) -> SequenceHandle:
    """The sequence as it reads back after an 8-bit write"""
    frames = [Frame(quantize_samples(frame.data).astype(np.float64)) for frame in sequence]
    return SequenceHandle(frames, sequence.source_names)
