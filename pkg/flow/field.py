# flow/field.py - Dense displacement fields
from dataclasses import dataclass

import numpy as np

from errors import DimensionMismatch, InvalidParams


@dataclass(frozen=True, eq=False)
class FlowField:
    """
    Per-pixel displacement in pixels on a frame grid.

    u is horizontal (positive = rightward), v is vertical (positive = downward).
    Both are float64 arrays of shape (height, width).
    """
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.array(self.u, dtype=np.float64, copy=True)
        v = np.array(self.v, dtype=np.float64, copy=True)
        if u.ndim != 2 or u.shape != v.shape:
            raise DimensionMismatch(f"u {u.shape} and v {v.shape} must be equal 2-D arrays")
        if u.size == 0:
            raise InvalidParams("flow field must have positive size")
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise InvalidParams("flow field entries must be finite")
        u.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def height(self) -> int:
        return self.u.shape[0]

    @property
    def width(self) -> int:
        return self.u.shape[1]

    @property
    def shape(self):
        return self.u.shape

    @classmethod
    def zeros(cls, width: int, height: int) -> "FlowField":
        return cls(np.zeros((height, width)), np.zeros((height, width)))

    @classmethod
    def constant(cls, width: int, height: int, du: float, dv: float) -> "FlowField":
        return cls(np.full((height, width), float(du)), np.full((height, width), float(dv)))

    def magnitude(self) -> np.ndarray:
        return np.sqrt(self.u * self.u + self.v * self.v)

    def check_grid(self, width: int, height: int, what: str = "frame"):
        if (self.width, self.height) != (width, height):
            raise DimensionMismatch(
                f"flow field is {self.width}x{self.height}, {what} is {width}x{height}"
            )


def mean_magnitude(field: FlowField) -> float:
    """Mean per-pixel endpoint length sqrt(u^2 + v^2), in pixels"""
    magnitude = np.ascontiguousarray(field.magnitude())
    return float(magnitude.sum() / magnitude.size)


def endpoint_error(estimate: FlowField, truth: FlowField, margin: int = 0) -> float:
    """Mean endpoint error over pixels at least margin px from every border"""
    if estimate.shape != truth.shape:
        raise DimensionMismatch(f"estimate {estimate.shape} vs ground truth {truth.shape}")
    h, w = estimate.shape
    if 2 * margin >= min(h, w):
        raise InvalidParams(f"margin {margin} leaves no interior in a {w}x{h} field")
    inner = (slice(margin, h - margin), slice(margin, w - margin))
    du = estimate.u[inner] - truth.u[inner]
    dv = estimate.v[inner] - truth.v[inner]
    return float(np.mean(np.sqrt(du * du + dv * dv)))
