# flow/horn_schunck.py - Pyramidal Horn-Schunck dense optical flow
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from errors import DimensionMismatch, InvalidParams
from flow.field import FlowField
from flow.pyramid import auto_levels, build_pyramid, max_levels, upsample_flow
from frames.frame import Frame, to_luma
from warping import remap_plane

logger = logging.getLogger(__name__)

# Horn-Schunck neighbourhood average weights
CROSS_WEIGHT = 1 / 6
DIAGONAL_WEIGHT = 1 / 12


@dataclass(frozen=True)
class FlowParams:
    """Configuration of the flow estimator; pyramid_levels=None picks levels automatically"""
    pyramid_levels: Optional[int] = None
    smoothness_lambda: float = 15.0
    iterations_per_level: int = 100
    warps_per_level: int = 3

    def __post_init__(self):
        if self.pyramid_levels is not None and self.pyramid_levels < 1:
            raise InvalidParams(f"pyramid_levels must be >= 1, got {self.pyramid_levels}")
        if self.iterations_per_level < 1:
            raise InvalidParams(f"iterations_per_level must be >= 1, got {self.iterations_per_level}")
        if self.warps_per_level < 1:
            raise InvalidParams(f"warps_per_level must be >= 1, got {self.warps_per_level}")
        if not np.isfinite(self.smoothness_lambda) or self.smoothness_lambda < 0:
            raise InvalidParams(f"smoothness_lambda must be >= 0, got {self.smoothness_lambda}")

    def levels_for(self, width: int, height: int) -> int:
        if self.pyramid_levels is None:
            return auto_levels(width, height)
        return max(1, min(self.pyramid_levels, max_levels(width, height)))


def image_gradients(image: np.ndarray):
    """Central differences inside, one-sided differences on the border rows/columns"""
    h, w = image.shape
    gy = np.gradient(image, axis=0) if h > 1 else np.zeros_like(image)
    gx = np.gradient(image, axis=1) if w > 1 else np.zeros_like(image)
    return gx, gy


def neighbour_average(field: np.ndarray, padded: Optional[np.ndarray] = None) -> np.ndarray:
    """
    1/6 of the 4-neighbours plus 1/12 of the diagonals, edge samples repeated
    past the border. `padded` is an optional (h+2, w+2) scratch buffer.
    """
    h, w = field.shape
    if padded is None:
        padded = np.empty((h + 2, w + 2))
    padded[1:-1, 1:-1] = field
    padded[0, 1:-1] = field[0]
    padded[-1, 1:-1] = field[-1]
    padded[:, 0] = padded[:, 1]
    padded[:, -1] = padded[:, -2]

    cross = padded[:-2, 1:-1] + padded[2:, 1:-1]
    cross += padded[1:-1, :-2]
    cross += padded[1:-1, 2:]
    diagonal = padded[:-2, :-2] + padded[:-2, 2:]
    diagonal += padded[2:, :-2]
    diagonal += padded[2:, 2:]
    cross *= CROSS_WEIGHT
    diagonal *= DIAGONAL_WEIGHT
    cross += diagonal
    return cross


def refine_level(prev: np.ndarray, nxt: np.ndarray, u: np.ndarray, v: np.ndarray, params: FlowParams):
    """
    Horn-Schunck at one pyramid level, linearised around the incoming flow.

    Each warp pass resamples prev at x + (u, v), then runs Jacobi sweeps on the
    total flow. Jacobi reads only the previous iterate, so the result does not
    depend on the sweep order.
    """
    lam = params.smoothness_lambda
    gx_next, gy_next = image_gradients(nxt)
    scratch = np.empty((u.shape[0] + 2, u.shape[1] + 2))

    for _ in range(params.warps_per_level):
        warped = remap_plane(prev, u, v)
        gx_warp, gy_warp = image_gradients(warped)
        ix = 0.5 * (gx_warp + gx_next)
        iy = 0.5 * (gy_warp + gy_next)
        it = warped - nxt

        u0, v0 = u, v
        denom = lam + ix * ix + iy * iy
        safe = denom > 0
        step = np.zeros_like(u)

        for _ in range(params.iterations_per_level):
            u_avg = neighbour_average(u, scratch)
            v_avg = neighbour_average(v, scratch)
            residual = ix * (u_avg - u0) + iy * (v_avg - v0) + it
            np.divide(residual, denom, out=step, where=safe)
            u = u_avg - ix * step
            v = v_avg - iy * step

    return u, v


def estimate_flow(prev: Frame, nxt: Frame, params: Optional[FlowParams] = None) -> FlowField:
    """
    Backward flow on nxt's grid: pixel x of nxt corresponds to x + f(x) in prev

    Args:
        prev: Earlier frame (converted to luma)
        nxt: Later frame (converted to luma)
        params: Estimator configuration, defaults to FlowParams()

    Returns:
        FlowField sized like the frames
    """
    params = params or FlowParams()
    if (prev.width, prev.height) != (nxt.width, nxt.height):
        raise DimensionMismatch(
            f"cannot estimate flow between {prev.width}x{prev.height} and {nxt.width}x{nxt.height}"
        )

    levels = params.levels_for(prev.width, prev.height)
    prev_pyramid = build_pyramid(to_luma(prev).plane(), levels)
    next_pyramid = build_pyramid(to_luma(nxt).plane(), levels)

    coarsest = prev_pyramid[-1].shape
    u = np.zeros(coarsest)
    v = np.zeros(coarsest)
    for level in range(levels - 1, -1, -1):
        shape = prev_pyramid[level].shape
        if u.shape != shape:
            u, v = upsample_flow(u, v, shape)
        u, v = refine_level(prev_pyramid[level], next_pyramid[level], u, v, params)

    logger.debug("🧭 Flow %dx%d over %d levels", prev.width, prev.height, levels)
    return FlowField(u, v)
