# warping.py - Backward bilinear remapping with clamp-to-edge borders
import numpy as np
from scipy.ndimage import map_coordinates

from errors import DimensionMismatch
from flow.field import FlowField
from frames.frame import Frame


def sample_coordinates(u: np.ndarray, v: np.ndarray):
    """Row/column sample positions x + u, y + v, clamped to the image"""
    h, w = u.shape
    rows, cols = np.meshgrid(np.arange(h, dtype=np.float64), np.arange(w, dtype=np.float64), indexing="ij")
    return np.clip(rows + v, 0, h - 1), np.clip(cols + u, 0, w - 1)


def remap_plane(plane: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Bilinear sample of a 2-D array at (x + u, y + v)"""
    rows, cols = sample_coordinates(u, v)
    return map_coordinates(np.asarray(plane, dtype=np.float64), [rows, cols], order=1, mode="nearest")


def remap_stack(stack: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Remap every channel of an (H, W, C) array with one shared displacement"""
    rows, cols = sample_coordinates(u, v)
    out = np.empty(stack.shape, dtype=np.float64)
    for c in range(stack.shape[2]):
        out[:, :, c] = map_coordinates(
            np.asarray(stack[:, :, c], dtype=np.float64), [rows, cols], order=1, mode="nearest"
        )
    return out


def warp(image: Frame, field: FlowField) -> Frame:
    """
    Warp(I, f): output(x, y) = I(x + u(x, y), y + v(x, y)) per channel,
    bilinear, coordinates clamped to [0, W-1] x [0, H-1]
    """
    if (image.width, image.height) != (field.width, field.height):
        raise DimensionMismatch(
            f"image is {image.width}x{image.height}, flow is {field.width}x{field.height}"
        )
    if not (field.u.any() or field.v.any()):
        return image
    out = remap_stack(image.data, field.u, field.v)
    # Interpolation weights sum to one; keep last-ulp drift inside the source range
    return Frame(np.clip(out, image.data.min(), image.data.max()))
