# flow/pyramid.py - Gaussian image pyramid for coarse-to-fine estimation
from typing import List

import numpy as np
from scipy.ndimage import correlate1d, map_coordinates

# 5-tap binomial approximation of a Gaussian
BINOMIAL_KERNEL = np.array([1.0, 4.0, 6.0, 4.0, 1.0]) / 16.0
MIN_LEVEL_SIZE = 16


def auto_levels(width: int, height: int, min_size: int = MIN_LEVEL_SIZE) -> int:
    """Levels to build so the coarsest level keeps min(width, height) >= min_size"""
    size = min(width, height)
    levels = 1
    while (size + 1) // 2 >= min_size:
        size = (size + 1) // 2
        levels += 1
    return levels


def max_levels(width: int, height: int) -> int:
    """Deepest pyramid whose coarsest level is still at least 2 px on the short side"""
    return auto_levels(width, height, min_size=2)


def blur_binomial(image: np.ndarray) -> np.ndarray:
    smoothed = correlate1d(image, BINOMIAL_KERNEL, axis=0, mode="nearest")
    return correlate1d(smoothed, BINOMIAL_KERNEL, axis=1, mode="nearest")


def downsample(image: np.ndarray) -> np.ndarray:
    """Binomial blur then keep every second row and column"""
    return blur_binomial(image)[::2, ::2]


def build_pyramid(image: np.ndarray, levels: int) -> List[np.ndarray]:
    """
    Build a Gaussian pyramid.

    Args:
        image: 2-D float array
        levels: Number of levels, >= 1

    Returns:
        List of images, index 0 = finest (the input), last = coarsest
    """
    pyramid = [np.asarray(image, dtype=np.float64)]
    for _ in range(1, levels):
        pyramid.append(downsample(pyramid[-1]))
    return pyramid


def upsample_flow(u: np.ndarray, v: np.ndarray, shape):
    """Carry a coarse flow to the next finer grid: bilinear resample, vectors doubled"""
    h, w = shape
    hc, wc = u.shape
    rows, cols = np.meshgrid(np.arange(h) / 2.0, np.arange(w) / 2.0, indexing="ij")
    coords = [np.clip(rows, 0, hc - 1), np.clip(cols, 0, wc - 1)]
    up_u = map_coordinates(u, coords, order=1, mode="nearest") * 2.0
    up_v = map_coordinates(v, coords, order=1, mode="nearest") * 2.0
    return up_u, up_v
