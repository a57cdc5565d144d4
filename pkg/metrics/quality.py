# metrics/quality.py - PSNR and SSIM between two frames
import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import correlate1d

from errors import DimensionMismatch, InvalidParams, TooSmall
from frames.frame import Frame, to_luma

PEAK = 255.0
# Reported for identical frames, where MSE is zero
PSNR_IDENTICAL_DB = 99.0
MSE_FLOOR = 1e-12


@dataclass(frozen=True)
class SsimParams:
    window: int = 11
    sigma: float = 1.5
    k1: float = 0.01
    k2: float = 0.03
    dynamic_range: float = 255.0

    def __post_init__(self):
        if self.window < 1 or self.window % 2 == 0:
            raise InvalidParams(f"SSIM window must be a positive odd size, got {self.window}")
        if self.sigma <= 0 or self.k1 <= 0 or self.k2 <= 0 or self.dynamic_range <= 0:
            raise InvalidParams("SSIM sigma, k1, k2 and dynamic range must be positive")

    @property
    def c1(self) -> float:
        return (self.k1 * self.dynamic_range) ** 2

    @property
    def c2(self) -> float:
        return (self.k2 * self.dynamic_range) ** 2

    def kernel_1d(self) -> np.ndarray:
        """Normalised 1-D Gaussian; the 2-D window is its outer product and sums to 1"""
        radius = self.window // 2
        x = np.arange(-radius, radius + 1, dtype=np.float64)
        g = np.exp(-(x * x) / (2.0 * self.sigma * self.sigma))
        return g / g.sum()


def psnr(a: Frame, b: Frame) -> float:
    """10 log10(255^2 / MSE) over every sample of every channel"""
    if not a.same_shape(b):
        raise DimensionMismatch(f"psnr of {a.size} against {b.size}")
    diff = a.data - b.data
    mse = float(np.mean(diff * diff))
    if mse < MSE_FLOOR:
        return PSNR_IDENTICAL_DB
    return 10.0 * math.log10(PEAK * PEAK / mse)


def _window_mean(plane: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Gaussian-weighted local mean for every window fully inside the image"""
    radius = len(kernel) // 2
    filtered = correlate1d(plane, kernel, axis=0, mode="constant")
    filtered = correlate1d(filtered, kernel, axis=1, mode="constant")
    h, w = plane.shape
    return filtered[radius:h - radius, radius:w - radius]


def ssim_map(a: Frame, b: Frame, params: SsimParams = SsimParams()) -> np.ndarray:
    if (a.width, a.height) != (b.width, b.height):
        raise DimensionMismatch(f"ssim of {a.width}x{a.height} against {b.width}x{b.height}")
    if min(a.width, a.height) < params.window:
        raise TooSmall(f"SSIM needs at least {params.window}x{params.window}, got {a.width}x{a.height}")

    x = to_luma(a).plane()
    y = to_luma(b).plane()
    kernel = params.kernel_1d()

    mu_x = _window_mean(x, kernel)
    mu_y = _window_mean(y, kernel)
    var_x = _window_mean(x * x, kernel) - mu_x * mu_x
    var_y = _window_mean(y * y, kernel) - mu_y * mu_y
    cov_xy = _window_mean(x * y, kernel) - mu_x * mu_y

    c1, c2 = params.c1, params.c2
    numerator = (2.0 * mu_x * mu_y + c1) * (2.0 * cov_xy + c2)
    denominator = (mu_x * mu_x + mu_y * mu_y + c1) * (var_x + var_y + c2)
    return numerator / denominator


def ssim(a: Frame, b: Frame, params: SsimParams = SsimParams()) -> float:
    """Single-scale SSIM on luma, mean over the valid-window map"""
    return float(np.mean(ssim_map(a, b, params)))
