"""Image fidelity metrics."""

from __future__ import annotations

import math

import numpy as np

from .errors import DimensionError
from .image import as_image


def psnr(a: np.ndarray, b: np.ndarray) -> float:
    """Peak signal-to-noise ratio in dB between two [0, 1] gray images.

    Computed as 10*log10(1 / MSE) over the full image (no border trim),
    which matches the 8-bit 255-peak convention once intensities are
    mapped v/255. Identical images give +inf.
    """
    a, b = as_image(a), as_image(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)
