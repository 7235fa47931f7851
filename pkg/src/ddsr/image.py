"""Whole-image operators: blur, decimation, bicubic upscaling, pixel arithmetic.

Images are plain 2-D float64 numpy arrays. Two conventions are used
throughout the package:

* a *gray* image holds intensities in [0, 1] (8-bit values map to v/255);
* a *signed* image holds a high-frequency component of any sign and is
  kept unclamped until the final output boundary (``clamp_to_gray``).

Border handling is symmetric mirror-without-repeat everywhere (the edge
sample is not duplicated), which is scipy.ndimage's ``mode='mirror'``.
Decimation samples the top-left pixel of each block; the bicubic output
grid is aligned so that ``out[r*s, c*s]`` reproduces source sample
``(r, c)`` exactly. Both phase conventions are frozen by the model file
format version, so training and synthesis always agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DimensionError


@dataclass(frozen=True)
class DegradationSpec:
    """Blur + decimation parameters that turn an HR image into its LR observation."""

    blur_kernel_size: int = 5
    blur_sigma: float = 1.0
    scale: int = 2

    def __post_init__(self):
        if self.blur_kernel_size < 1 or self.blur_kernel_size % 2 == 0:
            raise DimensionError(
                f"blur kernel size must be a positive odd integer, got {self.blur_kernel_size}"
            )
        if not self.blur_sigma > 0:
            raise DimensionError(f"blur sigma must be > 0, got {self.blur_sigma}")
        if self.scale < 2:
            raise DimensionError(f"degradation scale must be an integer >= 2, got {self.scale}")


def as_image(img) -> np.ndarray:
    """Validate and return ``img`` as a 2-D float64 array."""
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"expected a non-empty 2-D image, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError("image contains non-finite values")
    return arr


def gaussian_kernel(size: int, sigma: float) -> np.ndarray:
    """Sampled 2-D Gaussian, normalized to unit sum.

    Entries are exp(-(i^2 + j^2) / (2 sigma^2)) on the centered odd grid,
    divided by their total.
    """
    if size < 1 or size % 2 == 0:
        raise DimensionError(f"kernel size must be a positive odd integer, got {size}")
    half = size // 2
    coords = np.arange(-half, half + 1, dtype=np.float64)
    ii, jj = np.meshgrid(coords, coords, indexing="ij")
    kernel = np.exp(-(ii**2 + jj**2) / (2.0 * sigma**2))
    return kernel / kernel.sum()


def gaussian_blur(img: np.ndarray, spec: DegradationSpec) -> np.ndarray:
    """Blur with the degradation's normalized Gaussian kernel, mirror borders."""
    img = as_image(img)
    if spec.blur_kernel_size > min(img.shape):
        raise DimensionError(
            f"blur kernel {spec.blur_kernel_size} exceeds image dims {img.shape}"
        )
    kernel = gaussian_kernel(spec.blur_kernel_size, spec.blur_sigma)
    return ndimage.convolve(img, kernel, mode="mirror")


def decimate(img: np.ndarray, scale: int) -> np.ndarray:
    """Keep the top-left sample of every ``scale`` x ``scale`` block."""
    img = as_image(img)
    if scale < 1:
        raise DimensionError(f"scale must be >= 1, got {scale}")
    h, w = img.shape
    if h % scale != 0 or w % scale != 0:
        raise DimensionError(
            f"image dims {img.shape} not divisible by scale {scale}; crop first"
        )
    return img[::scale, ::scale].copy()


def degrade(img: np.ndarray, spec: DegradationSpec) -> np.ndarray:
    """Blur then decimate: the forward observation model (no added noise)."""
    return decimate(gaussian_blur(img, spec), spec.scale)


def crop_to_multiple(img: np.ndarray, scale: int) -> np.ndarray:
    """Top-left anchored crop to the largest dims divisible by ``scale``."""
    img = as_image(img)
    h, w = img.shape
    ch, cw = h - h % scale, w - w % scale
    if ch == 0 or cw == 0:
        raise DimensionError(f"image {img.shape} smaller than scale {scale}")
    return img[:ch, :cw].copy()


def _keys_kernel(t: np.ndarray) -> np.ndarray:
    """Keys cubic convolution kernel with a = -0.5, evaluated at |t|."""
    t = np.abs(t)
    w = np.zeros_like(t)
    near = t <= 1.0
    far = (t > 1.0) & (t < 2.0)
    tn = t[near]
    w[near] = (1.5 * tn - 2.5) * tn * tn + 1.0
    tf = t[far]
    w[far] = ((-0.5 * tf + 2.5) * tf - 4.0) * tf + 2.0
    return w


def mirror_indices(idx: np.ndarray, n: int) -> np.ndarray:
    """Fold arbitrary integer indices into [0, n) by whole-sample reflection.

    Reflection does not repeat the edge sample: -1 -> 1 and n -> n - 2.
    """
    if n == 1:
        return np.zeros_like(idx)
    period = 2 * n - 2
    m = np.mod(idx, period)
    return np.where(m >= n, period - m, m)


def _bicubic_axis_tables(n: int, scale: int):
    """Per-output-row source indices (mirrored) and Keys weights for one axis."""
    out = np.arange(n * scale)
    base = out // scale
    frac = (out % scale) / float(scale)
    offsets = np.array([-1, 0, 1, 2])
    idx = mirror_indices(base[:, None] + offsets[None, :], n)
    weights = _keys_kernel(frac[:, None] - offsets[None, :])
    return idx, weights


def bicubic_upscale(img: np.ndarray, scale: int) -> np.ndarray:
    """Separable Keys (a = -0.5) bicubic upscaling by an integer factor.

    Output dims are ``scale`` times the input dims and the grid is aligned
    to source samples: ``out[r*s, c*s] == img[r, c]`` exactly. ``scale=1``
    is the identity. Output values are unclamped (the kernel overshoots).
    """
    img = as_image(img)
    if scale < 1:
        raise DimensionError(f"scale must be >= 1, got {scale}")
    if scale == 1:
        return img.copy()
    h, w = img.shape
    ridx, rw = _bicubic_axis_tables(h, scale)
    tmp = np.einsum("ok,okw->ow", rw, img[ridx, :])
    cidx, cw = _bicubic_axis_tables(w, scale)
    return np.einsum("ok,hok->ho", cw, tmp[:, cidx])


def img_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pixelwise sum of two equal-sized images (result may leave [0, 1])."""
    a, b = as_image(a), as_image(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a + b


def img_sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pixelwise difference of two equal-sized images."""
    a, b = as_image(a), as_image(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a - b


def clamp_to_gray(img: np.ndarray) -> np.ndarray:
    """Clip a signed image into the [0, 1] gray range (final output only)."""
    return np.clip(as_image(img), 0.0, 1.0)
