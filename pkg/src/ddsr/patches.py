"""Overlapping patch extraction and least-squares reassembly.

A patch grid enumerates square patches on a regular stride grid, with the
final row/column origin clamped to the image border so every pixel is
covered. Reassembly averages all patch values covering each pixel, which
is the closed-form minimizer of the summed per-patch squared error: the
normal matrix is diagonal with per-pixel coverage counts, so no system is
ever formed explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import CoverageError, DimensionError
from .image import as_image


def axis_origins(length: int, patch_size: int, stride: int) -> np.ndarray:
    """Origins along one axis: a stride grid plus a border-clamped final origin."""
    if patch_size < 1 or stride < 1:
        raise DimensionError(f"patch size {patch_size} and stride {stride} must be >= 1")
    if patch_size > length:
        raise DimensionError(f"patch size {patch_size} exceeds axis length {length}")
    last = length - patch_size
    origins = list(range(0, last + 1, stride))
    if origins[-1] != last:
        origins.append(last)
    return np.asarray(origins)


@dataclass
class PatchGrid:
    """Ordered overlapping patches plus the geometry to put them back.

    ``patches`` has one column per origin; each column is a patch read
    row-major, so its length is ``patch_size**2``. ``origins`` is the
    row-major list of (row, col) top-left corners on ``image_shape``.
    """

    patch_size: int
    stride: int
    origins: np.ndarray  # (n_patches, 2) int
    patches: np.ndarray  # (patch_size**2, n_patches) float64
    image_shape: tuple[int, int]

    def __post_init__(self):
        h, w = self.image_shape
        if not (1 <= self.stride <= self.patch_size):
            raise DimensionError(
                f"stride {self.stride} must be in [1, patch_size={self.patch_size}]"
            )
        if self.patch_size > min(h, w):
            raise DimensionError(f"patch {self.patch_size} larger than image {self.image_shape}")
        self.origins = np.asarray(self.origins)
        if self.origins.ndim != 2 or self.origins.shape[1] != 2:
            raise DimensionError("origins must be an (n, 2) array of (row, col) pairs")
        if np.any(self.origins < 0) or np.any(self.origins[:, 0] > h - self.patch_size) or np.any(
            self.origins[:, 1] > w - self.patch_size
        ):
            raise DimensionError("patch origin out of bounds")
        if self.patches.shape != (self.patch_size**2, len(self.origins)):
            raise DimensionError(
                f"patches shape {self.patches.shape} does not match "
                f"{(self.patch_size**2, len(self.origins))}"
            )

    @property
    def n_patches(self) -> int:
        return self.patches.shape[1]


def grid_origins(image_shape: tuple[int, int], patch_size: int, stride: int) -> np.ndarray:
    """Row-major (row, col) origins of the full-coverage grid for an image."""
    h, w = image_shape
    if patch_size > min(h, w):
        raise DimensionError(f"patch {patch_size} larger than image {image_shape}")
    if not (1 <= stride <= patch_size):
        raise DimensionError(f"stride {stride} must be in [1, patch_size={patch_size}]")
    rows = axis_origins(h, patch_size, stride)
    cols = axis_origins(w, patch_size, stride)
    rr, cc = np.meshgrid(rows, cols, indexing="ij")
    return np.stack([rr.ravel(), cc.ravel()], axis=1)


def extract_patches(img: np.ndarray, patch_size: int, stride: int) -> PatchGrid:
    """Extract all patches of the full-coverage grid, one column per patch."""
    img = as_image(img)
    origins = grid_origins(img.shape, patch_size, stride)
    windows = sliding_window_view(img, (patch_size, patch_size))
    cols = windows[origins[:, 0], origins[:, 1]].reshape(len(origins), -1).T
    return PatchGrid(
        patch_size=patch_size,
        stride=stride,
        origins=origins,
        patches=np.ascontiguousarray(cols),
        image_shape=img.shape,
    )


def assemble_patches(grid: PatchGrid) -> np.ndarray:
    """Average overlapping patch values back into an image.

    Each output pixel is the mean of every patch value covering it. The
    mean is accumulated as deviations from one covering value, so when all
    covering patches agree the pixel is reproduced exactly regardless of
    its coverage count. Raises CoverageError if any pixel is covered by no
    patch, which cannot happen for a grid produced by ``extract_patches``.
    """
    h, w = grid.image_shape
    p = grid.patch_size
    ref = np.zeros((h, w))
    count = np.zeros((h, w))
    for k, (r, c) in enumerate(grid.origins):
        ref[r : r + p, c : c + p] = grid.patches[:, k].reshape(p, p)
        count[r : r + p, c : c + p] += 1.0
    if np.any(count == 0):
        raise CoverageError(f"{int(np.sum(count == 0))} pixels covered by no patch")
    dev = np.zeros((h, w))
    for k, (r, c) in enumerate(grid.origins):
        dev[r : r + p, c : c + p] += grid.patches[:, k].reshape(p, p) - ref[r : r + p, c : c + p]
    return ref + dev / count
