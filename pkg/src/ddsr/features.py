"""Per-patch feature vectors for the low-frequency side of a coupled dictionary.

A low-frequency HR image is filtered with a small high-pass bank, patches
are read from every filtered image at the same origins used for the paired
high-frequency patches, the per-filter patches are concatenated in fixed
kernel order, and the stacked vectors are projected onto a PCA basis.

Every kernel in the bank must have zero DC response, so flat regions
produce exactly-zero raw features. When the projection is fitted without
centering (the setting used by the training pipeline) those zero vectors
stay zero after projection and flat areas never synthesize detail.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import ConfigurationError, DimensionError
from .image import as_image
from .patches import extract_patches


def _default_kernels() -> list[np.ndarray]:
    grad = np.array([[1.0, 0.0, -1.0]])
    lap = np.array([[1.0, 0.0, -2.0, 0.0, 1.0]]) / 2.0
    return [grad, grad.T, lap, lap.T]


def default_filter_bank() -> "FilterBank":
    """Gradient and half-Laplacian stencils, horizontal and vertical."""
    return FilterBank(kernels=_default_kernels())


@dataclass
class FilterBank:
    """An ordered list of zero-DC (high-pass) 2-D stencils."""

    kernels: list[np.ndarray] = field(default_factory=_default_kernels)

    def __post_init__(self):
        self.kernels = [np.atleast_2d(np.asarray(k, dtype=np.float64)) for k in self.kernels]
        if not self.kernels:
            raise ConfigurationError("filter bank needs at least one kernel")
        for k in self.kernels:
            if abs(k.sum()) > 1e-12:
                raise ConfigurationError(
                    f"kernel entries must sum to 0 (high-pass), got {k.sum():g}"
                )


@dataclass
class PcaProjection:
    """Affine projection onto the leading principal directions.

    ``basis`` rows are orthonormal; projecting computes
    ``basis @ (x - mean)`` columnwise. ``mean`` is all-zero when the
    projection was fitted without centering.
    """

    mean: np.ndarray  # (raw_dim,)
    basis: np.ndarray  # (reduced_dim, raw_dim)
    energy_kept: float

    def __post_init__(self):
        self.mean = np.asarray(self.mean, dtype=np.float64)
        self.basis = np.asarray(self.basis, dtype=np.float64)
        if self.basis.ndim != 2 or self.mean.shape != (self.basis.shape[1],):
            raise DimensionError(
                f"basis {self.basis.shape} and mean {self.mean.shape} are inconsistent"
            )
        gram = self.basis @ self.basis.T
        if np.max(np.abs(gram - np.eye(len(gram)))) > 1e-10:
            raise ConfigurationError("basis rows are not orthonormal")

    @property
    def raw_dim(self) -> int:
        return self.basis.shape[1]

    @property
    def reduced_dim(self) -> int:
        return self.basis.shape[0]


@dataclass
class FeaturePipeline:
    """Filter bank + PCA + the patch geometry shared with the paired HF patches."""

    bank: FilterBank
    pca: PcaProjection
    patch_size: int
    stride: int

    def __post_init__(self):
        expected = len(self.bank.kernels) * self.patch_size**2
        if self.pca.raw_dim != expected:
            raise DimensionError(
                f"pca raw dim {self.pca.raw_dim} != n_kernels * patch_size^2 = {expected}"
            )


def filter_image(img: np.ndarray, bank: FilterBank) -> list[np.ndarray]:
    """Convolve with every kernel of the bank (mirror borders), same-size outputs."""
    img = as_image(img)
    out = []
    for k in bank.kernels:
        if k.shape[0] > img.shape[0] or k.shape[1] > img.shape[1]:
            raise DimensionError(f"kernel {k.shape} larger than image {img.shape}")
        out.append(ndimage.convolve(img, k, mode="mirror"))
    return out


def stacked_filter_patches(
    img: np.ndarray, bank: FilterBank, patch_size: int, stride: int
) -> np.ndarray:
    """Stacked per-filter patches, one column per patch origin.

    Column k is the concatenation, in kernel order, of patch k of each
    filtered image; origins match ``extract_patches`` on the same image.
    """
    filtered = filter_image(img, bank)
    blocks = [extract_patches(f, patch_size, stride).patches for f in filtered]
    return np.vstack(blocks)


def raw_features(img: np.ndarray, pipeline: FeaturePipeline) -> np.ndarray:
    """Stacked per-filter patches for the pipeline's bank and patch geometry."""
    return stacked_filter_patches(img, pipeline.bank, pipeline.patch_size, pipeline.stride)


def fit_pca(samples: np.ndarray, energy_kept: float, center: bool = True) -> PcaProjection:
    """Fit a PCA projection keeping the stated fraction of spectral energy.

    Parameters
    ----------
    samples : ndarray (raw_dim, n_samples)
        One sample per column.
    energy_kept : float in (0, 1]
        The reduced dimension is the smallest d whose leading eigenvalues
        reach this fraction of the total; never below 1.
    center : bool
        When True the sample mean is subtracted before the eigenanalysis
        and stored for projection. When False the basis diagonalizes the
        uncentered second moment and ``mean`` is all-zero, so the zero
        vector projects to zero.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[1] < 2:
        raise ConfigurationError(f"need a (dim, n>=2) sample matrix, got {samples.shape}")
    if not 0.0 < energy_kept <= 1.0:
        raise ConfigurationError(f"energy_kept must be in (0, 1], got {energy_kept}")
    raw_dim, n = samples.shape
    if center:
        mean = samples.mean(axis=1)
        centered = samples - mean[:, None]
    else:
        mean = np.zeros(raw_dim)
        centered = samples
    cov = (centered @ centered.T) / (n - 1)
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    eigvecs = eigvecs[:, order]
    total = eigvals.sum()
    if total <= 0.0:
        reduced = 1
    else:
        cum = np.cumsum(eigvals)
        reduced = int(np.searchsorted(cum, energy_kept * total * (1.0 - 1e-12)) + 1)
        reduced = min(max(reduced, 1), raw_dim)
    basis = eigvecs[:, :reduced].T.copy()
    # fix signs so the largest-magnitude entry of each row is positive
    flips = np.take_along_axis(
        basis, np.argmax(np.abs(basis), axis=1)[:, None], axis=1
    ).ravel()
    basis[flips < 0] *= -1.0
    return PcaProjection(mean=mean, basis=basis, energy_kept=energy_kept)


def project(features: np.ndarray, pca: PcaProjection) -> np.ndarray:
    """Columnwise ``basis @ (features - mean)``."""
    features = np.asarray(features, dtype=np.float64)
    single = features.ndim == 1
    cols = features[:, None] if single else features
    if cols.shape[0] != pca.raw_dim:
        raise DimensionError(f"feature dim {cols.shape[0]} != pca raw dim {pca.raw_dim}")
    out = pca.basis @ (cols - pca.mean[:, None])
    return out.ravel() if single else out
