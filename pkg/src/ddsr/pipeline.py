"""Two-stage orchestration: dual-dictionary training and two-layer synthesis.

Training degrades each training image, recovers its low-frequency band by
bicubic upscaling, and learns a main coupled dictionary (MD) mapping
low-frequency features to the missing high frequencies. The first layer's
own reconstruction residual on the training data then drives a second,
residual coupled dictionary (RD). Synthesis applies the two layers in
sequence: bicubic base, MD detail, RD correction, one final clamp.

Intermediate images stay unclamped between layers; clamping once at the
output keeps the signed high-frequency arithmetic exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DimensionError
from .features import (
    FeaturePipeline,
    FilterBank,
    default_filter_bank,
    fit_pca,
    project,
    raw_features,
    stacked_filter_patches,
)
from .image import (
    DegradationSpec,
    as_image,
    bicubic_upscale,
    clamp_to_gray,
    crop_to_multiple,
    degrade,
    img_add,
    img_sub,
)
from .ksvd import CoupledDictionary, KsvdConfig, train_coupled
from .metrics import psnr
from .omp import codes_to_matrix, omp_batch
from .patches import PatchGrid, assemble_patches, extract_patches, grid_origins

log = logging.getLogger(__name__)

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class ModelConfig:
    """Every hyperparameter of training and synthesis."""

    degradation: DegradationSpec = field(default_factory=DegradationSpec)
    patch_size: int = 9
    stride: int = 8  # adjacent patches share a 1-pixel border by default
    sparsity: int = 3
    md_atoms: int = 500
    rd_atoms: int = 500
    ksvd_iterations: int = 40
    seed: int = 0
    min_patch_norm: float = 0.03
    pca_energy: float = 0.999

    def __post_init__(self):
        if min(self.patch_size, self.sparsity, self.md_atoms, self.rd_atoms) < 1:
            raise ConfigurationError(f"all sizes must be positive: {self}")
        if not 1 <= self.stride <= self.patch_size:
            raise ConfigurationError(
                f"stride {self.stride} must be in [1, patch_size={self.patch_size}]"
            )
        if self.ksvd_iterations < 0 or self.min_patch_norm < 0:
            raise ConfigurationError(f"invalid training configuration: {self}")
        if not 0.0 < self.pca_energy <= 1.0:
            raise ConfigurationError(f"pca_energy must be in (0, 1], got {self.pca_energy}")

    def ksvd_config(self, n_atoms: int, seed: int) -> KsvdConfig:
        return KsvdConfig(
            n_atoms=n_atoms,
            sparsity=self.sparsity,
            iterations=self.ksvd_iterations,
            seed=seed,
            min_patch_norm=self.min_patch_norm,
        )


@dataclass
class SRModel:
    """Complete trained artifact: configuration, feature pipelines, dictionaries."""

    config: ModelConfig
    md_features: FeaturePipeline
    md: CoupledDictionary
    rd_features: FeaturePipeline
    rd: CoupledDictionary
    format_version: int = MODEL_FORMAT_VERSION

    def __post_init__(self):
        d_h = self.config.patch_size**2
        for name, feats, coupled in (
            ("md", self.md_features, self.md),
            ("rd", self.rd_features, self.rd),
        ):
            if coupled.low.shape[0] != feats.pca.reduced_dim:
                raise DimensionError(
                    f"{name}.low dim {coupled.low.shape[0]} != "
                    f"feature dim {feats.pca.reduced_dim}"
                )
            if coupled.high.shape[0] != d_h:
                raise DimensionError(
                    f"{name}.high dim {coupled.high.shape[0]} != patch_size^2 = {d_h}"
                )


@dataclass
class TrainingReport:
    """Diagnostics recorded while training (not part of the model)."""

    md_objective: np.ndarray
    rd_objective: np.ndarray
    md_samples_kept: int
    md_samples_total: int
    rd_samples_kept: int
    rd_samples_total: int
    psnr_lf: list[float]  # bicubic-only PSNR per training image
    psnr_tmp: list[float]  # layer-1 PSNR per training image


@dataclass
class LayerStack:
    """Instrumented synthesis output; ``rhf``/``estimate`` are None after layer 1."""

    lf: np.ndarray
    mhf: np.ndarray
    tmp: np.ndarray
    rhf: np.ndarray | None = None
    estimate: np.ndarray | None = None


def synthesize_hf(
    lf_img: np.ndarray,
    features: FeaturePipeline,
    coupled: CoupledDictionary,
    sparsity: int,
) -> np.ndarray:
    """Estimate the high-frequency band of one low-frequency HR image.

    Feature columns are sparse-coded against the low dictionary and each
    code is multiplied into the high dictionary; the resulting patch
    estimates are averaged back into a signed full-size image.
    """
    lf_img = as_image(lf_img)
    feats = project(raw_features(lf_img, features), features.pca)
    codes = omp_batch(coupled.low, feats, sparsity)
    estimates = coupled.high @ codes_to_matrix(codes, coupled.n_atoms)
    grid = PatchGrid(
        patch_size=features.patch_size,
        stride=features.stride,
        origins=grid_origins(lf_img.shape, features.patch_size, features.stride),
        patches=estimates,
        image_shape=lf_img.shape,
    )
    return assemble_patches(grid)


def _fit_feature_pipeline(raw: np.ndarray, bank: FilterBank, cfg: ModelConfig) -> FeaturePipeline:
    # uncentered PCA: zero raw features (flat areas) must project to zero
    pca = fit_pca(raw, cfg.pca_energy, center=False)
    return FeaturePipeline(bank=bank, pca=pca, patch_size=cfg.patch_size, stride=cfg.stride)


def train_model_with_report(
    training_images: list[np.ndarray],
    cfg: ModelConfig,
    bank: FilterBank | None = None,
) -> tuple[SRModel, TrainingReport]:
    """Train both dictionary layers; also return training diagnostics."""
    if not training_images:
        raise ConfigurationError("need at least one training image")
    bank = bank if bank is not None else default_filter_bank()
    scale = cfg.degradation.scale
    originals = []
    for img in training_images:
        img = crop_to_multiple(as_image(img), scale)
        if min(img.shape) < cfg.patch_size:
            raise DimensionError(
                f"training image {img.shape} smaller than patch size {cfg.patch_size}"
            )
        originals.append(img)

    # layer 1: observed low band vs true missing high band
    lf_images = []
    hf_images = []
    for img in originals:
        lf = bicubic_upscale(degrade(img, cfg.degradation), scale)
        lf_images.append(lf)
        hf_images.append(img_sub(img, lf))
    md_raw = np.hstack(
        [stacked_filter_patches(lf, bank, cfg.patch_size, cfg.stride) for lf in lf_images]
    )
    md_high = np.hstack(
        [extract_patches(hf, cfg.patch_size, cfg.stride).patches for hf in hf_images]
    )
    md_features = _fit_feature_pipeline(md_raw, bank, cfg)
    md_result = train_coupled(
        project(md_raw, md_features.pca),
        md_high,
        cfg.ksvd_config(cfg.md_atoms, cfg.seed),
    )
    log.info(
        "main dictionary trained on %d/%d patches", int(md_result.kept.sum()), md_high.shape[1]
    )

    # layer 2: what layer 1 leaves behind on the training data
    tmp_images = []
    rhf_images = []
    psnr_lf, psnr_tmp = [], []
    for img, lf in zip(originals, lf_images):
        mhf = synthesize_hf(lf, md_features, md_result.coupled, cfg.sparsity)
        tmp = img_add(lf, mhf)
        tmp_images.append(tmp)
        rhf_images.append(img_sub(img, tmp))
        psnr_lf.append(psnr(clamp_to_gray(lf), img))
        psnr_tmp.append(psnr(clamp_to_gray(tmp), img))
    rd_raw = np.hstack(
        [stacked_filter_patches(tmp, bank, cfg.patch_size, cfg.stride) for tmp in tmp_images]
    )
    rd_high = np.hstack(
        [extract_patches(rhf, cfg.patch_size, cfg.stride).patches for rhf in rhf_images]
    )
    rd_features = _fit_feature_pipeline(rd_raw, bank, cfg)
    rd_result = train_coupled(
        project(rd_raw, rd_features.pca),
        rd_high,
        cfg.ksvd_config(cfg.rd_atoms, cfg.seed + 1),
    )
    log.info(
        "residual dictionary trained on %d/%d patches",
        int(rd_result.kept.sum()),
        rd_high.shape[1],
    )

    model = SRModel(
        config=cfg,
        md_features=md_features,
        md=md_result.coupled,
        rd_features=rd_features,
        rd=rd_result.coupled,
    )
    report = TrainingReport(
        md_objective=md_result.objective,
        rd_objective=rd_result.objective,
        md_samples_kept=int(md_result.kept.sum()),
        md_samples_total=md_high.shape[1],
        rd_samples_kept=int(rd_result.kept.sum()),
        rd_samples_total=rd_high.shape[1],
        psnr_lf=psnr_lf,
        psnr_tmp=psnr_tmp,
    )
    return model, report


def train_model(
    training_images: list[np.ndarray],
    cfg: ModelConfig,
    bank: FilterBank | None = None,
) -> SRModel:
    """Train a complete two-layer model from one or more HR images."""
    model, _ = train_model_with_report(training_images, cfg, bank)
    return model


def _check_lr_input(lr: np.ndarray, model: SRModel) -> np.ndarray:
    lr = as_image(lr)
    scale = model.config.degradation.scale
    if min(lr.shape) * scale < model.config.patch_size:
        raise DimensionError(
            f"input {lr.shape} upscaled by {scale} is smaller than one "
            f"{model.config.patch_size}x{model.config.patch_size} patch"
        )
    return lr


def super_resolve_layers(lr: np.ndarray, model: SRModel, two_layers: bool = True) -> LayerStack:
    """Run synthesis keeping every intermediate image."""
    lr = _check_lr_input(lr, model)
    cfg = model.config
    lf = bicubic_upscale(lr, cfg.degradation.scale)
    mhf = synthesize_hf(lf, model.md_features, model.md, cfg.sparsity)
    tmp = img_add(lf, mhf)
    if not two_layers:
        return LayerStack(lf=lf, mhf=mhf, tmp=tmp)
    rhf = synthesize_hf(tmp, model.rd_features, model.rd, cfg.sparsity)
    estimate = clamp_to_gray(img_add(tmp, rhf))
    return LayerStack(lf=lf, mhf=mhf, tmp=tmp, rhf=rhf, estimate=estimate)


def super_resolve(lr: np.ndarray, model: SRModel) -> np.ndarray:
    """Upscale an LR image with both dictionary layers; output clamped to [0, 1]."""
    return super_resolve_layers(lr, model, two_layers=True).estimate


def super_resolve_single_layer(lr: np.ndarray, model: SRModel) -> np.ndarray:
    """Ablation baseline: stop after the main dictionary layer."""
    return clamp_to_gray(super_resolve_layers(lr, model, two_layers=False).tmp)
