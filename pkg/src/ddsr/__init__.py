"""Two-layer dictionary learning for single-image super-resolution.

A first pair of coupled dictionaries (trained with K-SVD on features of
bicubically upscaled images) restores the main high-frequency band; a second
pair, trained on what the first layer missed, restores part of the residual.
"""

from .bench import BenchReport, BenchRow, benchmark_image, run_benchmark
from .config import config_to_text, load_config, parse_config_text
from .errors import (
    ConfigurationError,
    CoverageError,
    DdsrError,
    DimensionError,
    ImageIOError,
    ModelFormatError,
)
from .features import (
    FeaturePipeline,
    FilterBank,
    PcaProjection,
    default_filter_bank,
    filter_image,
    fit_pca,
    project,
    raw_features,
    stacked_filter_patches,
)
from .image import (
    DegradationSpec,
    bicubic_upscale,
    clamp_to_gray,
    crop_to_multiple,
    decimate,
    degrade,
    gaussian_blur,
    gaussian_kernel,
)
from .image_io import load_image, save_image
from .ksvd import (
    CoupledDictionary,
    CoupledTrainResult,
    KsvdConfig,
    KsvdResult,
    fit_high_dictionary,
    ksvd,
    train_coupled,
)
from .metrics import psnr
from .model_io import load_model, save_model
from .omp import SparseCode, codes_to_matrix, normalize_atoms, omp, omp_batch
from .patches import PatchGrid, assemble_patches, extract_patches, grid_origins
from .pipeline import (
    LayerStack,
    ModelConfig,
    SRModel,
    TrainingReport,
    super_resolve,
    super_resolve_layers,
    super_resolve_single_layer,
    synthesize_hf,
    train_model,
    train_model_with_report,
)

__version__ = "0.1.0"

__all__ = [
    "BenchReport",
    "BenchRow",
    "ConfigurationError",
    "CoupledDictionary",
    "CoupledTrainResult",
    "CoverageError",
    "DdsrError",
    "DegradationSpec",
    "DimensionError",
    "FeaturePipeline",
    "FilterBank",
    "ImageIOError",
    "KsvdConfig",
    "KsvdResult",
    "LayerStack",
    "ModelConfig",
    "ModelFormatError",
    "PatchGrid",
    "PcaProjection",
    "SRModel",
    "SparseCode",
    "TrainingReport",
    "assemble_patches",
    "benchmark_image",
    "bicubic_upscale",
    "clamp_to_gray",
    "codes_to_matrix",
    "config_to_text",
    "crop_to_multiple",
    "decimate",
    "default_filter_bank",
    "degrade",
    "extract_patches",
    "filter_image",
    "fit_high_dictionary",
    "fit_pca",
    "gaussian_blur",
    "gaussian_kernel",
    "grid_origins",
    "ksvd",
    "load_config",
    "load_image",
    "load_model",
    "normalize_atoms",
    "omp",
    "omp_batch",
    "parse_config_text",
    "project",
    "psnr",
    "raw_features",
    "run_benchmark",
    "save_image",
    "save_model",
    "stacked_filter_patches",
    "super_resolve",
    "super_resolve_layers",
    "super_resolve_single_layer",
    "synthesize_hf",
    "train_coupled",
    "train_model",
    "train_model_with_report",
]
