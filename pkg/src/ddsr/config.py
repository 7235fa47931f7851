"""Flat key=value configuration files mirroring ModelConfig.

Lines are ``key = value``; blank lines and ``#`` comments are ignored.
Keys not present keep their defaults. Unknown keys are rejected so typos
surface instead of silently training with defaults.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ConfigurationError
from .image import DegradationSpec
from .pipeline import ModelConfig

_INT_KEYS = {
    "blur_kernel_size",
    "scale",
    "patch_size",
    "stride",
    "sparsity",
    "md_atoms",
    "rd_atoms",
    "ksvd_iterations",
    "seed",
}
_FLOAT_KEYS = {"blur_sigma", "min_patch_norm", "pca_energy"}


def parse_config_text(text: str) -> ModelConfig:
    values: dict[str, float | int] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"line {lineno}: expected 'key = value', got {raw_line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        try:
            if key in _INT_KEYS:
                values[key] = int(value)
            elif key in _FLOAT_KEYS:
                values[key] = float(value)
            else:
                raise ConfigurationError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise ConfigurationError(f"line {lineno}: bad value for {key!r}: {value!r}") from exc
    degradation_kwargs = {
        k: values.pop(k) for k in ("blur_kernel_size", "blur_sigma", "scale") if k in values
    }
    return ModelConfig(degradation=DegradationSpec(**degradation_kwargs), **values)


def load_config(path) -> ModelConfig:
    """Parse a config file; missing keys fall back to defaults."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text)


def config_to_text(cfg: ModelConfig) -> str:
    """Render a config as the same flat key=value format."""
    pairs = [
        ("blur_kernel_size", cfg.degradation.blur_kernel_size),
        ("blur_sigma", cfg.degradation.blur_sigma),
        ("scale", cfg.degradation.scale),
        ("patch_size", cfg.patch_size),
        ("stride", cfg.stride),
        ("sparsity", cfg.sparsity),
        ("md_atoms", cfg.md_atoms),
        ("rd_atoms", cfg.rd_atoms),
        ("ksvd_iterations", cfg.ksvd_iterations),
        ("seed", cfg.seed),
        ("min_patch_norm", cfg.min_patch_norm),
        ("pca_energy", cfg.pca_energy),
    ]
    return "\n".join(f"{key} = {value}" for key, value in pairs) + "\n"
