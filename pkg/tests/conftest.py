"""Shared fixtures: RNG, grayscale photo loaders, and a small trained model."""

from __future__ import annotations

import numpy as np
import pytest
from skimage import data

import ddsr

_LUMA = np.array([0.299, 0.587, 0.114])


def to_gray(arr) -> np.ndarray:
    """8-bit photo (grayscale or RGB) to float64 luminance in [0, 1]."""
    a = np.asarray(arr, dtype=np.float64)
    if a.ndim == 3:
        a = a @ _LUMA
    return a / 255.0


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def camera() -> np.ndarray:
    return to_gray(data.camera())


@pytest.fixture(scope="session")
def astronaut_gray() -> np.ndarray:
    return to_gray(data.astronaut())


@pytest.fixture(scope="session")
def small_config() -> ddsr.ModelConfig:
    """Cut-down settings so fixture training stays around a second."""
    return ddsr.ModelConfig(md_atoms=64, rd_atoms=64, ksvd_iterations=5)


@pytest.fixture(scope="session")
def small_model(camera, small_config):
    """Model trained on a quarter of the camera photo with small_config."""
    return ddsr.train_model([camera[:256, :256]], small_config)
