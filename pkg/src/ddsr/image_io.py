"""8-bit grayscale image files (PNG and PGM).

Intensities are mapped v/255 on load so the in-memory domain is [0, 1];
saving clamps, scales back, and rounds to the nearest 8-bit level. Color
inputs are reduced to luminance 0.299 R + 0.587 G + 0.114 B before the
mapping, so a pure gray pixel keeps its value.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import ImageIOError
from .image import as_image

_LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


def load_image(path) -> np.ndarray:
    """Load an 8-bit PNG or PGM as a [0, 1] float64 grayscale image."""
    path = Path(path)
    try:
        with Image.open(path) as im:
            if im.mode == "P":
                im = im.convert("RGB")
            if im.mode in ("RGBA", "LA"):
                im = im.convert("RGB" if im.mode == "RGBA" else "L")
            if im.mode == "L":
                data = np.asarray(im, dtype=np.float64)
                return data / 255.0
            if im.mode == "RGB":
                data = np.asarray(im, dtype=np.float64)
                return (data @ _LUMA_WEIGHTS) / 255.0
            raise ImageIOError(f"{path}: unsupported bit depth or mode {im.mode!r}")
    except UnidentifiedImageError as exc:
        raise ImageIOError(f"{path}: not a readable image file") from exc
    except (OSError, ValueError) as exc:
        if isinstance(exc, ImageIOError):
            raise
        raise ImageIOError(f"{path}: {exc}") from exc


def save_image(img: np.ndarray, path) -> None:
    """Save a [0, 1] image as 8-bit grayscale; format follows the extension."""
    img = as_image(img)
    path = Path(path)
    quantized = np.rint(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)
    try:
        Image.fromarray(quantized, mode="L").save(path)
    except (OSError, ValueError, KeyError) as exc:
        raise ImageIOError(f"{path}: cannot save image ({exc})") from exc
