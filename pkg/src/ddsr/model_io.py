"""Binary serialization of trained models (``.ddsr`` files).

Layout: a 4-byte magic tag, a little-endian uint32 format version, the
flat configuration record, then both feature pipelines and both coupled
dictionaries. Every array is written with an explicit dimension header
(uint32 rank and extents) followed by little-endian float64 payload, so a
load(save(model)) round trip reproduces every number bit-exactly.

Format version 1 also pins the geometry conventions the payload was
trained under: top-left decimation phase, source-aligned bicubic grid,
mirror-without-repeat borders.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import ModelFormatError
from .features import FeaturePipeline, FilterBank, PcaProjection
from .image import DegradationSpec
from .ksvd import CoupledDictionary
from .pipeline import MODEL_FORMAT_VERSION, ModelConfig, SRModel

MAGIC = b"DDSR"


class _Writer:
    def __init__(self):
        self.chunks: list[bytes] = []

    def raw(self, data: bytes):
        self.chunks.append(data)

    def u32(self, value: int):
        self.raw(struct.pack("<I", value))

    def i64(self, value: int):
        self.raw(struct.pack("<q", value))

    def f64(self, value: float):
        self.raw(struct.pack("<d", value))

    def array(self, arr: np.ndarray):
        arr = np.asarray(arr, dtype=np.float64)
        self.u32(arr.ndim)
        for extent in arr.shape:
            self.u32(extent)
        self.raw(np.ascontiguousarray(arr).astype("<f8", copy=False).tobytes())


class _Reader:
    def __init__(self, data: bytes, path):
        self.data = data
        self.offset = 0
        self.path = path
        self.section = "header"

    def take(self, n: int) -> bytes:
        if self.offset + n > len(self.data):
            raise ModelFormatError(
                f"{self.path}: truncated payload in section '{self.section}' "
                f"(need {n} bytes at offset {self.offset}, have {len(self.data) - self.offset})"
            )
        chunk = self.data[self.offset : self.offset + n]
        self.offset += n
        return chunk

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def i64(self) -> int:
        return struct.unpack("<q", self.take(8))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self.take(8))[0]

    def array(self) -> np.ndarray:
        ndim = self.u32()
        if ndim > 4:
            raise ModelFormatError(
                f"{self.path}: implausible array rank {ndim} in section '{self.section}'"
            )
        shape = tuple(self.u32() for _ in range(ndim))
        count = int(np.prod(shape)) if shape else 1
        payload = self.take(8 * count)
        return np.frombuffer(payload, dtype="<f8").astype(np.float64).reshape(shape)


def _write_pipeline(w: _Writer, feats: FeaturePipeline):
    w.u32(feats.patch_size)
    w.u32(feats.stride)
    w.u32(len(feats.bank.kernels))
    for kernel in feats.bank.kernels:
        w.array(kernel)
    w.array(feats.pca.mean)
    w.array(feats.pca.basis)
    w.f64(feats.pca.energy_kept)


def _read_pipeline(r: _Reader, section: str) -> FeaturePipeline:
    r.section = section
    patch_size = r.u32()
    stride = r.u32()
    kernels = [r.array() for _ in range(r.u32())]
    mean = r.array()
    basis = r.array()
    energy = r.f64()
    return FeaturePipeline(
        bank=FilterBank(kernels=kernels),
        pca=PcaProjection(mean=mean, basis=basis, energy_kept=energy),
        patch_size=patch_size,
        stride=stride,
    )


def _write_coupled(w: _Writer, coupled: CoupledDictionary):
    w.array(coupled.low)
    w.array(coupled.high)


def _read_coupled(r: _Reader, section: str) -> CoupledDictionary:
    r.section = section
    return CoupledDictionary(low=r.array(), high=r.array())


def save_model(model: SRModel, path) -> None:
    """Write a trained model to ``path`` in the versioned binary format."""
    w = _Writer()
    w.raw(MAGIC)
    w.u32(model.format_version)
    cfg = model.config
    w.u32(cfg.degradation.blur_kernel_size)
    w.f64(cfg.degradation.blur_sigma)
    w.u32(cfg.degradation.scale)
    w.u32(cfg.patch_size)
    w.u32(cfg.stride)
    w.u32(cfg.sparsity)
    w.u32(cfg.md_atoms)
    w.u32(cfg.rd_atoms)
    w.u32(cfg.ksvd_iterations)
    w.i64(cfg.seed)
    w.f64(cfg.min_patch_norm)
    w.f64(cfg.pca_energy)
    _write_pipeline(w, model.md_features)
    _write_coupled(w, model.md)
    _write_pipeline(w, model.rd_features)
    _write_coupled(w, model.rd)
    Path(path).write_bytes(b"".join(w.chunks))


def load_model(path) -> SRModel:
    """Read a model file back; raises ModelFormatError on any corruption."""
    data = Path(path).read_bytes()
    r = _Reader(data, path)
    if r.take(4) != MAGIC:
        raise ModelFormatError(f"{path}: bad magic tag, not a model file")
    version = r.u32()
    if version != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"{path}: unsupported format version {version} (expected {MODEL_FORMAT_VERSION})"
        )
    r.section = "config"
    cfg = ModelConfig(
        degradation=DegradationSpec(
            blur_kernel_size=r.u32(), blur_sigma=r.f64(), scale=r.u32()
        ),
        patch_size=r.u32(),
        stride=r.u32(),
        sparsity=r.u32(),
        md_atoms=r.u32(),
        rd_atoms=r.u32(),
        ksvd_iterations=r.u32(),
        seed=r.i64(),
        min_patch_norm=r.f64(),
        pca_energy=r.f64(),
    )
    md_features = _read_pipeline(r, "md_features")
    md = _read_coupled(r, "md")
    rd_features = _read_pipeline(r, "rd_features")
    rd = _read_coupled(r, "rd")
    if r.offset != len(data):
        raise ModelFormatError(f"{path}: {len(data) - r.offset} unexpected trailing bytes")
    return SRModel(
        config=cfg,
        md_features=md_features,
        md=md,
        rd_features=rd_features,
        rd=rd,
        format_version=version,
    )
