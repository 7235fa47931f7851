"""Acceptance suite: the quality and correctness bars this package commits to.

Each test prints one summary line of the form

    A<n> [PASS] <what was measured>

so a plain ``pytest -s tests/test_acceptance.py`` reads as a checklist.
A1 and A2 share a single full-size training run (several minutes); the
remaining checks are oracle or property tests that finish in seconds.
"""

import time
from dataclasses import dataclass

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddsr import (
    CoupledDictionary,
    CoverageError,
    ModelConfig,
    PatchGrid,
    SparseCode,
    codes_to_matrix,
    assemble_patches,
    benchmark_image,
    bicubic_upscale,
    clamp_to_gray,
    extract_patches,
    fit_high_dictionary,
    grid_origins,
    load_image,
    load_model,
    omp,
    psnr,
    save_image,
    save_model,
    super_resolve,
    train_model_with_report,
)
from ddsr.pipeline import SRModel


def _line(tag, ok, detail):
    print("\n%s [%s] %s" % (tag, "PASS" if ok else "FAIL", detail))


# ---------------------------------------------------------------------------
# shared full-size quality run (A1 and A2)
# ---------------------------------------------------------------------------

_LUMA = np.array([0.299, 0.587, 0.114])


def _to_gray(arr):
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim == 3:
        arr = arr @ _LUMA
    return arr / 255.0


def _dihedral_views(img):
    """The eight rotation/reflection views of one image.

    Training uses a single photograph; presenting its isometries lets the
    dictionaries see each local structure at every orientation without
    introducing any new content.
    """
    views = []
    for k in range(4):
        rot = np.rot90(img, k)
        views.append(np.ascontiguousarray(rot))
        views.append(np.ascontiguousarray(rot[:, ::-1]))
    return views


@dataclass
class QualityRun:
    rows: list
    train_seconds: float
    total_seconds: float
    md_objective: np.ndarray
    rd_objective: np.ndarray


@pytest.fixture(scope="module")
def quality_run():
    """Train at full defaults on one photograph, benchmark five held-out images.

    Training image: the 1411x1411 retina photograph (the largest bundled
    one), presented through its eight dihedral views. Test images: five
    standard grayscale subjects spanning a portrait-style scene, document
    text, coin close-ups, natural texture, and a cluttered indoor scene.
    Everything is deterministic at the default seed.
    """
    skimage_data = pytest.importorskip("skimage.data")

    train_img = _to_gray(skimage_data.retina())
    assert train_img.shape[0] >= 512 and train_img.shape[1] >= 512

    test_images = {
        "camera": _to_gray(skimage_data.camera()),
        "coins": _to_gray(skimage_data.coins()),
        "text": _to_gray(skimage_data.text()),
        "gravel": _to_gray(skimage_data.gravel()),
        "motorcycle": _to_gray(skimage_data.stereo_motorcycle()[0]),
    }

    t0 = time.perf_counter()
    model, report = train_model_with_report(
        _dihedral_views(train_img), ModelConfig()
    )
    train_seconds = time.perf_counter() - t0

    rows = [benchmark_image(model, img, name)
            for name, img in test_images.items()]
    total_seconds = time.perf_counter() - t0

    return QualityRun(
        rows=rows,
        train_seconds=train_seconds,
        total_seconds=total_seconds,
        md_objective=report.md_objective,
        rd_objective=report.rd_objective,
    )


def test_dual_layer_beats_bicubic(quality_run):
    gains = [r.psnr_dual - r.psnr_bicubic for r in quality_run.rows]
    avg = float(np.mean(gains))
    ok = avg >= 1.5 and quality_run.total_seconds <= 1800.0
    per_image = ", ".join(
        "%s %+.2f" % (r.name, g) for r, g in zip(quality_run.rows, gains)
    )
    _line(
        "A1",
        ok,
        "dual vs bicubic avg %+.3f dB (need >= 1.5) over %d images [%s], "
        "run %.0f s (cap 1800)"
        % (avg, len(gains), per_image, quality_run.total_seconds),
    )
    assert avg >= 1.5
    assert quality_run.total_seconds <= 1800.0


def test_residual_layer_adds_gain(quality_run):
    deltas = [r.psnr_dual - r.psnr_single for r in quality_run.rows]
    avg = float(np.mean(deltas))
    nonneg = sum(1 for d in deltas if d >= 0.0)
    ok = avg >= 0.1 and nonneg >= 4
    per_image = ", ".join(
        "%s %+.3f" % (r.name, d) for r, d in zip(quality_run.rows, deltas)
    )
    _line(
        "A2",
        ok,
        "dual vs single avg %+.3f dB (need >= 0.1), non-negative on %d/%d "
        "(need >= 4) [%s]" % (avg, nonneg, len(deltas), per_image),
    )
    assert avg >= 0.1
    assert nonneg >= 4


# ---------------------------------------------------------------------------
# A3: dictionary learning objective never increases
# ---------------------------------------------------------------------------


def test_dictionary_objective_monotone(quality_run):
    worst = 0.0
    for objective in (quality_run.md_objective, quality_run.rd_objective):
        for prev, cur in zip(objective, objective[1:]):
            if prev > 0:
                worst = max(worst, (cur - prev) / prev)
            else:
                assert cur <= prev + 1e-15
    ok = worst <= 1e-9
    _line(
        "A3",
        ok,
        "objective non-increasing over %d + %d sweeps, worst relative "
        "increase %.2e (slack 1e-9)"
        % (len(quality_run.md_objective), len(quality_run.rd_objective), worst),
    )
    assert worst <= 1e-9


# ---------------------------------------------------------------------------
# A4: exact recovery of the high dictionary from noiseless sparse codes
# ---------------------------------------------------------------------------


def test_high_dictionary_exact_recovery():
    rng = np.random.default_rng(7)
    dim, n_atoms, n_samples = 81, 500, 4000
    truth = rng.standard_normal((dim, n_atoms))

    codes = []
    for j in range(n_samples):
        if j < n_atoms:
            # first block: sample j leans hard on atom j, which makes the
            # leading square of the code matrix diagonally dominant and
            # therefore guarantees full row rank
            support = np.array([j, (j + 1) % n_atoms, (j + 2) % n_atoms])
            coeffs = rng.standard_normal(3)
            coeffs[0] += 5.0
        else:
            support = rng.choice(n_atoms, size=3, replace=False)
            coeffs = rng.standard_normal(3)
        codes.append(
            SparseCode(indices=support, coefficients=coeffs, max_nonzeros=3)
        )
    q = codes_to_matrix(codes, n_atoms)
    assert np.linalg.matrix_rank(q) == n_atoms

    patches = truth @ q
    fitted = fit_high_dictionary(patches, codes, n_atoms)
    rel = np.linalg.norm(fitted - truth) / np.linalg.norm(truth)
    ok = rel <= 1e-8
    _line(
        "A4",
        ok,
        "high dictionary recovered from %dx%d 3-sparse codes, relative "
        "error %.2e (tol 1e-8)" % (dim, n_atoms, rel),
    )
    assert rel <= 1e-8


# ---------------------------------------------------------------------------
# A5: patch assembly equals the brute-force coverage average
# ---------------------------------------------------------------------------


def _brute_force_assemble(grid):
    total = np.zeros(grid.image_shape)
    count = np.zeros(grid.image_shape)
    p = grid.patch_size
    for idx, (r, c) in enumerate(grid.origins):
        total[r:r + p, c:c + p] += grid.patches[:, idx].reshape(p, p)
        count[r:r + p, c:c + p] += 1.0
    if np.any(count == 0):
        raise CoverageError("uncovered pixels")
    return total / count


def test_assembly_matches_coverage_average():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(100):
        rows = int(rng.integers(6, 40))
        cols = int(rng.integers(6, 40))
        patch = int(rng.integers(2, min(rows, cols) + 1))
        stride = int(rng.integers(1, patch + 1))
        origins = grid_origins((rows, cols), patch, stride)
        patches = rng.standard_normal((patch * patch, len(origins)))
        grid = PatchGrid(
            patch_size=patch,
            stride=stride,
            origins=origins,
            patches=patches,
            image_shape=(rows, cols),
        )
        diff = np.abs(assemble_patches(grid) - _brute_force_assemble(grid))
        worst = max(worst, float(diff.max()))
    ok = worst <= 1e-12
    _line(
        "A5",
        ok,
        "assembly vs brute-force average on 100 random grids, worst "
        "difference %.2e (tol 1e-12)" % worst,
    )
    assert worst <= 1e-12


# ---------------------------------------------------------------------------
# A6: sparse coder contracts, property-tested
# ---------------------------------------------------------------------------


@st.composite
def _omp_problems(draw):
    dim = draw(st.integers(min_value=4, max_value=10))
    n_atoms = draw(st.integers(min_value=3, max_value=16))
    max_atoms = draw(st.integers(min_value=1, max_value=min(dim, n_atoms)))
    seed = draw(st.integers(min_value=0, max_value=2**31 - 1))
    rng = np.random.default_rng(seed)
    atoms = rng.standard_normal((dim, n_atoms))
    atoms /= np.linalg.norm(atoms, axis=0)
    signal = rng.standard_normal(dim)
    return atoms, signal, max_atoms


def test_sparse_coder_contracts():
    @settings(max_examples=80, deadline=None)
    @given(_omp_problems())
    def check(problem):
        atoms, signal, max_atoms = problem
        code = omp(atoms, signal, max_atoms)

        assert len(code.indices) <= max_atoms
        assert len(set(code.indices)) == len(code.indices)

        residual = signal - atoms[:, code.indices] @ code.coefficients
        scale = np.linalg.norm(signal)
        if len(code.indices) > 0 and scale > 0:
            inner = atoms[:, code.indices].T @ residual
            assert np.max(np.abs(inner)) <= 1e-8 * scale

        norms = [scale]
        for step in range(1, len(code.indices) + 1):
            sub = atoms[:, code.indices[:step]]
            coef, *_ = np.linalg.lstsq(sub, signal, rcond=None)
            norms.append(np.linalg.norm(signal - sub @ coef))
        for a, b in zip(norms, norms[1:]):
            assert b <= a + 1e-10

        again = omp(atoms, signal, max_atoms)
        assert np.array_equal(again.indices, code.indices)
        assert np.array_equal(again.coefficients, code.coefficients)

    try:
        check()
    except AssertionError:
        _line("A6", False, "sparse coder contract property check failed")
        raise
    _line(
        "A6",
        True,
        "80 random problems: support bound, residual orthogonality "
        "(1e-8 relative), monotone residual, deterministic re-run",
    )


# ---------------------------------------------------------------------------
# A7: zeroed dictionaries reduce the pipeline to clamped bicubic
# ---------------------------------------------------------------------------


def test_zeroed_dictionaries_reduce_to_bicubic(small_model):
    gutted = SRModel(
        config=small_model.config,
        md_features=small_model.md_features,
        md=CoupledDictionary(
            low=small_model.md.low, high=np.zeros_like(small_model.md.high)
        ),
        rd_features=small_model.rd_features,
        rd=CoupledDictionary(
            low=small_model.rd.low, high=np.zeros_like(small_model.rd.high)
        ),
        format_version=small_model.format_version,
    )
    rng = np.random.default_rng(23)
    lr = rng.random((40, 52))
    out = super_resolve(lr, gutted)
    scale = small_model.config.degradation.scale
    reference = clamp_to_gray(bicubic_upscale(lr, scale))
    ok = np.array_equal(out, reference)
    _line(
        "A7",
        ok,
        "zeroed high dictionaries give output bit-equal to clamped bicubic "
        "(%dx%d input)" % lr.shape,
    )
    assert ok


# ---------------------------------------------------------------------------
# A8: round trips
# ---------------------------------------------------------------------------


def test_round_trips(small_model, tmp_path):
    rng = np.random.default_rng(31)

    img = rng.random((47, 59))
    grid = extract_patches(img, patch_size=7, stride=4)
    patches_exact = np.array_equal(assemble_patches(grid), img)

    model_path = tmp_path / "model.ddsr"
    save_model(small_model, model_path)
    loaded = load_model(model_path)
    model_exact = (
        np.array_equal(loaded.md.low, small_model.md.low)
        and np.array_equal(loaded.md.high, small_model.md.high)
        and np.array_equal(loaded.rd.low, small_model.rd.low)
        and np.array_equal(loaded.rd.high, small_model.rd.high)
        and loaded.config == small_model.config
    )

    quantized = rng.integers(0, 256, size=(21, 34)).astype(np.float64) / 255.0
    image_path = tmp_path / "img.png"
    save_image(quantized, image_path)
    image_exact = np.array_equal(load_image(image_path), quantized)

    ok = patches_exact and model_exact and image_exact
    _line(
        "A8",
        ok,
        "extract/assemble exact: %s; model save/load bit-exact: %s; "
        "image save/load exact on quantized data: %s"
        % (patches_exact, model_exact, image_exact),
    )
    assert patches_exact
    assert model_exact
    assert image_exact


# ---------------------------------------------------------------------------
# A9: PSNR reference value
# ---------------------------------------------------------------------------


def test_psnr_reference_value():
    a = np.zeros((16, 16))
    b = np.full((16, 16), 1.0 / 255.0)
    value = psnr(a, b)
    expected = 48.1308
    err = abs(value - expected)
    ok = err <= 1e-4
    _line(
        "A9",
        ok,
        "uniform 1/255 difference gives %.4f dB, expected %.4f "
        "(tol 1e-4)" % (value, expected),
    )
    assert err <= 1e-4
