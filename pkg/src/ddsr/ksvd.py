"""K-SVD training of the low-feature dictionary and closed-form fitting of
its coupled high-patch dictionary.

The low dictionary is learned by alternating a batch OMP coding pass with
atom-by-atom rank-1 SVD updates; atoms that no sample uses are replaced by
the currently worst-represented sample. The high dictionary is then the
least-squares matrix mapping the final sparse codes onto the paired
high-frequency patches, computed with a rank-revealing solve rather than
an explicit inverse. Both dictionaries share one atom count and one code
per training signal; the low atoms are unit-norm while the high atoms
absorb the fitted scale.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DimensionError
from .omp import SparseCode, codes_to_matrix, omp_batch

log = logging.getLogger(__name__)

_USED_COEF_TOL = 1e-12  # |coefficient| above this marks an atom as used by a sample


@dataclass(frozen=True)
class KsvdConfig:
    n_atoms: int = 500
    sparsity: int = 3
    iterations: int = 40
    seed: int = 0
    min_patch_norm: float = 0.03  # training-sample pruning threshold, [0, 1] units

    def __post_init__(self):
        if self.n_atoms < 1 or self.sparsity < 1 or self.iterations < 0:
            raise ConfigurationError(f"invalid K-SVD configuration: {self}")
        if self.sparsity > self.n_atoms:
            raise ConfigurationError(
                f"sparsity {self.sparsity} exceeds atom count {self.n_atoms}"
            )
        if self.min_patch_norm < 0:
            raise ConfigurationError(f"min_patch_norm must be >= 0, got {self.min_patch_norm}")


@dataclass
class CoupledDictionary:
    """Paired atom matrices sharing one sparse code per signal.

    ``low`` (feature_dim, K) has unit-norm atoms and is what OMP codes
    against; ``high`` (patch_dim, K) carries arbitrary atom norms from the
    least-squares fit.
    """

    low: np.ndarray
    high: np.ndarray

    def __post_init__(self):
        self.low = np.asarray(self.low, dtype=np.float64)
        self.high = np.asarray(self.high, dtype=np.float64)
        if self.low.ndim != 2 or self.high.ndim != 2:
            raise DimensionError("coupled dictionaries must be 2-D matrices")
        if self.low.shape[1] != self.high.shape[1]:
            raise DimensionError(
                f"atom counts differ: low {self.low.shape[1]} vs high {self.high.shape[1]}"
            )
        norms = np.linalg.norm(self.low, axis=0)
        if np.max(np.abs(norms - 1.0)) > 1e-10:
            raise ConfigurationError("low-dictionary atoms must be unit-norm")

    @property
    def n_atoms(self) -> int:
        return self.low.shape[1]


@dataclass
class KsvdResult:
    dictionary: np.ndarray  # (dim, K), unit-norm atoms
    codes: list[SparseCode]  # fresh OMP codes over the final dictionary
    objective: np.ndarray  # post-update sum of squared residuals, one per iteration


@dataclass
class CoupledTrainResult:
    coupled: CoupledDictionary
    objective: np.ndarray
    final_codes: list[SparseCode]
    kept: np.ndarray = field(repr=False)  # boolean mask of surviving sample columns


def _init_dictionary(samples: np.ndarray, k: int, seed: int) -> np.ndarray:
    norms = np.linalg.norm(samples, axis=0)
    usable = np.flatnonzero(norms > 1e-12)
    if len(usable) < k:
        raise ConfigurationError(
            f"only {len(usable)} nonzero training columns for {k} atoms"
        )
    rng = np.random.default_rng(seed)
    chosen = rng.choice(usable, size=k, replace=False)
    return samples[:, chosen] / norms[chosen]


def _flip_to_positive(vec: np.ndarray) -> float:
    """Sign that makes the largest-magnitude entry of ``vec`` positive."""
    return -1.0 if vec[np.argmax(np.abs(vec))] < 0 else 1.0


def ksvd(samples: np.ndarray, cfg: KsvdConfig) -> KsvdResult:
    """Learn a unit-norm dictionary minimizing the L-sparse coding error.

    Parameters
    ----------
    samples : ndarray (dim, n_samples)
        One training vector per column; needs at least ``cfg.n_atoms``
        columns with nonzero norm.
    cfg : KsvdConfig

    Returns
    -------
    KsvdResult with the final dictionary, a fresh coding pass over it, and
    the per-iteration objective (recorded after each update sweep). The
    objective is non-increasing by construction: the coding stage falls
    back to a sample's previous refined code whenever the fresh greedy
    code would represent it worse, and every rank-1 atom update starts
    from a feasible point it can only improve on.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2:
        raise DimensionError(f"samples must be 2-D, got {samples.shape}")
    dim, n = samples.shape
    if n < cfg.n_atoms:
        raise ConfigurationError(
            f"{n} training samples for {cfg.n_atoms} atoms; need at least one per atom"
        )
    dictionary = _init_dictionary(samples, cfg.n_atoms, cfg.seed)
    objective = []
    prev_q = None
    for _ in range(cfg.iterations):
        codes = omp_batch(dictionary, samples, cfg.sparsity)
        q = codes_to_matrix(codes, cfg.n_atoms)
        if prev_q is not None:
            # Greedy coding can occasionally represent a sample worse than
            # its previous SVD-refined code does; keeping the better of the
            # two per sample makes the recorded objective truly monotone.
            # (Dead-atom replacement never touches coefficients, so prev_q
            # is still valid against the current dictionary.)
            new_resid = samples - dictionary @ q
            old_resid = samples - dictionary @ prev_q
            worse = np.einsum("ij,ij->j", new_resid, new_resid) > np.einsum(
                "ij,ij->j", old_resid, old_resid
            )
            q[:, worse] = prev_q[:, worse]
        unused = []
        for k in range(cfg.n_atoms):
            users = np.flatnonzero(np.abs(q[k]) > _USED_COEF_TOL)
            if len(users) == 0:
                unused.append(k)
                continue
            # residual of the using samples with atom k removed
            resid = samples[:, users] - dictionary @ q[:, users]
            resid += np.outer(dictionary[:, k], q[k, users])
            u, s, vt = np.linalg.svd(resid, full_matrices=False)
            sign = _flip_to_positive(u[:, 0])
            dictionary[:, k] = sign * u[:, 0]
            q[k, users] = sign * s[0] * vt[0]
        residual = samples - dictionary @ q
        if unused:
            # hand each dead atom the worst-represented sample, worst first
            worst = np.argsort(-np.einsum("ij,ij->j", residual, residual), kind="stable")
            replacements = 0
            for k in unused:
                while replacements < n:
                    cand = worst[replacements]
                    replacements += 1
                    norm = np.linalg.norm(samples[:, cand])
                    if norm > 1e-12:
                        dictionary[:, k] = samples[:, cand] / norm
                        break
                else:
                    break  # no candidates left; keep the stale atom
        objective.append(float(np.sum(residual**2)))
        prev_q = q
    final_codes = omp_batch(dictionary, samples, cfg.sparsity)
    return KsvdResult(
        dictionary=dictionary,
        codes=final_codes,
        objective=np.asarray(objective),
    )


def fit_high_dictionary(
    high_patches: np.ndarray, codes: list[SparseCode], n_atoms: int
) -> np.ndarray:
    """Least-squares high dictionary H minimizing ||P - H Q||_F.

    Solved through a rank-revealing factorization of the dense code matrix
    Q; when Q has full row rank this is the unique minimizer
    ``P Q^T (Q Q^T)^-1``, otherwise the minimum-norm solution is returned
    and a diagnostic is logged.
    """
    high_patches = np.asarray(high_patches, dtype=np.float64)
    if high_patches.ndim != 2 or high_patches.shape[1] != len(codes):
        raise DimensionError(
            f"high patches {high_patches.shape} do not match {len(codes)} codes"
        )
    q = codes_to_matrix(codes, n_atoms)
    solution, _, rank, _ = np.linalg.lstsq(q.T, high_patches.T, rcond=None)
    if rank < n_atoms:
        log.warning(
            "code matrix has row rank %d < %d atoms; using the minimum-norm fit", rank, n_atoms
        )
    return solution.T


def train_coupled(
    low_feats: np.ndarray, high_patches: np.ndarray, cfg: KsvdConfig
) -> CoupledTrainResult:
    """Train one coupled dictionary pair from aligned feature/patch columns.

    Column k of ``low_feats`` and of ``high_patches`` must come from the
    same patch origin. Columns whose high patch norm falls below
    ``cfg.min_patch_norm`` are pruned from both sides, then the low
    dictionary is K-SVD-trained on the features and the high dictionary is
    fitted to the surviving patches through the final sparse codes.
    """
    low_feats = np.asarray(low_feats, dtype=np.float64)
    high_patches = np.asarray(high_patches, dtype=np.float64)
    if low_feats.ndim != 2 or high_patches.ndim != 2:
        raise DimensionError("feature and patch inputs must be 2-D matrices")
    if low_feats.shape[1] != high_patches.shape[1]:
        raise DimensionError(
            f"column counts differ: {low_feats.shape[1]} features vs "
            f"{high_patches.shape[1]} patches"
        )
    kept = np.linalg.norm(high_patches, axis=0) >= cfg.min_patch_norm
    n_kept = int(kept.sum())
    if n_kept < cfg.n_atoms:
        raise ConfigurationError(
            f"{n_kept} samples survive pruning at threshold {cfg.min_patch_norm} "
            f"but {cfg.n_atoms} atoms are requested "
            f"({low_feats.shape[1] - n_kept} of {low_feats.shape[1]} pruned)"
        )
    result = ksvd(low_feats[:, kept], cfg)
    high = fit_high_dictionary(high_patches[:, kept], result.codes, cfg.n_atoms)
    coupled = CoupledDictionary(low=result.dictionary, high=high)
    return CoupledTrainResult(
        coupled=coupled,
        objective=result.objective,
        final_codes=result.codes,
        kept=kept,
    )
