"""Orthogonal matching pursuit over a unit-norm dictionary.

Greedy selection: each step picks the atom with the largest absolute
correlation with the current residual (ties broken by lowest atom index),
then re-solves the least-squares fit jointly over all selected atoms and
updates the residual. Selection stops after the sparsity budget is spent
or when the residual is negligible relative to the signal. The same code
path serves single signals and batches, so batch results are bit-identical
to a sequential loop.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DimensionError

RESIDUAL_STOP_REL = 1e-12  # residual-norm stop threshold, relative to the signal
LSTSQ_RCOND = 1e-12  # relative rank tolerance of the joint least-squares solve


@dataclass
class SparseCode:
    """Support and coefficients of an at-most-L-sparse representation."""

    indices: np.ndarray
    coefficients: np.ndarray
    max_nonzeros: int

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.intp)
        self.coefficients = np.asarray(self.coefficients, dtype=np.float64)
        if self.indices.shape != self.coefficients.shape or self.indices.ndim != 1:
            raise DimensionError("indices and coefficients must be matching 1-D arrays")
        if len(self.indices) > self.max_nonzeros:
            raise ConfigurationError(
                f"{len(self.indices)} atoms exceed the sparsity budget {self.max_nonzeros}"
            )
        if len(np.unique(self.indices)) != len(self.indices):
            raise ConfigurationError("atom indices must be distinct")

    def __len__(self) -> int:
        return len(self.indices)

    def reconstruct(self, atoms: np.ndarray) -> np.ndarray:
        """Evaluate ``atoms[:, indices] @ coefficients``."""
        if len(self.indices) == 0:
            return np.zeros(atoms.shape[0])
        return atoms[:, self.indices] @ self.coefficients


def check_unit_atoms(atoms: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Validate a (signal_dim, n_atoms) dictionary with unit-norm columns."""
    atoms = np.asarray(atoms, dtype=np.float64)
    if atoms.ndim != 2 or atoms.size == 0:
        raise DimensionError(f"dictionary must be a non-empty 2-D matrix, got {atoms.shape}")
    norms = np.linalg.norm(atoms, axis=0)
    worst = np.max(np.abs(norms - 1.0))
    if worst > tol:
        raise ConfigurationError(f"dictionary atoms are not unit-norm (max deviation {worst:g})")
    return atoms


def normalize_atoms(atoms: np.ndarray) -> np.ndarray:
    """Scale every column to unit Euclidean norm."""
    atoms = np.asarray(atoms, dtype=np.float64)
    norms = np.linalg.norm(atoms, axis=0)
    if np.any(norms == 0.0):
        raise ConfigurationError("cannot normalize a zero atom")
    return atoms / norms


def _omp_core(atoms, atoms_t, signal, max_atoms, trace=None):
    signal_norm = np.linalg.norm(signal)
    if trace is not None:
        trace.append(signal_norm)
    support: list[int] = []
    coef = np.zeros(0)
    if signal_norm == 0.0:
        return support, coef
    residual = signal.copy()
    stop = RESIDUAL_STOP_REL * signal_norm
    while len(support) < max_atoms and np.linalg.norm(residual) > stop:
        corr = atoms_t @ residual
        corr[support] = 0.0  # an atom is never selected twice
        pick = int(np.argmax(np.abs(corr)))  # argmax keeps the lowest index on ties
        if corr[pick] == 0.0:
            break  # residual orthogonal to every remaining atom
        support.append(pick)
        subset = atoms[:, support]
        coef, _, rank, _ = np.linalg.lstsq(subset, signal, rcond=LSTSQ_RCOND)
        if rank < len(support):
            # the new atom is numerically dependent on the others: drop it and stop
            support.pop()
            if support:
                coef, _, _, _ = np.linalg.lstsq(atoms[:, support], signal, rcond=LSTSQ_RCOND)
            else:
                coef = np.zeros(0)
            break
        residual = signal - subset @ coef
        if trace is not None:
            trace.append(np.linalg.norm(residual))
    return support, coef


def omp(
    atoms: np.ndarray,
    signal: np.ndarray,
    max_atoms: int,
    trace: list[float] | None = None,
) -> SparseCode:
    """Code one signal with at most ``max_atoms`` dictionary atoms.

    Parameters
    ----------
    atoms : ndarray (signal_dim, n_atoms)
        Dictionary with unit-norm columns.
    signal : ndarray (signal_dim,)
    max_atoms : int
        Sparsity budget L; selection may stop earlier when the residual
        falls below ``RESIDUAL_STOP_REL`` times the signal norm.
    trace : list, optional
        If given, receives the residual norm before selection and after
        every greedy step (diagnostics only).
    """
    atoms = check_unit_atoms(atoms)
    signal = np.asarray(signal, dtype=np.float64)
    if signal.shape != (atoms.shape[0],):
        raise DimensionError(f"signal shape {signal.shape} != ({atoms.shape[0]},)")
    if not 1 <= max_atoms <= atoms.shape[1]:
        raise ConfigurationError(f"max_atoms must be in [1, {atoms.shape[1]}], got {max_atoms}")
    support, coef = _omp_core(atoms, atoms.T.copy(), signal, max_atoms, trace)
    return SparseCode(indices=np.asarray(support), coefficients=coef, max_nonzeros=max_atoms)


def omp_batch(atoms: np.ndarray, signals: np.ndarray, max_atoms: int) -> list[SparseCode]:
    """Code every column of ``signals``; identical to calling ``omp`` per column."""
    atoms = check_unit_atoms(atoms)
    signals = np.asarray(signals, dtype=np.float64)
    if signals.ndim != 2 or signals.shape[0] != atoms.shape[0]:
        raise DimensionError(
            f"signals must be ({atoms.shape[0]}, n), got {signals.shape}"
        )
    if not 1 <= max_atoms <= atoms.shape[1]:
        raise ConfigurationError(f"max_atoms must be in [1, {atoms.shape[1]}], got {max_atoms}")
    atoms_t = atoms.T.copy()
    codes = []
    for j in range(signals.shape[1]):
        support, coef = _omp_core(atoms, atoms_t, signals[:, j], max_atoms)
        codes.append(SparseCode(indices=np.asarray(support), coefficients=coef, max_nonzeros=max_atoms))
    return codes


def codes_to_matrix(codes: list[SparseCode], n_atoms: int) -> np.ndarray:
    """Dense (n_atoms, n_signals) coefficient matrix of a code list."""
    q = np.zeros((n_atoms, len(codes)))
    for j, code in enumerate(codes):
        q[code.indices, j] = code.coefficients
    return q
