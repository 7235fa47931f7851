"""Orthogonal matching pursuit, one greedy step at a time.

OMP picks the atom most correlated with the current residual, re-solves the
least-squares fit over everything picked so far, and repeats until L atoms
are used or the signal is explained. The trace below shows the residual
shrinking and the final residual being orthogonal to every chosen atom.
"""

import numpy as np

import ddsr

rng = np.random.default_rng(0)

dim, n_atoms = 16, 40
atoms = ddsr.normalize_atoms(rng.standard_normal((dim, n_atoms)))

# build a signal from three known atoms plus a little noise
chosen = [4, 21, 33]
signal = atoms[:, chosen] @ np.array([1.0, -0.7, 0.4]) + 0.01 * rng.standard_normal(dim)

trace = []
code = ddsr.omp(atoms, signal, max_atoms=3, trace=trace)

print("true atoms:   ", chosen)
print("picked atoms: ", code.indices.tolist())
print("coefficients: ", np.round(code.coefficients, 4).tolist())
print("residual norms per step:")
print("  start %.4f" % np.linalg.norm(signal))
for step, r in enumerate(trace, 1):
    print("  after atom %d: %.4f" % (step, r))

residual = signal - code.reconstruct(atoms)
print("max |<atom, residual>| over support: %.2e" % np.max(np.abs(atoms[:, code.indices].T @ residual)))

# the same coding over many signals at once
signals = atoms[:, :5] @ rng.standard_normal((5, 200))
codes = ddsr.omp_batch(atoms, signals, max_atoms=3)
used = np.bincount(np.concatenate([c.indices for c in codes]), minlength=n_atoms)
print("atoms touched by a 200-signal batch:", int((used > 0).sum()))
