"""K-SVD pulling a planted dictionary out of noisy sparse mixtures.

2000 samples are generated as random 3-sparse combinations of 40 hidden
unit atoms plus noise. After 40 alternating rounds of coding and rank-1
atom updates, most hidden atoms reappear in the learned dictionary (up to
sign), and the training objective never increases.
"""

import numpy as np

import ddsr

rng = np.random.default_rng(42)

dim, n_atoms, n_samples = 20, 40, 2000
true = ddsr.normalize_atoms(rng.standard_normal((dim, n_atoms)))

q = np.zeros((n_atoms, n_samples))
for j in range(n_samples):
    support = rng.choice(n_atoms, size=3, replace=False)
    q[support, j] = rng.standard_normal(3)
samples = true @ q + 0.01 * rng.standard_normal((dim, n_samples))

cfg = ddsr.KsvdConfig(n_atoms=n_atoms, sparsity=3, iterations=40, seed=0)
result = ddsr.ksvd(samples, cfg)

obj = result.objective
print("objective: %.2f -> %.2f over %d iterations" % (obj[0], obj[-1], len(obj)))
print("monotone non-increasing:", bool(np.all(np.diff(obj) <= 1e-9 * obj[:-1])))

# greedy one-to-one matching of learned atoms to hidden atoms by |cosine|
sim = np.abs(true.T @ result.dictionary)
scores = []
for _ in range(n_atoms):
    r, c = np.unravel_index(np.argmax(sim), sim.shape)
    scores.append(sim[r, c])
    sim[r, :] = -1
    sim[:, c] = -1
scores = np.array(scores)
print("atoms recovered with |cosine| >= 0.95: %d / %d" % ((scores >= 0.95).sum(), n_atoms))
print("median match quality: %.4f" % np.median(scores))
