"""Ground-truth generators: channels, Lindbladians, Haar low-rank matrices.

A quantum channel has a PSD reshaped matrix of rank equal to its Kraus rank.
A Lindbladian with N_J jump operators has a reshaped matrix with N_J + 1
positive and exactly one negative eigenvalue, so its rank is N_J + 2. The
Haar generator draws an arbitrary signature directly.
"""

import numpy as np

from superop_sensing import (apply_superop, choi_reshape, haar_low_rank_hermitian,
                             lindblad_apply, lindblad_canonical, random_channel,
                             random_density, random_lindbladian)

n = 8

print("Random CPTP channel, Kraus rank 3:")
ch = random_channel(n, 3, seed=1)
tp_gap = np.linalg.norm(sum(v.conj().T @ v for v in ch.plus_ops) - np.eye(n))
evals = np.linalg.eigvalsh(choi_reshape(ch).matrix)
print(f"  trace preservation ||sum V^H V - I|| = {tp_gap:.2e}")
print(f"  reshaped eigenvalues > tol: {np.sum(evals > 1e-8 * evals.max())}, "
      f"min eigenvalue = {evals.min():.2e} (PSD)")
rho = random_density(n, 2)
print(f"  trace preserved on a state: tr(S rho) = "
      f"{np.trace(apply_superop(ch, rho)).real:.12f}")

print("\nRandom Lindbladian, N_J = 2 jumps:")
lind = random_lindbladian(n, 2, seed=3)
s = lindblad_canonical(lind)
evals = np.linalg.eigvalsh(choi_reshape(s).matrix)
tol = 1e-8 * np.abs(evals).max()
print(f"  signature: {np.sum(evals > tol)} positive, {np.sum(evals < -tol)} "
      f"negative  (rank = N_J + 2 = 4)")
out = lindblad_apply(lind, rho)
print(f"  generator output is traceless: |tr| = {abs(np.trace(out)):.2e}")
gap = max(np.linalg.norm(apply_superop(s, random_density(n, 10 + k))
                         - lindblad_apply(lind, random_density(n, 10 + k)))
          for k in range(5))
print(f"  canonical signed-Kraus form reproduces the generator: "
      f"max gap = {gap:.2e}")

print("\nHaar low-rank Hermitian ground truth, signature (2, 1):")
resh = haar_low_rank_hermitian(4, 2, 1, seed=4)
evals = np.linalg.eigvalsh(resh.matrix)
keep = evals[np.abs(evals) > 1e-8 * np.abs(evals).max()]
print(f"  nonzero eigenvalues: {np.sort(keep)[::-1]}")
sv = [np.linalg.svd(resh.block(i, j), compute_uv=False)[2]
      for i in range(4) for j in range(4)]
print(f"  every 4x4 block keeps rank 3: smallest third singular value over "
      f"all blocks = {min(sv):.3f}")
