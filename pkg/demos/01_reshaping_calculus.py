"""Walk through the vectorization and reshaping identities.

Every recovery method in this package rests on three facts:
  1. vec is an isometry: tr[A^H B] = vec(A)^H vec(B);
  2. the rearrangement R is a linear, norm-preserving involution that sends
     Kronecker products to outer products, R(B (x) C) = vec(C) vec(B)^T;
  3. a measurement tr[(S rho)^H O] is a plain linear functional of the
     reshaped matrix K: the inner product with conj(rho) (x) O.
Run this script to see each identity checked on random instances.
"""

import numpy as np

from superop_sensing import (Superoperator, apply_superop, choi_reshape,
                             complex_gaussian, hs_inner, kron, random_density,
                             random_observable, reshape_R, superop_matrix, vec)

rng = np.random.default_rng(0)
n = 3

print("vec stacks columns first:")
a = np.array([[1, 2], [3, 4]])
print(f"  vec([[1,2],[3,4]]) = {vec(a).real.astype(int)}")

a, b = complex_gaussian(n, n, rng), complex_gaussian(n, n, rng)
print(f"  isometry gap |tr[A^H B] - vec(A)^H vec(B)| = "
      f"{abs(hs_inner(a, b) - np.vdot(vec(a), vec(b))):.2e}")

print("\nR is an involution and an isometry, and unfolds Kronecker products:")
m = complex_gaussian(n * n, n * n, rng)
print(f"  ||R(R(M)) - M|| = {np.linalg.norm(reshape_R(reshape_R(m)) - m):.2e}")
print(f"  ||R(M)|| - ||M|| = {np.linalg.norm(reshape_R(m)) - np.linalg.norm(m):.2e}")
outer = np.outer(vec(b), vec(a))
print(f"  ||R(A x B) - vec(B)vec(A)^T|| = "
      f"{np.linalg.norm(reshape_R(kron(a, b)) - outer):.2e}")

print("\nA signed-Kraus superoperator and its two matrix pictures:")
s = Superoperator(n,
                  [complex_gaussian(n, n, rng) for _ in range(2)],
                  [complex_gaussian(n, n, rng)])
mat = superop_matrix(s)
k = choi_reshape(s).matrix
print(f"  ||R(mat) - K||           = {np.linalg.norm(reshape_R(mat) - k):.2e}")
print(f"  ||K - K^H|| (Hermitian)  = {np.linalg.norm(k - k.conj().T):.2e}")
print(f"  rank(K) = {np.linalg.matrix_rank(k, tol=1e-10)} "
      f"(= r_+ + r_- = {s.rank})")

print("\nThe measurement identity behind everything:")
rho, obs = random_density(n, rng), random_observable(n, rng)
lhs = hs_inner(apply_superop(s, rho), obs)
rhs = hs_inner(np.kron(rho.conj(), obs), k)
print(f"  tr[(S rho)^H O]          = {lhs:.6f}")
print(f"  <conj(rho) x O, K>       = {rhs:.6f}")
print(f"  difference               = {abs(lhs - rhs):.2e}")
