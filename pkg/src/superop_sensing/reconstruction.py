"""Deterministic completion of the full reshaped matrix from one block row.

Given estimates of the N blocks in one row of the Hermitian N^2 x N^2
reshaped matrix, and provided the row's diagonal block has full rank r, the
whole matrix is recovered without further optimization: a rank-r randomized
SVD of the row yields the shared row basis J^H, Hermitian symmetry supplies
the anchor column, and each remaining block row is the pseudo-inverse
projection of its anchor-column block onto the basis. The output has rank
exactly r because every row is a linear combination of the r basis rows.
"""

from __future__ import annotations

import numpy as np

from .errors import AssumptionViolationError, DimensionError
from .linalg import pseudo_inverse, randomized_svd
from .reshaping import ReshapedMatrix

__all__ = ["reconstruct_full"]


def reconstruct_full(row_blocks, r: int, rtol: float | None = None,
                     anchor: int = 0, hermitize: bool = False,
                     svd_seed: int = 0) -> ReshapedMatrix:
    """Rebuild the N^2 x N^2 matrix from the blocks of its anchor-th row.

    row_blocks lists [K_{a,0}, ..., K_{a,N-1}] for anchor row a (0-based).
    The diagonal block K_{a,a} must have r singular values above
    rtol * sigma_max (default rtol: max(N, r) * machine epsilon); otherwise
    an AssumptionViolationError reports the observed numerical rank.
    hermitize=True averages the result with its adjoint, which may break the
    exact rank-r structure and is off by default.
    """
    blocks = [np.asarray(b, dtype=np.complex128) for b in row_blocks]
    n = len(blocks)
    if n == 0:
        raise DimensionError("need at least one block")
    dim = blocks[0].shape[0]
    for b in blocks:
        if b.shape != (dim, dim):
            raise DimensionError(f"block shape {b.shape} != ({dim}, {dim})")
    if not 0 <= anchor < n:
        raise DimensionError(f"anchor {anchor} out of [0, {n})")
    if not 1 <= r <= dim:
        raise DimensionError(f"rank {r} out of range for block size {dim}")
    if rtol is None:
        rtol = max(n * dim, r) * np.finfo(np.float64).eps

    diag = blocks[anchor]
    svals = np.linalg.svd(diag, compute_uv=False)
    observed = int(np.count_nonzero(svals > rtol * svals[0])) if svals[0] > 0 else 0
    if observed < r:
        raise AssumptionViolationError(
            f"anchor diagonal block has numerical rank {observed} < r={r} "
            f"at rtol={rtol:.3e}", observed_rank=observed)

    row = np.hstack(blocks)                               # N x N^2
    svd = randomized_svd(row, r, seed=svd_seed)
    j = svd.right                                         # N^2 x r
    j_anchor = j[anchor * dim:(anchor + 1) * dim, :]      # N x r
    proj = pseudo_inverse(j_anchor.conj().T, rtol)        # N x r
    j_h = j.conj().T

    out = np.empty((n * dim, n * dim), dtype=np.complex128)
    out[anchor * dim:(anchor + 1) * dim, :] = svd.reconstruct()
    for k in range(n):
        if k == anchor:
            continue
        col_block = blocks[k].conj().T                    # K_{k,a} = K_{a,k}^H
        coeff = col_block @ proj                          # N x r
        out[k * dim:(k + 1) * dim, :] = coeff @ j_h
    if hermitize:
        out = (out + out.conj().T) / 2
    return ReshapedMatrix(dim, out)
