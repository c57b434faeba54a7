"""Vectorized kernel: limb matmuls and a bit-sliced field Horner, all int64.

Semantically identical to the numba kernel; per-step residual buckets are
canonicalized before signing, so the two backends' bucket states match bit
for bit (int64 addition is exact, ordering cannot matter).
"""

from __future__ import annotations

import numpy as np

from .backend import LIMB_BITS, LIMB_MASK, NBUCKET, NLIMB

NAME = "numpy"


def _limbs(vals: np.ndarray) -> np.ndarray:
    out = np.empty(vals.shape + (NLIMB,), dtype=np.int64)
    out[..., 0] = vals & LIMB_MASK
    out[..., 1] = (vals >> LIMB_BITS) & LIMB_MASK
    out[..., 2] = vals >> (2 * LIMB_BITS)
    return out


def _canonicalize_rows(buckets: np.ndarray) -> None:
    for s in range(NBUCKET - 1):
        carry = buckets[..., s] >> LIMB_BITS
        buckets[..., s] &= LIMB_MASK
        buckets[..., s + 1] += carry


def _gf_mul_vec(a: np.ndarray, b: np.ndarray, field_bits: int, field_poly: int) -> np.ndarray:
    res = np.zeros_like(a)
    aa = a.copy()
    bb = np.broadcast_to(b, a.shape).copy()
    high = np.int64(1 << field_bits)
    pol = np.int64(field_poly)
    for _ in range(field_bits):
        res ^= np.where((bb & 1) == 1, aa, np.int64(0))
        bb >>= 1
        aa <<= 1
        aa = np.where((aa & high) != 0, aa ^ pol, aa)
    return res


def _sign_matrix(coeffs: np.ndarray, field_bits: int, field_poly: int, step: int, n: int) -> np.ndarray:
    """(-1/+1)^(rows x n) for flat indices (step-1)*n + j, j = 1..n."""
    base = (step - 1) * n
    x = np.arange(base + 1, base + n + 1, dtype=np.int64)
    rows = coeffs.shape[0]
    acc = np.broadcast_to(coeffs[:, 3:4], (rows, n)).copy()
    for c_idx in (2, 1, 0):
        acc = _gf_mul_vec(acc, x, field_bits, field_poly) ^ coeffs[:, c_idx : c_idx + 1]
    return np.where((acc & 1) == 0, np.int64(1), np.int64(-1))


def step_update(
    m_limbs: np.ndarray,
    prev_raw: np.ndarray,
    cur_raw: np.ndarray,
    p: int,
    step: int,
    coeffs: np.ndarray,
    field_bits: int,
    field_poly: int,
    delta_buckets: np.ndarray,
) -> None:
    n = prev_raw.shape[0]
    q, r = divmod(int(p), LIMB_BITS)
    v_limbs = _limbs(prev_raw)
    w = np.zeros((n, NBUCKET), dtype=np.int64)
    for a in range(NLIMB):
        ml = m_limbs[:, :, a]
        for b in range(NLIMB):
            w[:, a + b] += ml @ v_limbs[:, b]
    y_limbs = _limbs(cur_raw)
    for b in range(NLIMB):
        w[:, q + b] -= y_limbs[:, b] << r
    _canonicalize_rows(w)
    signs = _sign_matrix(coeffs, field_bits, field_poly, step, n)
    delta_buckets += signs @ w
    _canonicalize_rows(delta_buckets)
