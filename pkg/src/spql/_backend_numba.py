"""Compiled kernel: plain scalar loops under @njit, all int64.

Residual buckets for each coordinate are formed, canonicalized, then added
to every accumulator row with that row's sign, exactly as the numpy kernel
does in vector form.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .backend import LIMB_BITS, LIMB_MASK, NBUCKET

NAME = "numba"


@njit(cache=True)
def _kernel(m_limbs, prev_raw, cur_raw, p, step, coeffs, field_bits, field_poly, delta_buckets):
    n = prev_raw.shape[0]
    rows = delta_buckets.shape[0]
    q = p // LIMB_BITS
    r = p - q * LIMB_BITS
    high = np.int64(1) << field_bits

    v_limbs = np.empty((n, 3), dtype=np.int64)
    for l in range(n):
        x = prev_raw[l]
        v_limbs[l, 0] = x & LIMB_MASK
        v_limbs[l, 1] = (x >> LIMB_BITS) & LIMB_MASK
        v_limbs[l, 2] = x >> (2 * LIMB_BITS)

    w = np.empty(NBUCKET, dtype=np.int64)
    base = (step - 1) * n
    for j in range(n):
        for s in range(NBUCKET):
            w[s] = 0
        for l in range(n):
            for a in range(3):
                xa = m_limbs[j, l, a]
                if xa != 0:
                    w[a] += xa * v_limbs[l, 0]
                    w[a + 1] += xa * v_limbs[l, 1]
                    w[a + 2] += xa * v_limbs[l, 2]
        y = cur_raw[j]
        w[q] -= (y & LIMB_MASK) << r
        w[q + 1] -= ((y >> LIMB_BITS) & LIMB_MASK) << r
        w[q + 2] -= (y >> (2 * LIMB_BITS)) << r
        for s in range(NBUCKET - 1):
            carry = w[s] >> LIMB_BITS
            w[s] &= LIMB_MASK
            w[s + 1] += carry

        flat = np.int64(base + j + 1)
        for rep in range(rows):
            acc = coeffs[rep, 3]
            for c_idx in range(2, -1, -1):
                prod = np.int64(0)
                aa = acc
                bb = flat
                for _ in range(field_bits):
                    if bb & 1:
                        prod ^= aa
                    bb >>= 1
                    aa <<= 1
                    if aa & high:
                        aa ^= field_poly
                acc = prod ^ coeffs[rep, c_idx]
            if acc & 1 == 0:
                for s in range(NBUCKET):
                    delta_buckets[rep, s] += w[s]
            else:
                for s in range(NBUCKET):
                    delta_buckets[rep, s] -= w[s]

    for rep in range(rows):
        for s in range(NBUCKET - 1):
            carry = delta_buckets[rep, s] >> LIMB_BITS
            delta_buckets[rep, s] &= LIMB_MASK
            delta_buckets[rep, s + 1] += carry


def step_update(m_limbs, prev_raw, cur_raw, p, step, coeffs, field_bits, field_poly, delta_buckets):
    _kernel(
        m_limbs,
        prev_raw,
        cur_raw,
        np.int64(p),
        np.int64(step),
        coeffs,
        np.int64(field_bits),
        np.int64(field_poly),
        delta_buckets,
    )
