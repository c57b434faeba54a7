"""Shared helpers for exhaustive 4-wise independence checks.

The sign of index x is the parity of a GF(2)-linear form in the 4k seed
bits: LSB(sum_d c_d * x^d) = parity(seed_bits & mask(x)) where mask packs,
per coefficient, which seed bits flip the LSB.  Pattern uniformity over all
seeds for a tuple of indices is therefore exactly equivalent to linear
independence of the tuple's masks; helpers below provide the masks, the
rank test, and a direct full-enumeration counter used to cross-validate.
"""

import numpy as np

from spql.kwise import IRREDUCIBLE, SignSampler, gf_mul


def lsb_mask(m: int, k: int, poly: int) -> int:
    """Bits b of coefficient c for which LSB(c * m) flips: mask over k bits."""
    mask = 0
    for b in range(k):
        if gf_mul(1 << b, m, k, poly) & 1:
            mask |= 1 << b
    return mask


def sign_mask(x: int, k: int) -> int:
    """The 4k-bit mask of index x covering seed bits (c0 | c1<<k | c2<<2k | c3<<3k)."""
    poly = IRREDUCIBLE[k]
    mask = 0
    power = 1
    for d in range(4):
        mask |= lsb_mask(power, k, poly) << (d * k)
        power = gf_mul(power, x, k, poly)
    return mask


def masks_independent(masks: list[int]) -> bool:
    """GF(2) linear independence via nonzero XOR of every nonempty subset."""
    r = len(masks)
    for subset in range(1, 1 << r):
        acc = 0
        for i in range(r):
            if subset >> i & 1:
                acc ^= masks[i]
        if acc == 0:
            return False
    return True


def seed_to_coeffs(seed: int, k: int) -> tuple[int, int, int, int]:
    m = (1 << k) - 1
    return (seed & m, (seed >> k) & m, (seed >> (2 * k)) & m, (seed >> (3 * k)) & m)


def all_seed_signs(k: int, n: int, T: int) -> np.ndarray:
    """Sign table over every seed: shape (2^(4k), n*T), entries in {+1,-1}.

    Uses the mask-parity representation; validated against SignSampler in
    the exhaustive representation test.
    """
    domain = n * T
    seeds = np.arange(1 << (4 * k), dtype=np.uint64)
    out = np.empty((seeds.shape[0], domain), dtype=np.int8)
    for x in range(1, domain + 1):
        mask = np.uint64(sign_mask(x, k))
        parity = np.bitwise_count(seeds & mask) & np.uint64(1)
        out[:, x - 1] = np.where(parity == 0, 1, -1)
    return out


def pattern_counts(signs: np.ndarray, columns: tuple[int, ...]) -> np.ndarray:
    """How often each +-1 pattern of the chosen columns occurs across seeds."""
    bits = (signs[:, list(columns)] < 0).astype(np.int64)
    weights = 1 << np.arange(len(columns) - 1, -1, -1, dtype=np.int64)
    codes = bits @ weights
    return np.bincount(codes, minlength=1 << len(columns))


def sampler_for_seed(seed: int, k: int, n: int, T: int) -> SignSampler:
    return SignSampler(field_bits=k, coeffs=seed_to_coeffs(seed, k), n=n, T=T)
