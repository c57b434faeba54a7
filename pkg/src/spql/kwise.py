"""4-wise independent +-1 sign families over GF(2^k).

A sampler is a uniformly random degree-3 polynomial over GF(2^k); the sign
attached to index x is +1 when the least significant bit of the evaluation
is 0, else -1.  Any four distinct indices get independent uniform signs, so
fourth moments of sign combinations behave as if the signs were fully
independent, which is all the verifier's tail bound needs.

A sampler costs exactly 4*k random bits; with k = ceil(log2(n*T + 1)) the
index domain {1, ..., n*T} embeds into the nonzero field elements.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .randomness import BitSource

# Lexicographically smallest irreducible polynomial of each degree.
# Bitmask coefficients: bit k is x^k, bit 0 is the constant term.
IRREDUCIBLE = {
    1: 0x3,
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11B,
    9: 0x203,
    10: 0x409,
    11: 0x805,
    12: 0x1009,
    13: 0x201B,
    14: 0x4021,
    15: 0x8003,
    16: 0x1002B,
    17: 0x20009,
    18: 0x40009,
    19: 0x80027,
    20: 0x100009,
    21: 0x200005,
    22: 0x400003,
    23: 0x800021,
    24: 0x100001B,
}

MAX_FIELD_BITS = max(IRREDUCIBLE)


def gf_mul(a: int, b: int, field_bits: int, poly: int) -> int:
    """Carry-less multiply modulo the field polynomial (shift-and-add)."""
    acc = 0
    high = 1 << field_bits
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a & high:
            a ^= poly
    return acc


def poly_eval(coeffs: tuple[int, int, int, int], x: int, field_bits: int, poly: int) -> int:
    """Evaluate c0 + c1 x + c2 x^2 + c3 x^3 by Horner's rule."""
    c0, c1, c2, c3 = coeffs
    acc = c3
    acc = gf_mul(acc, x, field_bits, poly) ^ c2
    acc = gf_mul(acc, x, field_bits, poly) ^ c1
    acc = gf_mul(acc, x, field_bits, poly) ^ c0
    return acc


def field_bits_for(n: int, T: int) -> int:
    """Smallest supported k with n*T + 1 <= 2^k (at least 1)."""
    if n < 1 or T < 0:
        raise DimensionError("need n >= 1 and T >= 0")
    k = max(1, (n * T).bit_length())  # bit_length(nT) = ceil(log2(nT+1)) for nT >= 1
    if k > MAX_FIELD_BITS:
        raise DimensionError(f"index domain n*T = {n * T} needs k = {k} > {MAX_FIELD_BITS} field bits")
    return k


def signs_budget(n: int, T: int) -> int:
    """Total random bits one verification consumes: 11 samplers of 4k bits."""
    if T == 0:
        return 0
    return 44 * field_bits_for(n, T)


@dataclass(frozen=True)
class SignSampler:
    """Signs for the double index (i, j), i in [1, T], j in [1, n].

    The flat index x = (i-1)*n + (j-1) + 1 is evaluated through the random
    cubic; equality of flat indices is equality of (i, j) pairs, so the
    4-wise guarantee transfers.
    """

    field_bits: int
    coeffs: tuple[int, int, int, int]
    n: int
    T: int

    def __post_init__(self) -> None:
        if self.field_bits not in IRREDUCIBLE:
            raise DimensionError(f"unsupported field size k = {self.field_bits}")
        limit = 1 << self.field_bits
        if any(not 0 <= c < limit for c in self.coeffs):
            raise ValueError("coefficients must lie in the field")
        if self.n * self.T + 1 > limit:
            raise DimensionError("index domain does not fit the field")

    @property
    def poly(self) -> int:
        return IRREDUCIBLE[self.field_bits]

    def flat_index(self, i: int, j: int) -> int:
        if not 1 <= i <= self.T:
            raise DimensionError(f"step index {i} outside [1, {self.T}]")
        if not 1 <= j <= self.n:
            raise DimensionError(f"coordinate index {j} outside [1, {self.n}]")
        return (i - 1) * self.n + (j - 1) + 1

    def sample_sign(self, i: int, j: int) -> int:
        value = poly_eval(self.coeffs, self.flat_index(i, j), self.field_bits, self.poly)
        return 1 if (value & 1) == 0 else -1

    def sign_row(self, i: int) -> np.ndarray:
        """All n signs of step i, as an int64 array of +-1."""
        return np.array([self.sample_sign(i, j) for j in range(1, self.n + 1)], dtype=np.int64)


def fresh_sampler(bits: BitSource, n: int, T: int) -> SignSampler:
    """Draw a sampler from a bit source: 4k bits, c0 first, big-endian each."""
    k = field_bits_for(n, T)
    coeffs = tuple(bits.take(k) for _ in range(4))
    return SignSampler(field_bits=k, coeffs=coeffs, n=n, T=T)
