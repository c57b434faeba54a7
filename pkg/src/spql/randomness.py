"""Seed derivation and counted bit sources.

Every random decision in the package flows from one master seed through
named derivation paths (e.g. ("verify", rep) or ("prover", trial)), so runs
are reproducible and independent components never share a stream.  The
verifier draws through a :class:`BitSource`, which counts bits so tests can
pin the exact randomness cost of a verification.
"""

from __future__ import annotations

import hashlib
from collections.abc import Sequence

import numpy as np

from .errors import InsufficientRandomness


def derive_key(master_seed: int, *path) -> bytes:
    """SHA-256 of the length-prefixed path; stable across sessions."""
    h = hashlib.sha256()
    for part in (master_seed, *path):
        token = str(part).encode()
        h.update(len(token).to_bytes(4, "little"))
        h.update(token)
    return h.digest()


def philox(master_seed: int, *path) -> np.random.Generator:
    """A Philox generator keyed by the derivation path."""
    key = int.from_bytes(derive_key(master_seed, *path)[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))


class BitSource:
    """Serves single random bits and counts every bit handed out.

    Backed either by a generator (unbounded) or by a fixed bit string; a
    fixed source raises :class:`InsufficientRandomness` when it runs dry,
    which tests use to pin randomness budgets.
    """

    _REFILL = 512

    def __init__(
        self,
        generator: np.random.Generator | None = None,
        bits: Sequence[int] | str | None = None,
    ) -> None:
        if (generator is None) == (bits is None):
            raise ValueError("provide exactly one of generator= or bits=")
        self._gen = generator
        if bits is not None:
            if isinstance(bits, str):
                if set(bits) - {"0", "1"}:
                    raise ValueError("bit string may contain only '0' and '1'")
                parsed = [int(c) for c in bits]
            else:
                parsed = [int(b) for b in bits]
                if any(b not in (0, 1) for b in parsed):
                    raise ValueError("bits must be 0 or 1")
            self._fixed: list[int] | None = parsed
        else:
            self._fixed = None
        self._pending: list[int] = []
        self._pos = 0
        self.consumed = 0

    @classmethod
    def from_generator(cls, generator: np.random.Generator) -> "BitSource":
        return cls(generator=generator)

    @classmethod
    def from_string(cls, bits: str) -> "BitSource":
        return cls(bits=bits)

    @property
    def remaining(self) -> int | None:
        """Bits left in a fixed source; None when unbounded."""
        if self._fixed is None:
            return None
        return len(self._fixed) - self._pos

    def _next_bit(self) -> int:
        if self._fixed is not None:
            if self._pos >= len(self._fixed):
                raise InsufficientRandomness(
                    f"bit source exhausted after {self.consumed} bits"
                )
            bit = self._fixed[self._pos]
            self._pos += 1
        else:
            if self._pos >= len(self._pending):
                assert self._gen is not None
                self._pending = self._gen.integers(0, 2, size=self._REFILL, dtype=np.uint8).tolist()
                self._pos = 0
            bit = self._pending[self._pos]
            self._pos += 1
        self.consumed += 1
        return bit

    def take(self, k: int) -> int:
        """The next k bits as a big-endian integer in [0, 2^k)."""
        if k < 0:
            raise ValueError("k must be non-negative")
        value = 0
        for _ in range(k):
            value = (value << 1) | self._next_bit()
        return value


def bit_source(master_seed: int, *path) -> BitSource:
    """An unbounded bit source keyed by the derivation path."""
    return BitSource(generator=philox(master_seed, *path))
