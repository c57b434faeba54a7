"""Exact integer kernels behind the verifier's accumulators.

One verification step must add, for every check row r, the signed residuals
sum_j alpha_r(i,j) * [ (M~ v'_{i-1})(j) - v'_i(j) ]  to accumulator r,
exactly.  Mantissa products reach 2^(2p+2) with p up to 61, far past int64,
so values are split into 21-bit limbs and accumulated per limb weight in
int64 "buckets" (8 per accumulator, weight 2^21 apart).  Bucket arithmetic
never overflows within the supported envelope, and the bucket state is
canonicalized (carries propagated) after every step; the final accumulator
value is recombined into an arbitrary-precision int at the end.

Two interchangeable implementations exist:

  numba   scalar loops compiled with @njit (default when numba imports)
  numpy   vectorized limb matmuls, no compilation

selected by the SPQL_BACKEND environment variable or per call.  Both produce
bit-identical bucket states; the test suite and the bundled benchmark assert
this.
"""

from __future__ import annotations

import importlib.util
import os

import numpy as np

from .errors import DimensionError, PrecisionOverflow, SpqlError
from .fxlinalg import MAX_FRAC_BITS

LIMB_BITS = 21
LIMB_MASK = (1 << LIMB_BITS) - 1
NLIMB = 3
NBUCKET = 8

# Envelope within which bucket accumulation provably stays inside int64:
# matrix mantissas |m| <= 2^p, vector mantissas |v| <= 2^(p+2), limbs < 2^21,
# so one inner product adds <= 3n products of < 2^42 per bucket.
MAX_N = 1 << 16
MAX_T = 1 << 16

ENV_VAR = "SPQL_BACKEND"


def ensure_envelope(n: int, T: int, frac_bits: int) -> None:
    if frac_bits > MAX_FRAC_BITS:
        raise PrecisionOverflow(
            f"precision p={frac_bits} exceeds the supported {MAX_FRAC_BITS} bits"
        )
    if n > MAX_N:
        raise DimensionError(f"dimension n={n} exceeds the supported {MAX_N}")
    if T > MAX_T:
        raise DimensionError(f"step count T={T} exceeds the supported {MAX_T}")


def decompose_matrix(raw: np.ndarray) -> np.ndarray:
    """Split int64 mantissas into (..., 3) limbs of 21 bits.

    Low limbs are non-negative (masked); the top limb is arithmetic-shifted
    and carries the sign, so limb magnitudes stay <= 2^21 and
    x = limbs[0] + limbs[1]*2^21 + limbs[2]*2^42 exactly.
    """
    arr = np.asarray(raw, dtype=np.int64)
    out = np.empty(arr.shape + (NLIMB,), dtype=np.int64)
    out[..., 0] = arr & LIMB_MASK
    out[..., 1] = (arr >> LIMB_BITS) & LIMB_MASK
    out[..., 2] = arr >> (2 * LIMB_BITS)
    return np.ascontiguousarray(out)


def recombine_row(buckets_row) -> int:
    """Exact value of one accumulator from its bucket state."""
    return sum(int(b) << (LIMB_BITS * s) for s, b in enumerate(buckets_row))


def new_accumulators(rows: int) -> np.ndarray:
    return np.zeros((rows, NBUCKET), dtype=np.int64)


def _numba_available() -> bool:
    return importlib.util.find_spec("numba") is not None


_cache: dict[str, object] = {}


def get_backend(name: str | None = None):
    """Resolve a kernel module by name, env var, or availability."""
    if name is None:
        name = os.environ.get(ENV_VAR, "").strip().lower() or None
    if name is None:
        name = "numba" if _numba_available() else "numpy"
    if name in _cache:
        return _cache[name]
    if name == "numpy":
        from . import _backend_numpy as mod
    elif name == "numba":
        try:
            from . import _backend_numba as mod
        except ImportError as exc:
            raise SpqlError(f"numba backend requested but not importable: {exc}") from exc
    else:
        raise ValueError(f"unknown backend {name!r}; choose 'numba' or 'numpy'")
    _cache[name] = mod
    return mod


def available_backends() -> tuple[str, ...]:
    names = ["numpy"]
    if _numba_available():
        names.insert(0, "numba")
    return tuple(names)
