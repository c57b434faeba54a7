"""Fixed-point scalars, vectors and matrices, plus the floating-point powering oracle.

The protocol keeps every streamed quantity on a dyadic grid: a value is an
integer mantissa ``raw`` scaled by ``2**-frac_bits``.  Additions and
integer-scaled multiplications of equal-precision values are exact; a product
of two values carries the sum of their fractional bits until explicitly
rounded.  Floating point appears only in analysis-side computations (norms,
the reference powering oracle) and in the final projection-mass decision,
never inside the verifier's accumulators.

Indices in the public API are 1-based, matching the usual linear-algebra
notation for ``v_i`` and ``M[i,j]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DimensionError, PrecisionOverflow

# Mantissas must fit a signed 64-bit wire value with the |value| <= 4 guard,
# i.e. |raw| <= 2**(frac_bits + 2) < 2**63.
MAX_FRAC_BITS = 61


def trunc_to_grid(x: float, frac_bits: int) -> int:
    """Largest-magnitude grid multiple not exceeding |x|, exactly.

    Round-toward-zero of ``x * 2**frac_bits``; exact for every finite float,
    including ones whose scaled value exceeds 2**53.
    """
    if not np.isfinite(x):
        raise ValueError(f"cannot quantize non-finite value {x!r}")
    num, den = float(x).as_integer_ratio()
    if num >= 0:
        return (num << frac_bits) // den
    return -((-num << frac_bits) // den)


@dataclass(frozen=True)
class FxScalar:
    """A signed dyadic rational: value = raw * 2**-frac_bits."""

    raw: int
    frac_bits: int

    def __post_init__(self) -> None:
        if self.frac_bits < 0:
            raise ValueError("frac_bits must be non-negative")

    @classmethod
    def from_float(cls, x: float, frac_bits: int) -> "FxScalar":
        return cls(trunc_to_grid(x, frac_bits), frac_bits)

    @classmethod
    def from_fraction(cls, q: Fraction, frac_bits: int) -> "FxScalar":
        scaled = q * (1 << frac_bits)
        if scaled.denominator != 1:
            raise ValueError(f"{q} is not representable with {frac_bits} fractional bits")
        return cls(int(scaled), frac_bits)

    def to_fraction(self) -> Fraction:
        return Fraction(self.raw, 1 << self.frac_bits)

    def to_float(self) -> float:
        return self.raw / float(1 << self.frac_bits)

    def scale_int(self, k: int) -> "FxScalar":
        return FxScalar(self.raw * k, self.frac_bits)

    def __add__(self, other: "FxScalar") -> "FxScalar":
        if self.frac_bits != other.frac_bits:
            raise ValueError("addition requires equal frac_bits")
        return FxScalar(self.raw + other.raw, self.frac_bits)

    def __sub__(self, other: "FxScalar") -> "FxScalar":
        if self.frac_bits != other.frac_bits:
            raise ValueError("subtraction requires equal frac_bits")
        return FxScalar(self.raw - other.raw, self.frac_bits)

    def __mul__(self, other: "FxScalar") -> "FxScalar":
        # Exact: result carries the widened precision.
        return FxScalar(self.raw * other.raw, self.frac_bits + other.frac_bits)

    def round_to(self, frac_bits: int) -> "FxScalar":
        """Round toward zero to a coarser grid (exact if already on it)."""
        if frac_bits >= self.frac_bits:
            return FxScalar(self.raw << (frac_bits - self.frac_bits), frac_bits)
        shift = self.frac_bits - frac_bits
        mag = abs(self.raw) >> shift
        return FxScalar(mag if self.raw >= 0 else -mag, frac_bits)


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=arr.dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Vector:
    """A fixed-point vector; all entries share one precision.

    ``raw`` holds int64 mantissas (object dtype only for widened
    intermediates produced by :func:`mat_vec`).
    """

    raw: np.ndarray
    frac_bits: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "raw", _readonly(np.atleast_1d(self.raw)))
        if self.raw.ndim != 1:
            raise DimensionError("vector mantissas must be one-dimensional")

    @classmethod
    def from_floats(cls, values, frac_bits: int) -> "Vector":
        raws = [trunc_to_grid(float(x), frac_bits) for x in np.asarray(values, dtype=float)]
        return cls(np.array(raws, dtype=np.int64), frac_bits)

    @classmethod
    def basis(cls, n: int, frac_bits: int, index: int = 1) -> "Vector":
        """e_index at the given precision (1-based index)."""
        if not 1 <= index <= n:
            raise DimensionError(f"basis index {index} outside [1, {n}]")
        raw = np.zeros(n, dtype=np.int64)
        raw[index - 1] = 1 << frac_bits
        return cls(raw, frac_bits)

    @property
    def n(self) -> int:
        return int(self.raw.shape[0])

    def entry(self, j: int) -> FxScalar:
        """1-based coordinate access."""
        if not 1 <= j <= self.n:
            raise DimensionError(f"index {j} outside [1, {self.n}]")
        return FxScalar(int(self.raw[j - 1]), self.frac_bits)

    def to_floats(self) -> np.ndarray:
        scale = float(Fraction(1, 1 << self.frac_bits))
        return np.array([int(r) * scale for r in self.raw], dtype=float)

    def round_to(self, frac_bits: int) -> "Vector":
        raws = [FxScalar(int(r), self.frac_bits).round_to(frac_bits).raw for r in self.raw]
        return Vector(np.array(raws, dtype=np.int64), frac_bits)

    def is_basis(self, index: int = 1) -> bool:
        target = 1 << self.frac_bits
        return bool(self.raw[index - 1] == target and np.count_nonzero(self.raw) == 1)


@dataclass(frozen=True)
class Matrix:
    """A square matrix at input precision (double)."""

    data: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.data, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError("matrix must be square")
        object.__setattr__(self, "data", _readonly(arr))

    @property
    def n(self) -> int:
        return int(self.data.shape[0])

    def entry(self, i: int, j: int) -> float:
        return float(self.data[i - 1, j - 1])


@dataclass(frozen=True)
class FxMatrix:
    """A square matrix on the dyadic grid (the rounded precision)."""

    raw: np.ndarray
    frac_bits: int

    def __post_init__(self) -> None:
        arr = np.asarray(self.raw)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError("matrix must be square")
        object.__setattr__(self, "raw", _readonly(arr.astype(np.int64)))

    @property
    def n(self) -> int:
        return int(self.raw.shape[0])

    def entry(self, i: int, j: int) -> FxScalar:
        return FxScalar(int(self.raw[i - 1, j - 1]), self.frac_bits)

    def to_floats(self) -> np.ndarray:
        return self.raw.astype(float) / float(1 << self.frac_bits)


def norm_l2(v) -> float:
    """Euclidean norm, computed in double precision from exact entries."""
    if isinstance(v, Vector):
        v = v.to_floats()
    return float(np.linalg.norm(np.asarray(v, dtype=float)))


def spectral_norm_bound(m) -> float:
    """An upper bound on the spectral norm: min(n * max|entry|, Frobenius)."""
    if isinstance(m, Matrix):
        arr = m.data
    elif isinstance(m, FxMatrix):
        arr = m.to_floats()
    else:
        arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionError("spectral_norm_bound needs a square matrix")
    if arr.size == 0:
        return 0.0
    n = arr.shape[0]
    return float(min(n * np.max(np.abs(arr)), np.linalg.norm(arr)))


def min_frac_bits(delta: float, n: int, T: int) -> int:
    """Smallest p with 2**-p <= delta / (6 n^2 T).

    This is both the grid of the rounded matrix and the shared stream
    precision for the whole protocol run.
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    if n < 1 or T < 1:
        raise DimensionError("need n >= 1 and T >= 1")
    bound = Fraction(delta) / (6 * n * n * T)
    # minimal p >= 0 with 2**p >= 1/bound
    need = -(-bound.denominator // bound.numerator)  # ceil
    p = max(0, (need - 1).bit_length())
    if p > MAX_FRAC_BITS:
        raise PrecisionOverflow(
            f"required precision p={p} exceeds the supported {MAX_FRAC_BITS} fractional bits"
        )
    return p


def round_matrix(m: Matrix, delta: float, T: int = 1, n: int | None = None) -> FxMatrix:
    """Round each entry toward zero onto the grid 2**-p with p = min_frac_bits.

    Per-entry error is below the grid step g <= delta/(6 n^2 T), hence
    ||M - M~||_2 <= n*g <= delta/(6T).  Toward-zero keeps |error| <= g for
    entries of either sign.
    """
    if not isinstance(m, Matrix):
        m = Matrix(np.asarray(m, dtype=float))
    if n is None:
        n = m.n
    if T < 1:
        raise DimensionError("T must be >= 1")
    p = min_frac_bits(delta, n, T)
    raw = np.array(
        [[trunc_to_grid(float(x), p) for x in row] for row in m.data], dtype=np.int64
    )
    return FxMatrix(raw, p)


def mat_vec(m: FxMatrix, v: Vector) -> Vector:
    """Exact fixed-point matrix-vector product at widened precision.

    The result carries ``m.frac_bits + v.frac_bits`` fractional bits; callers
    round explicitly (``Vector.round_to``) when a narrower result is wanted.
    Mantissas are accumulated as arbitrary-precision ints, so no overflow.
    """
    if m.n != v.n:
        raise DimensionError(f"dimension mismatch: matrix {m.n}, vector {v.n}")
    rows = []
    vraw = [int(x) for x in v.raw]
    for i in range(m.n):
        rows.append(sum(int(m.raw[i, l]) * vraw[l] for l in range(m.n)))
    out = np.empty(m.n, dtype=object)
    out[:] = rows
    if all(abs(r) < (1 << 62) for r in rows):
        out = np.array(rows, dtype=np.int64)
    return Vector(out, m.frac_bits + v.frac_bits)


def power_oracle(m, T: int) -> np.ndarray:
    """Reference computation of M^T e_1 in double precision.

    Analysis/test oracle only; the streaming verifier never calls it.
    """
    if isinstance(m, Matrix):
        arr = m.data
    else:
        arr = np.asarray(m, dtype=float)
    if T < 0:
        raise ValueError("T must be non-negative")
    v = np.zeros(arr.shape[0], dtype=float)
    v[0] = 1.0
    for _ in range(T):
        v = arr @ v
    return v
