"""Problem instances: an orthogonal matrix to power, a horizon, a projection.

An instance asks whether the squared mass of M^T e_1 on the projected
coordinates is at least 4/5 (label ONE) or at most 1/5 (label ZERO);
instances between the thresholds are outside the promise and carry no
ground truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .errors import DimensionError, SpqlError
from .fxlinalg import Matrix, power_oracle

ORTHO_TOL = 1e-9
MASS_HI = 4 / 5
MASS_LO = 1 / 5


class Label(Enum):
    YES = "YES"
    NO = "NO"
    OUTSIDE_PROMISE = "OUTSIDE_PROMISE"


@dataclass(frozen=True)
class PromiseLabel:
    kind: Label
    mass: float


@dataclass(frozen=True)
class PoweringInstance:
    """An orthogonal M, a power T >= 0 and a sorted tuple of 1-based coordinates."""

    matrix: Matrix
    T: int
    proj: tuple[int, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.matrix, Matrix):
            object.__setattr__(self, "matrix", Matrix(np.asarray(self.matrix, dtype=float)))
        if self.T < 0:
            raise DimensionError("T must be non-negative")
        n = self.matrix.n
        if n < 1:
            raise DimensionError("matrix must be at least 1x1")
        proj = tuple(sorted(int(j) for j in self.proj))
        if not proj:
            raise DimensionError("projection must select at least one coordinate")
        if len(set(proj)) != len(proj):
            raise DimensionError("projection indices must be distinct")
        if proj[0] < 1 or proj[-1] > n:
            raise DimensionError(f"projection indices must lie in [1, {n}]")
        object.__setattr__(self, "proj", proj)
        gram = self.matrix.data.T @ self.matrix.data
        err = float(np.max(np.abs(gram - np.eye(n))))
        if err > ORTHO_TOL:
            raise SpqlError(f"matrix is not orthogonal (max Gram deviation {err:.3g})")

    @property
    def n(self) -> int:
        return self.matrix.n


def default_delta(T: int) -> float:
    """Per-step error budget: min(1/(10^4 T^2), 1/10)."""
    if T < 1:
        raise DimensionError("default_delta needs T >= 1")
    return min(1.0 / (10_000 * T * T), 0.1)


def proj_mass(vec: np.ndarray, proj: tuple[int, ...]) -> float:
    """Squared l2 mass of the selected 1-based coordinates."""
    return float(sum(float(vec[j - 1]) ** 2 for j in proj))


def label_instance(inst: PoweringInstance) -> PromiseLabel:
    """Ground-truth label from the reference powering oracle."""
    final = power_oracle(inst.matrix, inst.T)
    mass = proj_mass(final, inst.proj)
    if mass >= MASS_HI:
        kind = Label.YES
    elif mass <= MASS_LO:
        kind = Label.NO
    else:
        kind = Label.OUTSIDE_PROMISE
    return PromiseLabel(kind=kind, mass=mass)


def _signed_permutation(n: int, rng: np.random.Generator) -> np.ndarray:
    perm = rng.permutation(n)
    signs = rng.choice([-1.0, 1.0], size=n)
    m = np.zeros((n, n))
    for col in range(n):
        m[perm[col], col] = signs[col]
    return m


def _givens_product(n: int, rng: np.random.Generator) -> np.ndarray:
    """Product of ceil(n log2 n) random plane rotations (identity for n = 1)."""
    m = np.eye(n)
    if n == 1:
        return m
    count = math.ceil(n * math.log2(n)) if n > 1 else 0
    for _ in range(max(count, 1)):
        i, j = rng.choice(n, size=2, replace=False)
        theta = rng.uniform(0.0, 2.0 * math.pi)
        c, s = math.cos(theta), math.sin(theta)
        rot = np.eye(n)
        rot[i, i] = c
        rot[j, j] = c
        rot[i, j] = -s
        rot[j, i] = s
        m = rot @ m
    return m


def _random_proj(n: int, rng: np.random.Generator) -> tuple[int, ...]:
    size = max(1, n // 2)
    picks = rng.choice(n, size=size, replace=False)
    return tuple(sorted(int(j) + 1 for j in picks))


def gen_instance(
    kind: str,
    n: int,
    T: int,
    seed: int,
    proj: tuple[int, ...] | None = None,
) -> PoweringInstance:
    """Deterministic instance generator.

    Kinds:
      signed-permutation  random signed permutation matrix (always on-promise)
      givens-product      product of random plane rotations
      from-circuit        random T-gate circuit on n qubits, then the block
                          reduction; the result's dimension and power differ
                          from (n, T)
    """
    from .randomness import philox

    rng = philox(seed, "gen", kind, n, T)
    if kind == "signed-permutation":
        m = _signed_permutation(n, rng)
    elif kind == "givens-product":
        m = _givens_product(n, rng)
    elif kind == "from-circuit":
        from .reduction import circuit_to_instance, random_circuit

        circ = random_circuit(n, T, rng)
        inst = circuit_to_instance(circ)
        if proj is not None:
            inst = PoweringInstance(inst.matrix, inst.T, tuple(proj))
        return inst
    else:
        raise ValueError(f"unknown instance kind {kind!r}")
    if proj is None:
        proj = _random_proj(n, rng)
    return PoweringInstance(Matrix(m), T, tuple(proj))


def write_instance(inst: PoweringInstance, path: str | Path) -> None:
    """Text format: 'n T' line, n matrix rows, one line of projection indices."""
    lines = [f"{inst.n} {inst.T}"]
    for i in range(inst.n):
        lines.append(" ".join(f"{x:.17g}" for x in inst.matrix.data[i]))
    lines.append(" ".join(str(j) for j in inst.proj))
    Path(path).write_text("\n".join(lines) + "\n")


def read_instance(path: str | Path) -> PoweringInstance:
    text = Path(path).read_text()
    rows = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not rows:
        raise SpqlError(f"{path}: empty instance file")
    head = rows[0].split()
    if len(head) != 2:
        raise SpqlError(f"{path}: first line must be 'n T'")
    n, T = int(head[0]), int(head[1])
    if len(rows) != n + 2:
        raise SpqlError(f"{path}: expected {n + 2} lines, found {len(rows)}")
    m = np.array([[float(x) for x in rows[1 + i].split()] for i in range(n)])
    if m.shape != (n, n):
        raise SpqlError(f"{path}: matrix block is not {n}x{n}")
    proj = tuple(int(j) for j in rows[n + 1].split())
    return PoweringInstance(Matrix(m), T, proj)
