"""Quantum circuits and their reduction to an orthogonal powering instance.

A circuit of T gates on m qubits becomes a block matrix U of T+1 block
rows/columns: block (i+1, i) holds gate i and block (1, T+1) holds the
identity, so U^T carries the block-1 start state |0...0> to the final block
with all gates applied.  The projection selects the final-block coordinates
whose first qubit (most significant bit of the basis index) is 0, making the
projected mass of U^T e_1 exactly the probability of measuring 0.

Circuits with any complex entry are first mapped gate-by-gate through the
standard realification  g -> kron(Re g, I2) + kron(Im g, [[0,-1],[1,0]]),
which is a ring homomorphism sending unitaries to orthogonal matrices; each
amplitude then occupies an adjacent (real, imaginary) coordinate pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError, SpqlError
from .fxlinalg import Matrix
from .instance import PoweringInstance

MAX_QUBITS = 12
# circuit_to_instance output dimension cap; the instance constructor runs an
# O(n^3) orthogonality check, which stays under a few seconds up to here.
MAX_REDUCED_DIM = 4096

UNITARY_TOL = 1e-9

_ANGLED = {"r", "phase"}
_SINGLE = {"i", "x", "z", "h", "r", "phase"}


@dataclass(frozen=True)
class GateSpec:
    """One gate: a name, 1-based wires (qubit 1 = most significant), an angle."""

    name: str
    wires: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "name", self.name.lower())
        object.__setattr__(self, "wires", tuple(int(w) for w in self.wires))
        if self.name in _SINGLE:
            if len(self.wires) != 1:
                raise DimensionError(f"gate {self.name!r} takes one wire")
        elif self.name == "cnot":
            if len(self.wires) != 2 or self.wires[0] == self.wires[1]:
                raise DimensionError("cnot takes two distinct wires (control, target)")
        else:
            raise ValueError(f"unknown gate {self.name!r}")
        if (self.angle is not None) != (self.name in _ANGLED):
            raise ValueError(f"gate {self.name!r}: angle {'required' if self.name in _ANGLED else 'not allowed'}")


def _base_matrix(spec: GateSpec) -> np.ndarray:
    a = spec.angle
    if spec.name == "i":
        return np.eye(2, dtype=complex)
    if spec.name == "x":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if spec.name == "z":
        return np.array([[1, 0], [0, -1]], dtype=complex)
    if spec.name == "h":
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    if spec.name == "r":
        c, s = math.cos(a), math.sin(a)
        return np.array([[c, -s], [s, c]], dtype=complex)
    if spec.name == "phase":
        return np.array([[1, 0], [0, complex(math.cos(a), math.sin(a))]])
    raise ValueError(spec.name)


def expand_gate(spec: GateSpec, m: int) -> np.ndarray:
    """The full 2^m x 2^m matrix of a gate (MSB-first wire convention)."""
    if any(not 1 <= w <= m for w in spec.wires):
        raise DimensionError(f"gate {spec.name!r} wires {spec.wires} outside [1, {m}]")
    dim = 1 << m
    if spec.name == "cnot":
        control, target = spec.wires
        cbit, tbit = m - control, m - target
        full = np.zeros((dim, dim), dtype=complex)
        for b in range(dim):
            nb = b ^ (1 << tbit) if (b >> cbit) & 1 else b
            full[nb, b] = 1.0
        return full
    w = spec.wires[0]
    g = _base_matrix(spec)
    return np.kron(np.eye(1 << (w - 1)), np.kron(g, np.eye(1 << (m - w))))


@dataclass(frozen=True)
class Circuit:
    """A gate list on m qubits; expanded matrices are built and checked eagerly."""

    m: int
    specs: tuple[GateSpec, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.m <= MAX_QUBITS:
            raise DimensionError(f"qubit count must lie in [1, {MAX_QUBITS}]")
        object.__setattr__(self, "specs", tuple(self.specs))
        gates = []
        for spec in self.specs:
            g = expand_gate(spec, self.m)
            err = float(np.max(np.abs(g.conj().T @ g - np.eye(g.shape[0]))))
            if err > UNITARY_TOL:
                raise SpqlError(f"gate {spec.name!r} expansion is not unitary ({err:.3g})")
            g.setflags(write=False)
            gates.append(g)
        object.__setattr__(self, "_gates", tuple(gates))

    @property
    def gates(self) -> tuple[np.ndarray, ...]:
        return self._gates  # type: ignore[attr-defined]

    @property
    def is_real(self) -> bool:
        """True when every expanded gate has an exactly zero imaginary part."""
        return all(not np.any(g.imag) for g in self.gates)


def simulate_circuit(circ: Circuit) -> tuple[float, np.ndarray]:
    """Run the circuit on |0...0>; return (P[first qubit = 0], final state)."""
    state = np.zeros(1 << circ.m, dtype=complex)
    state[0] = 1.0
    for g in circ.gates:
        state = g @ state
    half = 1 << (circ.m - 1)
    prob = float(np.sum(np.abs(state[:half]) ** 2))
    return prob, state


def embed_real(g: np.ndarray) -> np.ndarray:
    """Realify a complex matrix: amplitude -> adjacent (re, im) coordinate pair."""
    g = np.asarray(g, dtype=complex)
    j = np.array([[0.0, -1.0], [1.0, 0.0]])
    return np.kron(g.real, np.eye(2)) + np.kron(g.imag, j)


def circuit_to_instance(circ: Circuit) -> PoweringInstance:
    """Block powering instance whose projected mass equals the accept probability."""
    tc = len(circ.specs)
    half = 1 << (circ.m - 1)
    if circ.is_real:
        blocks = [np.ascontiguousarray(g.real) for g in circ.gates]
        d = 1 << circ.m
        local = [idx + 1 for idx in range(half)]
    else:
        blocks = [embed_real(g) for g in circ.gates]
        d = 1 << (circ.m + 1)
        local = []
        for idx in range(half):
            local.extend((2 * idx + 1, 2 * idx + 2))
    n = (tc + 1) * d
    if n > MAX_REDUCED_DIM:
        raise DimensionError(
            f"reduced dimension {n} exceeds the supported {MAX_REDUCED_DIM}"
        )
    u = np.zeros((n, n))
    for i, g in enumerate(blocks):
        u[(i + 1) * d : (i + 2) * d, i * d : (i + 1) * d] = g
    u[0:d, tc * d : (tc + 1) * d] = np.eye(d)
    proj = tuple(tc * d + j for j in local)
    return PoweringInstance(Matrix(u), tc, proj)


def random_circuit(m: int, count: int, rng: np.random.Generator) -> Circuit:
    """A random circuit: uniform gate names, wires and angles."""
    if count < 0:
        raise DimensionError("gate count must be non-negative")
    pool = ["h", "x", "z", "r", "phase"] + (["cnot"] if m >= 2 else [])
    specs = []
    for _ in range(count):
        name = pool[int(rng.integers(0, len(pool)))]
        if name == "cnot":
            c, t = rng.choice(m, size=2, replace=False)
            specs.append(GateSpec("cnot", (int(c) + 1, int(t) + 1)))
        else:
            wire = int(rng.integers(1, m + 1))
            angle = float(rng.uniform(0.0, 2.0 * math.pi)) if name in _ANGLED else None
            specs.append(GateSpec(name, (wire,), angle))
    return Circuit(m, tuple(specs))


def write_circuit(circ: Circuit, path: str | Path) -> None:
    """Text format: 'm' line, then 'name wires... [angle]' per gate."""
    lines = [str(circ.m)]
    for spec in circ.specs:
        parts = [spec.name, *map(str, spec.wires)]
        if spec.angle is not None:
            parts.append(f"{spec.angle:.17g}")
        lines.append(" ".join(parts))
    Path(path).write_text("\n".join(lines) + "\n")


def read_circuit(path: str | Path) -> Circuit:
    text = Path(path).read_text()
    rows = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln and not ln.startswith("#")]
    if not rows:
        raise SpqlError(f"{path}: empty circuit file")
    try:
        m = int(rows[0])
    except ValueError as exc:
        raise SpqlError(f"{path}: first line must be the qubit count") from exc
    specs = []
    for ln in rows[1:]:
        parts = ln.split()
        name = parts[0].lower()
        if name in _ANGLED:
            if len(parts) != 3:
                raise SpqlError(f"{path}: gate line {ln!r} must be 'name wire angle'")
            specs.append(GateSpec(name, (int(parts[1]),), float(parts[2])))
        elif name == "cnot":
            if len(parts) != 3:
                raise SpqlError(f"{path}: gate line {ln!r} must be 'cnot control target'")
            specs.append(GateSpec(name, (int(parts[1]), int(parts[2]))))
        else:
            if len(parts) != 2:
                raise SpqlError(f"{path}: gate line {ln!r} must be 'name wire'")
            specs.append(GateSpec(name, (int(parts[1]),)))
    return Circuit(m, tuple(specs))
