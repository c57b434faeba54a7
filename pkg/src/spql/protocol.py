"""Proof-stream wire format and the prover-to-verifier pipeline.

Byte layout: magic "SPQL", version byte 1, n and T as unsigned 32-bit
little-endian, precision p as one unsigned byte, then (T+1)*n signed 64-bit
little-endian mantissas in vector-major order (i = 0..T outer, j = 1..n
inner).  Decoding rejects bad magic, bad version, length mismatches and
mantissas outside the [-4, 4] value guard (|raw| > 2^(p+2)); every decode
failure surfaces at the verifier as an ABORT verdict.
"""

from __future__ import annotations

import struct
import time
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, StreamFormatError
from .fxlinalg import MAX_FRAC_BITS, Vector
from .instance import PoweringInstance, PromiseLabel, label_instance
from .kwise import signs_budget
from .randomness import BitSource, bit_source, philox
from .verifier import ProtocolOutcome, Verdict, VerifierConfig, verify_stream

MAGIC = b"SPQL"
VERSION = 1
_HEADER = struct.Struct("<4sBIIB")


@dataclass(frozen=True)
class ProofStream:
    """A parsed proof: header plus all (T+1)*n mantissas."""

    n: int
    T: int
    frac_bits: int
    payload: np.ndarray  # shape (T+1, n), int64

    def __post_init__(self) -> None:
        if self.n < 1 or self.T < 0:
            raise DimensionError("need n >= 1 and T >= 0")
        if not 0 <= self.frac_bits <= MAX_FRAC_BITS:
            raise DimensionError(f"precision must lie in [0, {MAX_FRAC_BITS}]")
        arr = np.asarray(self.payload, dtype=np.int64)
        if arr.shape != (self.T + 1, self.n):
            raise DimensionError(
                f"payload shape {arr.shape} != {(self.T + 1, self.n)}"
            )
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "payload", arr)

    def vectors(self) -> list[Vector]:
        """Materialize all vectors (test/oracle use; the verifier streams)."""
        return [Vector(row, self.frac_bits) for row in self.payload]


def encode_stream(proof: ProofStream) -> bytes:
    header = _HEADER.pack(MAGIC, VERSION, proof.n, proof.T, proof.frac_bits)
    return header + proof.payload.astype("<i8").tobytes()


def decode_stream(data: bytes) -> ProofStream:
    if len(data) < _HEADER.size:
        raise StreamFormatError(f"{len(data)} bytes is shorter than the header")
    magic, version, n, T, p = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise StreamFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise StreamFormatError(f"unsupported version {version}")
    if n < 1:
        raise StreamFormatError("dimension must be at least 1")
    if p > MAX_FRAC_BITS:
        raise StreamFormatError(f"precision {p} exceeds the supported {MAX_FRAC_BITS}")
    expected = _HEADER.size + (T + 1) * n * 8
    if len(data) != expected:
        raise StreamFormatError(f"payload length {len(data)} != expected {expected}")
    flat = np.frombuffer(data, dtype="<i8", offset=_HEADER.size)
    payload = flat.reshape(T + 1, n).astype(np.int64)
    bound = 1 << (p + 2)
    if int(np.max(payload)) > bound or -int(np.min(payload)) > bound:
        raise StreamFormatError("mantissa outside the [-4, 4] value guard")
    return ProofStream(n=n, T=T, frac_bits=p, payload=payload)


class OnePassStream:
    """An iterable over stream vectors that permits exactly one traversal."""

    def __init__(self, items) -> None:
        self._iter = iter(items)
        self._opened = False

    def __iter__(self):
        if self._opened:
            raise RuntimeError("proof stream may only be traversed once")
        self._opened = True
        return self._iter


def stream_vectors(proof: ProofStream) -> OnePassStream:
    def gen():
        for row in proof.payload:
            yield Vector(row, proof.frac_bits)

    return OnePassStream(gen())


def verify_proof_bytes(
    inst: PoweringInstance,
    cfg: VerifierConfig,
    data: bytes,
    randomness: BitSource,
    backend: str | None = None,
) -> ProtocolOutcome:
    """Decode then verify; decode failures become ABORT outcomes."""
    try:
        proof = decode_stream(data)
    except StreamFormatError as exc:
        return ProtocolOutcome(
            verdict=Verdict.ABORT,
            deltas=None,
            fired=(),
            proj_mass=None,
            abort_reason=f"malformed stream: {exc}",
            frac_bits=None,
            randomness_used=0,
        )
    return verify_stream(inst, cfg, stream_vectors(proof), randomness, backend=backend)


@dataclass(frozen=True)
class RunReport:
    outcome: ProtocolOutcome
    ground_truth: PromiseLabel
    prover: str
    master_seed: int
    elapsed: float


def run_protocol(
    inst: PoweringInstance,
    prover_spec,
    cfg: VerifierConfig | None = None,
    master_seed: int = 0,
    backend: str | None = None,
) -> RunReport:
    """Prove, pipe through the wire format, verify; deterministic per seed.

    `prover_spec` is a prover name ("honest", "final-swap", ...), a
    NoiseModel, or an AdversaryStrategy.  Prover and verifier randomness are
    derived independently from the master seed.
    """
    from .prover import make_proof, prover_name

    if cfg is None:
        cfg = VerifierConfig()
    start = time.perf_counter()
    delta = cfg.resolve_delta(inst.T)
    rng = philox(master_seed, "prover")
    proof = make_proof(inst, delta, prover_spec, rng)
    data = encode_stream(proof)
    bits = bit_source(master_seed, "verifier")
    outcome = verify_proof_bytes(inst, cfg, data, bits, backend=backend)
    budget = signs_budget(inst.n, inst.T)
    if outcome.randomness_used > budget:
        raise AssertionError(
            f"verifier consumed {outcome.randomness_used} bits, budget {budget}"
        )
    truth = label_instance(inst)
    return RunReport(
        outcome=outcome,
        ground_truth=truth,
        prover=prover_name(prover_spec),
        master_seed=master_seed,
        elapsed=time.perf_counter() - start,
    )
