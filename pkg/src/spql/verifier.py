"""One-pass streaming verification with parallel pseudorandom linear checks.

The verifier reads the proof stream once, buffering only the previous
vector.  Eleven independent sign samplers each drive an exact fixed-point
accumulator

    Delta_t = sum_{i,j} alpha_t(i,j) * [ (M~ v'_{i-1})(j) - v'_i(j) ],

updated as each v'_i arrives.  After the stream it aborts when any
|Delta_t| > 30*T*delta (strict; ties pass), then answers from the final
vector's projected mass: ONE at >= 0.6, ZERO at <= 0.4, abort in between.

A malformed stream (wrong first vector, wrong length, wrong precision,
out-of-range mantissa, decode failure) always maps to an ABORT verdict with
a diagnostic reason, never to an exception: the prover controls the tape,
so every tape must have a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

import numpy as np

from .backend import decompose_matrix, ensure_envelope, get_backend, new_accumulators, recombine_row
from .errors import StreamFormatError
from .fxlinalg import Vector, min_frac_bits, round_matrix
from .instance import PoweringInstance, default_delta, proj_mass
from .kwise import SignSampler, fresh_sampler
from .randomness import BitSource


class Verdict(Enum):
    ONE = "ONE"
    ZERO = "ZERO"
    ABORT = "ABORT"


@dataclass(frozen=True)
class VerifierConfig:
    """Knobs fixed by the analysis; override only for experiments."""

    repetitions: int = 11
    threshold_factor: int = 30
    decision_hi: float = 0.6
    decision_lo: float = 0.4
    delta: float | None = None

    def resolve_delta(self, T: int) -> float:
        if self.delta is not None:
            return self.delta
        return default_delta(max(T, 1))


@dataclass
class VerifierState:
    """Everything the verifier holds beyond the input matrix: O(n) numbers."""

    delta_acc: np.ndarray  # (repetitions, NBUCKET) int64 limb buckets
    proj_acc: float
    prev_vector: Vector | None
    randomness_used: int


@dataclass(frozen=True)
class ProtocolOutcome:
    verdict: Verdict
    deltas: tuple[Fraction, ...] | None
    fired: tuple[int, ...]
    proj_mass: float | None
    abort_reason: str | None
    frac_bits: int | None
    randomness_used: int


def _vector_problem(vec, n: int, p: int, bound: int) -> str | None:
    if not isinstance(vec, Vector):
        return f"stream element is not a vector ({type(vec).__name__})"
    if vec.raw.dtype != np.int64:
        return "stream vector mantissas are not 64-bit"
    if vec.n != n:
        return f"stream vector has dimension {vec.n}, expected {n}"
    if vec.frac_bits != p:
        return f"stream vector has precision {vec.frac_bits}, expected {p}"
    hi = int(np.max(vec.raw))
    lo = int(np.min(vec.raw))
    if hi > bound or -lo > bound:
        return "stream mantissa outside the [-4, 4] value guard"
    return None


def verify_stream(
    inst: PoweringInstance,
    cfg: VerifierConfig,
    stream: Iterable[Vector],
    randomness: BitSource,
    backend: str | None = None,
) -> ProtocolOutcome:
    """Run the streaming verification over one-pass `stream`."""
    n, T = inst.n, inst.T
    delta = cfg.resolve_delta(T)
    p = min_frac_bits(delta, n, max(T, 1))
    ensure_envelope(n, T, p)
    mt = round_matrix(inst.matrix, delta, max(T, 1), n)
    m_limbs = decompose_matrix(mt.raw)
    kern = get_backend(backend)

    bits_before = randomness.consumed
    field_bits = 0
    field_poly = 0
    coeffs = np.zeros((cfg.repetitions, 4), dtype=np.int64)
    if T >= 1:
        samplers = [fresh_sampler(randomness, n, T) for _ in range(cfg.repetitions)]
        field_bits = samplers[0].field_bits
        field_poly = samplers[0].poly
        coeffs = np.array([s.coeffs for s in samplers], dtype=np.int64)
    state = VerifierState(
        delta_acc=new_accumulators(cfg.repetitions),
        proj_acc=0.0,
        prev_vector=None,
        randomness_used=randomness.consumed - bits_before,
    )

    def abort(reason: str, deltas=None, fired=(), mass=None) -> ProtocolOutcome:
        return ProtocolOutcome(
            verdict=Verdict.ABORT,
            deltas=deltas,
            fired=tuple(fired),
            proj_mass=mass,
            abort_reason=reason,
            frac_bits=p,
            randomness_used=state.randomness_used,
        )

    bound = 1 << (p + 2)
    count = 0
    try:
        for vec in stream:
            if count > T:
                return abort(f"stream longer than the declared {T + 1} vectors")
            problem = _vector_problem(vec, n, p, bound)
            if problem is not None:
                return abort(problem)
            if count == 0:
                if not vec.is_basis(1):
                    return abort("first stream vector is not e1")
            else:
                kern.step_update(
                    m_limbs, state.prev_vector.raw, vec.raw, p, count,
                    coeffs, field_bits, field_poly, state.delta_acc,
                )
            if count == T:
                state.proj_acc = proj_mass(vec.to_floats(), inst.proj)
            state.prev_vector = vec
            count += 1
    except StreamFormatError as exc:
        return abort(f"malformed stream: {exc}")
    if count != T + 1:
        return abort(f"stream truncated: {count} of {T + 1} vectors")

    deltas = tuple(
        Fraction(recombine_row(state.delta_acc[rep]), 1 << (2 * p))
        for rep in range(cfg.repetitions)
    )
    threshold = Fraction(cfg.threshold_factor) * T * Fraction(delta)
    fired = tuple(rep for rep, d in enumerate(deltas) if abs(d) > threshold)
    mass = state.proj_acc
    if fired:
        return abort(
            f"deviation above {cfg.threshold_factor}*T*delta in iterations {list(fired)}",
            deltas=deltas, fired=fired, mass=mass,
        )
    if mass >= cfg.decision_hi:
        verdict = Verdict.ONE
    elif mass <= cfg.decision_lo:
        verdict = Verdict.ZERO
    else:
        return abort(
            f"projection mass {mass:.6f} inside the undecided band "
            f"({cfg.decision_lo}, {cfg.decision_hi})",
            deltas=deltas, fired=(), mass=mass,
        )
    return ProtocolOutcome(
        verdict=verdict,
        deltas=deltas,
        fired=(),
        proj_mass=mass,
        abort_reason=None,
        frac_bits=p,
        randomness_used=state.randomness_used,
    )


def two_pass_delta_oracle(
    inst: PoweringInstance,
    cfg: VerifierConfig,
    vectors: list[Vector],
    sampler: SignSampler,
) -> Fraction:
    """Independent recomputation of one iteration's Delta from a stored stream.

    Forms every residual w_{i,j} explicitly with arbitrary-precision ints and
    takes the signed sum directly; must equal the streamed value bit-exactly.
    """
    n, T = inst.n, inst.T
    if len(vectors) != T + 1:
        raise StreamFormatError(f"need {T + 1} vectors, got {len(vectors)}")
    delta = cfg.resolve_delta(T)
    p = min_frac_bits(delta, n, max(T, 1))
    mt = round_matrix(inst.matrix, delta, max(T, 1), n)
    total = 0
    for i in range(1, T + 1):
        prev, cur = vectors[i - 1], vectors[i]
        for j in range(1, n + 1):
            w_raw = sum(int(mt.raw[j - 1, l]) * int(prev.raw[l]) for l in range(n))
            w_raw -= int(cur.raw[j - 1]) << p
            total += sampler.sample_sign(i, j) * w_raw
    return Fraction(total, 1 << (2 * p))
