"""Streaming proofs for unitary matrix powering.

A prover writes a proof stream once; a one-pass verifier with O(n) state and
a logarithmic randomness budget checks it against the claimed dynamics and
answers ONE, ZERO, or aborts.  The package bundles the fixed-point
arithmetic, 4-wise independent sign samplers, honest and adversarial
provers, the circuit-to-powering reduction, a wire format, and a Monte
Carlo experiment harness.
"""

from .errors import (
    DimensionError,
    InsufficientRandomness,
    PrecisionOverflow,
    SpqlError,
    StreamFormatError,
)
from .fxlinalg import (
    FxMatrix,
    FxScalar,
    Matrix,
    Vector,
    mat_vec,
    min_frac_bits,
    norm_l2,
    power_oracle,
    round_matrix,
    spectral_norm_bound,
)
from .instance import (
    Label,
    PoweringInstance,
    PromiseLabel,
    default_delta,
    gen_instance,
    label_instance,
    read_instance,
    write_instance,
)
from .kwise import SignSampler, field_bits_for, fresh_sampler, signs_budget
from .prover import (
    ADVERSARIES,
    AdversaryStrategy,
    NoiseModel,
    adversarial_prove,
    honest_prove,
)
from .protocol import (
    ProofStream,
    RunReport,
    decode_stream,
    encode_stream,
    run_protocol,
    stream_vectors,
    verify_proof_bytes,
)
from .randomness import BitSource, bit_source, philox
from .reduction import (
    Circuit,
    GateSpec,
    circuit_to_instance,
    embed_real,
    read_circuit,
    simulate_circuit,
    write_circuit,
)
from .verifier import (
    ProtocolOutcome,
    Verdict,
    VerifierConfig,
    two_pass_delta_oracle,
    verify_stream,
)
from .harness import (
    CellResult,
    ExperimentSpec,
    run_experiment,
    summarize,
    wilson_interval,
)

__version__ = "0.1.0"

__all__ = [
    "ADVERSARIES",
    "AdversaryStrategy",
    "BitSource",
    "CellResult",
    "Circuit",
    "DimensionError",
    "ExperimentSpec",
    "FxMatrix",
    "FxScalar",
    "GateSpec",
    "InsufficientRandomness",
    "Label",
    "Matrix",
    "NoiseModel",
    "PoweringInstance",
    "PrecisionOverflow",
    "ProofStream",
    "PromiseLabel",
    "ProtocolOutcome",
    "RunReport",
    "SignSampler",
    "SpqlError",
    "StreamFormatError",
    "Vector",
    "Verdict",
    "VerifierConfig",
    "adversarial_prove",
    "bit_source",
    "circuit_to_instance",
    "decode_stream",
    "default_delta",
    "embed_real",
    "encode_stream",
    "field_bits_for",
    "fresh_sampler",
    "gen_instance",
    "honest_prove",
    "label_instance",
    "mat_vec",
    "min_frac_bits",
    "norm_l2",
    "philox",
    "power_oracle",
    "read_circuit",
    "read_instance",
    "round_matrix",
    "run_experiment",
    "run_protocol",
    "signs_budget",
    "simulate_circuit",
    "spectral_norm_bound",
    "stream_vectors",
    "summarize",
    "two_pass_delta_oracle",
    "verify_proof_bytes",
    "verify_stream",
    "wilson_interval",
    "write_circuit",
    "write_instance",
]
