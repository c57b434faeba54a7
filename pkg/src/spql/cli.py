"""Command line entry points.

Exit codes: verify/run return 0, 1 or 2 for verdicts ONE, ZERO, ABORT;
other subcommands return 0 on success.  Bad flags exit 64, file problems 66.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import SpqlError
from .harness import format_summary, load_experiment, run_experiment, summarize, write_results
from .instance import default_delta, label_instance, read_instance, write_instance
from .prover import NoiseModel, honest_prove
from .protocol import encode_stream, run_protocol, verify_proof_bytes
from .randomness import bit_source, philox
from .reduction import circuit_to_instance, read_circuit
from .verifier import Verdict, VerifierConfig

EX_USAGE = 64
EX_NOINPUT = 66

_VERDICT_CODE = {Verdict.ONE: 0, Verdict.ZERO: 1, Verdict.ABORT: 2}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="spql", description="Streaming proofs for unitary matrix powering.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prove", help="write a proof stream for an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--noise", type=float, default=0.0, help="prover failure probability in [0, 1/4]")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", help="verify a proof stream; exit 0/1/2 = ONE/ZERO/ABORT")
    p.add_argument("--instance", required=True)
    p.add_argument("--proof", required=True)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", default=None, choices=("numba", "numpy"))

    p = sub.add_parser("run", help="prove then verify in one process")
    p.add_argument("--instance", required=True)
    p.add_argument("--prover", default="honest")
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", default=None, choices=("numba", "numpy"))

    p = sub.add_parser("reduce", help="turn a circuit file into an instance file")
    p.add_argument("--circuit", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("label", help="print projection mass and promise label")
    p.add_argument("--instance", required=True)

    p = sub.add_parser("experiment", help="run a Monte Carlo experiment spec")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--backend", default=None, choices=("numba", "numpy"))

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except (OSError, SpqlError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_NOINPUT


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "prove":
        inst = read_instance(args.instance)
        delta = args.delta if args.delta is not None else default_delta(max(inst.T, 1))
        noise = NoiseModel(failure_prob=args.noise)
        proof = honest_prove(inst, delta, noise, rng=philox(args.seed, "prover"))
        Path(args.out).write_bytes(encode_stream(proof))
        print(f"wrote {args.out}: n={proof.n} T={proof.T} p={proof.frac_bits}")
        return 0

    if args.command == "verify":
        inst = read_instance(args.instance)
        cfg = VerifierConfig(delta=args.delta)
        data = Path(args.proof).read_bytes()
        outcome = verify_proof_bytes(inst, cfg, data, bit_source(args.seed, "verifier"),
                                     backend=args.backend)
        if outcome.verdict is Verdict.ABORT:
            print(f"ABORT: {outcome.abort_reason}")
        else:
            print(f"{outcome.verdict.value} mass={outcome.proj_mass:.6f}")
        return _VERDICT_CODE[outcome.verdict]

    if args.command == "run":
        inst = read_instance(args.instance)
        cfg = VerifierConfig(delta=args.delta)
        report = run_protocol(inst, args.prover, cfg, master_seed=args.seed,
                              backend=args.backend)
        outcome = report.outcome
        detail = outcome.abort_reason if outcome.verdict is Verdict.ABORT else f"mass={outcome.proj_mass:.6f}"
        print(f"{outcome.verdict.value} ({detail}) ground_truth={report.ground_truth.kind.value} "
              f"prover={report.prover}")
        return _VERDICT_CODE[outcome.verdict]

    if args.command == "reduce":
        circ = read_circuit(args.circuit)
        inst = circuit_to_instance(circ)
        write_instance(inst, args.out)
        print(f"wrote {args.out}: n={inst.n} T={inst.T} |proj|={len(inst.proj)}")
        return 0

    if args.command == "label":
        inst = read_instance(args.instance)
        truth = label_instance(inst)
        print(f"{truth.mass:g} {truth.kind.value}")
        return 0

    if args.command == "experiment":
        spec = load_experiment(args.spec)
        results = run_experiment(spec, backend=args.backend)
        write_results(results, args.out, spec.format)
        print(format_summary(summarize(results)))
        print(f"wrote {args.out}")
        return 0

    raise AssertionError(f"unhandled command {args.command!r}")


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
