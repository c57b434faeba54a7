"""Monte Carlo experiment runner: cells, exact counts, Wilson intervals.

A cell is one (n, T, prover) combination; each trial generates a fresh
instance and runs the full prover-to-verifier pipeline with seeds derived
from the master seed and the cell coordinates, so results are reproducible
byte for byte.  Statistical claims are one-sided: a cell is flagged only
when its Wilson 95% interval lies entirely on the wrong side of the bound.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from pathlib import Path

from .instance import Label, gen_instance
from .prover import ADVERSARIES, TRIGGERING_ADVERSARIES
from .randomness import derive_key
from .verifier import Verdict, VerifierConfig

_KNOWN_PROVERS = ("honest", "honest-exact", "honest-failing") + ADVERSARIES

# one-sided rate bounds checked by summarize()
ABORT_BOUND_HONEST = 0.2
ABORT_BOUND_TRIGGERING = 0.75
WRONG_BOUND = 0.25


@dataclass(frozen=True)
class ExperimentSpec:
    generator: str
    n_values: tuple[int, ...]
    T_values: tuple[int, ...]
    provers: tuple[str, ...]
    trials: int
    master_seed: int = 0
    format: str = "csv"

    def __post_init__(self) -> None:
        if self.trials < 100:
            raise ValueError("statistical cells need at least 100 trials")
        if self.format not in ("csv", "json"):
            raise ValueError("format must be 'csv' or 'json'")
        for prover in self.provers:
            if prover not in _KNOWN_PROVERS:
                raise ValueError(f"unknown prover {prover!r}")
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "T_values", tuple(int(t) for t in self.T_values))
        object.__setattr__(self, "provers", tuple(self.provers))

    @classmethod
    def from_json(cls, text: str) -> "ExperimentSpec":
        raw = json.loads(text)
        return cls(
            generator=raw["generator"],
            n_values=tuple(raw["n"]),
            T_values=tuple(raw["T"]),
            provers=tuple(raw["provers"]),
            trials=int(raw["trials"]),
            master_seed=int(raw.get("master_seed", 0)),
            format=raw.get("format", "csv"),
        )


def load_experiment(path: str | Path) -> ExperimentSpec:
    return ExperimentSpec.from_json(Path(path).read_text())


@dataclass(frozen=True)
class CellResult:
    n: int
    T: int
    prover: str
    trials: int
    one: int
    zero: int
    abort: int
    wrong: int


def _trial_seed(master_seed: int, n: int, T: int, prover: str, trial: int) -> int:
    return int.from_bytes(derive_key(master_seed, "trial", n, T, prover, trial)[:8], "little")


def run_experiment(
    spec: ExperimentSpec,
    cfg: VerifierConfig | None = None,
    backend: str | None = None,
) -> list[CellResult]:
    """All cells, trials in deterministic order."""
    from .protocol import run_protocol

    if cfg is None:
        cfg = VerifierConfig()
    results = []
    for n in spec.n_values:
        for T in spec.T_values:
            for prover in spec.provers:
                one = zero = abort = wrong = 0
                for trial in range(spec.trials):
                    inst = gen_instance(
                        spec.generator, n, T,
                        seed=_trial_seed(spec.master_seed, n, T, "instance", trial),
                    )
                    report = run_protocol(
                        inst, prover, cfg,
                        master_seed=_trial_seed(spec.master_seed, n, T, prover, trial),
                        backend=backend,
                    )
                    verdict = report.outcome.verdict
                    if verdict is Verdict.ONE:
                        one += 1
                    elif verdict is Verdict.ZERO:
                        zero += 1
                    else:
                        abort += 1
                    truth = report.ground_truth.kind
                    if verdict is not Verdict.ABORT and truth is not Label.OUTSIDE_PROMISE:
                        answered_yes = verdict is Verdict.ONE
                        if answered_yes != (truth is Label.YES):
                            wrong += 1
                results.append(
                    CellResult(n=n, T=T, prover=prover, trials=spec.trials,
                               one=one, zero=zero, abort=abort, wrong=wrong)
                )
    return results


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score 95% interval for a binomial rate."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = successes / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = phat + z2 / (2 * trials)
    spread = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
    lo = max(0.0, (center - spread) / denom)
    hi = min(1.0, (center + spread) / denom)
    return (lo, hi)


def summarize(results: list[CellResult]) -> list[dict]:
    """Per-cell rates, Wilson intervals, and bound-violation flags."""
    if not results:
        raise ValueError("nothing to summarize")
    rows = []
    for cell in results:
        abort_lo, abort_hi = wilson_interval(cell.abort, cell.trials)
        wrong_lo, wrong_hi = wilson_interval(cell.wrong, cell.trials)
        flags = []
        # the 0.2 bound presumes a zero-failure honest prover
        if cell.prover in ("honest", "honest-exact") and abort_lo > ABORT_BOUND_HONEST:
            flags.append("completeness-violated")
        if cell.prover in TRIGGERING_ADVERSARIES and abort_hi < ABORT_BOUND_TRIGGERING:
            flags.append("soundness-violated")
        if wrong_lo > WRONG_BOUND:
            flags.append("wrong-rate-violated")
        rows.append({
            "n": cell.n,
            "T": cell.T,
            "prover": cell.prover,
            "trials": cell.trials,
            "abort_rate": cell.abort / cell.trials,
            "abort_lo": abort_lo,
            "abort_hi": abort_hi,
            "wrong_rate": cell.wrong / cell.trials,
            "wrong_lo": wrong_lo,
            "wrong_hi": wrong_hi,
            "flags": ";".join(flags),
        })
    return rows


def results_to_csv(results: list[CellResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "T", "prover", "trials", "one", "zero", "abort", "wrong"])
    for cell in results:
        writer.writerow([cell.n, cell.T, cell.prover, cell.trials,
                         cell.one, cell.zero, cell.abort, cell.wrong])
    return buf.getvalue()


def write_results(results: list[CellResult], path: str | Path, fmt: str = "csv") -> None:
    if fmt == "csv":
        Path(path).write_text(results_to_csv(results))
    elif fmt == "json":
        Path(path).write_text(json.dumps([asdict(c) for c in results], indent=2) + "\n")
    else:
        raise ValueError("format must be 'csv' or 'json'")


def format_summary(rows: list[dict]) -> str:
    """Human-readable table for the CLI."""
    header = (
        f"{'n':>4} {'T':>4} {'prover':<20} {'trials':>7} "
        f"{'abort':>7} {'wilson':>17} {'wrong':>7} {'flags'}"
    )
    lines = [header]
    for r in rows:
        lines.append(
            f"{r['n']:>4} {r['T']:>4} {r['prover']:<20} {r['trials']:>7} "
            f"{r['abort_rate']:>7.3f} [{r['abort_lo']:.3f}, {r['abort_hi']:.3f}] "
            f"{r['wrong_rate']:>7.3f} {r['flags']}"
        )
    return "\n".join(lines)
