"""Provers: the honest stream emitter and a library of adversarial ones.

The honest prover stands in for a quantum estimator that knows each v_i(j)
to delta/n additive accuracy with success probability >= 3/4.  Classically
we compute v_i exactly in double precision, quantize to the stream grid and
add bounded grid-level noise, so a non-failed stream satisfies
||v'_i - v_i||_2 <= n * (delta/n) <= delta deterministically; an explicit
failure probability (up to 1/4) substitutes garbage vectors to model
estimator failure.

Adversaries produce streams the verifier must reject: some guarantee the
far-final-vector condition ||v'_T - v_T||_2 >= 1/5 (the soundness trigger),
others are format-level stress cases that must abort deterministically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .fxlinalg import min_frac_bits, trunc_to_grid
from .instance import PoweringInstance, _givens_product
from .protocol import ProofStream
from .randomness import philox

ADVERSARIES = ("final-swap", "drift", "single-jump", "plausible-dynamics", "truncate", "wrong-v0")

# strategies that guarantee ||v'_T - v_T||_2 >= 1/5 on every run
TRIGGERING_ADVERSARIES = ("final-swap", "drift", "single-jump")


@dataclass(frozen=True)
class NoiseModel:
    """Per-coordinate error budget and failure probability of the estimator.

    per_coord_error None means the full budget delta/n; failure_prob is the
    chance the whole proof (past v'_0) is replaced by garbage.
    """

    per_coord_error: float | None = None
    failure_prob: float = 0.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.per_coord_error is not None and self.per_coord_error < 0:
            raise ValueError("per_coord_error must be non-negative")
        if not 0.0 <= self.failure_prob <= 0.25:
            raise ValueError("failure_prob must lie in [0, 1/4]")


@dataclass(frozen=True)
class AdversaryStrategy:
    name: str
    jump_step: int | None = None  # single-jump: deviation step, default ~T/2
    drift_magnitude: float = 0.3  # drift: final displacement norm
    alt_seed: int = 1  # plausible-dynamics: seed of the wrong dynamics
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.name not in ADVERSARIES:
            raise ValueError(f"unknown adversary {self.name!r}; choose from {ADVERSARIES}")

    @property
    def triggers_soundness(self) -> bool:
        return self.name in TRIGGERING_ADVERSARIES


def _orthogonal_unit(v: np.ndarray) -> np.ndarray:
    """A unit vector orthogonal to unit v, exact when v is a basis vector."""
    n = v.shape[0]
    if n < 2:
        raise DimensionError("no orthogonal unit vector exists in dimension 1")
    k = int(np.argmin(np.abs(v)))
    e = np.zeros(n)
    e[k] = 1.0
    w = e - v[k] * v
    return w / np.linalg.norm(w)


def _quantize(vec: np.ndarray, p: int) -> np.ndarray:
    return np.array([trunc_to_grid(float(x), p) for x in vec], dtype=np.int64)


def _trajectory(inst: PoweringInstance) -> list[np.ndarray]:
    """v_0 .. v_T in double precision."""
    v = np.zeros(inst.n)
    v[0] = 1.0
    out = [v]
    for _ in range(inst.T):
        v = inst.matrix.data @ v
        out.append(v)
    return out


def honest_prove(
    inst: PoweringInstance,
    delta: float,
    noise: NoiseModel | None = None,
    rng: np.random.Generator | None = None,
) -> ProofStream:
    """Emit v'_0 = e1 exactly, then per-coordinate-accurate noisy vectors.

    Noise is drawn uniformly on the grid points within the per-coordinate
    budget, so goodness is deterministic given non-failure: quantization
    plus noise stays strictly below the budget.
    """
    if noise is None:
        noise = NoiseModel()
    if rng is None:
        rng = philox(noise.rng_seed, "honest-prover")
    n, T = inst.n, inst.T
    p = min_frac_bits(delta, n, max(T, 1))
    budget = noise.per_coord_error if noise.per_coord_error is not None else delta / n
    steps = int(math.floor(budget * (1 << p)))  # grid steps inside the budget
    payload = np.zeros((T + 1, n), dtype=np.int64)
    payload[0, 0] = 1 << p
    failed = noise.failure_prob > 0 and rng.random() < noise.failure_prob
    if failed and T >= 1:
        scale = 1 << p
        payload[1:] = rng.integers(-scale, scale + 1, size=(T, n), dtype=np.int64)
    else:
        v = np.zeros(n)
        v[0] = 1.0
        for i in range(1, T + 1):
            v = inst.matrix.data @ v
            raws = _quantize(v, p)
            if steps >= 1:
                raws += rng.integers(-(steps - 1), steps, size=n, dtype=np.int64)
            payload[i] = raws
    return ProofStream(n=n, T=T, frac_bits=p, payload=payload)


def adversarial_prove(
    inst: PoweringInstance,
    delta: float,
    strat: AdversaryStrategy,
    rng: np.random.Generator | None = None,
) -> ProofStream:
    """A proof stream following the named deviation strategy.

    final-swap   honest except v'_T becomes a unit vector orthogonal to v_T
    drift        v'_i = v_i + (i/T) * mag * M^i u0; per-step residuals have
                 norm mag/T, the final displacement norm mag
    single-jump  honest until step s, then a unit vector orthogonal to v_s
                 transported by the true dynamics ever after
    plausible-dynamics  the honest stream of a different orthogonal matrix
    truncate     one vector short (header declares T-1)
    wrong-v0     first vector is not e1
    """
    if rng is None:
        rng = philox(strat.rng_seed, "adversary", strat.name)
    n, T = inst.n, inst.T
    p = min_frac_bits(delta, n, max(T, 1))
    traj = _trajectory(inst)
    payload = np.stack([_quantize(v, p) for v in traj])

    if strat.name == "final-swap":
        if T < 1:
            raise DimensionError("final-swap needs T >= 1")
        payload[T] = _quantize(_orthogonal_unit(traj[T]), p)
    elif strat.name == "drift":
        if T < 1:
            raise DimensionError("drift needs T >= 1")
        g = rng.normal(size=n)
        z = g / np.linalg.norm(g)
        for i in range(1, T + 1):
            z = inst.matrix.data @ z
            payload[i] = _quantize(traj[i] + (i / T) * strat.drift_magnitude * z, p)
    elif strat.name == "single-jump":
        if T < 1:
            raise DimensionError("single-jump needs T >= 1")
        s = strat.jump_step if strat.jump_step is not None else max(1, (T + 1) // 2)
        if not 1 <= s <= T:
            raise DimensionError(f"jump step {s} outside [1, {T}]")
        w = _orthogonal_unit(traj[s])
        payload[s] = _quantize(w, p)
        for l in range(s + 1, T + 1):
            w = inst.matrix.data @ w
            payload[l] = _quantize(w, p)
    elif strat.name == "plausible-dynamics":
        alt = _givens_product(n, philox(strat.alt_seed, "alt-dynamics", n))
        v = np.zeros(n)
        v[0] = 1.0
        for i in range(1, T + 1):
            v = alt @ v
            payload[i] = _quantize(v, p)
    elif strat.name == "truncate":
        if T < 1:
            raise DimensionError("truncate needs T >= 1")
        return ProofStream(n=n, T=T - 1, frac_bits=p, payload=payload[:T])
    elif strat.name == "wrong-v0":
        payload[0] = 0
        if n >= 2:
            payload[0, 1] = 1 << p
    return ProofStream(n=n, T=T, frac_bits=p, payload=payload)


def make_proof(inst: PoweringInstance, delta: float, spec, rng: np.random.Generator) -> ProofStream:
    """Dispatch a prover spec: name string, NoiseModel, or AdversaryStrategy."""
    if isinstance(spec, str):
        if spec == "honest":
            spec = NoiseModel()
        elif spec == "honest-exact":
            spec = NoiseModel(per_coord_error=0.0)
        elif spec == "honest-failing":
            spec = NoiseModel(failure_prob=0.25)
        elif spec in ADVERSARIES:
            spec = AdversaryStrategy(name=spec)
        else:
            raise ValueError(f"unknown prover {spec!r}")
    if isinstance(spec, NoiseModel):
        return honest_prove(inst, delta, spec, rng=rng)
    if isinstance(spec, AdversaryStrategy):
        return adversarial_prove(inst, delta, spec, rng=rng)
    raise TypeError(f"cannot interpret prover spec of type {type(spec).__name__}")


def prover_name(spec) -> str:
    if isinstance(spec, str):
        return spec
    if isinstance(spec, NoiseModel):
        if spec.failure_prob > 0:
            return f"honest(fail={spec.failure_prob:g})"
        if spec.per_coord_error == 0:
            return "honest-exact"
        return "honest"
    if isinstance(spec, AdversaryStrategy):
        return spec.name
    return str(spec)
