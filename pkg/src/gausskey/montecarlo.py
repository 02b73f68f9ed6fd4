"""Sampling-level simulation of the keying protocols and the empirical
error-estimation procedure.

The channel model matches the analytic predictions exactly: loss L rescales
amplitudes by sqrt(1-L) and mixes vacuum into the quadrature variances
(v -> v(1-L) + L), visibility enters through the detected displaced power
n V^2 - sinh^2 r - (v_th-1)/2, and electronic noise adds per detector.
Binary and ternary-amplitude alphabets use a single homodyne; phase
alphabets use a dual homodyne sampled as two independent normals in the
symbol frame (the balanced-splitter vacuum penalty is folded into the
distribution parameters).

Trials are sharded into fixed-size chunks, each owning a counter-based
random stream keyed by (batch seed, shard index). Error counts are integers
summed over shards, so results are byte-identical for any worker count.

Error counts are summarised with a Jeffreys Beta(1/2, 1/2) prior: after k
errors in n trials the posterior is Beta(k + 1/2, n - k + 1/2).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channel import ExperimentParams, InfeasibleBudgetError
from .numerics import RandomStream
from .states import EnergyBudget

__all__ = [
    "FORMATS",
    "SHARD_SIZE",
    "TrialBatch",
    "ErrorEstimate",
    "sample_bpsk_outcome",
    "decide_bpsk",
    "run_batch",
    "estimate_from_samples",
    "read_outcome_file",
]

# symbols per alphabet
FORMATS = {"bpsk": 2, "ask3": 3, "psk3": 3, "psk4": 4}

# fixed shard size; part of the deterministic shard plan
SHARD_SIZE = 1_000_000

_PSK_ANGLES = {
    "psk3": tuple(2.0 * math.pi * k / 3.0 for k in range(3)),
    "psk4": tuple(math.pi * (2 * k + 1) / 4.0 for k in range(4)),
}


@dataclass(frozen=True)
class TrialBatch:
    """One Monte Carlo run: n_samples trials per symbol of the given alphabet.

    The transmitted state is fixed by the budget (sinh^2 r = gamma n V^2);
    params supply the channel and detector imperfections. The beta and r
    fields of params are ignored here (they describe measured experiment
    states, not simulated ones).
    """

    n_samples: int
    seed: int
    format: str
    params: ExperimentParams
    budget: EnergyBudget

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError(f"n_samples must be >= 1, got {self.n_samples!r}")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}; expected one of {sorted(FORMATS)}")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must fit in 64 bits")


@dataclass(frozen=True)
class ErrorEstimate:
    """Jeffreys-posterior summary of k errors in n Bernoulli trials."""

    errors: int
    trials: int
    posterior_alpha: float
    posterior_beta: float
    mean: float
    std: float

    @classmethod
    def from_counts(cls, errors: int, trials: int) -> "ErrorEstimate":
        if trials < 1:
            raise ValueError(f"trials must be >= 1, got {trials!r}")
        if not (0 <= errors <= trials):
            raise ValueError(f"errors must be in [0, {trials}], got {errors!r}")
        a = errors + 0.5
        b = trials - errors + 0.5
        total = a + b  # = trials + 1
        variance = a * b / (total * total * (total + 1.0))
        return cls(
            errors=errors,
            trials=trials,
            posterior_alpha=a,
            posterior_beta=b,
            mean=a / total,
            std=math.sqrt(variance),
        )


# ---------------------------------------------------------------------------
# channel-level outcome distributions
# ---------------------------------------------------------------------------

def _detected_power(params: ExperimentParams, budget: EnergyBudget) -> tuple[float, float]:
    """(displaced power, squeezing photons), both after visibility scaling."""
    detected = budget.n_mean * params.visibility**2
    n_squeeze = budget.gamma * detected
    power = detected - n_squeeze - 0.5 * (params.v_th - 1.0)
    if power < 0.0:
        raise InfeasibleBudgetError(
            f"budget (n_mean={budget.n_mean!r}, gamma={budget.gamma!r}) cannot cover "
            f"v_th={params.v_th!r} at visibility {params.visibility!r}"
        )
    return power, n_squeeze


def _quadrature_variances(params: ExperimentParams, n_squeeze: float) -> tuple[float, float]:
    """(squeezed, anti-squeezed) single-mode variances after loss, shot units."""
    e2r = (math.sqrt(n_squeeze) + math.sqrt(n_squeeze + 1.0)) ** 2
    survive = 1.0 - params.loss
    v_sq = params.v_th / e2r * survive + params.loss
    v_asq = params.v_th * e2r * survive + params.loss
    return v_sq, v_asq


def _single_homodyne_model(params: ExperimentParams, budget: EnergyBudget) -> tuple[float, float]:
    """(mean outcome of the +amplitude symbol, outcome variance) in X = a + a^dag units."""
    power, n_squeeze = _detected_power(params, budget)
    v_sq, _ = _quadrature_variances(params, n_squeeze)
    mean = 2.0 * math.sqrt(power * (1.0 - params.loss))
    return mean, v_sq + params.v_en


def _dual_homodyne_model(
    params: ExperimentParams, budget: EnergyBudget
) -> tuple[float, float, float]:
    """(symbol-frame mean, x variance, p variance) after the balanced split."""
    power, n_squeeze = _detected_power(params, budget)
    v_sq, v_asq = _quadrature_variances(params, n_squeeze)
    mean = math.sqrt(2.0 * power * (1.0 - params.loss))
    var_x = 0.5 * (v_sq + 1.0) + params.v_en
    var_p = 0.5 * (v_asq + 1.0) + params.v_en
    return mean, var_x, var_p


def sample_bpsk_outcome(
    symbol: int, params: ExperimentParams, budget: EnergyBudget, stream: RandomStream
) -> float:
    """One homodyne outcome for a transmitted binary symbol (0 -> +mean, 1 -> -mean)."""
    if symbol not in (0, 1):
        raise ValueError(f"symbol must be 0 or 1, got {symbol!r}")
    mean, variance = _single_homodyne_model(params, budget)
    mu = mean if symbol == 0 else -mean
    return float(stream.generator.normal(mu, math.sqrt(variance)))


def decide_bpsk(outcome: float) -> int:
    """Sign threshold at zero; ties go to symbol 0."""
    return 0 if outcome >= 0.0 else 1


# ---------------------------------------------------------------------------
# batch simulation
# ---------------------------------------------------------------------------

def _shard_errors(batch: TrialBatch, symbol: int, count: int, stream_index: int) -> int:
    """Errors observed transmitting `symbol` `count` times on one shard."""
    rng = RandomStream(batch.seed, stream_index).generator
    fmt = batch.format

    if fmt == "bpsk":
        mean, variance = _single_homodyne_model(batch.params, batch.budget)
        mu = mean if symbol == 0 else -mean
        outcomes = rng.normal(mu, math.sqrt(variance), count)
        if symbol == 0:
            return int(np.count_nonzero(outcomes < 0.0))
        return int(np.count_nonzero(outcomes >= 0.0))

    if fmt == "ask3":
        # displacement alpha = sqrt(1.5 * displaced power); levels (-1, 0, 1) * 2 alpha
        mean, variance = _single_homodyne_model(batch.params, batch.budget)
        step = math.sqrt(1.5) * mean
        threshold = 0.5 * step
        level = symbol - 1
        outcomes = rng.normal(level * step, math.sqrt(variance), count)
        decided = np.where(outcomes <= -threshold, 0, np.where(outcomes <= threshold, 1, 2))
        return int(np.count_nonzero(decided != symbol))

    # psk3 / psk4: sample in the symbol frame, rotate, bin by nearest wedge
    angles = _PSK_ANGLES[fmt]
    mean, var_x, var_p = _dual_homodyne_model(batch.params, batch.budget)
    phi = angles[symbol]
    xs = rng.normal(mean, math.sqrt(var_x), count)
    ps = rng.normal(0.0, math.sqrt(var_p), count)
    x = xs * math.cos(phi) - ps * math.sin(phi)
    p = xs * math.sin(phi) + ps * math.cos(phi)
    theta = np.arctan2(p, x)
    deltas = np.empty((len(angles), count))
    for k, angle in enumerate(angles):
        deltas[k] = np.abs((theta - angle + math.pi) % (2.0 * math.pi) - math.pi)
    decided = np.argmin(deltas, axis=0)  # first minimum -> lowest symbol index
    return int(np.count_nonzero(decided != symbol))


def _shard_plan(batch: TrialBatch) -> list[tuple[int, int, int]]:
    """Deterministic (symbol, count, stream_index) plan; independent of workers."""
    chunks = -(-batch.n_samples // SHARD_SIZE)
    plan = []
    for symbol in range(FORMATS[batch.format]):
        remaining = batch.n_samples
        for chunk in range(chunks):
            count = min(SHARD_SIZE, remaining)
            remaining -= count
            plan.append((symbol, count, symbol * chunks + chunk))
    return plan


def run_batch(batch: TrialBatch, workers: int = 1) -> ErrorEstimate:
    """Simulate the whole batch (equal priors: n_samples trials per symbol).

    Results are identical for any `workers` value: the shard plan and every
    shard's random stream depend only on the batch, and the error total is
    an order-independent integer sum.
    """
    # validate the model once so infeasible budgets fail before sampling
    if batch.format in ("bpsk", "ask3"):
        _single_homodyne_model(batch.params, batch.budget)
    else:
        _dual_homodyne_model(batch.params, batch.budget)

    plan = _shard_plan(batch)
    if workers <= 1:
        errors = sum(_shard_errors(batch, s, c, i) for s, c, i in plan)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_shard_errors, batch, s, c, i) for s, c, i in plan]
            errors = sum(f.result() for f in futures)
    return ErrorEstimate.from_counts(errors, FORMATS[batch.format] * batch.n_samples)


# ---------------------------------------------------------------------------
# empirical estimation from recorded outcomes
# ---------------------------------------------------------------------------

def estimate_from_samples(samples_0, samples_1) -> ErrorEstimate:
    """Pooled threshold-at-zero error estimate from recorded homodyne outcomes.

    samples_0 holds outcomes with the positive-mean symbol transmitted,
    samples_1 the negative-mean symbol; an outcome on the wrong side of zero
    (ties counted with symbol 0) is an error.
    """
    s0 = np.asarray(samples_0, dtype=float)
    s1 = np.asarray(samples_1, dtype=float)
    if s0.size == 0 or s1.size == 0:
        raise ValueError("both sample sequences must be non-empty")
    errors = int(np.count_nonzero(s0 < 0.0)) + int(np.count_nonzero(s1 >= 0.0))
    return ErrorEstimate.from_counts(errors, int(s0.size + s1.size))


def read_outcome_file(path) -> np.ndarray:
    """Read shot-noise-normalised homodyne outcomes, one real value per line."""
    values = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                values.append(float(text))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a number: {text!r}") from None
    if not values:
        raise ValueError(f"{path}: no outcomes found")
    return np.asarray(values, dtype=float)
