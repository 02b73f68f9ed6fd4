"""Experiment-facing error models: energy estimation from measured parameters,
predicted error with impure squeezing and detection noise, and the lossy
channel extension.

All noise figures are shot-noise normalised. v_th is the symmetric thermal
factor of the squeezed source (squeezed-quadrature variance e^{-2r} v_th),
v_en the electronic noise of the detector, V the homodyne visibility, and
L the channel loss.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .numerics import erfc, golden_section_min

__all__ = [
    "ExperimentParams",
    "InfeasibleBudgetError",
    "squeezing_db_to_r",
    "r_to_squeezing_db",
    "mean_photon_estimate",
    "predicted_error",
    "predicted_error_lossy",
    "model_snr",
    "optimal_gamma_lossy",
]

_LN10_OVER_20 = math.log(10.0) / 20.0


class InfeasibleBudgetError(ValueError):
    """Raised when an energy budget cannot accommodate the requested squeezing
    and impurity overheads (the displaced signal power would be negative)."""


def squeezing_db_to_r(db: float) -> float:
    """Squeezing parameter for a noise reduction quoted in dB: r = dB * ln(10)/20."""
    return db * _LN10_OVER_20


def r_to_squeezing_db(r: float) -> float:
    return r / _LN10_OVER_20


@dataclass(frozen=True)
class ExperimentParams:
    """Measured parameters of a displaced-squeezed transmitter and its channel."""

    beta: float = 0.0
    r: float = 0.0
    v_th: float = 1.0
    v_en: float = 0.0
    visibility: float = 1.0
    loss: float = 0.0

    def __post_init__(self):
        for name in ("beta", "r", "v_th", "v_en", "visibility", "loss"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.v_th < 1.0:
            raise ValueError(f"v_th must be >= 1 (shot-noise normalised), got {self.v_th!r}")
        if self.v_en < 0.0:
            raise ValueError(f"v_en must be >= 0, got {self.v_en!r}")
        if not (0.0 < self.visibility <= 1.0):
            raise ValueError(f"visibility must be in (0, 1], got {self.visibility!r}")
        if not (0.0 <= self.loss <= 1.0):
            raise ValueError(f"loss must be in [0, 1], got {self.loss!r}")


def mean_photon_estimate(p: ExperimentParams, *, exact_energy: bool = False) -> float:
    """Mean photon number inferred from the measured (beta, r, v_th, V).

    Default is the published estimator
        n = (beta^2 + sinh^2 r + (v_th - 1)/2) / V^2,
    which drops the thermal-squeezing cross term. exact_energy=True restores
    it, using n_th = (v_th - 1)/2:
        n = (beta^2 + (v_th - 1)/2 + v_th sinh^2 r) / V^2.
    """
    sinh2 = math.sinh(p.r) ** 2
    thermal = 0.5 * (p.v_th - 1.0)
    if exact_energy:
        squeeze = p.v_th * sinh2
    else:
        squeeze = sinh2
    return (p.beta**2 + squeeze + thermal) / p.visibility**2


def _signal_power(p: ExperimentParams, n_mean: float) -> float:
    """Detected displaced power beta^2 = n V^2 - sinh^2 r - (v_th - 1)/2."""
    power = n_mean * p.visibility**2 - math.sinh(p.r) ** 2 - 0.5 * (p.v_th - 1.0)
    if power < 0.0:
        raise InfeasibleBudgetError(
            f"budget n_mean={n_mean!r} cannot support sinh^2(r)={math.sinh(p.r)**2!r} "
            f"and v_th={p.v_th!r} at visibility {p.visibility!r}"
        )
    return power


def predicted_error(p: ExperimentParams, n_mean: float) -> float:
    """Predicted homodyne error for a lossless channel:

    P = 0.5 * erfc( sqrt( 2 (n V^2 - sinh^2 r - (v_th-1)/2) / (e^{-2r} v_th + v_en) ) )
    """
    power = _signal_power(p, n_mean)
    noise = math.exp(-2.0 * p.r) * p.v_th + p.v_en
    return 0.5 * erfc(math.sqrt(2.0 * power / noise))


def predicted_error_lossy(p: ExperimentParams, n_mean: float) -> float:
    """Predicted homodyne error through a channel with loss L = p.loss:

    P = 0.5 * erfc( sqrt( 2 (n V^2 - sinh^2 r - (v_th-1)/2)(1-L)
                          / (e^{-2r} v_th (1-L) + L + v_en) ) )
    """
    power = _signal_power(p, n_mean)
    one_minus_l = 1.0 - p.loss
    noise = math.exp(-2.0 * p.r) * p.v_th * one_minus_l + p.loss + p.v_en
    return 0.5 * erfc(math.sqrt(2.0 * power * one_minus_l / noise))


def model_snr(p: ExperimentParams, n_mean: float) -> float:
    """Received SNR implied by the lossy error model (the erfc argument squared, times 2)."""
    power = _signal_power(p, n_mean)
    one_minus_l = 1.0 - p.loss
    noise = math.exp(-2.0 * p.r) * p.v_th * one_minus_l + p.loss + p.v_en
    return 4.0 * power * one_minus_l / noise


def optimal_gamma_lossy(n_mean: float, p: ExperimentParams) -> float:
    """Squeezing fraction minimising the lossy-channel error at fixed energy.

    The scan holds the detected squeezing budget sinh^2 r = gamma * n * V^2
    and the impurity/loss parameters fixed. Golden-section search to 1e-6
    after a coarse bracketing scan; with an ideal lossless channel this
    reproduces the closed form n/(2n+1).
    """
    if n_mean <= 0.0:
        raise ValueError(f"n_mean must be > 0, got {n_mean!r}")
    detected = n_mean * p.visibility**2
    gamma_cap = 1.0 - 0.5 * (p.v_th - 1.0) / detected
    if gamma_cap <= 0.0:
        raise InfeasibleBudgetError(
            f"thermal noise v_th={p.v_th!r} exceeds the whole detected budget {detected!r}"
        )
    hi = min(gamma_cap, 1.0 - 1e-12)

    def err_at(gamma: float) -> float:
        r = math.asinh(math.sqrt(gamma * detected))
        return predicted_error_lossy(replace(p, r=r), n_mean)

    # coarse scan to bracket the minimum, then refine
    n_scan = 129
    values = [(err_at(hi * i / (n_scan - 1)), i) for i in range(n_scan)]
    best = min(values)[1]
    lo_edge = hi * max(best - 1, 0) / (n_scan - 1)
    hi_edge = hi * min(best + 1, n_scan - 1) / (n_scan - 1)
    return golden_section_min(err_at, lo_edge, hi_edge, 1e-6)
