"""Single-mode Gaussian states, energy bookkeeping, and homodyne SNR formulas.

Quadrature convention: X = a + a^dag, so the vacuum amplitude-quadrature
variance is 1 and a coherent state of amplitude alpha has SNR 4*alpha^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "GaussianState",
    "EnergyBudget",
    "mean_photon_number",
    "snr_general",
    "snr_bpsk",
    "snr_rotated",
    "optimal_gamma",
    "amplitude_from_budget",
    "squeezing_parameter",
]


@dataclass(frozen=True)
class GaussianState:
    """Displaced squeezed thermal state D(alpha) R(theta) S(r) rho_th.

    alpha: real displacement amplitude (shot-noise units)
    r: squeezing parameter, r > 0 squeezes the amplitude quadrature
    theta: angle of the squeezing axis, radians
    n_th: mean thermal occupation of the seed state
    """

    alpha: float = 0.0
    r: float = 0.0
    theta: float = 0.0
    n_th: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "r", "theta", "n_th"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.n_th < 0.0:
            raise ValueError(f"n_th must be >= 0, got {self.n_th!r}")


@dataclass(frozen=True)
class EnergyBudget:
    """Mean photon number and the fraction of it allocated to squeezing."""

    n_mean: float
    gamma: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.n_mean) and self.n_mean >= 0.0):
            raise ValueError(f"n_mean must be >= 0, got {self.n_mean!r}")
        if not (0.0 <= self.gamma < 1.0):
            raise ValueError(f"gamma must be in [0, 1), got {self.gamma!r}")

    @property
    def n_squeeze(self) -> float:
        """Photons carried by squeezing, sinh^2(r)."""
        return self.gamma * self.n_mean


def mean_photon_number(state: GaussianState) -> float:
    """Exact energy alpha^2 + n_th + (2*n_th + 1)*sinh^2(r)."""
    sinh2 = math.sinh(state.r) ** 2
    return state.alpha**2 + state.n_th + (2.0 * state.n_th + 1.0) * sinh2


def snr_general(state: GaussianState) -> float:
    """Amplitude-quadrature homodyne SNR of an arbitrary single-mode Gaussian state.

    SNR = 4 alpha^2 / ((2 n_th + 1)(e^{-2r} cos^2 theta + e^{2r} sin^2 theta))
    """
    noise = (2.0 * state.n_th + 1.0) * (
        math.exp(-2.0 * state.r) * math.cos(state.theta) ** 2
        + math.exp(2.0 * state.r) * math.sin(state.theta) ** 2
    )
    return 4.0 * state.alpha**2 / noise


def snr_bpsk(budget: EnergyBudget) -> float:
    """SNR of an equal-energy displaced-squeezed binary signal.

    With n_s = gamma * n_mean photons in squeezing,
    SNR = 4 (n_mean - n_s) (sqrt(n_s) + sqrt(n_s + 1))^2.
    """
    n_s = budget.n_squeeze
    return 4.0 * (budget.n_mean - n_s) * (math.sqrt(n_s) + math.sqrt(n_s + 1.0)) ** 2


def snr_rotated(alpha: float, r: float, phi: float) -> float:
    """SNR after rotating an amplitude-squeezed displaced state by phi before homodyne."""
    cos2 = math.cos(phi) ** 2
    sin2 = math.sin(phi) ** 2
    return 4.0 * alpha**2 * cos2 / (math.exp(-2.0 * r) * cos2 + math.exp(2.0 * r) * sin2)


def optimal_gamma(n_mean: float) -> float:
    """Squeezing fraction n/(2n+1) that maximises the binary-signal SNR.

    At the optimum the SNR equals 4*(n^2 + n).
    """
    if n_mean < 0.0:
        raise ValueError(f"n_mean must be >= 0, got {n_mean!r}")
    return n_mean / (2.0 * n_mean + 1.0)


def amplitude_from_budget(budget: EnergyBudget) -> float:
    """Displacement beta = sqrt((1 - gamma) * n_mean) left after squeezing."""
    return math.sqrt((1.0 - budget.gamma) * budget.n_mean)


def squeezing_parameter(budget: EnergyBudget) -> float:
    """Squeezing parameter r with sinh^2(r) = gamma * n_mean."""
    return math.asinh(math.sqrt(budget.n_squeeze))
