"""Self-contained numerical kernels: special functions, adaptive quadrature,
root finding, and reproducible random streams.

Everything in this module is pure given its inputs. Quadrature is adaptive
Gauss-Kronrod (G7/K15); the complementary error function is a Maclaurin
series below the crossover point and a Laplace continued fraction above it.
Random streams are counter-based (Philox) so that independent shards of a
Monte Carlo run are reproducible under any worker count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

__all__ = [
    "QuadratureSpec",
    "QuadratureResult",
    "QuadratureError",
    "RandomStream",
    "erfc",
    "integrate_1d",
    "integrate_2d_wedge",
    "find_root",
    "golden_section_min",
    "sample_normal",
]

_TWO_OVER_SQRT_PI = 1.1283791670955126
_SQRT_PI = 1.7724538509055159
_SERIES_CF_CROSSOVER = 1.5
# erfc underflows to zero in double precision beyond this point
_ERFC_UNDERFLOW = 27.5

_MASK64 = (1 << 64) - 1


# ---------------------------------------------------------------------------
# complementary error function
# ---------------------------------------------------------------------------

def _erf_series(x: float) -> float:
    """Maclaurin series for erf(x); accurate for 0 <= x <~ 2."""
    x2 = x * x
    term = x      # (-1)^n x^(2n+1) / n!
    total = x
    n = 0
    while True:
        n += 1
        term *= -x2 / n
        contrib = term / (2 * n + 1)
        total += contrib
        if abs(contrib) < 1e-17 * abs(total):
            return _TWO_OVER_SQRT_PI * total
        if n > 200:  # pragma: no cover - series converges long before this
            return _TWO_OVER_SQRT_PI * total


def _erfc_continued_fraction(x: float) -> float:
    """Laplace continued fraction erfc(x) = e^{-x^2}/sqrt(pi) / (x + 1/2/(x + 1/(x + ...)))
    evaluated with the modified Lentz algorithm; accurate for x >~ 1."""
    tiny = 1e-300
    f = x if x != 0.0 else tiny
    c = f
    d = 0.0
    for n in range(1, 400):
        a = 0.5 * n
        d = x + a * d
        if d == 0.0:
            d = tiny
        c = x + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-17:
            break
    return math.exp(-x * x) / (_SQRT_PI * f)


def erfc(x: float) -> float:
    """Complementary error function, relative error <= 1e-13 for |x| <= 10."""
    x = float(x)
    if math.isnan(x):
        return math.nan
    if x < 0.0:
        return 2.0 - erfc(-x)
    if x < _SERIES_CF_CROSSOVER:
        return 1.0 - _erf_series(x)
    if x > _ERFC_UNDERFLOW:
        return 0.0
    return _erfc_continued_fraction(x)


# ---------------------------------------------------------------------------
# adaptive Gauss-Kronrod quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and subdivision budget for adaptive quadrature."""

    relative_tolerance: float = 1e-10
    absolute_tolerance: float = 1e-12
    max_subdivisions: int = 256

    def __post_init__(self):
        if not (self.relative_tolerance > 0.0 and self.absolute_tolerance > 0.0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")


class QuadratureResult(NamedTuple):
    value: float
    error_bound: float


class QuadratureError(RuntimeError):
    """Raised when adaptive quadrature exhausts its subdivision budget.

    Carries the best available estimate and its error bound.
    """

    def __init__(self, message: str, best_estimate: float, error_bound: float):
        super().__init__(f"{message} (best estimate {best_estimate!r}, error bound {error_bound!r})")
        self.best_estimate = best_estimate
        self.error_bound = error_bound


# K15 nodes (positive half) and weights; G7 shares every second node.
_XGK = (
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
)
_WGK = (
    0.0229353220105292,
    0.0630920926299786,
    0.1047900103222502,
    0.1406532597155259,
    0.1690047266392679,
    0.1903505780647854,
    0.2044329400752989,
)
_WGK_CENTER = 0.2094821410847278
_WG = (0.1294849661688697, 0.2797053914892767, 0.3818300505051189)
_WG_CENTER = 0.4179591836734694


def _gk15(f: Callable[[float], float], a: float, b: float) -> tuple[float, float]:
    """One G7/K15 panel on [a, b]; returns (integral, error estimate)."""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    fc = f(center)
    resk = _WGK_CENTER * fc
    resg = _WG_CENTER * fc
    values = [fc]
    for i, xi in enumerate(_XGK):
        f1 = f(center - half * xi)
        f2 = f(center + half * xi)
        resk += _WGK[i] * (f1 + f2)
        if i % 2 == 1:
            resg += _WG[(i - 1) // 2] * (f1 + f2)
        values.append(f1)
        values.append(f2)
    integral = resk * half
    err = abs((resk - resg) * half)
    # QUADPACK-style rescaling against the mean deviation of the integrand
    reskh = 0.5 * resk
    resasc = _WGK_CENTER * abs(fc - reskh)
    k = 1
    for i in range(len(_XGK)):
        resasc += _WGK[i] * (abs(values[k] - reskh) + abs(values[k + 1] - reskh))
        k += 2
    resasc *= abs(half)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    return integral, err


def integrate_1d(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> QuadratureResult:
    """Adaptively integrate f over [a, b].

    Returns the estimate together with the achieved error bound. Raises
    QuadratureError (carrying the best estimate) if the requested tolerances
    are not met within spec.max_subdivisions interval splits.
    """
    spec = spec or QuadratureSpec()
    if a == b:
        return QuadratureResult(0.0, 0.0)
    sign = 1.0
    if a > b:
        a, b = b, a
        sign = -1.0

    value, err = _gk15(f, a, b)
    panels = [(a, b, value, err)]
    splits = 0
    while True:
        total = math.fsum(p[2] for p in panels)
        total_err = math.fsum(p[3] for p in panels)
        if not math.isfinite(total):
            raise QuadratureError("non-finite integrand", sign * total, total_err)
        if total_err <= max(spec.absolute_tolerance, spec.relative_tolerance * abs(total)):
            return QuadratureResult(sign * total, total_err)
        if splits >= spec.max_subdivisions:
            raise QuadratureError(
                "quadrature did not converge within the subdivision budget",
                sign * total,
                total_err,
            )
        worst = max(range(len(panels)), key=lambda i: panels[i][3])
        lo, hi, _, _ = panels[worst]
        mid = 0.5 * (lo + hi)
        left = _gk15(f, lo, mid)
        right = _gk15(f, mid, hi)
        panels[worst] = (lo, mid, left[0], left[1])
        panels.append((mid, hi, right[0], right[1]))
        splits += 1


def integrate_2d_wedge(
    pdf: Callable[[float, float], float],
    half_angle: float,
    spec: QuadratureSpec | None = None,
    *,
    radial_cutoff: float,
) -> float:
    """Probability mass of a bivariate density inside the wedge |theta| < half_angle.

    The wedge is the polar sector of directions within half_angle of the
    positive x axis (half_angle = pi/2 is the right half-plane, pi the whole
    plane). Integration runs in polar coordinates; the caller supplies the
    radial truncation point, conventionally mean + 10 standard deviations of
    the wider marginal.
    """
    spec = spec or QuadratureSpec()
    if not (0.0 < half_angle <= math.pi):
        raise ValueError(f"half_angle must be in (0, pi], got {half_angle!r}")
    if not (radial_cutoff > 0.0 and math.isfinite(radial_cutoff)):
        raise ValueError(f"radial_cutoff must be positive and finite, got {radial_cutoff!r}")

    inner_spec = QuadratureSpec(
        relative_tolerance=spec.relative_tolerance / 4.0,
        absolute_tolerance=spec.absolute_tolerance / (8.0 * half_angle),
        max_subdivisions=spec.max_subdivisions,
    )
    outer_spec = QuadratureSpec(
        relative_tolerance=spec.relative_tolerance / 2.0,
        absolute_tolerance=spec.absolute_tolerance / 2.0,
        max_subdivisions=spec.max_subdivisions,
    )

    def along_ray(theta: float) -> float:
        cos_t = math.cos(theta)
        sin_t = math.sin(theta)
        radial = integrate_1d(
            lambda r: pdf(r * cos_t, r * sin_t) * r,
            0.0,
            radial_cutoff,
            inner_spec,
        )
        return radial.value

    return integrate_1d(along_ray, -half_angle, half_angle, outer_spec).value


# ---------------------------------------------------------------------------
# scalar root finding and 1D minimisation
# ---------------------------------------------------------------------------

def find_root(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    """Bisection root of f on [lo, hi]; requires a sign change on the bracket."""
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    if lo > hi:
        lo, hi = hi, lo
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError(f"no sign change on [{lo!r}, {hi!r}]: f(lo)={flo!r}, f(hi)={fhi!r}")
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def golden_section_min(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    """Golden-section minimiser for a unimodal f on [lo, hi]; bracket width <= tol."""
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = (lo, hi) if lo <= hi else (hi, lo)
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = f(x2)
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# reproducible random streams
# ---------------------------------------------------------------------------

@dataclass
class RandomStream:
    """Counter-based random stream identified by (master_seed, stream_index).

    Streams with distinct identifiers are statistically independent; equal
    identifiers reproduce identical sequences byte for byte. A stream is
    stateful and must not be shared between concurrent tasks.
    """

    master_seed: int
    stream_index: int = 0
    _generator: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (0 <= self.master_seed <= _MASK64):
            raise ValueError("master_seed must fit in 64 bits")
        if not (0 <= self.stream_index <= _MASK64):
            raise ValueError("stream_index must be a 64-bit count")
        bitgen = np.random.Philox(key=[self.master_seed, self.stream_index])
        self._generator = np.random.Generator(bitgen)

    @property
    def generator(self) -> np.random.Generator:
        return self._generator


def sample_normal(stream: RandomStream, mean: float, variance: float) -> float:
    """One draw from N(mean, variance); variance 0 returns the mean exactly."""
    if variance < 0.0:
        raise ValueError(f"variance must be non-negative, got {variance!r}")
    return float(stream.generator.normal(mean, math.sqrt(variance)))
