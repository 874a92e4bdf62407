"""Confined charged fields in a uniform magnetic field normal to the plates.

Transverse motion is quantised into Landau levels ``p_perp^2 = eB (2n + 1)``
with degeneracy ``eB / 2 pi`` per unit area, so the transverse momentum
integral of the slab formula becomes a sum over levels.  With the reduced
field ``b = eB ell^2`` and mass ``mu = m ell``:

Charged scalar, Dirichlet plates::

    E = -(b L^2 / (2 pi^2 ell^3)) sum_{n>=0} M_n sum_{k>=1} K_1(2 k M_n) / k,
    M_n^2 = (2n + 1) b + mu^2.

Fermion, MIT plates::

    E = -(b L^2 / (pi^2 ell^3)) sum'_{p>=-1} sum_{k>=1} (-1)^(k+1) / k I_pk(M_p),
    M_p^2 = 2 (p + 1) b + mu^2,

where the primed sum halves the ``p = -1`` (lowest, spin-polarised) level
and ``I_pk`` is a one-dimensional integral evaluated by quadrature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernel import EnergyResult
from .quadrature import (
    NumResult,
    QuadratureSpec,
    SeriesSpec,
    integrate_semi_infinite,
    sum_alternating,
    sum_series,
)
from .special import bessel_k_scaled

__all__ = [
    "MagneticConfig",
    "boson_energy_magnetic",
    "boson_strong_field_asymptote",
    "i_pk_integral",
    "fermion_energy_magnetic",
    "fermion_massless_limit",
    "fermion_massive_limit",
]


@dataclass(frozen=True)
class MagneticConfig:
    """Reduced field ``b = eB ell^2`` and mass ``mu = m ell`` between plates of side ``big_l``."""

    b: float
    mu: float = 0.0
    ell: float = 1.0
    big_l: float = 1.0

    def __post_init__(self):
        # b = 0 turns the Landau sum into a continuum; use the slab formula instead.
        if not self.b > 0:
            raise ValueError(f"b must be positive, got {self.b!r}")
        if not self.mu >= 0:
            raise ValueError(f"mu must be non-negative, got {self.mu!r}")
        if not self.ell > 0:
            raise ValueError(f"ell must be positive, got {self.ell!r}")
        if not self.big_l > 0:
            raise ValueError(f"big_l must be positive, got {self.big_l!r}")

    @property
    def geometry(self) -> float:
        """``L^2 / ell^3``: converts dimensionless to physical energy."""
        return self.big_l**2 / self.ell**3


def _energy_result(e0, err, config, diagnostics):
    g = config.geometry
    return EnergyResult(e0 * g, e0, err * g, diagnostics)


def _boson_level(mass: float, ref_mass: float, series: SeriesSpec) -> NumResult:
    """``exp(2 ref_mass) M sum_k K_1(2 k M) / k``, without underflow for heavy levels."""
    # K_1(2kM) = exp(-2kM) * scaled; the common exp(-2 ref_mass) is restored by the caller
    res = sum_series(
        lambda k: math.exp(-2.0 * (k - 1) * mass) * bessel_k_scaled(1, 2.0 * k * mass) / k, series
    )
    factor = mass * math.exp(-2.0 * (mass - ref_mass))
    return NumResult(factor * res.value, factor * res.error_estimate, res.evaluations, res.converged)


def boson_energy_magnetic(config: MagneticConfig, series: SeriesSpec | None = None) -> EnergyResult:
    """Exact Landau-level Bessel series for a charged scalar between Dirichlet plates.

    The outer sum over levels stops by the same rule as the inner one; its
    terms are bounded by ``M_n K_1(2 M_n)`` up to a constant, which decays
    like ``exp(-2 sqrt(2 n b))``.  The factor ``exp(-2 M_0)`` of the lowest
    level is pulled out so heavy fields keep their relative accuracy.
    """
    series = series or SeriesSpec()
    b, mu = config.b, config.mu
    m0 = math.sqrt(b + mu * mu)
    levels: list[NumResult] = []

    def level(n):
        res = _boson_level(math.sqrt((2 * n + 1) * b + mu * mu), m0, series)
        levels.append(res)
        return res.value

    outer = sum_series(level, series, start=0)
    pref = -b / (2.0 * math.pi**2)
    restore = math.exp(-2.0 * m0)
    inner_error = math.fsum(r.error_estimate for r in levels)
    diagnostics = {
        "converged": outer.converged and all(r.converged for r in levels),
        "evaluations": outer.evaluations + sum(r.evaluations for r in levels),
        "landau_levels": len(levels),
        "level_sum": outer.value * restore,
    }
    return _energy_result(
        pref * outer.value * restore,
        abs(pref) * (outer.error_estimate + inner_error) * restore,
        config,
        diagnostics,
    )


def boson_strong_field_asymptote(config: MagneticConfig) -> float:
    """Printed strong-field closed form, ``-(L^2 / ell^3) b^(5/4) exp(-2 sqrt b) / sqrt(pi)``.

    Reproduced as published; the leading term of the exact series is
    smaller by a factor ``1/(4 pi)``, so compare shapes, not magnitudes.
    """
    b = config.b
    return -config.geometry * b**1.25 * math.exp(-2.0 * math.sqrt(b)) / math.sqrt(math.pi)


def _landau_mass(p: int, config: MagneticConfig) -> float:
    return math.sqrt(2.0 * (p + 1) * config.b + config.mu**2)


def _i_pk_scaled(p, k, config, spec):
    """``exp(2 k M_p) * I_pk`` as a NumResult, with M_p."""
    mu = config.mu
    mass = _landau_mass(p, config)
    gap = 2.0 * (p + 1) * config.b  # M_p^2 - mu^2, exact

    if mu == 0.0:
        def integrand(x):
            s = np.sqrt(x * x + mass * mass)
            return np.exp(-2.0 * k * (s - mass))
    else:
        def integrand(x):
            s = np.sqrt(x * x + mass * mass)
            # bracket ((s - mu)/(s + mu))^k in log space; s - mu without cancellation
            with np.errstate(divide="ignore"):
                log_bracket = np.log(x * x + gap) - 2.0 * np.log(s + mu)
            return np.exp(k * log_bracket - 2.0 * k * (s - mass))

    width = max(0.5 / k, 0.5 * math.sqrt(mass / k))
    return integrate_semi_infinite(integrand, 0.0, spec, scale=width), mass


def i_pk_integral(
    p: int,
    k: int,
    config: MagneticConfig,
    spec: QuadratureSpec | None = None,
    *,
    full_output: bool = False,
):
    """Landau-level integral of the fermion energy.

    ``I_pk = int_0^inf [(s - mu)/(s + mu)]^k exp(-2 k s) dx`` with
    ``s = sqrt(x^2 + M_p^2)``.  The factor ``exp(-2 k M_p)`` is handled
    analytically so deep levels do not underflow inside the quadrature.

    With ``full_output=True`` returns ``(value, NumResult)`` where the
    NumResult refers to the unscaled integral.
    """
    if isinstance(p, bool) or int(p) != p or p < -1:
        raise ValueError(f"p must be an integer >= -1, got {p!r}")
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    spec = spec or QuadratureSpec()
    res, mass = _i_pk_scaled(int(p), int(k), config, spec)
    factor = math.exp(-2.0 * k * mass)
    value = res.value * factor
    if full_output:
        return value, NumResult(value, res.error_estimate * factor, res.evaluations, res.converged)
    return value


def fermion_energy_magnetic(
    config: MagneticConfig,
    series: SeriesSpec | None = None,
    spec: QuadratureSpec | None = None,
) -> EnergyResult:
    """Landau-level double series for a fermion between MIT plates.

    For every level ``p`` the alternating ``k`` sum is done first.  Its
    magnitudes ``I_pk / k`` form a moment sequence, so the sum is either
    cut with the alternating remainder bound or, when it converges slowly
    (light, low levels), accelerated with the Cohen-Rodriguez
    Villegas-Zagier weights, which carry their own rigorous bound.
    """
    series = series or SeriesSpec()
    spec = spec or QuadratureSpec()
    quad_error = 0.0
    quad_evals = 0
    quad_ok = True
    inner: list[NumResult] = []

    def magnitude(p):
        def a(k):
            nonlocal quad_error, quad_evals, quad_ok
            res, mass = _i_pk_scaled(p, k, config, spec)
            factor = math.exp(-2.0 * k * mass)
            quad_error += res.error_estimate * factor / k
            quad_evals += res.evaluations
            quad_ok = quad_ok and res.converged
            return res.value * factor / k
        return a

    def level(p):
        res = sum_alternating(magnitude(p), series, start=1)
        inner.append(res)
        return 0.5 * res.value if p == -1 else res.value

    outer = sum_series(level, series, start=-1)
    pref = -config.b / math.pi**2
    inner_error = math.fsum(r.error_estimate for r in inner)
    diagnostics = {
        "converged": outer.converged and quad_ok and all(r.converged for r in inner),
        "evaluations": quad_evals,
        "landau_levels": len(inner),
        "level_sum": outer.value,
    }
    err = abs(pref) * (outer.error_estimate + inner_error + quad_error)
    return _energy_result(pref * outer.value, err, config, diagnostics)


def fermion_massless_limit(config: MagneticConfig) -> float:
    """Strong-field massless limit ``E = -eB L^2 / (48 ell)``."""
    return -config.b * config.geometry / 48.0


def fermion_massive_limit(config: MagneticConfig) -> float:
    """Heavy-fermion limit ``E = -(eB L^2 / (32 pi^(3/2) ell)) exp(-2 mu) / sqrt(mu)``.

    This is the lowest Landau level alone; it needs ``b >> mu`` so that
    higher levels are suppressed as well.
    """
    mu = config.mu
    if not mu > 0:
        raise ValueError("the massive limit needs mu > 0")
    return -config.b * config.geometry / (32.0 * math.pi**1.5) * math.exp(-2.0 * mu) / math.sqrt(mu)
