"""Boundary kernels and the regularised slab energy.

A boundary condition on two parallel plates is described by the analytic
continuation ``K(w) = G(i w)`` of the function whose roots are the allowed
transverse momenta.  Splitting ``K = K1 + K2`` into its decaying and
growing parts, the finite vacuum energy per unit plate area in ``d``
spatial dimensions is

    E = s * g * L^(d-1) / (c_d * ell^d)
        * int_mu^inf dw  w (w^2 - mu^2)^(d/2 - 1) ln(1 + K1(w)/K2(w)),

with ``c_d = 2^d pi^(d/2) Gamma(d/2)`` for bosons (``s = +1``) and
``c_d = 2^(d-1) pi^(d/2) Gamma(d/2)`` for fermions (``s = -1``), ``g`` the
degeneracy of internal states and ``mu = m * ell``.  No mode sums or root
finding are involved.

Energies are in units of 1/length (hbar = c = 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .quadrature import (
    QuadratureSpec,
    integrate_semi_infinite,
    integrate_sqrt_singular,
)
from .special import gamma_half

__all__ = [
    "BoundaryKernel",
    "SlabConfig",
    "EnergyResult",
    "log_ratio",
    "casimir_energy_slab",
    "slab_prefactor",
    "dirichlet_scalar_kernel",
    "mit_fermion_kernel",
    "default_fermion_degeneracy",
]

BOSON = 1
FERMION = -1

# exp(2 mu) is factored out of the integrand up to this exponent
_MAX_RESCALE = 600.0
# ln 2 / 2: below it exp(-2w) > 1/2 and log1p(-x) would lose digits instead
_LOG_SWITCH = 0.5 * math.log(2.0)


@dataclass(frozen=True)
class BoundaryKernel:
    """The split ``K = k1 + k2`` of a boundary condition.

    ``ratio`` and ``log1p_ratio`` are optional closed forms of ``k1/k2`` and
    ``ln(1 + k1/k2)``.  Built-in kernels provide them because the naive
    quotient overflows for large ``w`` and ``log1p`` loses the logarithmic
    endpoint behaviour of the Dirichlet kernel near ``w = 0``.  All
    callables take and return numpy arrays.
    """

    k1: Callable[[np.ndarray], np.ndarray]
    k2: Callable[[np.ndarray], np.ndarray]
    statistics_sign: int = BOSON
    degeneracy: float = 1.0
    name: str = "custom"
    ratio: Callable[[np.ndarray], np.ndarray] | None = None
    log1p_ratio: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if self.statistics_sign not in (BOSON, FERMION):
            raise ValueError(f"statistics_sign must be +1 or -1, got {self.statistics_sign!r}")
        if not self.degeneracy > 0:
            raise ValueError(f"degeneracy must be positive, got {self.degeneracy!r}")

    def k_ratio(self, omega):
        omega = np.asarray(omega, dtype=float)
        if self.ratio is not None:
            return self.ratio(omega)
        return self.k1(omega) / self.k2(omega)

    def with_degeneracy(self, degeneracy: float) -> "BoundaryKernel":
        return BoundaryKernel(
            self.k1, self.k2, self.statistics_sign, float(degeneracy),
            self.name, self.ratio, self.log1p_ratio,
        )


@dataclass(frozen=True)
class SlabConfig:
    """Two plates of area ``big_l**(d-1)`` a distance ``ell`` apart; ``mu = m * ell``."""

    d: int
    ell: float = 1.0
    big_l: float = 1.0
    mu: float = 0.0

    def __post_init__(self):
        if isinstance(self.d, bool) or int(self.d) != self.d or self.d < 1:
            raise ValueError(f"d must be a positive integer, got {self.d!r}")
        if not self.ell > 0:
            raise ValueError(f"ell must be positive, got {self.ell!r}")
        if not self.big_l > 0:
            raise ValueError(f"big_l must be positive, got {self.big_l!r}")
        if not self.mu >= 0:
            raise ValueError(f"mu must be non-negative, got {self.mu!r}")


@dataclass(frozen=True)
class EnergyResult:
    """A vacuum energy in physical and dimensionless form.

    ``dimensionless_energy`` is ``energy * ell**d / big_l**(d-1)`` (``d = 3``
    for the magnetic and deformed models).
    """

    energy: float
    dimensionless_energy: float
    error_estimate: float
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def converged(self) -> bool:
        return bool(self.diagnostics.get("converged", False))


def log_ratio(kernel: BoundaryKernel, omega):
    """``ln(1 + k1(w)/k2(w))``, via ``log1p`` or the kernel's own closed form.

    Raises ``ValueError`` where ``k1/k2 <= -1``.
    """
    scalar = np.ndim(omega) == 0
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    if kernel.log1p_ratio is not None:
        out = kernel.log1p_ratio(omega)
    else:
        r = kernel.k_ratio(omega)
        if np.any(r <= -1.0):
            raise ValueError("1 + k1/k2 must be positive; the logarithm is undefined")
        out = np.log1p(r)
    if np.any(np.isnan(out)) or np.any(np.isneginf(out)):
        raise ValueError("1 + k1/k2 must be positive; the logarithm is undefined")
    return float(out[0]) if scalar else out


def slab_prefactor(d: int, statistics_sign: int, degeneracy: float) -> float:
    """Signed constant in front of the master integral."""
    angular = math.pi ** (0.5 * d) * gamma_half(d)
    if statistics_sign == BOSON:
        return degeneracy / (2.0**d * angular)
    return -degeneracy / (2.0 ** (d - 1) * angular)


def casimir_energy_slab(
    kernel: BoundaryKernel,
    config: SlabConfig,
    spec: QuadratureSpec | None = None,
) -> EnergyResult:
    """Regularised vacuum energy of a field between two parallel plates.

    Evaluates the master integral over ``w >= mu``.  For ``d = 1`` and
    ``mu > 0`` the measure ``w / sqrt(w^2 - mu^2)`` is singular at the
    lower end and the integral goes through the hyperbolic substitution
    ``w = mu cosh t``.  For ``mu > 0`` the factor ``exp(-2 mu)`` is pulled
    out of the integrand so that heavy fields keep full relative accuracy.
    """
    spec = spec or QuadratureSpec()
    d, mu = int(config.d), float(config.mu)
    power = 0.5 * d - 1.0
    rescale = min(2.0 * mu, _MAX_RESCALE)
    boost = math.exp(rescale)

    def log_term(w):
        return log_ratio(kernel, w) * boost

    if d == 1 and mu > 0:
        # integrand = w / sqrt(w^2 - mu^2) * log_term, with the root cancelled by the map
        res = integrate_sqrt_singular(
            lambda w: w * log_term(w) / np.sqrt((w - mu) * (w + mu)),
            mu, math.inf, "left", spec, scale=0.5 / max(mu, 1.0),
        )
    else:
        if mu == 0.0:
            def integrand(w):
                return w ** (d - 1) * log_term(w)
        else:
            def integrand(w):
                return w * ((w - mu) * (w + mu)) ** power * log_term(w)
        res = integrate_semi_infinite(integrand, mu, spec, scale=0.5)

    pref = slab_prefactor(d, kernel.statistics_sign, kernel.degeneracy)
    unscale = math.exp(-rescale)
    e0 = pref * res.value * unscale
    err = abs(pref) * res.error_estimate * unscale
    geometry = config.big_l ** (d - 1) / config.ell**d
    diagnostics = {
        "converged": res.converged,
        "evaluations": res.evaluations,
        "kernel": kernel.name,
        "integral": res.value * unscale,
        "prefactor": pref,
    }
    return EnergyResult(e0 * geometry, e0, err * geometry, diagnostics)


def dirichlet_scalar_kernel(degeneracy: float = 1.0) -> BoundaryKernel:
    """Dirichlet plates: ``K(w) = sinh(w)/w``, so ``1 + K1/K2 = 1 - exp(-2w)``.

    ``degeneracy`` is 1 for a real scalar and 2 for a charged one.
    """

    def k1(w):
        return -np.exp(-w) / (2.0 * w)

    def k2(w):
        return np.exp(w) / (2.0 * w)

    def ratio(w):
        return -np.exp(-2.0 * w)

    def log1p_ratio(w):
        # log(-expm1) keeps the log singularity at w = 0, log1p the tail
        with np.errstate(divide="ignore"):
            near = np.log(-np.expm1(-2.0 * w))
            far = np.log1p(-np.exp(-2.0 * w))
        return np.where(w < _LOG_SWITCH, near, far)

    return BoundaryKernel(k1, k2, BOSON, degeneracy, "dirichlet-scalar", ratio, log1p_ratio)


def default_fermion_degeneracy(d: int) -> float:
    """``2**floor((d+1)/2) / 2``: half the number of Dirac spinor components."""
    return 2.0 ** ((int(d) + 1) // 2) / 2.0


def mit_fermion_kernel(mu: float, degeneracy: float = 2.0) -> BoundaryKernel:
    """MIT bag plates for a fermion of reduced mass ``mu = m * ell``.

    The roots of ``mu sin(x) + x cos(x)`` give
    ``K(w) = mu sinh(w)/w + cosh(w)``, split as
    ``K1 = (1 - mu/w) exp(-w) / 2`` and ``K2 = (1 + mu/w) exp(w) / 2``, hence
    ``K1/K2 = (w - mu)/(w + mu) exp(-2w)``.
    """
    mu = float(mu)
    if not mu >= 0:
        raise ValueError(f"mu must be non-negative, got {mu!r}")

    def k1(w):
        return 0.5 * (1.0 - mu / w) * np.exp(-w)

    def k2(w):
        return 0.5 * (1.0 + mu / w) * np.exp(w)

    if mu == 0.0:
        def ratio(w):
            return np.exp(-2.0 * w)
    else:
        def ratio(w):
            return (w - mu) / (w + mu) * np.exp(-2.0 * w)

    return BoundaryKernel(k1, k2, FERMION, degeneracy, "mit-fermion", ratio)
