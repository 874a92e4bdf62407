"""Deformed-dispersion scalar between Dirichlet plates.

The deformed frequencies ``w(p) = asinh(eta sqrt(p^2 + m^2)) / eta`` with
deformation length ``eta = 1/kappa`` turn the usual contour integral into
one with a branch point at ``|q| = 1/eta``.  After the transverse momenta
are integrated out the regularised energy per area is

    E = (L^2 / 4 pi^2) int_0^{1/eta} dq  I(q^2) / sqrt(1 - eta^2 q^2),

    I(q^2) = int_a^inf t ln(1 - exp(-2 ell t)) dt,   a = sqrt(q^2 + m^2)
           = -(1 / 2 ell) [a Li2(exp(-2 ell a)) + Li3(exp(-2 ell a)) / (2 ell)].

The normalisation reproduces ``-pi^2 L^2 / (1440 ell^3)`` as ``eta -> 0``.
The cut ``q > 1/eta`` gives the exponent of the vacuum persistence factor
``exp(-S)``:

    S = (L^2 / 2 pi^2) int_{1/eta}^inf dq |I(q^2)| / sqrt(eta^2 q^2 - 1).

For ``m = 0`` expanding the logarithm gives the per-mode series used by
:func:`kappa_casimir_massless_series` and :func:`photon_rate`, with
``y = q ell`` and ``delta = eta / ell``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernel import EnergyResult, dirichlet_scalar_kernel, log_ratio
from .quadrature import (
    NumResult,
    QuadratureSpec,
    SeriesSpec,
    integrate_finite,
    integrate_semi_infinite,
    integrate_sqrt_singular,
    sum_series,
)
from .special import _bernoulli, polylog

__all__ = [
    "KappaConfig",
    "kappa_inner_integral",
    "kappa_casimir_energy",
    "kappa_casimir_massless_series",
    "photon_rate",
    "photon_rate_direct",
    "undeformed_dirichlet_energy",
]

# Kummer subtraction: only terms whose coefficient stays below this are removed,
# so the subtraction never costs more than ~2 digits.
_KUMMER_MAX_COEFF = 100.0
_KUMMER_MAX_TERMS = 4
# exp(-2 * _DECAY_SPAN) is far below double precision relative to the peak
_DECAY_SPAN = 40.0
_DIRICHLET = dirichlet_scalar_kernel()


@dataclass(frozen=True)
class KappaConfig:
    """Deformation length ``eta``, plate gap ``ell``, mass ``m`` and plate side ``big_l``."""

    eta: float
    ell: float = 1.0
    m: float = 0.0
    big_l: float = 1.0

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"eta must be positive, got {self.eta!r}")
        if not self.ell > 0:
            raise ValueError(f"ell must be positive, got {self.ell!r}")
        if not self.m >= 0:
            raise ValueError(f"m must be non-negative, got {self.m!r}")
        if not self.big_l > 0:
            raise ValueError(f"big_l must be positive, got {self.big_l!r}")

    @property
    def delta(self) -> float:
        return self.eta / self.ell

    @property
    def geometry(self) -> float:
        return self.big_l**2 / self.ell**3

    @classmethod
    def from_delta(cls, delta: float, ell: float = 1.0, m: float = 0.0, big_l: float = 1.0):
        return cls(eta=delta * ell, ell=ell, m=m, big_l=big_l)


def _combine(*parts: NumResult) -> NumResult:
    return NumResult(
        math.fsum(p.value for p in parts),
        math.fsum(p.error_estimate for p in parts),
        sum(p.evaluations for p in parts),
        all(p.converged for p in parts),
    )


def _split_finite(f, a, b, cut, spec):
    if cut >= b:
        return integrate_finite(f, a, b, spec)
    return _combine(integrate_finite(f, a, cut, spec), integrate_finite(f, cut, b, spec))


def undeformed_dirichlet_energy(config: KappaConfig) -> float:
    """Massless Dirichlet scalar energy, ``-pi^2 L^2 / (1440 ell^3)``."""
    return -math.pi**2 * config.geometry / 1440.0


def _inner_closed(q, ell, m):
    a = math.hypot(q, m)
    z = math.exp(-2.0 * ell * a)
    return -(a * polylog(2, z) + polylog(3, z) / (2.0 * ell)) / (2.0 * ell)


def kappa_inner_integral(
    q: float,
    config: KappaConfig,
    spec: QuadratureSpec | None = None,
    *,
    method: str = "closed",
    full_output: bool = False,
):
    """Transverse integral ``I(q^2) = int_a^inf t ln(1 - exp(-2 ell t)) dt``.

    ``method="closed"`` uses the Li2/Li3 form; ``method="quadrature"``
    integrates directly.  Both are non-positive.
    """
    if not q >= 0:
        raise ValueError(f"q must be non-negative, got {q!r}")
    ell, m = config.ell, config.m
    if method == "closed":
        value = _inner_closed(float(q), ell, m)
        if full_output:
            return value, NumResult(value, 4e-16 * abs(value), 1, True)
        return value
    if method != "quadrature":
        raise ValueError(f"method must be 'closed' or 'quadrature', got {method!r}")
    a = math.hypot(q, m)
    res = integrate_semi_infinite(
        lambda t: t * log_ratio(_DIRICHLET, ell * t), a, spec, scale=0.5 / ell
    )
    return (res.value, res) if full_output else res.value


def kappa_casimir_energy(config: KappaConfig, spec: QuadratureSpec | None = None) -> EnergyResult:
    """Energy from the branch-cut integral over ``0 <= q <= 1/eta``.

    The endpoint ``q = 1/eta`` is handled by ``q = sin(theta)/eta``.
    """
    spec = spec or QuadratureSpec()
    eta, ell, m = config.eta, config.ell, config.m
    inner = np.vectorize(lambda q: _inner_closed(q, ell, m), otypes=[float])

    def integrand(q):
        return inner(q) / np.sqrt((1.0 - eta * q) * (1.0 + eta * q))

    # I(q^2) decays like exp(-2 ell q): a regular panel up to the decay scale,
    # the singular remainder (if any) through the trigonometric map
    q_cut = _DECAY_SPAN / ell
    if q_cut < 0.5 / eta:
        head = integrate_finite(integrand, 0.0, q_cut, spec)
        tail = integrate_sqrt_singular(integrand, q_cut, 1.0 / eta, "right", spec)
        res = _combine(head, tail)
    else:
        res = integrate_sqrt_singular(integrand, 0.0, 1.0 / eta, "right", spec)
    pref = config.big_l**2 / (4.0 * math.pi**2)
    energy = pref * res.value
    diagnostics = {"converged": res.converged, "evaluations": res.evaluations, "method": "integral"}
    return EnergyResult(
        energy, energy / config.geometry, pref * res.error_estimate, diagnostics
    )


def _kummer_coefficients(delta, n_terms):
    # J_n ~ sum_j c_j / n^(2j+2): c_j = C(2j,j)/4^j * (2j)! (2j+2) / 2^(2j+2) * delta^(2j)
    out = []
    for j in range(n_terms):
        c = math.comb(2 * j, j) / 4.0**j * math.factorial(2 * j) * (2 * j + 2) / 2.0 ** (2 * j + 2)
        c *= delta ** (2 * j)
        if c > _KUMMER_MAX_COEFF and j > 0:
            break
        out.append(c)
    return out


def _zeta_even(s: int) -> float:
    # zeta(2r) via Bernoulli numbers (tiny s only)

    r = s // 2
    b = _bernoulli(s)[s]
    return float((-1) ** (r + 1) * b) * (2.0 * math.pi) ** s / (2.0 * math.factorial(s))


def _mode_weight(n, polynomial):
    if polynomial == "derived":
        return lambda y: y + 0.5 / n
    if polynomial == "printed":
        return lambda y: 1.0 + 0.5 / n + 0.0 * y
    raise ValueError(f"polynomial must be 'derived' or 'printed', got {polynomial!r}")


def kappa_casimir_massless_series(
    config: KappaConfig,
    series: SeriesSpec | None = None,
    spec: QuadratureSpec | None = None,
    *,
    polynomial: str = "derived",
) -> EnergyResult:
    """Massless energy as a series over reflections ``n``.

    ``E = -(L^2 / 8 pi^2 ell^3) sum_n n^-2 J_n`` with
    ``J_n = int_0^{1/delta} (y + 1/2n) exp(-2 n y) / sqrt(1 - delta^2 y^2) dy``.

    The large-``n`` behaviour ``J_n ~ sum_j c_j n^-(2j+2)`` is subtracted
    term by term and added back through ``zeta(2j + 4)`` (Kummer's
    transformation), which turns an ``n^-4`` tail into an ``n^-10`` one.

    ``polynomial="printed"`` swaps ``y + 1/2n`` for the constant
    ``1 + 1/2n``; that variant does not reduce to the Dirichlet result and
    exists only for comparison.  It is summed without subtraction.
    """
    if config.m != 0:
        raise ValueError("the massless series requires m = 0")
    series = series or SeriesSpec()
    spec = spec or QuadratureSpec()
    delta = config.delta
    coeffs = _kummer_coefficients(delta, _KUMMER_MAX_TERMS) if polynomial == "derived" else []
    quad = {"error": 0.0, "evals": 0, "ok": True}

    restored = math.fsum(c * _zeta_even(2 * j + 4) for j, c in enumerate(coeffs))

    def term(n):
        weight = _mode_weight(n, polynomial)
        # y = sin(theta) / delta removes the endpoint root; the peak of width
        # ~delta/2n at theta = 0 gets its own panel so no node rule can miss it
        def integrand(th):
            return weight(np.sin(th) / delta) * np.exp(-2.0 * n * np.sin(th) / delta) / delta

        res = _split_finite(integrand, 0.0, 0.5 * math.pi, math.asin(min(1.0, _DECAY_SPAN * delta / n)), spec)
        quad["error"] += res.error_estimate / n**2
        quad["evals"] += res.evaluations
        quad["ok"] = quad["ok"] and res.converged
        asymptotic = sum(c / n ** (2 * j + 2) for j, c in enumerate(coeffs))
        # the first term carries the restored part so the stop rule sees the full sum
        return (res.value - asymptotic) / n**2 + (restored if n == 1 else 0.0)

    summed = sum_series(term, series)
    total = summed.value
    pref = -config.big_l**2 / (8.0 * math.pi**2 * config.ell**3)
    energy = pref * total
    diagnostics = {
        "converged": summed.converged and quad["ok"],
        "evaluations": quad["evals"],
        "modes": summed.evaluations,
        "kummer_terms": len(coeffs),
        "method": f"series/{polynomial}",
    }
    err = abs(pref) * (summed.error_estimate + quad["error"])
    return EnergyResult(energy, energy / config.geometry, err, diagnostics)


def photon_rate(
    config: KappaConfig,
    series: SeriesSpec | None = None,
    spec: QuadratureSpec | None = None,
    *,
    full_output: bool = False,
):
    """Magnitude of the vacuum decay exponent ``S`` for a massless field.

    ``S = (L^2 / 4 pi^2 ell^3) sum_n n^-2 exp(-2n/delta) Jt_n`` with
    ``Jt_n = int_{1/delta}^inf (y + 1/2n) exp(-2n (y - 1/delta)) / sqrt(delta^2 y^2 - 1) dy``;
    the lower endpoint is removed by ``y = cosh(t)/delta``, after which the
    integrand is smooth and equals ``(1/delta) exp(x) [y0 K1(x) + K0(x)/2n]``
    in closed form, ``x = 2n/delta``.  The phase
    ``i`` of the printed exponent is dropped, so the persistence factor is
    ``exp(-S)``.

    With ``full_output=True`` returns ``(S, NumResult)``.
    """
    if config.m != 0:
        raise ValueError("the photon rate is defined for massless quanta (m = 0)")
    series = series or SeriesSpec()
    spec = spec or QuadratureSpec()
    delta = config.delta
    y0 = 1.0 / delta
    quad = {"error": 0.0, "evals": 0, "ok": True}

    def term(n):
        damping = math.exp(-2.0 * n * y0)
        if damping == 0.0:
            return 0.0
        # y = cosh(t) / delta; the measure becomes dt / delta
        res = integrate_semi_infinite(
            lambda t: (y0 * np.cosh(t) + 0.5 / n) * np.exp(-4.0 * n * y0 * np.sinh(0.5 * t) ** 2) / delta,
            0.0, spec, scale=min(1.0, 1.0 / math.sqrt(n * y0)),
        )
        quad["error"] += res.error_estimate * damping / n**2
        quad["evals"] += res.evaluations
        quad["ok"] = quad["ok"] and res.converged
        return res.value * damping / n**2

    summed = sum_series(term, series)
    pref = config.big_l**2 / (4.0 * math.pi**2 * config.ell**3)
    value = pref * summed.value
    err = pref * (summed.error_estimate + quad["error"])
    result = NumResult(value, err, quad["evals"], bool(summed.converged and quad["ok"]))
    return (value, result) if full_output else value


def photon_rate_direct(config: KappaConfig, spec: QuadratureSpec | None = None) -> NumResult:
    """``S`` from the cut integral of ``|I(q^2)|`` over ``q > 1/eta`` (cross-check form)."""
    if config.m != 0:
        raise ValueError("the photon rate is defined for massless quanta (m = 0)")
    spec = spec or QuadratureSpec(abs_tol=0.0)
    eta, ell = config.eta, config.ell
    inner = np.vectorize(lambda q: -_inner_closed(q, ell, 0.0), otypes=[float])

    def integrand(q):
        return inner(q) / np.sqrt((eta * q - 1.0) * (eta * q + 1.0))

    res = integrate_sqrt_singular(integrand, 1.0 / eta, math.inf, "left", spec,
                                  scale=min(1.0, math.sqrt(eta / ell)))
    pref = config.big_l**2 / (2.0 * math.pi**2)
    return NumResult(pref * res.value, pref * res.error_estimate, res.evaluations, res.converged)
