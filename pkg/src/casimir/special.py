"""Special functions used by the vacuum-energy models.

Modified Bessel functions K0 and K1, the polylogarithms Li2 and Li3 on
[0, 1], and Gamma at half-integer arguments.  Everything here is scalar,
pure and thread-safe.

Bessel strategy
---------------
For ``x <= 2`` the ascending series (A&S 9.6.11) is summed directly.  For
``x > 2`` the scaled function ``exp(x) K_nu(x)`` is obtained from the
integral representation

    exp(x) K_nu(x) = int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt

with the trapezoidal rule, which converges geometrically for this entire,
rapidly decaying integrand.  The step is shrunk like ``1/sqrt(x)`` so the
Gaussian core of width ``1/sqrt(x)`` stays resolved for large arguments.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "FnAccuracy",
    "BesselUnderflowWarning",
    "bessel_k",
    "bessel_k_scaled",
    "polylog",
    "gamma_half",
    "ZETA2",
    "ZETA3",
]

EULER_GAMMA = 0.57721566490153286061
ZETA2 = math.pi**2 / 6
ZETA3 = 1.2020569031595942854

# K_nu(x) < 1e-305 beyond this point; returned as 0.
BESSEL_UNDERFLOW_X = 700.0
_SERIES_MAX_X = 2.0
_DOUBLE_EPS = 2.0**-53


class BesselUnderflowWarning(RuntimeWarning):
    """K_nu(x) underflowed and was returned as 0."""


@dataclass(frozen=True)
class FnAccuracy:
    """Relative accuracy target for a special-function evaluation."""

    rel_tol: float = 1e-12

    def __post_init__(self):
        if not (0.0 < self.rel_tol < 1e-3):
            raise ValueError(f"rel_tol must lie in (0, 1e-3), got {self.rel_tol!r}")


def _truncation(accuracy: FnAccuracy | None) -> float:
    # None means "as good as double precision allows".
    if accuracy is None:
        return _DOUBLE_EPS
    return accuracy.rel_tol


def _check_order(order, allowed):
    if order not in allowed:
        raise ValueError(f"order must be one of {sorted(allowed)}, got {order!r}")


def _bessel_k_series(order: int, x: float, tol: float) -> float:
    y = 0.25 * x * x
    log_half = math.log(0.5 * x)
    if order == 0:
        # K0 = -ln(x/2) I0 + sum psi(k+1) y^k / (k!)^2
        term = 1.0
        psi = -EULER_GAMMA
        i0 = 0.0
        rest = 0.0
        k = 0
        while True:
            i0 += term
            rest += psi * term
            k += 1
            term *= y / (k * k)
            psi += 1.0 / k
            if term * (1.0 + abs(psi)) < tol * abs(rest - log_half * i0):
                break
        return -log_half * i0 + rest
    # K1 = 1/x + ln(x/2) I1 - (x/4) sum (psi(k+1) + psi(k+2)) y^k / (k! (k+1)!)
    term = 1.0
    psi1 = -EULER_GAMMA
    psi2 = 1.0 - EULER_GAMMA
    i1 = 0.0
    rest = 0.0
    k = 0
    while True:
        i1 += term
        rest += (psi1 + psi2) * term
        k += 1
        term *= y / (k * (k + 1))
        psi1 += 1.0 / k
        psi2 += 1.0 / (k + 1)
        if term * (psi1 + psi2 + 1.0) < tol * abs(i1):
            break
    return 1.0 / x + log_half * 0.5 * x * i1 - 0.25 * x * rest


def _bessel_k_scaled_trapezoid(order: int, x: float, tol: float) -> float:
    h = min(0.2, 0.6 / math.sqrt(x))
    total = 0.5  # t = 0 node, cosh(0) = 1, halved
    j = 1
    while True:
        t = j * h
        arg = x * 2.0 * math.sinh(0.5 * t) ** 2
        val = math.exp(-arg)
        if order == 1:
            val *= math.cosh(t)
        total += val
        if val < tol * total * 1e-2 or arg > 745.0:
            break
        j += 1
    return h * total


def bessel_k_scaled(order: int, x: float, accuracy: FnAccuracy | None = None) -> float:
    """Return ``exp(x) * K_order(x)`` for order 0 or 1 and ``x > 0``."""
    _check_order(order, {0, 1})
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"bessel_k requires x > 0, got {x!r}")
    tol = _truncation(accuracy)
    if x <= _SERIES_MAX_X:
        return math.exp(x) * _bessel_k_series(order, x, tol)
    return _bessel_k_scaled_trapezoid(order, x, tol)


def bessel_k(order: int, x: float, accuracy: FnAccuracy | None = None) -> float:
    """Modified Bessel function of the second kind, K_0 or K_1.

    Parameters
    ----------
    order : {0, 1}
    x : float
        Strictly positive argument.
    accuracy : FnAccuracy, optional
        Relative accuracy target; defaults to full double precision.

    Returns
    -------
    float
        ``K_order(x)``.  For ``x > 700`` the value is below the normal
        double range; ``0.0`` is returned and a
        :class:`BesselUnderflowWarning` is emitted.
    """
    _check_order(order, {0, 1})
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"bessel_k requires x > 0, got {x!r}")
    tol = _truncation(accuracy)
    if x <= _SERIES_MAX_X:
        return _bessel_k_series(order, x, tol)
    if x > BESSEL_UNDERFLOW_X:
        warnings.warn(
            f"K_{order}({x:g}) underflows; returning 0", BesselUnderflowWarning, stacklevel=2
        )
        return 0.0
    return math.exp(-x) * _bessel_k_scaled_trapezoid(order, x, tol)


@lru_cache(maxsize=None)
def _bernoulli(n_max: int) -> tuple:
    # Akiyama-Tanigawa; returns B_0..B_n_max with B_1 = +1/2 (only even ones are used).
    out = []
    a = [Fraction(0)] * (n_max + 1)
    for m in range(n_max + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


@lru_cache(maxsize=None)
def _li3_log_coefficients(n_terms: int = 40) -> tuple:
    """zeta(3 - k) / k! for k = 3 .. n_terms, used in the expansion about x = 1."""
    bern = _bernoulli(n_terms + 1)
    coeffs = []
    for k in range(3, n_terms + 1):
        j = k - 3
        zeta_neg = Fraction(-1, 2) if j == 0 else -bern[j + 1] / (j + 1)
        coeffs.append(float(zeta_neg / math.factorial(k)))
    return tuple(coeffs)


def _polylog_series(order: int, x: float, tol: float) -> float:
    total = 0.0
    power = 1.0
    k = 0
    while True:
        k += 1
        power *= x
        term = power / k**order
        total += term
        # geometric tail bound: next terms shrink at least by x
        if term * x / (1.0 - x) <= tol * total:
            return total


def _li3_near_one(x: float, tol: float) -> float:
    # Li3(e^m) = z3 + z2 m + m^2/2 (3/2 - ln(-m)) + sum_{k>=3} zeta(3-k) m^k / k!
    m = math.log(x)
    total = ZETA3 + ZETA2 * m + 0.5 * m * m * (1.5 - math.log(-m))
    power = m * m
    for c in _li3_log_coefficients():
        power *= m
        term = c * power
        total += term
        if c != 0.0 and abs(term) < tol * abs(total):
            break
    return total


def polylog(order: int, x: float, accuracy: FnAccuracy | None = None) -> float:
    """Polylogarithm ``Li_order(x) = sum_k x^k / k^order`` for order 2 or 3 on [0, 1].

    Uses the defining series for ``x <= 1/2``.  Above 1/2, Li2 goes through
    the reflection ``Li2(x) = pi^2/6 - ln(x) ln(1-x) - Li2(1-x)`` and Li3
    through its expansion in powers of ``ln x``.
    """
    _check_order(order, {2, 3})
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"polylog requires 0 <= x <= 1, got {x!r}")
    tol = _truncation(accuracy)
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return ZETA2 if order == 2 else ZETA3
    if x <= 0.5:
        return _polylog_series(order, x, tol)
    if order == 2:
        y = 1.0 - x
        return ZETA2 - math.log(x) * math.log(y) - _polylog_series(2, y, tol)
    return _li3_near_one(x, tol)


def gamma_half(two_a: int) -> float:
    """Gamma(two_a / 2) for a positive integer ``two_a``, by upward recursion."""
    if isinstance(two_a, bool) or int(two_a) != two_a:
        raise TypeError(f"two_a must be an integer, got {two_a!r}")
    two_a = int(two_a)
    if two_a <= 0:
        raise ValueError(f"two_a must be positive, got {two_a}")
    if two_a % 2 == 0:
        value, z = 1.0, 1.0
    else:
        value, z = math.sqrt(math.pi), 0.5
    while 2 * z < two_a:
        value *= z
        z += 1.0
    return value
