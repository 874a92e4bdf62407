"""Independent reference values, computed with scipy and mpmath only.

Nothing here imports the package under test.  Running

    python tests/oracles.py

recomputes every value and rewrites ``tests/frozen_oracles.json``; the test
suite reads the frozen file and only recomputes a few cheap entries live
to make sure the file has not drifted from the oracles.
"""
from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import mpmath as mp
import numpy as np
import scipy
from scipy import integrate, special

FROZEN_PATH = Path(__file__).with_name("frozen_oracles.json")

KAPPA_DELTAS = (1e-4, 1e-3, 1e-2, 0.1, 0.25, 0.5, 1.0, 4.0, 10.0)
PHOTON_DELTAS = (0.01, 0.1, 0.5, 1.0, 2.0, 5.0)
MAGNETIC_POINTS = ((1.0, 0.0), (1.0, 1.0), (5.0, 2.0))


def bessel_k_integral(order: int, x: float) -> float:
    """K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt, brute force in mpmath."""
    with mp.workdps(40):
        f = lambda t: mp.exp(-x * mp.cosh(t)) * mp.cosh(order * t)
        # exp(-cosh 8) ~ 1e-647: the tail beyond t = 8 is irrelevant at 40 digits
        return float(mp.quad(f, [0, 1, 3, 6, 8]))


def polylog_series(order: int, x: float) -> float:
    """Sum x^k / k^order directly, with Richardson extrapolation only at x = 1."""
    with mp.workdps(40):
        if x == 1:
            return float(mp.nsum(lambda k: 1 / k**order, [1, mp.inf]))
        return float(mp.fsum(mp.mpf(x) ** k / mp.mpf(k) ** order for k in range(1, 400)))


def bessel_sum_k1(terms: int = 200) -> float:
    """sum_{k<=200} K1(2k)/k with scipy's K1."""
    return math.fsum(special.k1(2.0 * k) / k for k in range(1, terms + 1))


def _log1m_exp(z):
    # ln(1 - exp(-2z)), accurate for small and large z
    return np.where(z < 0.35, np.log(-np.expm1(-2.0 * z)), np.log1p(-np.exp(-2.0 * z)))


def boson_magnetic_direct(b: float, mu: float, n_max: int = 200) -> float:
    """Landau sum of longitudinal log integrals, before any Bessel reduction.

    e0 = (b / 2 pi^2) sum_n int_0^inf ln(1 - exp(-2 sqrt(x^2 + M_n^2))) dx.
    """
    total = []
    for n in range(n_max + 1):
        m2 = (2 * n + 1) * b + mu * mu
        f = lambda x: float(_log1m_exp(math.sqrt(x * x + m2)))
        val, _ = integrate.quad(f, 0, np.inf, epsabs=0, epsrel=1e-13, limit=400)
        total.append(val)
        if abs(val) < 1e-18 * abs(math.fsum(total)):
            break
    return b / (2 * math.pi**2) * math.fsum(total)


def fermion_magnetic_direct(b: float, mu: float, n_max: int = 400) -> float:
    """Sum over (n, alpha) of longitudinal log integrals for MIT plates.

    e0 = -(b / pi^2) (1/2) sum_n sum_{alpha=+-1}
         int_0^inf ln(1 + (z - mu)/(z + mu) exp(-2z)) dx,
    z^2 = x^2 + (2n + 1 - alpha) b + mu^2.
    """
    total = []
    for n in range(n_max + 1):
        level = 0.0
        for alpha in (1, -1):
            m2 = (2 * n + 1 - alpha) * b + mu * mu

            def f(x):
                z = math.sqrt(x * x + m2)
                return math.log1p((z - mu) / (z + mu) * math.exp(-2.0 * z))

            val, _ = integrate.quad(f, 0, np.inf, epsabs=0, epsrel=1e-13, limit=400)
            level += val
        total.append(level)
        if abs(level) < 1e-18 * abs(math.fsum(total)):
            break
    return -(b / math.pi**2) * 0.5 * math.fsum(total)


def i_pk_trapezoid(p: int, k: int, b: float, mu: float, points: int = 400_001) -> float:
    """Trapezoid rule on [0, 40]; the integrand is even in x so the rule is spectrally accurate."""
    x = np.linspace(0.0, 40.0, points)
    s = np.sqrt(x * x + 2.0 * (p + 1) * b + mu * mu)
    y = ((s - mu) / (s + mu)) ** k * np.exp(-2.0 * k * s)
    return float(np.trapezoid(y, x) if hasattr(np, "trapezoid") else np.trapz(y, x))


def kappa_inner_direct(q: float, m: float = 0.0, ell: float = 1.0) -> float:
    with mp.workdps(30):
        a = mp.sqrt(mp.mpf(q) ** 2 + m * m)
        f = lambda t: t * mp.log(-mp.expm1(-2 * ell * t))
        return float(mp.quad(f, [a, a + 1, a + 10, mp.inf]))


def _inner_mpmath(q, m, ell):
    a = mp.sqrt(q * q + m * m)
    z = mp.exp(-2 * ell * a)
    return -(a * mp.polylog(2, z) + mp.polylog(3, z) / (2 * ell)) / (2 * ell)


def kappa_energy_direct(delta: float, m: float = 0.0, ell: float = 1.0) -> float:
    """e0 = (1/4 pi^2) int_0^{1/eta} I(q)/sqrt(1 - eta^2 q^2) dq, tanh-sinh in mpmath."""
    eta = delta * ell
    with mp.workdps(30):
        top = 1 / mp.mpf(eta)
        f = lambda q: _inner_mpmath(q, m, ell) / mp.sqrt((1 - eta * q) * (1 + eta * q))
        cuts = [0] + [c for c in (1, 5, 25) if c < top] + [top]
        val = mp.quad(f, cuts)
        return float(val / (4 * mp.pi**2) * ell**3)


def photon_rate_bessel(delta: float, terms: int = 2000) -> float:
    """S = (1/4 pi^2) sum_n n^-2 (1/delta)[(1/delta) K1(2n/delta) + K0(2n/delta)/(2n)], scipy kve."""
    acc = []
    for n in range(1, terms + 1):
        x = 2.0 * n / delta
        scaled = (special.kve(1, x) / delta + special.kve(0, x) / (2 * n)) / delta
        log_term = math.log(scaled) - x - 2.0 * math.log(n)
        if log_term < -745:
            break
        acc.append(math.exp(log_term))
    return math.fsum(acc) / (4 * math.pi**2)


def photon_rate_direct(delta: float, ell: float = 1.0) -> float:
    """S = (1/2 pi^2) int_{1/eta}^inf |I(q)| / sqrt(eta^2 q^2 - 1) dq in mpmath (q = cosh t / eta)."""
    eta = delta * ell
    with mp.workdps(30):
        f = lambda t: -_inner_mpmath(mp.cosh(t) / eta, 0, ell) / eta
        # beyond q = 1/eta + 150/ell the integrand is below exp(-300) of its peak
        t_max = mp.acosh(1 + 150 * eta / ell)
        cuts = [0] + [c for c in (0.25, 1, 3) if c < t_max] + [t_max]
        val = mp.quad(f, cuts)
        return float(val / (2 * mp.pi**2))


def compute_all() -> dict:
    values = {
        "bessel_k0_1": bessel_k_integral(0, 1.0),
        "bessel_k1_1": bessel_k_integral(1, 1.0),
        "li2_half": polylog_series(2, 0.5),
        "li2_one": polylog_series(2, 1.0),
        "li3_one": polylog_series(3, 1.0),
        "sum_k1_2k_over_k": bessel_sum_k1(),
        "i_pk_p0_k1_b1_mu1": i_pk_trapezoid(0, 1, 1.0, 1.0),
        "kappa_inner_q1": kappa_inner_direct(1.0),
        "boson_magnetic": {f"{b:g},{mu:g}": boson_magnetic_direct(b, mu) for b, mu in MAGNETIC_POINTS},
        "fermion_magnetic": {f"{b:g},{mu:g}": fermion_magnetic_direct(b, mu) for b, mu in MAGNETIC_POINTS[:2]},
        "kappa_energy": {f"{d:g}": kappa_energy_direct(d) for d in KAPPA_DELTAS},
        "photon_rate_bessel": {f"{d:g}": photon_rate_bessel(d) for d in PHOTON_DELTAS},
        "photon_rate_direct": {f"{d:g}": photon_rate_direct(d) for d in (0.25, 1.0, 4.0)},
    }
    return values


def freeze(path: Path = FROZEN_PATH) -> dict:
    doc = {
        "generated_by": "python tests/oracles.py",
        "libraries": {"numpy": np.__version__, "scipy": scipy.__version__, "mpmath": mp.__version__},
        "values": compute_all(),
    }
    path.write_text(json.dumps(doc, indent=2) + "\n")
    return doc


def load_frozen(path: Path = FROZEN_PATH) -> dict:
    return json.loads(path.read_text())["values"]


if __name__ == "__main__":
    out = freeze(Path(sys.argv[1]) if len(sys.argv) > 1 else FROZEN_PATH)
    print(json.dumps(out, indent=2))
