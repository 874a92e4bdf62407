import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate

from casimir.kernel import (
    BoundaryKernel,
    EnergyResult,
    SlabConfig,
    casimir_energy_slab,
    default_fermion_degeneracy,
    dirichlet_scalar_kernel,
    log_ratio,
    mit_fermion_kernel,
    slab_prefactor,
)
from casimir.quadrature import QuadratureSpec

DIRICHLET_3D = -math.pi**2 / 1440
MIT_3D = -7 * math.pi**2 / 2880


def builtin_kernels(mu=0.0):
    return [dirichlet_scalar_kernel(), mit_fermion_kernel(mu)]


def test_log_ratio_examples():
    assert log_ratio(dirichlet_scalar_kernel(), 1.0) == pytest.approx(math.log(1 - math.exp(-2)), rel=1e-15)
    assert log_ratio(dirichlet_scalar_kernel(), 1.0) == pytest.approx(-0.14541345, abs=1e-8)
    assert log_ratio(mit_fermion_kernel(0.0), 1.0) == pytest.approx(0.12692801, abs=1e-8)
    assert log_ratio(dirichlet_scalar_kernel(), 2.0) == pytest.approx(math.log(1 - math.exp(-4)), rel=1e-15)
    for mu in (0.0, 1.0, 5.0):
        assert abs(log_ratio(mit_fermion_kernel(mu), 60.0)) < 1e-50


def test_log_ratio_vectorised_and_accurate_in_the_tail():
    w = np.array([0.01, 0.3, 1.0, 10.0, 30.0])
    got = log_ratio(dirichlet_scalar_kernel(), w)
    with mp.workdps(60):
        ref = [float(mp.log(1 - mp.exp(-2 * mp.mpf(x)))) for x in w]
    np.testing.assert_allclose(got, ref, rtol=1e-14)


def test_log_ratio_rejects_invalid_kernel():
    bad = BoundaryKernel(lambda w: -2.0 * np.ones_like(w), lambda w: np.ones_like(w))
    with pytest.raises(ValueError):
        log_ratio(bad, 1.0)


def test_generic_kernel_without_closed_forms():
    # the MIT kernel given only through k1 and k2 reproduces the built-in result
    mu = 0.7
    ref = mit_fermion_kernel(mu)
    plain = BoundaryKernel(ref.k1, ref.k2, -1, 2.0)
    cfg = SlabConfig(d=3, mu=mu)
    assert casimir_energy_slab(plain, cfg).energy == pytest.approx(casimir_energy_slab(ref, cfg).energy, rel=1e-12)


def test_dirichlet_kernel_identities():
    k = dirichlet_scalar_kernel()
    assert float(k.k1(np.array(1.0)) + k.k2(np.array(1.0))) == pytest.approx(math.sinh(1.0), rel=1e-15)
    assert math.sinh(1.0) == pytest.approx(1.1752012, abs=1e-7)
    for w in (0.5, 1.0, 2.0):
        x = np.array(w)
        assert abs(float(k.k1(x) + k.k2(x)) - math.sinh(w) / w) < 1e-14


def test_mit_kernel_ratio_examples():
    assert mit_fermion_kernel(0.0).k_ratio(1.3) == pytest.approx(math.exp(-2.6), rel=1e-15)
    assert mit_fermion_kernel(1.0).k_ratio(1.0) == 0.0
    assert mit_fermion_kernel(2.0).k_ratio(3.0) == pytest.approx(math.exp(-6) / 5, rel=1e-15)
    assert mit_fermion_kernel(2.0).k_ratio(3.0) == pytest.approx(4.9575e-4, rel=1e-4)
    with pytest.raises(ValueError):
        mit_fermion_kernel(-1.0)


@pytest.mark.parametrize("mu", [0.0, 0.5, 3.0])
def test_kernel_invariants(mu):
    for k in builtin_kernels(mu):
        assert abs(k.k1(np.array(50.0)) / k.k2(np.array(50.0))) < 1e-8
        w = np.linspace(max(mu, 1e-3), 40, 200)
        assert np.all(1 + k.k_ratio(w) > 0)
        for x in (0.7, 1.5, 4.0):
            assert float(k.k1(np.array(x))) == pytest.approx(float(k.k2(np.array(-x))), rel=1e-14)


def test_default_fermion_degeneracy():
    assert [default_fermion_degeneracy(d) for d in (1, 2, 3, 4, 5)] == [1.0, 1.0, 2.0, 2.0, 4.0]


def test_prefactors():
    assert slab_prefactor(3, 1, 1.0) == pytest.approx(1 / (8 * math.pi**1.5 * math.gamma(1.5)), rel=1e-15)
    assert slab_prefactor(3, -1, 2.0) == pytest.approx(-2 / (4 * math.pi**1.5 * math.gamma(1.5)), rel=1e-15)


def test_reference_energies():
    e = casimir_energy_slab(dirichlet_scalar_kernel(), SlabConfig(d=3))
    assert e.converged and e.dimensionless_energy == pytest.approx(DIRICHLET_3D, rel=1e-12)
    e = casimir_energy_slab(dirichlet_scalar_kernel(), SlabConfig(d=1, ell=2.5))
    assert e.energy == pytest.approx(-math.pi / (24 * 2.5), rel=1e-12)
    e = casimir_energy_slab(mit_fermion_kernel(0.0, 2.0), SlabConfig(d=3))
    assert e.dimensionless_energy == pytest.approx(MIT_3D, rel=1e-12)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_dirichlet_series_reduction(d):
    # ln(1 - e^{-2w}) = -sum e^{-2kw}/k gives -Gamma(d) zeta(d+1) / 2^d for the integral
    integral = -math.gamma(d) * float(mp.zeta(d + 1)) / 2**d
    expected = slab_prefactor(d, 1, 1.0) * integral
    e = casimir_energy_slab(dirichlet_scalar_kernel(), SlabConfig(d=d))
    assert e.dimensionless_energy == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("d,mu", [(1, 0.5), (1, 3.0), (2, 1.0), (3, 2.0), (4, 0.3), (3, 12.0)])
def test_massive_slab_against_scipy(d, mu):
    for k in builtin_kernels(mu):
        def f(w):
            return w * (w * w - mu * mu) ** (d / 2 - 1) * math.log1p(float(k.k_ratio(w))) * math.exp(2 * mu)
        if d == 1:
            # w / sqrt(w^2 - mu^2) with w = mu cosh t
            val, _ = integrate.quad(lambda t: mu * math.cosh(t) * math.exp(2 * mu)
                                    * math.log1p(float(k.k_ratio(mu * math.cosh(t)))), 0, 40,
                                    epsabs=0, epsrel=1e-13, limit=200)
        else:
            val, _ = integrate.quad(f, mu, np.inf, epsabs=0, epsrel=1e-13, limit=200)
        expected = slab_prefactor(d, k.statistics_sign, k.degeneracy) * val * math.exp(-2 * mu)
        e = casimir_energy_slab(k, SlabConfig(d=d, mu=mu))
        assert e.converged
        assert e.dimensionless_energy == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("lam", [0.5, 2.0, 10.0])
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_scaling_law(lam, d):
    for k in builtin_kernels():
        base = casimir_energy_slab(k, SlabConfig(d=d, ell=1.0)).energy
        scaled = casimir_energy_slab(k, SlabConfig(d=d, ell=lam)).energy
        assert scaled * lam**d == pytest.approx(base, rel=1e-9)


def test_energy_relation_and_geometry():
    e = casimir_energy_slab(dirichlet_scalar_kernel(), SlabConfig(d=3, ell=0.3, big_l=7.0, mu=0.4))
    assert e.energy == e.dimensionless_energy * (7.0**2 / 0.3**3)
    assert isinstance(e, EnergyResult)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_negativity_and_mass_monotonicity(d):
    grid = [0, 0.5, 1, 2, 4, 8]
    for mu_values, factory in ((grid, dirichlet_scalar_kernel), (grid, None)):
        energies = []
        for mu in mu_values:
            k = factory() if factory else mit_fermion_kernel(mu, default_fermion_degeneracy(d))
            e = casimir_energy_slab(k, SlabConfig(d=d, mu=mu))
            assert e.converged and e.energy < 0
            energies.append(abs(e.energy))
        assert all(a > b for a, b in zip(energies, energies[1:]))
    for mu in np.linspace(0, 10, 11):
        for k in builtin_kernels(mu):
            assert casimir_energy_slab(k, SlabConfig(d=d, mu=mu)).energy < 0


def test_heavy_fields_vanish():
    for k in builtin_kernels(300.0):
        e = casimir_energy_slab(k, SlabConfig(d=3, mu=300.0))
        assert e.converged and -1e-250 < e.energy < 0
    e = casimir_energy_slab(dirichlet_scalar_kernel(), SlabConfig(d=3, mu=400.0))
    assert e.energy <= 0 and abs(e.energy) < 1e-300


def test_mit_large_mass_decay_rate():
    logs = [math.log(abs(casimir_energy_slab(mit_fermion_kernel(mu), SlabConfig(d=3, mu=mu)).energy))
            for mu in (6, 7, 8, 9)]
    for a, b in zip(logs, logs[1:]):
        assert 1.8 <= a - b <= 2.2


def test_config_validation():
    for kwargs in ({"d": 0}, {"d": 1.5}, {"d": 3, "ell": 0}, {"d": 3, "big_l": -1}, {"d": 3, "mu": -0.1}):
        with pytest.raises(ValueError):
            SlabConfig(**kwargs)
    with pytest.raises(ValueError):
        BoundaryKernel(np.exp, np.exp, statistics_sign=0)
    with pytest.raises(ValueError):
        BoundaryKernel(np.exp, np.exp, degeneracy=0)


def test_tolerance_is_forwarded():
    loose = casimir_energy_slab(dirichlet_scalar_kernel(), SlabConfig(d=3), QuadratureSpec(rel_tol=1e-4))
    tight = casimir_energy_slab(dirichlet_scalar_kernel(), SlabConfig(d=3), QuadratureSpec(rel_tol=1e-13))
    assert loose.diagnostics["evaluations"] <= tight.diagnostics["evaluations"]
    assert tight.dimensionless_energy == pytest.approx(DIRICHLET_3D, rel=1e-13)
