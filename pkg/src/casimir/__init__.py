"""Regularised Casimir energies between parallel plates.

The vacuum energy of a field confined by two plates is written as a single
integral over imaginary frequency of ``ln(1 + K1/K2)``, where ``K1 + K2``
is the analytically continued function whose zeros are the allowed modes.
The package evaluates that integral for Dirichlet scalars and MIT-bag
fermions, the Landau-level sums of charged fields in a normal magnetic
field, and a scalar with a deformed dispersion relation together with its
vacuum-decay exponent.  Quadrature, series acceleration and the special
functions are implemented here; only numpy is required.
"""
from .kappa import (
    KappaConfig,
    kappa_casimir_energy,
    kappa_casimir_massless_series,
    kappa_inner_integral,
    photon_rate,
    photon_rate_direct,
)
from .kernel import (
    BoundaryKernel,
    EnergyResult,
    SlabConfig,
    casimir_energy_slab,
    default_fermion_degeneracy,
    dirichlet_scalar_kernel,
    log_ratio,
    mit_fermion_kernel,
)
from .magnetic import (
    MagneticConfig,
    boson_energy_magnetic,
    boson_strong_field_asymptote,
    fermion_energy_magnetic,
    fermion_massive_limit,
    fermion_massless_limit,
    i_pk_integral,
)
from .quadrature import (
    NumResult,
    QuadratureError,
    QuadratureSpec,
    SeriesSpec,
    integrate_finite,
    integrate_semi_infinite,
    integrate_sqrt_singular,
    sum_alternating,
    sum_series,
)
from .special import FnAccuracy, bessel_k, gamma_half, polylog

__version__ = "0.1.0"
