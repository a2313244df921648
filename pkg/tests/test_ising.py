"""Ising quantities: parameters, free energy, correlations, magnetization, leading laws."""

import math

import numpy as np
import pytest

from toeplitzlab.constants import GLAISHER_A
from toeplitzlab.exactdet import toeplitz_det
from toeplitzlab.ising import (CRITICAL, SUBCRITICAL, SUPERCRITICAL, IsingParams,
                               correlation, critical_chi, diag_symbol, free_energy,
                               ising_params, magnetization, onsager_symbol,
                               w_product, w_tilde_product, wu_leading)
from toeplitzlab.symbols import builtin


# ---------------------------------------------------------------------------
# parameters and regimes
# ---------------------------------------------------------------------------

def test_critical_coupling_root():
    chi = critical_chi()
    assert abs(math.sinh(2 * chi) - 1.0) < 1e-14
    p = ising_params(chi, chi)
    assert p.regime == CRITICAL
    assert abs(p.k_ons - 1.0) < 1e-12


def test_symmetric_critical_gamma1():
    p = ising_params(critical_chi(), critical_chi())
    assert abs(p.gamma1 - (3.0 - 2.0 * math.sqrt(2.0))) < 1e-12
    assert abs(p.gamma2 - 1.0) < 1e-12


def test_low_temperature_subcritical():
    p = ising_params(1.5, 1.5)
    assert p.regime == SUBCRITICAL and p.k_ons < 1


def test_nonpositive_couplings_rejected():
    with pytest.raises(ValueError):
        ising_params(0.0, 1.0)


def test_regime_dichotomy_random_couplings():
    rng = np.random.default_rng(3)
    for _ in range(200):
        chi1, chi2 = rng.uniform(0.05, 2.0, 2)
        p = ising_params(chi1, chi2)
        if p.regime == SUBCRITICAL:
            assert p.gamma2 < 1 and p.k_ons < 1
        elif p.regime == SUPERCRITICAL:
            assert p.gamma2 > 1 and p.k_ons > 1
        else:
            assert abs(p.gamma2 - 1) < 1e-10 and abs(p.k_ons - 1) < 1e-10


# ---------------------------------------------------------------------------
# free energy
# ---------------------------------------------------------------------------

def test_free_energy_forms_agree():
    p = ising_params(0.55, 0.55)
    a = free_energy(p, "single_integral")
    b = free_energy(p, "double_integral")
    assert abs(a - b) < 1e-10


def test_free_energy_kappa_zero_limit():
    # kappa = 0: log(1) integrand, -F/kT = log(2 cosh 2 chi)
    p0 = ising_params(0.5, 0.5)
    p = IsingParams(p0.chi1, p0.chi2, p0.z1, p0.z2, p0.z2_star, p0.gamma1,
                    p0.gamma2, p0.k_ons, 0.0, p0.regime)
    for form in ("single_integral", "double_integral"):
        assert abs(free_energy(p, form) - math.log(2 * math.cosh(1.0))) < 1e-11


def test_free_energy_critical_finite():
    p = ising_params(critical_chi(), critical_chi())
    a = free_energy(p, "single_integral")
    b = free_energy(p, "double_integral")
    assert math.isfinite(a) and math.isfinite(b)
    assert abs(a - b) < 1e-9


def test_free_energy_requires_symmetric():
    with pytest.raises(ValueError):
        free_energy(ising_params(0.4, 0.5))


# ---------------------------------------------------------------------------
# correlations
# ---------------------------------------------------------------------------

def test_diag_correlation_kzero_is_one():
    sym = diag_symbol(0.0)
    for n in (1, 3, 7):
        assert abs(toeplitz_det(sym, n).value - 1.0) < 1e-14


def test_diag_critical_gamma_product_matches_determinant():
    p = ising_params(critical_chi(), critical_chi())
    n = 20
    a = correlation(p, "diag", n, route="gamma_product").value
    b = correlation(p, "diag", n).value
    assert abs(a - b) <= 1e-9 * abs(a)


def test_w_tilde_decays_faster():
    assert w_tilde_product(12) < w_product(12) * 0.05


def test_diag_limit_value():
    # k = 0.5: D_n -> (1 - 0.25)^{1/4} exponentially fast
    d = toeplitz_det(builtin("diag", k_ons=0.5), 40).real_value
    assert abs(d - 0.75 ** 0.25) < 1e-6


def test_row_correlation_approaches_m0_squared():
    # deep subcritical: the limit is reached to beyond test precision by n = 40
    p = ising_params(0.7, 0.7)
    assert abs(correlation(p, "row", 40).value - magnetization(p) ** 2) < 1e-10
    # nearer criticality the exponentially shrinking gap is resolvable and
    # follows the printed leading bracket
    p = ising_params(0.45, 0.45)
    m0sq = magnetization(p) ** 2
    ns = (10, 20, 40, 60)
    gaps = [abs(correlation(p, "row", n).value - m0sq) for n in ns]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    ratios = []
    for n, gap in zip(ns, gaps):
        bracket = m0sq * p.gamma2 ** (2 * n) \
            / (2 * math.pi * n * n * (1 / p.gamma2 - p.gamma2) ** 2)
        ratios.append(gap / bracket)
    # the bracket is the leading term: its ratio to the true gap climbs toward 1
    assert all(0.1 < r < 3.0 for r in ratios)
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    assert abs(ratios[-1] - 1.0) < 0.5


def test_onsager_sslt_constant_closed_form():
    # E(phi_ons) = (1/4) log [(1-g1^2)(1-g2^2)/(1-g1 g2)^2]
    from toeplitzlab.asympt import szego_fh_predict
    p = ising_params(0.8, 0.8)
    pred = szego_fh_predict(onsager_symbol(p))
    (a, pw, c), = pred.terms
    g1, g2 = p.gamma1, p.gamma2
    expect = 0.25 * math.log((1 - g1 ** 2) * (1 - g2 ** 2) / (1 - g1 * g2) ** 2)
    assert abs(c - expect) < 1e-10
    assert abs(a) < 1e-13 and abs(pw) < 1e-13


def test_critical_diagonal_decay_with_correction():
    # n^{1/4} <ss> -> e^{1/4} A^{-3} 2^{1/12}, residual consistent with -1/(64 n^2)
    lead = math.exp(0.25) * GLAISHER_A ** -3 * 2 ** (1.0 / 12.0)
    for n in (16, 64):
        val = w_product(n) * n ** 0.25
        resid = val - lead
        assert abs(resid) <= 3.0 / (64.0 * n * n) * lead
        assert resid < 0  # the printed correction is negative


def test_supercritical_factorization_eq106():
    # D_n(phi_ons) = pi-hat_n(0) D_n(phi~) at T > T_c
    from toeplitzlab.exactdet import opuc_at_points
    from toeplitzlab.symbols import CircleSymbol
    p = ising_params(0.25, 0.25)
    assert p.regime == SUPERCRITICAL
    ons = onsager_symbol(p)
    tilde = CircleSymbol(ons.smooth, (), ons.prefactor, label="tilde")
    n = 10
    lhs = toeplitz_det(ons, n).value
    rhs = opuc_at_points(tilde, n, [0.0], complementary=True).values[0.0] \
        * toeplitz_det(tilde, n).value
    assert abs(lhs - rhs) <= 1e-8 * abs(lhs)


# ---------------------------------------------------------------------------
# magnetization and leading laws
# ---------------------------------------------------------------------------

def test_magnetization_values():
    p = ising_params(0.8, 0.8)
    assert abs(magnetization(p) - (1 - p.k_ons ** 2) ** 0.125) < 1e-14
    assert magnetization(ising_params(0.2, 0.2)) == 0.0
    assert magnetization(ising_params(critical_chi(), critical_chi())) == 0.0


def test_wu_symmetric_critical_row():
    p = ising_params(critical_chi(), critical_chi())
    n = 50
    expect = math.exp(0.25) * 2 ** (5.0 / 24.0) * GLAISHER_A ** -3 * n ** -0.25
    assert abs(wu_leading(p, "row", n) - expect) < 1e-12 * expect


def test_wu_subcritical_row_bracket():
    p = ising_params(0.7, 0.7)
    n = 12
    m0sq = (1 - p.k_ons ** 2) ** 0.25
    expect = m0sq * (1 + p.gamma2 ** (2 * n)
                     / (2 * math.pi * n * n * (1 / p.gamma2 - p.gamma2) ** 2))
    assert abs(wu_leading(p, "row", n) - expect) < 1e-14


def test_wu_supercritical_diag_against_exact():
    # k_ons = 2, n = 30: exact/predicted within 5%
    k = 2.0
    chi = 0.5 * math.asinh(1.0 / math.sqrt(k))   # sinh(2chi)^2 = 1/k
    p = ising_params(chi, chi)
    assert abs(p.k_ons - k) < 1e-12
    n = 30
    exact = correlation(p, "diag", n).value
    pred = wu_leading(p, "diag", n)
    assert abs(exact / pred - 1.0) < 0.05


def test_wu_supercritical_row_against_exact():
    p = ising_params(0.3, 0.3)
    assert p.regime == SUPERCRITICAL
    n = 24
    exact = correlation(p, "row", n).value
    pred = wu_leading(p, "row", n)
    assert abs(exact / pred - 1.0) < 0.05


def test_wu_regime_mismatch():
    p = ising_params(0.7, 0.7)
    val = wu_leading(p, "diag", 10)
    assert abs(val - (1 - p.k_ons ** 2) ** 0.25) < 1e-12
    with pytest.raises(ValueError):
        wu_leading(p, "column", 10)
