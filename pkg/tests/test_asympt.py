"""Asymptotic predictors against exact determinants and closed-form constants."""

import cmath
import math

import numpy as np
import pytest

from toeplitzlab.asympt import (DegenerateSymbolError,
                                FHWeightSpec, bs_exact, bt_predict,
                                circle_symbol_from_weight, hankel_th_predict,
                                selberg_value, szego_fh_predict)
from toeplitzlab.constants import GLAISHER_A
from toeplitzlab.exactdet import toeplitz_det
from toeplitzlab.specialfn import log_gamma
from toeplitzlab.symbols import (CircleSymbol, FHSingularity, SmoothPart, builtin)


# ---------------------------------------------------------------------------
# szego_fh_predict
# ---------------------------------------------------------------------------

def test_sslt_exp_cos_term():
    # V = t(z + 1/z): a = 0, p = 0, c = t^2
    t = 0.8
    p = szego_fh_predict(builtin("exp_cos", t=t))
    (a, pw, c), = p.terms
    assert abs(a) < 1e-15 and abs(pw) < 1e-15
    assert abs(c - t * t) < 1e-14


def test_sslt_diag_limit_constant():
    k = 0.6
    p = szego_fh_predict(builtin("diag", k_ons=k))
    (a, pw, c), = p.terms
    assert abs(a) < 1e-14 and abs(pw) < 1e-14
    assert abs(cmath.exp(c) - (1 - k * k) ** 0.25) < 1e-12


def test_critical_onsager_reproduces_wu_leading():
    # single singularity alpha=0, beta=-1/2 with the critical smooth part:
    # constant 2^{1/12} e^{1/4} A^{-3} (1+g)^{1/4} (1-g)^{-1/4}, exponent -1/4
    g1 = 0.3
    sym = builtin("onsager", gamma1=g1, gamma2=1.0)
    p = szego_fh_predict(sym)
    (a, pw, c), = p.terms
    assert abs(a) < 1e-13
    assert abs(pw - (-0.25)) < 1e-13
    target = (2 ** (1 / 12.) * math.exp(0.25) * GLAISHER_A ** -3
              * (1 + g1) ** 0.25 * (1 - g1) ** -0.25)
    assert abs(cmath.exp(c) - target) < 1e-10 * target


def test_widom_basor_agreement_at_beta_zero():
    # Eq-85-style evaluation (E(e^V), pairwise |z_j - z_k|^{-2 a_j a_k},
    # e^{-a_j V-hat(z_j)}, G^2(1+a)/G(1+2a)) vs the general-beta constant
    from toeplitzlab.specialfn import log_barnes_g
    cases = [
        ({0: 0.0j, 1: 0.3 + 0j, -1: 0.3 + 0j},
         [(0.7, 0.25), (2.9, 0.3)]),
        ({0: 0.1 + 0.0j, 1: 0.2 + 0.1j, -1: 0.2 - 0.1j, 2: -0.05 + 0j, -2: -0.05 + 0j},
         [(0.0, 0.35)]),
        ({0: 0.0j, 1: 0.15 + 0j, -1: 0.1 + 0j},
         [(1.1, 0.2), (2.2, 0.15), (4.4, 0.1)]),
    ]
    for coeffs, sings in cases:
        w = max(abs(k) for k in coeffs)
        sym = CircleSymbol(SmoothPart(dict(coeffs), window=w),
                           tuple(FHSingularity(t, al, 0.0) for t, al in sings))
        (a, pw, c), = szego_fh_predict(sym).terms
        # independent Widom-form evaluation
        v = sym.smooth.coeffs_range(16)
        e_v = sum(k * v[16 + k] * v[16 - k] for k in range(1, 17))
        widom = e_v
        for t, al in sings:
            vhat = sum(v[16 + k] * cmath.exp(1j * k * t) for k in range(-16, 17)
                       if k != 0)
            widom += -al * vhat
            widom += 2 * log_barnes_g(1 + al) - log_barnes_g(1 + 2 * al)
        for i in range(len(sings)):
            for j in range(i + 1, len(sings)):
                ti, ai = sings[i]
                tj, aj = sings[j]
                widom += -2 * ai * aj * math.log(abs(2 * math.sin((ti - tj) / 2)))
        assert abs(c - widom) < 1e-12


def test_degenerate_refused():
    sym = builtin("diag", k_ons=2.0)   # beta = -1 at theta = 0: alpha+beta = -1
    with pytest.raises(DegenerateSymbolError):
        szego_fh_predict(sym)


def test_ehrhardt_convergence_rate():
    # |||beta||| < 1: relative error O(n^{|||beta|||-1}), checked by a log-log
    # slope over n in [16, 128]
    sym = CircleSymbol(SmoothPart({0: 0.0j, 1: 0.1 + 0j, -1: 0.1 + 0j}, window=1),
                       (FHSingularity(0.0, 0.15, 0.1), FHSingularity(2.5, 0.1, -0.2)))
    pred = szego_fh_predict(sym)
    norm = 0.3
    ns = [16, 32, 64, 128]
    errs = []
    for n in ns:
        exact = toeplitz_det(sym, n).value
        errs.append(abs(exact / pred.value_at(n) - 1.0))
    slope = (math.log(errs[-1]) - math.log(errs[0])) / (math.log(ns[-1]) - math.log(ns[0]))
    assert slope < (norm - 1.0) + 0.35
    assert errs[-1] < errs[0]


# ---------------------------------------------------------------------------
# bt_predict
# ---------------------------------------------------------------------------

def test_bt_two_term_parity():
    pred = bt_predict(builtin("bt"))
    assert len(pred.terms) == 2
    # exact cancellation at odd n, doubling at even n
    assert abs(pred.value_at(31)) < 1e-14
    even = pred.value_at(32)
    lead = math.sqrt(2.0 / 32.0) * math.exp(
        2 * (math.log(2.0) / 12.0 + 0.25 - 3 * math.log(GLAISHER_A)))
    assert abs(even - lead) < 1e-12 * abs(lead)


def test_bt_singleton_reduces_to_szego():
    sym = CircleSymbol(SmoothPart({0: 0.0j, 1: 0.2 + 0j, -1: 0.2 + 0j}, window=1),
                       (FHSingularity(0.0, 0.1, 0.1), FHSingularity(3.0, 0.2, -0.2)))
    a = bt_predict(sym).terms
    b = szego_fh_predict(sym).terms
    assert len(a) == 1
    assert max(abs(x - y) for x, y in zip(a[0], b[0])) < 1e-13


def test_bt_complex_beta_pair():
    # beta = (0.5+0.3i, -0.5-0.3i): two members, equal Re sum beta^2, phases
    # differing by n pi; verified against in-test brute-force enumeration
    b = 0.5 + 0.3j
    sym = CircleSymbol(SmoothPart.zero(),
                       (FHSingularity(0.0, 0.0, b), FHSingularity(math.pi, 0.0, -b)))
    best, members = None, []
    for n0 in range(-3, 4):
        val = (b.real + n0) ** 2 + (-b.real - n0) ** 2
        if best is None or val < best - 1e-12:
            best, members = val, [(n0, -n0)]
        elif val <= best + 1e-12:
            members.append((n0, -n0))
    pred = bt_predict(sym)
    assert len(pred.terms) == len(members) == 2
    re_p = {round(t[1].real, 12) for t in pred.terms}
    assert len(re_p) == 1
    phase_gap = (pred.terms[0][0] - pred.terms[1][0]).imag % (2 * math.pi)
    assert min(abs(phase_gap - math.pi), abs(phase_gap + math.pi - 2 * math.pi)) < 1e-12


def test_bt_matches_exact_for_eq94_symbol():
    sym = builtin("bt")
    pred = bt_predict(sym)
    for n in (24, 48):
        exact = toeplitz_det(sym, n).value
        assert abs(exact / pred.value_at(n) - 1.0) < 0.05 / n * 8


# ---------------------------------------------------------------------------
# bs_exact / selberg
# ---------------------------------------------------------------------------

def test_bs_trivial_and_n1():
    for n in (1, 5, 9):
        assert abs(bs_exact(0.0, 0.0, n).value - 1.0) < 1e-13
    al, be = 0.3, 0.1 + 0.2j
    expect = cmath.exp(log_gamma(1 + 2 * al) - log_gamma(1 + al + be)
                       - log_gamma(1 + al - be))
    assert abs(bs_exact(al, be, 1).value - expect) < 1e-13


def test_bs_against_determinant():
    al, be = 0.3, 0.1 + 0.2j
    s = builtin("pure_fh", alpha=al, beta=be)
    for n in (10, 20):
        assert abs(toeplitz_det(s, n).value - bs_exact(al, be, n).value) \
            <= 1e-9 * abs(bs_exact(al, be, n).value)


def test_bs_degenerate_rejected():
    with pytest.raises(DegenerateSymbolError):
        bs_exact(0.0, 1.0, 4)


def test_selberg_values():
    al, be = 0.3, 0.1
    expect = cmath.exp(log_gamma(1 + 2 * al) - log_gamma(1 + al + be)
                       - log_gamma(1 + al - be))
    assert abs(selberg_value(1, al, be, 0.7) - expect) < 1e-13
    # gamma = 1: n! bs_exact
    for n in (2, 4):
        assert abs(selberg_value(n, al, be, 1.0)
                   - math.factorial(n) * bs_exact(al, be, n).value) < 1e-11
    # alpha = beta = 0, gamma = 1: n!
    assert abs(selberg_value(5, 0.0, 0.0, 1.0) - 120.0) < 1e-9


def test_selberg_constraint():
    with pytest.raises(ValueError):
        selberg_value(4, 0.3, 0.0, -2.0)


# ---------------------------------------------------------------------------
# CLT corollary
# ---------------------------------------------------------------------------

def test_clt_corollary_cos_symbol():
    # D_n(e^{i t V}) -> exp(-t^2 sum k |V_k|^2) for V = cos theta (V_0 = 0)
    t = 1.0
    sym = CircleSymbol(SmoothPart({0: 0.0j, 1: 0.5j * t, -1: 0.5j * t}, window=1),
                       (), label="e^{itcos}")
    target = math.exp(-t * t * 0.25)
    val = toeplitz_det(sym, 64).value
    assert abs(val - target) < 1e-4


# ---------------------------------------------------------------------------
# Hankel / T+H exponents and the weight map
# ---------------------------------------------------------------------------

def test_hankel_exponent():
    spec = FHWeightSpec(alpha_plus1=0.2, alpha_minus1=0.1,
                        interior=((0.3, 0.25, 0.1),))
    pred = hankel_th_predict("hankel", spec)
    q = pred.logn_exponent
    expect = -0.25 + 2 * (0.2 ** 2 + 0.1 ** 2) + (0.25 ** 2 - 0.1 ** 2)
    assert abs(q - expect) < 1e-14
    assert pred.unknown_constant
    assert abs(pred.n2_coeff + math.log(2.0)) < 1e-15
    with pytest.raises(ValueError):
        pred.value_at(10)


def test_hankel_jacobi_r0_exponent():
    # pure Jacobi-type weight: r = 0, only endpoint exponents
    spec = FHWeightSpec(alpha_plus1=0.3, alpha_minus1=-0.2)
    q = hankel_th_predict("hankel", spec).logn_exponent
    assert abs(q - (-0.25 + 2 * (0.09 + 0.04))) < 1e-14


def test_hankel_refuses_boundary_beta():
    spec = FHWeightSpec(interior=((0.1, 0.2, 0.5),))
    with pytest.raises(ValueError):
        hankel_th_predict("hankel", spec)


def test_th_plus0_exponent():
    sym = CircleSymbol(SmoothPart.zero(),
                       (FHSingularity(0.0, 0.3, 0.0),
                        FHSingularity(1.0, 0.2, 0.1),
                        FHSingularity(math.pi, 0.1, 0.0),
                        FHSingularity(2 * math.pi - 1.0, 0.2, -0.1)))
    pred = hankel_th_predict("th_plus_0", sym)
    expect = (0.2 ** 2 - 0.1 ** 2) + 0.5 * (0.3 ** 2 + 0.1 ** 2 - 0.3 - 0.1)
    assert abs(pred.logn_exponent - expect) < 1e-14


def test_weight_map_structure_and_values():
    # one interior alpha = 1/2 singularity: the mapped even circle symbol has
    # the stated alpha structure and paired opposite betas, and matches
    # w(cos theta)|sin theta| pointwise
    lam0, a0, b0 = 0.3, 0.5, 0.2
    spec = FHWeightSpec(alpha_plus1=0.0, alpha_minus1=0.0,
                        interior=((lam0, a0, b0),))
    sym = circle_symbol_from_weight(spec)
    alphas = [s.alpha for s in sym.singularities]
    betas = [s.beta for s in sym.singularities]
    th0 = math.acos(lam0)
    assert abs(sym.singularities[0].alpha - 0.5) < 1e-14      # |z-1|^{4*0+1}
    assert abs(sym.singularities[1].theta - th0) < 1e-14
    assert abs(sym.singularities[1].beta + b0) < 1e-14
    assert abs(sym.singularities[-1].beta - b0) < 1e-14
    assert abs(sum(betas)) < 1e-14

    def w(x):
        x = np.asarray(x)
        om = np.where(x <= lam0, cmath.exp(1j * math.pi * b0),
                      cmath.exp(-1j * math.pi * b0))
        return np.abs(x - lam0) ** (2 * a0) * om

    theta = np.linspace(0.1, 2 * math.pi - 0.1, 39)
    lhs = sym.values(theta)
    rhs = w(np.cos(theta)) * np.abs(np.sin(theta))
    assert np.max(np.abs(lhs - rhs)) < 1e-10
