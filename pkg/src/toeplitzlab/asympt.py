"""Asymptotic predictors: Szego strong limit, Fisher-Hartwig with the explicit
constant, Basor-Tracy multi-representation sums, the exact single-singularity
formula, the Selberg integral, and Hankel / Toeplitz+Hankel exponents."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import LogDet
from .specialfn import log_barnes_g, log_gamma
from .symbols import CircleSymbol, FHSingularity, fh_representations, seminorm

__all__ = [
    "AsymptoticPrediction", "DegenerateSymbolError", "SeriesDivergenceError",
    "szego_fh_predict", "bt_predict", "bs_exact", "selberg_value",
    "hankel_th_predict", "circle_symbol_from_weight", "FHWeightSpec",
]


class DegenerateSymbolError(ValueError):
    """alpha_j +/- beta_j hit a negative integer: the FH constant vanishes."""


class SeriesDivergenceError(RuntimeError):
    """sum k V_k V_{-k} (or a b_+/- series) failed to converge in the window."""


@dataclass(frozen=True)
class AsymptoticPrediction:
    """Sum of terms exp(n a + p log n + c), plus an error-order tag.

    unknown_constant marks predictions whose multiplicative constant the source
    does not print (Hankel / Toeplitz+Hankel); their c is only the known part.
    """

    terms: tuple                      # tuple[(a, p, c)]
    error_order: str = "o(1)"
    unknown_constant: bool = False
    n2_coeff: complex = 0.0           # e^{n^2 * n2_coeff} prefactor (Hankel)

    def log_value_at(self, n: int) -> complex:
        """log of the predicted value (principal combination of the terms)."""
        return cmath.log(self.value_at(n))

    def value_at(self, n: int) -> complex:
        if self.unknown_constant:
            raise ValueError("prediction carries an unknown constant; only "
                             "exponents are meaningful")
        vals = [cmath.exp(n * a + p * math.log(n) + c) for (a, p, c) in self.terms]
        return complex(sum(vals))

    @property
    def logn_exponent(self) -> complex:
        return self.terms[0][1]


def _sum_with_tail_check(series_terms, what: str, tol: float = 1e-13):
    """Sum a coefficient series; the trailing block must be negligible (the
    summands enter log-domain constants, so the tolerance is absolute)."""
    total = complex(sum(series_terms))
    if len(series_terms) >= 8:
        tail = max(abs(t) for t in series_terms[-4:])
        if tail > tol * max(1.0, abs(total)):
            raise SeriesDivergenceError(
                f"{what} series not converged within the coefficient window "
                f"(tail ~ {tail:.2e})")
    return total


def _smooth_window(symbol: CircleSymbol) -> int:
    w = symbol.smooth.window or max([abs(k) for k in symbol.smooth.fourier_coeffs] + [1])
    return max(w, 16)


def _degenerate_check(alpha: complex, beta: complex):
    for val in (alpha + beta, alpha - beta):
        val = complex(val)
        if abs(val.imag) < 1e-12 and val.real < -0.5 \
                and abs(val.real - round(val.real)) < 1e-12:
            raise DegenerateSymbolError(
                f"alpha +/- beta = {val} is a negative integer")


def _szego_fh_term(symbol: CircleSymbol):
    """(a, p, c) of the Fisher-Hartwig asymptotic form for one representation."""
    w = _smooth_window(symbol)
    v = symbol.smooth.coeffs_range(w)
    v0 = symbol.smooth.v0
    a = v0 + cmath.log(symbol.prefactor)
    sings = symbol.singularities
    for s in sings:
        _degenerate_check(s.alpha, s.beta)
    p = sum(s.alpha ** 2 - s.beta ** 2 for s in sings)
    # E(e^V) = sum_{k>=1} k V_k V_{-k}
    e_terms = [k * v[w + k] * v[w - k] for k in range(1, w + 1)]
    c = _sum_with_tail_check(e_terms, "E(phi)") if any(abs(t) > 0 for t in e_terms) else 0.0 + 0.0j
    # b_+/-(z_j) factors: (-alpha_j + beta_j) sum_{k>=1} V_k z_j^k etc., as log sums
    for s in sings:
        zj = cmath.exp(1j * s.theta)
        up = [v[w + k] * zj ** k for k in range(1, w + 1)]
        dn = [v[w - k] * zj ** (-k) for k in range(1, w + 1)]
        log_bp = _sum_with_tail_check(up, "b_+") if any(abs(t) > 0 for t in up) else 0.0
        log_bm = _sum_with_tail_check(dn, "b_-") if any(abs(t) > 0 for t in dn) else 0.0
        c += (-s.alpha + s.beta) * log_bp + (-s.alpha - s.beta) * log_bm
    # pairwise factors with the explicit branch e^{i(theta_k - theta_j - pi)(...)}
    for j in range(len(sings)):
        for k in range(j + 1, len(sings)):
            sj, sk = sings[j], sings[k]
            dist = abs(2.0 * math.sin((sj.theta - sk.theta) / 2.0))
            c += 2.0 * (sj.beta * sk.beta - sj.alpha * sk.alpha) * math.log(dist)
            c += 1j * (sk.theta - sj.theta - math.pi) * (sj.alpha * sk.beta - sk.alpha * sj.beta)
    # Barnes-G triple per singularity
    for s in sings:
        c += log_barnes_g(1 + s.alpha + s.beta) + log_barnes_g(1 + s.alpha - s.beta) \
            - log_barnes_g(1 + 2 * s.alpha)
    return (complex(a), complex(p), complex(c))


def szego_fh_predict(symbol: CircleSymbol) -> AsymptoticPrediction:
    """One-term Fisher-Hartwig (or pure Szego, when m=0) asymptotic prediction."""
    term = _szego_fh_term(symbol)
    norm = seminorm(symbol.singularities)
    order = f"O(n^{norm - 1.0:.3g})" if symbol.singularities else "o(1)"
    return AsymptoticPrediction((term,), error_order=order)


def bt_predict(symbol: CircleSymbol) -> AsymptoticPrediction:
    """Basor-Tracy prediction: one Fisher-Hartwig term per representation in the
    minimizing set; reduces to szego_fh_predict for a singleton."""
    reps = fh_representations(symbol)
    if reps.degenerate:
        raise DegenerateSymbolError("representation set is degenerate")
    terms = tuple(_szego_fh_term(r.as_symbol()) for r in reps.members)
    re_p = {round(t[1].real, 10) for t in terms}
    if len(re_p) != 1:
        raise AssertionError(f"Basor-Tracy terms disagree in Re sum beta^2: {re_p}")
    return AsymptoticPrediction(terms, error_order="o(1) per term")


def bs_exact(alpha: complex, beta: complex, n: int) -> LogDet:
    """Exact D_n for a single pure Fisher-Hartwig singularity, via six Barnes-G
    evaluations."""
    alpha = complex(alpha)
    beta = complex(beta)
    if alpha.real <= -0.5:
        raise ValueError("Re alpha > -1/2 required")
    _degenerate_check(alpha, beta)
    if n == 0:
        return LogDet.one()
    val = (log_barnes_g(1 + alpha + beta) + log_barnes_g(1 + alpha - beta)
           - log_barnes_g(1 + 2 * alpha)
           + log_barnes_g(n + 1) + log_barnes_g(n + 1 + 2 * alpha)
           - log_barnes_g(n + 1 + alpha + beta) - log_barnes_g(n + 1 + alpha - beta))
    return LogDet(val.real, val.imag)


def selberg_value(n: int, alpha: complex, beta: complex, gamma: complex) -> complex:
    """The circular Selberg integral as a product of Gamma factors."""
    alpha, beta, gamma = complex(alpha), complex(beta), complex(gamma)
    if alpha.real <= -0.5:
        raise ValueError("Re alpha > -1/2 required")
    bound = min(1.0 / n, (2 * alpha.real + 1) / max(n - 1, 1))
    if gamma.real <= -bound:
        raise ValueError(f"Re gamma = {gamma.real} violates the Selberg constraint")
    total = 0.0 + 0.0j
    for j in range(n):
        total += (log_gamma(1 + 2 * alpha + j * gamma) + log_gamma(1 + (j + 1) * gamma)
                  - log_gamma(1 + alpha + beta + j * gamma)
                  - log_gamma(1 + alpha - beta + j * gamma)
                  - log_gamma(1 + gamma))
    return cmath.exp(total)


# ---------------------------------------------------------------------------
# Hankel and Toeplitz+Hankel predictions (exponents only; constants unknown)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FHWeightSpec:
    """Structured weight e^{U(x)} prod |x - lambda_j|^{2 alpha_j} omega_j(x) on
    [-1,1]: endpoint exponents alpha_0 (at +1), alpha_end (at -1), and interior
    (lambda_j, alpha_j, beta_j) triples with Re beta_j in (-1/2, 1/2)."""

    alpha_plus1: complex = 0.0
    alpha_minus1: complex = 0.0
    interior: tuple = ()      # tuple[(lambda, alpha, beta)]
    u_even_coeffs: dict = field(default_factory=dict)  # V coefficients of U(cos theta)


def hankel_th_predict(kind: str, inp) -> AsymptoticPrediction:
    """Exponent-level prediction for Hankel (eq. 2^{-n^2} G_H^n n^q E_H) or the
    plus-0 Toeplitz+Hankel determinant; the constants G and E are not printed in
    the source and are exposed as unknown-constant markers."""
    if kind == "hankel":
        if not isinstance(inp, FHWeightSpec):
            raise TypeError("hankel prediction needs an FHWeightSpec")
        for (_, _, b) in inp.interior:
            if abs(complex(b).real) >= 0.5:
                raise ValueError(
                    "Re beta_j on the +/-1/2 boundary: seminorm reaches 1; use the "
                    "Basor-Tracy machinery on the mapped circle symbol instead")
        q = (-0.25 + 2 * (inp.alpha_plus1 ** 2 + inp.alpha_minus1 ** 2)
             + sum(a * a - complex(b) ** 2 for (_, a, b) in inp.interior))
        return AsymptoticPrediction(((0.0, complex(q), 0.0),),
                                    error_order="o(1)", unknown_constant=True,
                                    n2_coeff=-math.log(2.0))
    if kind == "th_plus_0":
        sym = inp
        a0 = aend = 0.0 + 0.0j
        interior = []
        for s in sym.singularities:
            if abs(s.theta) < 1e-14:
                a0 = s.alpha
            elif abs(s.theta - math.pi) < 1e-14:
                aend = s.alpha
            elif s.theta < math.pi:
                interior.append(s)
        q = (sum(s.alpha ** 2 - s.beta ** 2 for s in interior)
             + 0.5 * (a0 ** 2 + aend ** 2 - a0 - aend))
        return AsymptoticPrediction(((0.0, complex(q), 0.0),),
                                    error_order="o(1)", unknown_constant=True)
    raise ValueError(f"no printed exponent for kind {kind!r}")


def circle_symbol_from_weight(spec: FHWeightSpec) -> CircleSymbol:
    """The even circle symbol f(e^{i theta}) = w(cos theta)|sin theta| attached to
    a structured weight: endpoint singularities at theta = 0, pi with exponents
    2 alpha +- 1/2..., paired interior singularities with opposite betas, and the
    explicit constant folded into the prefactor."""
    sings = [FHSingularity(0.0, 2 * spec.alpha_plus1 + 0.5, 0.0)]
    log_pre = -(2 * (spec.alpha_plus1 + spec.alpha_minus1
                     + sum(a for (_, a, _) in spec.interior)) + 1) * math.log(2.0)
    interior_sorted = sorted(spec.interior, key=lambda t: math.acos(t[0]))
    for lam, a, b in interior_sorted:
        th = math.acos(lam)
        sings.append(FHSingularity(th, a, -complex(b)))
        log_pre += 2j * complex(b) * math.asin(lam)
    sings.append(FHSingularity(math.pi, 2 * spec.alpha_minus1 + 0.5, 0.0))
    for lam, a, b in sorted(spec.interior, key=lambda t: -math.acos(t[0])):
        th = 2 * math.pi - math.acos(lam)
        sings.append(FHSingularity(th, a, complex(b)))
    from .symbols import SmoothPart
    coeffs = {int(k): complex(v) for k, v in spec.u_even_coeffs.items()}
    coeffs.setdefault(0, 0.0j)
    smooth = SmoothPart(coeffs, window=max([abs(k) for k in coeffs] + [0]))
    prefactor = cmath.exp(log_pre)
    return CircleSymbol(smooth, tuple(sorted(sings, key=lambda s: s.theta)),
                        prefactor, label="weight_map")
