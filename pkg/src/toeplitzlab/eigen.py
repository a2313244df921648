"""Spectra of Hermitian Toeplitz matrices for real symbols: equidistribution,
bulk individual-eigenvalue asymptotics for unimodal symbols, and gap /
near-periodicity statistics for the piecewise-constant symbol."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import toeplitz_matrix
from .symbols import CircleSymbol, SymbolError, builtin

__all__ = ["SpectrumReport", "BulkPrediction", "toeplitz_eigenvalues",
           "bulk_prediction", "gap_spectrum_stats", "UnimodalityError"]

TWO_PI = 2.0 * math.pi


class UnimodalityError(SymbolError):
    pass


@dataclass(frozen=True)
class SpectrumReport:
    n: int
    eigenvalues: np.ndarray
    symbol_range: tuple

    def __post_init__(self):
        lo, hi = self.symbol_range
        ev = self.eigenvalues
        if ev.min() < lo - 1e-10 or ev.max() > hi + 1e-10:
            raise AssertionError("eigenvalues escaped the symbol range")


@dataclass(frozen=True)
class BulkPrediction:
    x: float
    lambda_x: float
    spacing: float
    psi_derivative: float


def _real_symbol_values(symbol: CircleSymbol, m: int = 4096):
    theta = np.linspace(0.0, TWO_PI, m, endpoint=False)
    vals = symbol.values(theta)
    if np.max(np.abs(vals.imag)) > 1e-12 * max(1.0, np.max(np.abs(vals))):
        raise SymbolError("real-valued symbol required")
    return theta, vals.real


def toeplitz_eigenvalues(symbol: CircleSymbol, n: int) -> SpectrumReport:
    """All n eigenvalues of the Hermitian Toeplitz matrix, sorted ascending."""
    _, fvals = _real_symbol_values(symbol)
    c = symbol.fourier_coeffs(n - 1)
    mat = toeplitz_matrix(c, n)
    mat = 0.5 * (mat + mat.conj().T)
    ev = np.linalg.eigvalsh(mat)
    return SpectrumReport(n, ev, (float(fvals.min()), float(fvals.max())))


# ---------------------------------------------------------------------------
# bulk prediction for unimodal symbols
# ---------------------------------------------------------------------------

def _unimodal_profile(symbol: CircleSymbol):
    """Check unimodality (rising on (0, theta_0), falling on (theta_0, 2pi)) on a
    fine grid plus curvature at both ends; return (theta, f) samples and theta_0."""
    theta, f = _real_symbol_values(symbol, 4096)
    i0 = int(np.argmax(f))
    df = np.diff(np.concatenate([f, f[:1]]))
    rising = df[:i0]
    falling = df[i0:]
    if i0 == 0 or np.any(rising < -1e-8) or np.any(falling > 1e-8):
        raise UnimodalityError("symbol is not unimodal on the sampling grid")
    h = theta[1]
    d2_min = (f[1] - 2 * f[0] + f[-1]) / h ** 2
    d2_max = (f[(i0 + 1) % len(f)] - 2 * f[i0] + f[i0 - 1]) / h ** 2
    if abs(d2_min) < 1e-8 or abs(d2_max) < 1e-8:
        raise UnimodalityError("vanishing curvature at an extremum")
    return theta, f, theta[i0]


def _fprime(symbol: CircleSymbol, theta: float, h: float = 1e-6) -> float:
    a = symbol.values(np.array([theta - h, theta + h])).real
    return float((a[1] - a[0]) / (2 * h))


def bulk_prediction(symbol: CircleSymbol, x: float, n: int) -> BulkPrediction:
    """lambda_x with psi(lambda_x) = pi x, and the local spacing
    pi / (psi'(lambda_x) (n+1)), for a unimodal real symbol."""
    if not 0.0 < x < 1.0:
        raise ValueError("x must lie in (0, 1)")
    theta, f, theta0 = _unimodal_profile(symbol)
    lo, hi = float(f.min()), float(f.max())

    def theta_branches(lam):
        # theta_1 in (0, theta_0): f rising through lam; theta_2 in (theta_0, 2pi): falling
        from scipy.optimize import brentq
        g = lambda t: float(symbol.values(np.array([t])).real[0]) - lam
        t1 = brentq(g, 1e-12, theta0)
        t2 = brentq(g, theta0, TWO_PI - 1e-12)
        return t1, t2

    def psi(lam):
        t1, t2 = theta_branches(lam)
        return 0.5 * (t1 - t2) + math.pi

    target = math.pi * x
    a, b = lo + 1e-12 * (hi - lo), hi - 1e-12 * (hi - lo)
    for _ in range(200):
        mid = 0.5 * (a + b)
        if psi(mid) < target:
            a = mid
        else:
            b = mid
        if b - a < 1e-12 * max(1.0, abs(hi)):
            break
    lam = 0.5 * (a + b)
    t1, t2 = theta_branches(lam)
    psi_prime = 0.5 * (1.0 / _fprime(symbol, t1) - 1.0 / _fprime(symbol, t2))
    spacing = math.pi / (psi_prime * (n + 1))
    return BulkPrediction(x, lam, spacing, psi_prime)


# ---------------------------------------------------------------------------
# piecewise-constant symbol: gap counts and near-periodicity
# ---------------------------------------------------------------------------

def gap_spectrum_stats(theta1: float, theta2: float, gamma: float, n: int,
                       epsilon: float = None) -> dict:
    """Count of eigenvalues in the spectral gap (1+eps, e^{2 pi gamma}-eps) of the
    two-level symbol, and (when theta2-theta1 is a rational multiple of 2pi) the
    near-periodicity distance to the (n+q)-spectrum."""
    if not (0.0 <= theta1 < theta2 < TWO_PI):
        raise ValueError("need 0 <= theta1 < theta2 < 2pi")
    if gamma < 0:
        raise ValueError("gamma >= 0 required")
    if gamma == 0.0:
        return {"gap_count": 0, "pairing_distance": None, "q": None}
    top = math.exp(2 * math.pi * gamma)
    if epsilon is None:
        epsilon = 0.05 * (top - 1.0)
    sym = builtin("piecewise", theta1=theta1, theta2=theta2, gamma=gamma)
    ev_n = toeplitz_eigenvalues(sym, n).eigenvalues
    lo, hi = 1.0 + epsilon, top - epsilon
    gap = ev_n[(ev_n > lo) & (ev_n < hi)]
    frac = Fraction((theta2 - theta1) / TWO_PI).limit_denominator(64)
    q = None
    if abs(float(frac) - (theta2 - theta1) / TWO_PI) < 1e-12 and frac.numerator > 0:
        q = frac.denominator
    pairing = None
    if q is not None and len(gap) > 0:
        ev_nq = toeplitz_eigenvalues(sym, n + q).eigenvalues
        pairing = float(max(np.min(np.abs(ev_nq[None, :] - gap[:, None]), axis=1)))
    return {"gap_count": int(len(gap)), "pairing_distance": pairing, "q": q}
