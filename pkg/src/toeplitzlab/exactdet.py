"""Exact finite-n determinant engines and finite identities: Toeplitz, Hankel,
Toeplitz+Hankel, OPUC/Verblunsky recursions, the Heine integral oracle, the
Borodin-Okounkov right-hand side, and the Caratheodory positivity test."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .linalg import (DOUBLE, EXTENDED, LogDet, NumericalBackendError,
                     ext_coeffs_for, ext_context, logdet_dense, logdet_lu_object,
                     toeplitz_matrix)
from .quadpanels import interval_grid
from .symbols import CircleSymbol, SymbolError

__all__ = [
    "toeplitz_det", "toeplitz_det_from_coeffs", "structured_det", "Weight",
    "weight_from_even_symbol", "verblunsky", "VerblunskyData", "opuc_at_points",
    "OpucValues", "heine_oracle", "bo_rhs", "caratheodory_psd",
    "VerblunskyBreakdownError", "SingularGramError",
]


class VerblunskyBreakdownError(RuntimeError):
    def __init__(self, index, value):
        super().__init__(f"|xi_{index}| = {abs(value):.6g} >= 1: recursion breakdown")
        self.index = index
        self.value = value


class SingularGramError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Toeplitz determinants
# ---------------------------------------------------------------------------

def toeplitz_det_from_coeffs(coeffs, n: int, backend: str = DOUBLE,
                             prec: int = 160) -> LogDet:
    """det {c_{j-k}} from an explicit coefficient array c_{-(n-1)}..c_{n-1}."""
    if n == 0:
        return LogDet.one()
    is_object = getattr(coeffs, "dtype", None) == object
    if not is_object and not isinstance(coeffs, np.ndarray):
        seq = list(coeffs)
        is_object = len(seq) > 0 and not isinstance(seq[0], (int, float, complex, np.number))
        coeffs = seq
    if is_object:
        mat = np.empty((n, n), dtype=object)
        idx = np.arange(n)
        off = idx[:, None] - idx[None, :] + (n - 1)
        flat = list(coeffs)
        for j in range(n):
            for k in range(n):
                mat[j, k] = flat[off[j, k]]
        with ext_context(prec):
            return logdet_lu_object(mat)
    mat = toeplitz_matrix(np.asarray(coeffs, dtype=complex), n)
    if not np.all(np.isfinite(mat)):
        raise NumericalBackendError("non-finite Toeplitz coefficients")
    return logdet_dense(mat, backend=backend, prec=prec)


def toeplitz_det(symbol: CircleSymbol, n: int, backend: str = DOUBLE,
                 prec: int = 160) -> LogDet:
    """D_n(phi) by LU with partial pivoting, accumulated in the log domain."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return LogDet.one()
    if backend == EXTENDED:
        coeffs = ext_coeffs_for(symbol, n - 1, prec)
        return toeplitz_det_from_coeffs(coeffs, n, backend=EXTENDED, prec=prec)
    coeffs = symbol.fourier_coeffs(n - 1)
    return toeplitz_det_from_coeffs(coeffs, n, backend=backend, prec=prec)


# ---------------------------------------------------------------------------
# Hankel and Toeplitz+Hankel determinants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """A weight w(x) on [-1, 1] with marked algebraic singular points.

    moment_fn, when set, supplies the moment integrals directly (used by the
    circle-mapped weights, whose theta substitution removes the endpoint
    singularity exactly).
    """

    fn: Callable[[np.ndarray], np.ndarray]
    singular_points: tuple = ()
    label: str = "weight"
    moment_fn: Optional[Callable[[int], np.ndarray]] = None

    def moments(self, count: int) -> np.ndarray:
        """m_0..m_{count-1}, m_k = int_{-1}^{1} x^k w(x) dx."""
        if self.moment_fn is not None:
            return np.asarray(self.moment_fn(count), dtype=complex)
        nodes, wts = interval_grid(-1.0, 1.0, self.singular_points, order=24)
        vals = np.asarray(self.fn(nodes), dtype=complex)
        if not np.all(np.isfinite(vals)):
            raise NumericalBackendError("weight evaluation failed on grid")
        pows = np.vander(nodes, count, increasing=True).T  # (count, nodes)
        return pows @ (wts * vals)


def hankel_det(weight: Weight, n: int, backend: str = DOUBLE, prec: int = 160) -> LogDet:
    """det of the moment matrix {m_{j+k}}, j,k = 0..n-1."""
    if n == 0:
        return LogDet.one()
    m = weight.moments(2 * n - 1)
    mat = m[np.add.outer(np.arange(n), np.arange(n))]
    return logdet_dense(mat, backend=backend, prec=prec)


_TH_OFFSETS = {"th_plus_0": (1.0, 0), "th_minus_2": (-1.0, 2),
               "th_plus_1": (1.0, 1), "th_minus_1": (-1.0, 1)}


def _check_even(symbol: CircleSymbol, tol: float = 1e-10):
    theta = np.linspace(0.1, math.pi - 0.1, 37)
    a = symbol.values(theta)
    b = symbol.values(2 * math.pi - theta)
    if np.max(np.abs(a - b)) > tol * max(1.0, np.max(np.abs(a))):
        raise SymbolError("Toeplitz+Hankel determinants need an even symbol")


def structured_det(kind: str, inp, n: int, backend: str = DOUBLE,
                   prec: int = 160) -> LogDet:
    """Hankel (from a Weight) or one of the four Toeplitz+Hankel determinants
    det(f_{j-k} +/- f_{j+k+c}) (from an even CircleSymbol)."""
    if kind == "hankel":
        if not isinstance(inp, Weight):
            raise TypeError("hankel kind needs a Weight")
        return hankel_det(inp, n, backend=backend, prec=prec)
    if kind not in _TH_OFFSETS:
        raise ValueError(f"unknown structured determinant kind {kind!r}")
    sign, off = _TH_OFFSETS[kind]
    _check_even(inp)
    if n == 0:
        return LogDet.one()
    c = inp.fourier_coeffs(2 * n - 2 + off)
    w = 2 * n - 2 + off
    idx = np.arange(n)
    mat = c[(idx[:, None] - idx[None, :]) + w] + sign * c[(idx[:, None] + idx[None, :] + off) + w]
    return logdet_dense(mat, backend=backend, prec=prec)


def weight_from_even_symbol(symbol: CircleSymbol) -> Weight:
    """v(x) = f(e^{i theta(x)}) / sqrt(1 - x^2), theta(x) = arccos x: the weight
    whose Hankel determinant matches det(f_{j-k} + f_{j+k}) up to 2^{n^2-2n+2}/pi^n.

    Moments use the exact substitution m_k = int_0^pi cos^k(theta) f(e^{i theta})
    d theta, which removes the endpoint square-root singularity.
    """
    _check_even(symbol)
    sing = [math.cos(s.theta) for s in symbol.singularities]

    def fn(x):
        x = np.clip(np.asarray(x, dtype=float), -1.0, 1.0)
        # (1-x)(1+x) stays nonzero for interior nodes where 1 - x*x can round to 0
        return symbol.values(np.arccos(x)) / np.sqrt((1.0 - x) * (1.0 + x))

    angles = [s.theta for s in symbol.singularities if 0.0 < s.theta < math.pi]

    def moment_fn(count):
        nodes, wts = interval_grid(0.0, math.pi, angles, order=24,
                                   grade_ends=bool(symbol.singularities))
        vals = symbol.values(nodes)
        pows = np.vander(np.cos(nodes), count, increasing=True).T
        return pows @ (wts * vals)

    return Weight(fn, tuple(sorted(set(sing))), label=f"v[{symbol.label}]",
                  moment_fn=moment_fn)


# ---------------------------------------------------------------------------
# Verblunsky coefficients (Szego recursion on moments)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerblunskyData:
    xi: tuple          # xi_0 .. xi_{n-1}
    chi: tuple         # chi_0 .. chi_n  (leading orthonormal coefficients)


def _check_positive(symbol: CircleSymbol, nsample: int = 512):
    theta = np.linspace(0, 2 * math.pi, nsample, endpoint=False) + 1.7e-4
    vals = symbol.values(theta)
    if np.max(np.abs(vals.imag)) > 1e-10 * max(1.0, np.max(np.abs(vals))):
        raise SymbolError("Verblunsky recursion requires a real symbol")
    if np.min(vals.real) <= 0:
        raise SymbolError("Verblunsky recursion requires a positive symbol")


def verblunsky(symbol: CircleSymbol, n: int) -> VerblunskyData:
    """xi_0..xi_{n-1} and chi_0..chi_n via the monic Szego recursion
    Phi_{k+1}(z) = z Phi_k(z) - conj(xi_k) Phi_k^*(z) on the moment sequence."""
    if n < 1:
        raise ValueError("n >= 1 required")
    _check_positive(symbol)
    c = symbol.fourier_coeffs(n + 1)
    w = n + 1

    def mom(k):  # c_k
        return c[k + w]

    phi = np.array([1.0 + 0.0j])          # monic Phi_0
    norm2 = mom(0).real                   # ||Phi_0||^2 = c_0
    xis = []
    chis = [1.0 / math.sqrt(norm2)]
    for k in range(n):
        # <1, z Phi_k> = sum_j phi_j c_{-(j+1)}
        ip = sum(phi[j] * mom(-(j + 1)) for j in range(k + 1))
        xi = np.conj(ip / norm2)
        if abs(xi) >= 1.0:
            raise VerblunskyBreakdownError(k, xi)
        star = np.conj(phi[::-1])
        nxt = np.concatenate([[0.0], phi]) - np.conj(xi) * np.concatenate([star, [0.0]])
        phi = nxt
        norm2 = norm2 * (1.0 - abs(xi) ** 2)
        xis.append(complex(xi))
        chis.append(1.0 / math.sqrt(norm2))
    return VerblunskyData(tuple(xis), tuple(chis))


# ---------------------------------------------------------------------------
# monic OPUC values at points (moment linear systems)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OpucValues:
    degree: int
    values: dict                 # point -> pi_q(point)
    complementary: Optional[dict] = None
    condition: float = 0.0


def _moment_system(c, w, q, complementary):
    if not complementary:
        # rows r=0..q-1: sum_s c_{r-s} a_s = -c_{r-q}
        mat = np.array([[c[(r - s) + w] for s in range(q)] for r in range(q)])
        rhs = -np.array([c[(r - q) + w] for r in range(q)])
    else:
        # rows j=0..q-1: sum_s c_{s-j} b_s = -c_{q-j}
        mat = np.array([[c[(s - j) + w] for s in range(q)] for j in range(q)])
        rhs = -np.array([c[(q - j) + w] for j in range(q)])
    return mat, rhs


def opuc_at_points(symbol: CircleSymbol, degree: int, points,
                   complementary: bool = False) -> OpucValues:
    """Monic pi_q (or complementary pi-hat_q) evaluated at the given points, via
    the moment linear system; raises SingularGramError when the system is
    numerically singular (the paper warns these exist only for q large enough
    in the non-Hermitian case)."""
    q = int(degree)
    if q < 0:
        raise ValueError("degree must be >= 0")
    c = symbol.fourier_coeffs(q + 1)
    w = q + 1
    if q == 0:
        vals = {complex(p): 1.0 + 0.0j for p in points}
        return OpucValues(0, vals, None, 1.0)
    mat, rhs = _moment_system(c, w, q, complementary)
    cond = float(np.linalg.cond(mat))
    if not np.isfinite(cond) or cond > 1e13:
        raise SingularGramError(f"Gram system at degree {q} is singular (cond={cond:.3g})")
    a = np.linalg.solve(mat, rhs)
    coeffs = np.concatenate([a, [1.0 + 0.0j]])   # monic
    out = {}
    for p in points:
        p = complex(p)
        out[p] = complex(np.polyval(coeffs[::-1], p))
    return OpucValues(q, out, dict(out) if complementary else None, cond)


# ---------------------------------------------------------------------------
# Heine multi-integral oracle
# ---------------------------------------------------------------------------

def heine_oracle(symbol: CircleSymbol, n: int) -> complex:
    """The n-fold Heine integral (tensor quadrature), n <= 3.

    Intended as an independent oracle for toeplitz_det on small n.
    """
    if n < 1 or n > 3:
        raise ValueError("heine_oracle supports 1 <= n <= 3")
    from .quadpanels import circle_grid
    angles = list(symbol.singular_angles) or list(symbol.params.get("breakpoints", []))
    if n == 1:
        nodes, wts = circle_grid(angles, ell_max=8, order=24, levels=48)
    elif n == 2:
        nodes, wts = circle_grid(angles, ell_max=8, order=16, levels=40)
    else:
        nodes, wts = circle_grid(angles, ell_max=4, order=6, levels=18)
        if len(nodes) ** 3 > 2.2e6:
            raise NumericalBackendError("heine n=3 node budget exceeded")
    f = symbol.values(nodes)
    u = wts * f / (2 * math.pi)
    if n == 1:
        return complex(np.sum(u))
    z = np.exp(1j * nodes)
    dist2 = np.abs(z[:, None] - z[None, :]) ** 2
    if n == 2:
        return complex(np.einsum("a,b,ab->", u, u, dist2) / 2.0)
    val = np.einsum("a,b,c,ab,ac,bc->", u, u, u, dist2, dist2, dist2, optimize=True)
    return complex(val / 6.0)


# ---------------------------------------------------------------------------
# Borodin-Okounkov right-hand side
# ---------------------------------------------------------------------------

def bo_rhs(symbol: CircleSymbol, n: int, truncation: int) -> complex:
    """e^{n V_0 + E(phi)} det(1 - Q_n H(b) H(c~) Q_n) with the Hankel blocks
    truncated at the given size; exact for smooth zero-winding symbols."""
    if truncation <= n:
        raise ValueError("truncation must exceed n")
    kmax = 2 * truncation + 4
    v = symbol.fourier_coeffs(kmax, of_log=True)
    w = kmax
    v0 = v[w]
    e_phi = sum(k * v[w + k] * v[w - k] for k in range(1, w + 1))
    # b = exp(V_- - V_+), c = exp(V_+ - V_-) evaluated on an FFT grid
    m = 1
    while m < 8 * truncation:
        m *= 2
    theta = 2 * math.pi * np.arange(m) / m
    vp = np.zeros(m, dtype=complex)
    vm = np.zeros(m, dtype=complex)
    for k in range(1, w + 1):
        vp += v[w + k] * np.exp(1j * k * theta)
        vm += v[w - k] * np.exp(-1j * k * theta)
    bvals = np.exp(vm - vp)
    cvals = np.exp(vp - vm)
    bc = np.fft.fft(bvals) / m
    cc = np.fft.fft(cvals) / m

    def coeff(arr, k):
        return arr[k % m]

    # tail estimate from the last decade of |b_j|: refuse if not decaying
    tail_idx = np.arange(truncation, truncation + max(truncation // 4, 8))
    tail_mag = max(np.max(np.abs([coeff(bc, int(j) + 1) for j in tail_idx])),
                   np.max(np.abs([coeff(cc, -int(j) - 1) for j in tail_idx])))
    if tail_mag * truncation > 1e-10:
        raise NumericalBackendError(
            f"Hankel truncation tail ~{tail_mag:.2e} too large; increase truncation")
    size = truncation - n
    i_idx = np.arange(n, truncation)
    hb = np.array([[coeff(bc, int(i + kk + 1)) for kk in range(truncation)] for i in i_idx])
    hc = np.array([[coeff(cc, -int(kk + j + 1)) for j in i_idx] for kk in range(truncation)])
    mat = np.eye(size, dtype=complex) - hb @ hc
    sign, logabs = np.linalg.slogdet(mat)
    det = sign * np.exp(logabs)
    return complex(np.exp(n * v0 + e_phi) * det)


# ---------------------------------------------------------------------------
# Caratheodory positivity test
# ---------------------------------------------------------------------------

def caratheodory_psd(c) -> bool:
    """True iff the Caratheodory matrix (2 c_0 on the diagonal, c_{k-j} above it,
    conjugates below) is positive semidefinite to 1e-12."""
    c = [complex(x) for x in c]
    n = len(c) - 1
    mat = np.zeros((n + 1, n + 1), dtype=complex)
    for j in range(n + 1):
        mat[j, j] = 2 * c[0]
        for k in range(j + 1, n + 1):
            mat[j, k] = c[k - j]
            mat[k, j] = np.conj(c[k - j])
    eig = np.linalg.eigvalsh(mat)
    return bool(eig.min() >= -1e-12)
