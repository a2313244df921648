"""Log-domain determinants in double and extended precision.

Toeplitz determinants here grow or decay like e^{c n} or e^{c n^2}; every
determinant is carried as (log-modulus, phase).  The double backend is LAPACK
LU via numpy; the extended backend is an object-array LU over gmpy2 mpfr/mpc,
used where the determinant value sits below double-precision resolution of the
matrix entries (characteristic-interval sweeps, large supercritical n).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import gmpy2

__all__ = ["LogDet", "NumericalBackendError", "logdet_dense", "toeplitz_matrix",
           "ext_context", "to_mpfr", "to_mpc", "gl_nodes_extended", "logdet_lu_object"]

DOUBLE = "double"
EXTENDED = "extended"


class NumericalBackendError(RuntimeError):
    pass


@dataclass(frozen=True)
class LogDet:
    """A determinant as exp(log_modulus + i phase), or exactly zero."""

    log_modulus: float
    phase: float
    exact_zero: bool = False

    def __post_init__(self):
        if not self.exact_zero:
            p = (self.phase + math.pi) % (2 * math.pi) - math.pi
            if p <= -math.pi:
                p += 2 * math.pi
            object.__setattr__(self, "phase", p)
            if math.isnan(self.log_modulus):
                raise NumericalBackendError("NaN log-determinant")

    @staticmethod
    def zero() -> "LogDet":
        return LogDet(-math.inf, 0.0, exact_zero=True)

    @staticmethod
    def one() -> "LogDet":
        return LogDet(0.0, 0.0)

    @staticmethod
    def from_value(z: complex) -> "LogDet":
        z = complex(z)
        if z == 0:
            return LogDet.zero()
        return LogDet(math.log(abs(z)), cmath.phase(z))

    @property
    def value(self) -> complex:
        if self.exact_zero:
            return 0.0 + 0.0j
        if self.log_modulus > 700:
            raise OverflowError("determinant exceeds double range; use log form")
        return cmath.exp(self.log_modulus + 1j * self.phase)

    @property
    def real_value(self) -> float:
        return float(self.value.real)

    def __mul__(self, other: "LogDet") -> "LogDet":
        if self.exact_zero or other.exact_zero:
            return LogDet.zero()
        return LogDet(self.log_modulus + other.log_modulus, self.phase + other.phase)

    def __truediv__(self, other: "LogDet") -> "LogDet":
        if other.exact_zero:
            raise ZeroDivisionError("division by exact-zero determinant")
        if self.exact_zero:
            return LogDet.zero()
        return LogDet(self.log_modulus - other.log_modulus, self.phase - other.phase)

    def scaled(self, z: complex) -> "LogDet":
        return self * LogDet.from_value(z)


# ---------------------------------------------------------------------------
# double backend
# ---------------------------------------------------------------------------

def toeplitz_matrix(coeffs: np.ndarray, n: int) -> np.ndarray:
    """T_n from coefficients c_{-(n-1)}..c_{n-1} (array of length 2n-1)."""
    c = np.asarray(coeffs)
    if len(c) != 2 * n - 1:
        raise ValueError(f"need 2n-1 = {2*n-1} coefficients, got {len(c)}")
    idx = np.arange(n)
    return c[(idx[:, None] - idx[None, :]) + (n - 1)]


def _logdet_double(mat: np.ndarray) -> LogDet:
    sign, logabs = np.linalg.slogdet(np.asarray(mat, dtype=complex))
    if sign == 0 or np.isneginf(logabs):
        return LogDet.zero()
    return LogDet(float(logabs), float(np.angle(sign)))


# ---------------------------------------------------------------------------
# extended backend (gmpy2)
# ---------------------------------------------------------------------------

class ext_context:
    """Scoped gmpy2 working precision (bits)."""

    def __init__(self, prec: int):
        self.prec = int(prec)

    def __enter__(self):
        self._saved = gmpy2.get_context().precision
        gmpy2.get_context().precision = self.prec
        return self

    def __exit__(self, *exc):
        gmpy2.get_context().precision = self._saved
        return False


def to_mpfr(x) -> "gmpy2.mpfr":
    return gmpy2.mpfr(float(x))


def to_mpc(z) -> "gmpy2.mpc":
    z = complex(z)
    return gmpy2.mpc(gmpy2.mpfr(z.real), gmpy2.mpfr(z.imag))


def logdet_lu_object(A: np.ndarray) -> LogDet:
    """LU with partial pivoting over a numpy object array of gmpy2 numbers.

    Row scaling is accumulated as (log-modulus, phase) pivot by pivot; a pivot
    column vanishing below n*2^-prec times the row scale flags an exact zero.
    """
    A = A.copy()
    n = A.shape[0]
    prec = gmpy2.get_context().precision
    logmod = gmpy2.mpfr(0)
    phase = 0.0
    negate = False
    rownorm = max(abs(x) for x in A.ravel()) if n else gmpy2.mpfr(1)
    tiny = gmpy2.mpfr(n) * gmpy2.exp2(-prec + 4) * rownorm
    for k in range(n):
        col = A[k:, k]
        piv = k + max(range(n - k), key=lambda i: abs(col[i]))
        if abs(A[piv, k]) <= tiny:
            return LogDet.zero()
        if piv != k:
            A[[k, piv]] = A[[piv, k]]
            negate = not negate
        akk = A[k, k]
        if isinstance(akk, gmpy2.mpc):
            logmod += gmpy2.log(abs(akk))
            phase += float(gmpy2.phase(akk))
        else:
            logmod += gmpy2.log(abs(akk))
            if akk < 0:
                phase += math.pi
        if k + 1 < n:
            A[k + 1:, k + 1:] -= np.outer(A[k + 1:, k] / akk, A[k, k + 1:])
    if negate:
        phase += math.pi
    return LogDet(float(logmod), phase)


def logdet_dense(mat: np.ndarray, backend: str = DOUBLE, prec: int = 160) -> LogDet:
    """Log-determinant of a dense matrix under the selected precision backend.

    For the extended backend, float/complex input is upcast entry-wise; object
    arrays of gmpy2 numbers are consumed as-is (entries already at precision).
    """
    if backend == DOUBLE:
        if mat.dtype == object:
            mat = np.asarray([[complex(x) for x in row] for row in mat], dtype=complex)
        return _logdet_double(mat)
    if backend != EXTENDED:
        raise NumericalBackendError(f"unknown backend {backend!r}")
    with ext_context(prec):
        if mat.dtype != object:
            mat = np.asarray(mat)
            out = np.empty(mat.shape, dtype=object)
            if np.iscomplexobj(mat):
                for i in range(mat.shape[0]):
                    for j in range(mat.shape[1]):
                        out[i, j] = to_mpc(mat[i, j])
            else:
                for i in range(mat.shape[0]):
                    for j in range(mat.shape[1]):
                        out[i, j] = to_mpfr(mat[i, j])
            mat = out
        return logdet_lu_object(mat)


# ---------------------------------------------------------------------------
# extended Gauss-Legendre nodes
# ---------------------------------------------------------------------------

def gl_nodes_extended(m: int, prec: int):
    """Gauss-Legendre nodes/weights on [-1, 1] at `prec` bits (Newton on P_m,
    seeded from the double-precision nodes)."""
    with ext_context(prec + 24):
        seeds, _ = np.polynomial.legendre.leggauss(m)
        one = gmpy2.mpfr(1)
        nodes, weights = [], []
        thresh = gmpy2.exp2(-(prec + 12))
        for xd in seeds:
            x = gmpy2.mpfr(float(xd))
            for _ in range(40):
                p0, p1 = one, x
                for k in range(2, m + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = m * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < thresh:
                    break
            p0, p1 = one, x
            for k in range(2, m + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = m * (x * p1 - p0) / (x * x - 1)
            nodes.append(x)
            weights.append(2 / ((1 - x * x) * dp * dp))
    return nodes, weights


# ---------------------------------------------------------------------------
# extended-precision Toeplitz coefficients for the builtins that need them
# ---------------------------------------------------------------------------

def _series_exp(v: list, nmax: int):
    """a_0..a_nmax with sum a_p z^p = exp(sum_{l>=1} v_l z^l): p a_p = sum l v_l a_{p-l}."""
    a = [gmpy2.mpfr(1)] + [gmpy2.mpfr(0)] * nmax
    if v and isinstance(v[0], gmpy2.mpc):
        a = [gmpy2.mpc(1)] + [gmpy2.mpc(0)] * nmax
    for p in range(1, nmax + 1):
        acc = 0
        for l in range(1, min(p, len(v) - 1) + 1):
            acc += l * v[l] * a[p - l]
        a[p] = acc / p
    return a


def ext_coeffs_for(symbol, window: int, prec: int):
    """Extended-precision Fourier coefficients c_{-window}..c_{window} for symbols
    carrying an ext_coeff_tag.  Returns a list of gmpy2 numbers."""
    tag = getattr(symbol, "ext_coeff_tag", None)
    if tag is None:
        raise NumericalBackendError(
            f"symbol {symbol.label!r} has no extended-precision coefficient path")
    with ext_context(prec):
        pi = gmpy2.const_pi()
        if tag == "char_interval":
            mu = to_mpfr(symbol.params["mu"])
            out = []
            for k in range(-window, window + 1):
                out.append(1 - mu / pi if k == 0 else -gmpy2.sin(k * mu) / (pi * k))
            return out
        if tag == "piecewise":
            th1 = to_mpfr(symbol.params["theta1"])
            th2 = to_mpfr(symbol.params["theta2"])
            h = gmpy2.exp(2 * pi * to_mpfr(symbol.params["gamma"]))
            out = []
            for k in range(-window, window + 1):
                if k == 0:
                    out.append(gmpy2.mpc(1 + (h - 1) * (th2 - th1) / (2 * pi)))
                else:
                    seg = (_cexp(-k * th1) - _cexp(-k * th2)) / gmpy2.mpc(0, 2 * pi * k)
                    out.append((h - 1) * seg)
            return out
        if tag == "bt":
            out = []
            for k in range(-window, window + 1):
                if k == 0 or k % 2 == 0:
                    out.append(gmpy2.mpfr(0))
                else:
                    out.append(-2 / (pi * k))
            return out
        if tag == "vseries":
            return _ext_coeffs_vseries(symbol, window)
    raise NumericalBackendError(f"unknown ext coefficient tag {tag!r}")


def _cexp(t):
    return gmpy2.mpc(gmpy2.cos(t), gmpy2.sin(t))


def _ext_coeffs_vseries(symbol, window: int):
    """Coefficients of prefactor e^V z^{w} (w = integer winding from a single
    alpha=0, integer-beta singularity) by exponentiating the V series."""
    winding = 0
    for s in symbol.singularities:
        b = complex(s.beta)
        if abs(s.alpha) > 0 or abs(b.imag) > 1e-15 or abs(b.real - round(b.real)) > 1e-15:
            raise NumericalBackendError("vseries path needs integer-beta singularities only")
        if abs(s.theta) > 1e-15:
            raise NumericalBackendError("vseries path needs the winding factor at theta=0")
        winding += int(round(b.real))
    prec = gmpy2.get_context().precision
    sm = symbol.smooth
    # how many V terms: decay |V_l| ~ g^l / 2l; take enough for 2^-prec
    kmax = max(sm.window, 4)
    while abs(complex(sm.coeff(kmax))) + abs(complex(sm.coeff(-kmax))) > 0.5 ** (prec + 8) \
            and kmax < 64 * max(sm.window, 64):
        kmax *= 2
    vp = [to_mpc(0)] + [to_mpc(sm.coeff(l)) for l in range(1, kmax + 1)]
    vm = [to_mpc(0)] + [to_mpc(sm.coeff(-l)) for l in range(1, kmax + 1)]
    nmax = kmax + window + abs(winding)
    vp += [to_mpc(0)] * (nmax - kmax)
    vm += [to_mpc(0)] * (nmax - kmax)
    a = _series_exp(vp, nmax)   # e^{V_+} = sum a_p z^p
    b = _series_exp(vm, nmax)   # e^{V_-} = sum b_q z^-q
    pre = to_mpc(symbol.prefactor)
    if winding:
        # fold the jump factor e^{i beta (theta - pi)} = z^w e^{-i pi w}
        pre *= _cexp(to_mpfr(-math.pi * winding))
    v0 = to_mpc(sm.v0)
    pre *= gmpy2.exp(v0.real) * _cexp(v0.imag)
    out = []
    for k in range(-window, window + 1):
        m = k - winding
        # coefficient of z^m in e^{V_+} e^{V_-}: sum_q a_{m+q} b_q
        acc = gmpy2.mpc(0)
        q0 = max(0, -m)
        for q in range(q0, nmax - max(m, 0) + 1):
            if m + q > nmax:
                break
            acc += a[m + q] * b[q]
        out.append(pre * acc)
    return out
