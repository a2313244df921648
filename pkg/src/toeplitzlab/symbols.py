"""Symbols on the unit circle: construction, evaluation, Fourier analysis, and the
shift algebra of Fisher-Hartwig representations.

A symbol is stored as

    f(e^{i theta}) = prefactor * e^{V(theta)} * prod_j B_j(theta),
    B_j(theta) = |2 sin((theta - theta_j)/2)|^{2 alpha_j}
                 * exp(i beta_j (((theta - theta_j) mod 2pi) - pi)),

which regroups the canonical root/jump factors (the jump is left-closed at
theta_j).  V lives in SmoothPart as a Fourier-coefficient window, optionally
backed by a closed-form generator and a pointwise evaluator.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special as sp

from .quadpanels import circle_grid

TWO_PI = 2.0 * math.pi

__all__ = [
    "SymbolError", "EvaluationAtSingularPointError", "LogCoefficientError",
    "SmoothPart", "FHSingularity", "CircleSymbol", "FHRepresentation",
    "RepresentationSet", "builtin", "fh_representations", "pure_fh_coeff",
    "parse_symbol_text", "parse_complex", "seminorm",
]


class SymbolError(ValueError):
    pass


class EvaluationAtSingularPointError(SymbolError):
    pass


class LogCoefficientError(SymbolError):
    """log phi has no Fourier expansion (winding, zeros, or FH jumps present)."""


def parse_complex(text: str) -> complex:
    """Parse 'a+bi' style complex literals ('0.3', '-1.2i', '0.1-0.2i')."""
    s = text.strip().replace(" ", "")
    if not s:
        raise SymbolError("empty complex literal")
    try:
        return complex(float(s))
    except ValueError:
        pass
    if s.endswith("i"):
        s = s[:-1]
        # split mantissa at the last sign that is not an exponent sign
        for pos in range(len(s) - 1, 0, -1):
            if s[pos] in "+-" and s[pos - 1] not in "eE":
                re_part, im_part = s[:pos], s[pos:]
                if im_part in ("+", "-"):
                    im_part += "1"
                return complex(float(re_part), float(im_part))
        return complex(0.0, float(s if s not in ("", "+", "-") else s + "1"))
    raise SymbolError(f"cannot parse complex literal {text!r}")


def format_complex(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}i"


# ---------------------------------------------------------------------------
# smooth part
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmoothPart:
    """The log-smooth factor V: a finite Fourier window, optionally backed by a
    closed-form coefficient generator and a pointwise evaluator."""

    fourier_coeffs: dict = field(default_factory=dict)
    coeff_fn: Optional[Callable[[int], complex]] = None   # exact V_k for any k
    evaluator: Optional[Callable[[np.ndarray], np.ndarray]] = None  # V(theta)
    window: int = 0

    @staticmethod
    def zero() -> "SmoothPart":
        return SmoothPart({0: 0.0 + 0.0j})

    @staticmethod
    def from_coeff_fn(fn: Callable[[int], complex], window: int,
                      evaluator=None) -> "SmoothPart":
        coeffs = {k: complex(fn(k)) for k in range(-window, window + 1)}
        return SmoothPart(coeffs, coeff_fn=fn, evaluator=evaluator, window=window)

    @property
    def v0(self) -> complex:
        return complex(self.fourier_coeffs.get(0, 0.0))

    def coeff(self, k: int) -> complex:
        if k in self.fourier_coeffs:
            return complex(self.fourier_coeffs[k])
        if self.coeff_fn is not None:
            return complex(self.coeff_fn(k))
        return 0.0 + 0.0j

    def coeffs_range(self, kmax: int) -> np.ndarray:
        return np.array([self.coeff(k) for k in range(-kmax, kmax + 1)])

    def values(self, theta: np.ndarray) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if self.evaluator is not None:
            return np.asarray(self.evaluator(theta), dtype=complex)
        out = np.zeros(theta.shape, dtype=complex)
        for k, v in self.fourier_coeffs.items():
            out += v * np.exp(1j * k * theta)
        return out


# ---------------------------------------------------------------------------
# singularities and the symbol
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FHSingularity:
    theta: float
    alpha: complex = 0.0
    beta: complex = 0.0

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if self.alpha.real <= -0.5:
            raise SymbolError(f"Re alpha = {self.alpha.real} <= -1/2 is not integrable")


def pure_fh_coeff(alpha: complex, beta: complex, k: int) -> complex:
    """Fourier coefficient of |z-1|^{2 alpha} e^{i beta (theta - pi)}:
    (-1)^k Gamma(1+2 alpha) / (Gamma(1+alpha+beta-k) Gamma(1+alpha-beta+k))."""
    d1 = 1 + alpha + beta - k
    d2 = 1 + alpha - beta + k
    for d in (d1, d2):
        d = complex(d)
        if abs(d.imag) < 1e-13 and d.real < 0.5 and abs(d.real - round(d.real)) < 1e-13:
            return 0.0 + 0.0j
    val = sp.loggamma(complex(1 + 2 * alpha)) - sp.loggamma(complex(d1)) - sp.loggamma(complex(d2))
    return (-1) ** (k % 2) * complex(np.exp(val))


class CircleSymbol:
    """Immutable symbol on the unit circle (see module docstring for the layout)."""

    def __init__(self, smooth: SmoothPart = None, singularities=(), prefactor=1.0,
                 label: str = "custom", params: dict = None,
                 coeff_fn: Callable[[int], complex] = None,
                 point_fn: Callable[[np.ndarray], np.ndarray] = None,
                 ext_coeff_tag: str = None):
        self.smooth = smooth if smooth is not None else SmoothPart.zero()
        sing = tuple(singularities)
        thetas = [s.theta for s in sing]
        if sorted(thetas) != thetas or len(set(thetas)) != len(thetas):
            raise SymbolError("singularity angles must be strictly increasing in [0, 2pi)")
        self.singularities = sing
        self.prefactor = complex(prefactor)
        self.label = label
        self.params = dict(params or {})
        self._coeff_fn = coeff_fn              # exact symbol coefficients, if known
        self._point_fn = point_fn              # full pointwise override (indicators)
        self.ext_coeff_tag = ext_coeff_tag     # key for extended-precision coefficients
        self._cache = {}

    # -- structure ---------------------------------------------------------

    def with_singularities(self, singularities, smooth=None, prefactor=None) -> "CircleSymbol":
        return CircleSymbol(
            smooth if smooth is not None else self.smooth,
            singularities,
            self.prefactor if prefactor is None else prefactor,
            label=self.label, params=self.params)

    @property
    def betas(self):
        return tuple(s.beta for s in self.singularities)

    @property
    def alphas(self):
        return tuple(s.alpha for s in self.singularities)

    @property
    def singular_angles(self):
        return tuple(s.theta for s in self.singularities)

    def is_real(self, nsample: int = 256, tol: float = 1e-12) -> bool:
        theta = np.linspace(0.0, TWO_PI, nsample, endpoint=False) + 0.37e-3
        vals = self.values(theta)
        return bool(np.max(np.abs(vals.imag)) < tol * max(1.0, np.max(np.abs(vals))))

    # -- evaluation ---------------------------------------------------------

    def values(self, theta) -> np.ndarray:
        """Vectorized pointwise values with the left-closed jump convention."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float)) % TWO_PI
        if self._point_fn is not None:
            return np.asarray(self._point_fn(theta), dtype=complex)
        out = self.prefactor * np.exp(self.smooth.values(theta))
        for s in self.singularities:
            psi = (theta - s.theta) % TWO_PI
            jump = np.exp(1j * s.beta * (psi - math.pi))
            if s.alpha != 0:
                root = np.abs(2.0 * np.sin(psi / 2.0)) ** complex(2.0 * s.alpha)
            else:
                root = 1.0
            out = out * root * jump
        return out

    def evaluate(self, theta: float) -> complex:
        """Single-point value; errors at a singular angle when it would be infinite."""
        th = float(theta) % TWO_PI
        for s in self.singularities:
            d = abs(th - s.theta)
            if min(d, TWO_PI - d) < 1e-15 and s.alpha.real < 0:
                raise EvaluationAtSingularPointError(
                    f"symbol diverges at theta = {s.theta}")
        return complex(self.values(np.array([th]))[0])

    # -- Fourier coefficients ----------------------------------------------

    def coeff_exact(self, k: int):
        """Closed-form coefficient if available, else None."""
        if self._coeff_fn is not None:
            return complex(self._coeff_fn(k))
        if len(self.singularities) == 1 and self._is_pure_fh():
            s = self.singularities[0]
            c0 = self.prefactor * cmath.exp(self.smooth.v0)
            return c0 * cmath.exp(-1j * k * s.theta) * pure_fh_coeff(s.alpha, s.beta, k)
        return None

    def _is_pure_fh(self) -> bool:
        nontrivial = any(k != 0 and abs(v) > 0 for k, v in self.smooth.fourier_coeffs.items())
        return not nontrivial and self.smooth.coeff_fn is None

    def fourier_coeffs(self, window: int, of_log: bool = False) -> np.ndarray:
        """Coefficients phi_ell (or (log phi)_ell), ell = -window..window.

        Closed forms are used when available; smooth symbols go through an
        adaptively-sized FFT; FH symbols through graded-panel Gauss-Legendre.
        """
        if of_log:
            return self._log_coeffs(window)
        key = ("c", window)
        if key not in self._cache:
            self._cache[key] = self._coeffs_impl(window)
        return self._cache[key]

    def _coeffs_impl(self, window: int) -> np.ndarray:
        if self.coeff_exact(0) is not None:
            return np.array([self.coeff_exact(k) for k in range(-window, window + 1)])
        if not self.singularities and self._point_fn is None:
            return self._coeffs_fft(window)
        return self._coeffs_quadrature(window)

    def _coeffs_fft(self, window: int) -> np.ndarray:
        n = 256
        while n < 8 * (window + 1):
            n *= 2
        prev = None
        while n <= 1 << 22:
            theta = TWO_PI * np.arange(n) / n
            c = np.fft.fft(self.values(theta)) / n
            out = np.concatenate([c[n - window:], c[:window + 1]])
            tail = np.max(np.abs(c[n // 2 - n // 8: n // 2 + n // 8]))
            scale = max(np.max(np.abs(out)), 1e-300)
            if tail < 1e-15 * scale and prev is not None \
                    and np.max(np.abs(out - prev)) < 1e-13 * scale:
                return out
            prev = out
            n *= 2
        raise SymbolError("FFT coefficient computation did not converge")

    def _quad_grid(self, window: int, order: int = 24, levels: int = 48):
        key = ("grid", window, order, levels)
        if key not in self._cache:
            angles = list(self.singular_angles)
            if self._point_fn is not None and not angles:
                angles = list(self.params.get("breakpoints", []))
            nodes, weights = circle_grid(angles, ell_max=window, order=order,
                                         levels=levels)
            vals = self.values(nodes)
            self._cache[key] = (nodes, weights * vals / TWO_PI)
        return self._cache[key]

    def _coeffs_quadrature(self, window: int) -> np.ndarray:
        nodes, wv = self._quad_grid(window)
        ells = np.arange(-window, window + 1)
        out = np.exp(-1j * np.outer(ells, nodes)) @ wv
        # interlaced-estimate convergence check on a coarser grid
        nodes2, wv2 = self._quad_grid(window, order=20, levels=40)
        probe = ells[:: max(1, len(ells) // 7)]
        alt = np.exp(-1j * np.outer(probe, nodes2)) @ wv2
        scale = max(np.max(np.abs(out)), 1e-30)
        gap = np.max(np.abs(out[np.searchsorted(ells, probe)] - alt))
        if gap > 1e-10 * max(1.0, scale):
            from .linalg import NumericalBackendError
            raise NumericalBackendError(
                f"Fourier quadrature not converged (interlaced gap {gap:.2e})")
        return out

    def _log_coeffs(self, window: int) -> np.ndarray:
        if self.singularities:
            raise LogCoefficientError(
                "log phi is not single-valued: symbol has FH singularities")
        if self._point_fn is not None:
            raise LogCoefficientError("symbol has no smooth logarithm")
        out = self.smooth.coeffs_range(window)
        if abs(self.prefactor) == 0:
            raise LogCoefficientError("zero prefactor")
        out[window] += cmath.log(self.prefactor)
        return out

    def __repr__(self):
        return (f"CircleSymbol({self.label}, m={len(self.singularities)}, "
                f"params={self.params})")


# ---------------------------------------------------------------------------
# Fisher-Hartwig representations (shift algebra)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FHRepresentation:
    base: CircleSymbol
    shifts: tuple

    def __post_init__(self):
        if sum(self.shifts) != 0:
            raise SymbolError("representation shifts must sum to zero")
        if len(self.shifts) != len(self.base.singularities):
            raise SymbolError("one shift per singularity required")

    @property
    def beta_hat(self):
        return tuple(s.beta + n for s, n in zip(self.base.singularities, self.shifts))

    def as_symbol(self) -> CircleSymbol:
        """The shifted representation as a symbol: beta_j -> beta_j + n_j and the
        constant prod z_j^{n_j} folded into V (its V_0 gains i sum n_j theta_j)."""
        sings = tuple(FHSingularity(s.theta, s.alpha, s.beta + n)
                      for s, n in zip(self.base.singularities, self.shifts))
        phase = sum(n * s.theta for s, n in zip(self.base.singularities, self.shifts))
        sm = self.base.smooth
        coeffs = dict(sm.fourier_coeffs)
        coeffs[0] = coeffs.get(0, 0.0) + 1j * phase
        ev = None
        if sm.evaluator is not None:
            base_ev = sm.evaluator
            ev = lambda th, _p=phase: np.asarray(base_ev(th)) + 1j * _p
        smooth = SmoothPart(coeffs, coeff_fn=None, evaluator=ev, window=sm.window)
        return CircleSymbol(smooth, sings, self.base.prefactor,
                            label=self.base.label + "+shift", params=self.base.params)


@dataclass(frozen=True)
class RepresentationSet:
    seminorm: float
    f_beta: float
    members: tuple        # tuple[FHRepresentation]
    degenerate: bool


def seminorm(singularities, beta_hat=None) -> float:
    """|||beta|||: max spread of Re beta over the singularity indices, with the
    convention that a trivial theta=0 slot (alpha=0, beta=0) is excluded and a
    single singularity gives 0."""
    sings = list(singularities)
    if beta_hat is None:
        beta_hat = [s.beta for s in sings]
    rel = [b.real for s, b in zip(sings, beta_hat)
           if not (abs(s.theta) < 1e-15 and abs(s.alpha) < 1e-15 and abs(complex(b)) < 1e-15)]
    if len(rel) <= 1:
        return 0.0
    return max(rel) - min(rel)


def _objective(re_betas, shifts):
    return math.fsum((r + n) ** 2 for r, n in zip(re_betas, shifts))


def _lemma9_minimizers(re_betas, tol=1e-12):
    """All integer shift vectors (sum 0) minimizing sum (Re beta_j + n_j)^2,
    built by greedy reduction plus closure under the add/subtract rule."""
    m = len(re_betas)
    shifts = [-math.floor(r + 0.5) for r in re_betas]
    total = sum(shifts)
    while total != 0:
        if total < 0:
            j = min(range(m), key=lambda i: re_betas[i] + shifts[i])
            shifts[j] += 1
            total += 1
        else:
            j = max(range(m), key=lambda i: re_betas[i] + shifts[i])
            shifts[j] -= 1
            total -= 1
    best = _objective(re_betas, shifts)
    members = {tuple(shifts)}
    frontier = [tuple(shifts)]
    while frontier:
        cur = frontier.pop()
        vals = [re_betas[i] + cur[i] for i in range(m)]
        lo, hi = min(vals), max(vals)
        for j in range(m):
            if vals[j] > lo + tol:
                continue
            for k in range(m):
                if k == j or vals[k] < hi - tol:
                    continue
                cand = list(cur)
                cand[j] += 1
                cand[k] -= 1
                cand = tuple(cand)
                if cand in members:
                    continue
                val = _objective(re_betas, cand)
                if val <= best + tol:
                    members.add(cand)
                    frontier.append(cand)
    return sorted(members), best


def _brute_force_minimizers(re_betas, width=3, tol=1e-12):
    import itertools
    m = len(re_betas)
    best = math.inf
    winners = []
    for combo in itertools.product(range(-width, width + 1), repeat=m):
        if sum(combo) != 0:
            continue
        val = _objective(re_betas, combo)
        if val < best - tol:
            best = val
            winners = [combo]
        elif val <= best + tol:
            winners.append(combo)
    return sorted(winners), best


def fh_representations(symbol: CircleSymbol, verify: bool = True) -> RepresentationSet:
    """Solve the discrete minimization over the shift orbit and return the set of
    minimizing representations, their common seminorm, and the degeneracy flag."""
    sings = symbol.singularities
    if not sings:
        return RepresentationSet(0.0, 0.0, (FHRepresentation(symbol, ()),), False)
    re_betas = [s.beta.real for s in sings]
    members, f_beta = _lemma9_minimizers(re_betas)
    if verify and len(sings) <= 6:
        brute, f_brute = _brute_force_minimizers(re_betas)
        if set(brute) != set(members) or abs(f_brute - f_beta) > 1e-10:
            raise AssertionError(
                f"Lemma-9 construction {members} disagrees with brute force {brute}")
    reps = tuple(FHRepresentation(symbol, m) for m in members)
    norms = {round(seminorm(sings, r.beta_hat), 12) for r in reps}
    degenerate = False
    for r in reps:
        for s, bh in zip(sings, r.beta_hat):
            for val in (s.alpha + bh, s.alpha - bh):
                val = complex(val)
                if abs(val.imag) < 1e-12 and val.real < -0.5 \
                        and abs(val.real - round(val.real)) < 1e-12:
                    degenerate = True
    return RepresentationSet(max(norms), f_beta, reps, degenerate)


# ---------------------------------------------------------------------------
# builtins
# ---------------------------------------------------------------------------

def _geometric_v(gammas_up, gammas_dn, window):
    """V with V_k = -sum_i g_up_i^k/(2k) (k>0), V_{-k} = +sum_i g_dn_i^k/(2k)."""
    def fn(k):
        if k == 0:
            return 0.0j
        if k > 0:
            return complex(-sum(g ** k for g in gammas_up) / (2.0 * k))
        kk = -k
        return complex(sum(g ** kk for g in gammas_dn) / (2.0 * kk))
    return fn


def _window_for(gammas, tol=1e-18):
    g = max([abs(x) for x in gammas] + [0.1])
    g = min(g, 0.999999)
    return max(8, int(math.log(tol) / math.log(g)) + 2)


def builtin(name: str, **params) -> CircleSymbol:
    """Construct a named symbol from the catalogue.

    Names: identity, pure_fh, bt, lenard, two_zeros, jacobi, diag, onsager,
    char_interval, piecewise, exp_cos, geometric.
    """
    if name == "identity":
        return CircleSymbol(SmoothPart.zero(), (), 1.0, label="identity",
                            coeff_fn=lambda k: 1.0 + 0j if k == 0 else 0.0j)

    if name == "pure_fh":
        alpha = complex(params.get("alpha", 0.0))
        beta = complex(params.get("beta", 0.0))
        theta = float(params.get("theta", 0.0))
        return CircleSymbol(SmoothPart.zero(),
                            (FHSingularity(theta, alpha, beta),),
                            label="pure_fh", params={"alpha": alpha, "beta": beta,
                                                     "theta": theta})

    if name == "bt":
        # -i on [0, pi), +i on [pi, 2pi): two pure jumps beta = (1/2, -1/2)
        def bt_coeff(k):
            if k == 0:
                return 0.0j
            return complex(((-1) ** (k % 2) - 1) / (math.pi * k))
        return CircleSymbol(
            SmoothPart.zero(),
            (FHSingularity(0.0, 0.0, 0.5), FHSingularity(math.pi, 0.0, -0.5)),
            label="bt", coeff_fn=bt_coeff, ext_coeff_tag="bt")

    if name == "lenard":
        t = float(params["t"])
        if not 0.0 < t <= math.pi:
            raise SymbolError(f"lenard symbol needs 0 < t <= pi, got {t}")
        sings = (FHSingularity(t / 2.0, 0.5, 0.0),
                 FHSingularity(TWO_PI - t / 2.0, 0.5, 0.0))
        return CircleSymbol(SmoothPart.zero(), sings, label="lenard",
                            params={"t": t})

    if name == "two_zeros":
        th1, th2 = float(params["theta1"]), float(params["theta2"])
        return CircleSymbol(SmoothPart.zero(),
                            (FHSingularity(th1, 0.5, 0.0), FHSingularity(th2, 0.5, 0.0)),
                            label="two_zeros", params={"theta1": th1, "theta2": th2})

    if name == "jacobi":
        lam, mu = float(params["lam"]), float(params["mu"])
        if lam <= 0 or mu <= 0:
            raise SymbolError("jacobi symbol requires lam, mu > 0")
        return CircleSymbol(SmoothPart.zero(),
                            (FHSingularity(math.pi / 2, lam / 2.0, 0.0),
                             FHSingularity(3 * math.pi / 2, mu / 2.0, 0.0)),
                            label="jacobi", params={"lam": lam, "mu": mu})

    if name == "diag":
        k = float(params["k_ons"])
        if k < 0:
            raise SymbolError("diag symbol requires k_ons >= 0")
        if k == 0.0:
            return builtin("identity")
        if abs(k - 1.0) < 1e-14:
            # e^{i(pi-theta)/2}: a single beta = -1/2 jump at theta = 0
            def crit_coeff(kk):
                return complex(2.0 / (math.pi * (2 * kk + 1)))
            sym = CircleSymbol(SmoothPart.zero(),
                               (FHSingularity(0.0, 0.0, -0.5),),
                               label="diag", params={"k_ons": k},
                               coeff_fn=crit_coeff)
            return sym
        if k < 1.0:
            # (log phi_diag)_l = sgn(l) k^{|l|} / (2 |l|)
            w = _window_for([k])

            def fn(kk, _k=k):
                if kk == 0:
                    return 0.0j
                m = abs(kk)
                return complex(math.copysign(1.0, kk) * _k ** m / (2.0 * m))
            ev = _half_log_ratio_evaluator(k, +1.0)
            return CircleSymbol(SmoothPart.from_coeff_fn(fn, w, evaluator=ev), (),
                                label="diag", params={"k_ons": k},
                                ext_coeff_tag="vseries")
        # supercritical: winding -1, phi = e^V * e^{-i(theta - pi)} with
        # V = (1/2)[log(1 - z/k) - log(1 - 1/(kz))]
        w = _window_for([1.0 / k])
        fn = _geometric_v([1.0 / k], [1.0 / k], w)
        ev = _half_log_ratio_evaluator(1.0 / k, -1.0)
        return CircleSymbol(SmoothPart.from_coeff_fn(fn, w, evaluator=ev),
                            (FHSingularity(0.0, 0.0, -1.0),),
                            label="diag", params={"k_ons": k},
                            ext_coeff_tag="vseries")

    if name == "onsager":
        g1, g2 = float(params["gamma1"]), float(params["gamma2"])
        if not (0 < g1 < 1 and g1 < g2):
            raise SymbolError(f"onsager symbol requires 0 < gamma1 < 1, gamma1 < gamma2")
        if abs(g2 - 1.0) < 1e-14:
            w = _window_for([g1])
            fn = _geometric_v([g1], [g1], w)
            return CircleSymbol(SmoothPart.from_coeff_fn(fn, w),
                                (FHSingularity(0.0, 0.0, -0.5),),
                                label="onsager", params={"gamma1": g1, "gamma2": g2},
                                ext_coeff_tag="vseries")
        if g2 < 1.0:
            w = _window_for([g1, g2])

            def fn(kk):
                if kk == 0:
                    return 0.0j
                if kk > 0:
                    return complex(-(g1 ** kk - g2 ** kk) / (2.0 * kk))
                m = -kk
                return complex((g1 ** m - g2 ** m) / (2.0 * m))
            ev = _make_onsager_evaluator(g1, g2)
            return CircleSymbol(SmoothPart.from_coeff_fn(fn, w, evaluator=ev), (),
                                label="onsager", params={"gamma1": g1, "gamma2": g2},
                                ext_coeff_tag="vseries")
        # supercritical: winding -1; V_k = -(g1^k + g2^{-k})/2k
        w = _window_for([g1, 1.0 / g2])
        fn = _geometric_v([g1, 1.0 / g2], [g1, 1.0 / g2], w)
        return CircleSymbol(SmoothPart.from_coeff_fn(fn, w),
                            (FHSingularity(0.0, 0.0, -1.0),),
                            label="onsager", params={"gamma1": g1, "gamma2": g2},
                            ext_coeff_tag="vseries")

    if name == "char_interval":
        mu = float(params["mu"])
        if not 0.0 < mu < math.pi:
            raise SymbolError(f"char_interval requires 0 < mu < pi, got {mu}")

        def ci_coeff(k):
            if k == 0:
                return complex(1.0 - mu / math.pi)
            return complex(-math.sin(k * mu) / (math.pi * k))

        def ci_point(theta):
            return ((theta > mu) & (theta < TWO_PI - mu)).astype(complex)

        return CircleSymbol(SmoothPart.zero(), (), label="char_interval",
                            params={"mu": mu, "breakpoints": [mu, TWO_PI - mu]},
                            coeff_fn=ci_coeff, point_fn=ci_point,
                            ext_coeff_tag="char_interval")

    if name == "piecewise":
        th1 = float(params["theta1"]) % TWO_PI
        th2 = float(params["theta2"]) % TWO_PI
        gamma = float(params["gamma"])
        if not (0.0 <= th1 < th2 < TWO_PI):
            raise SymbolError("piecewise symbol needs 0 <= theta1 < theta2 < 2pi")
        if gamma < 0:
            raise SymbolError("piecewise symbol needs gamma >= 0")
        if gamma == 0:
            return builtin("identity")
        h = math.exp(2 * math.pi * gamma)

        def pw_coeff(k):
            if k == 0:
                return complex(1.0 + (h - 1.0) * (th2 - th1) / TWO_PI)
            # integral of e^{-ik theta}/2pi over [th1, th2], scaled by (h-1)
            seg = (cmath.exp(-1j * k * th1) - cmath.exp(-1j * k * th2)) / (2j * math.pi * k)
            return complex((h - 1.0) * seg)

        # prefactor z1^{beta1} z2^{beta2} with beta = (i gamma, -i gamma)
        pre = cmath.exp((1j * th1) * (1j * gamma) + (1j * th2) * (-1j * gamma))
        sings = [FHSingularity(th1, 0.0, 1j * gamma),
                 FHSingularity(th2, 0.0, -1j * gamma)]
        return CircleSymbol(SmoothPart.zero(), tuple(sings), prefactor=pre,
                            label="piecewise",
                            params={"theta1": th1, "theta2": th2, "gamma": gamma},
                            coeff_fn=pw_coeff, ext_coeff_tag="piecewise")

    if name == "exp_cos":
        t = float(params["t"])
        coeffs = {0: 0.0j, 1: complex(t), -1: complex(t)}
        ev = lambda th: 2.0 * t * np.cos(th) + 0.0j
        return CircleSymbol(SmoothPart(coeffs, evaluator=ev, window=1), (),
                            label="exp_cos", params={"t": t},
                            ext_coeff_tag="vseries")

    if name == "geometric":
        a = float(params["a"])
        if not 0 < abs(a) < 1:
            raise SymbolError("geometric symbol requires 0 < |a| < 1")
        w = _window_for([abs(a)])

        def fn(k):
            if k == 0:
                return 0.0j
            return complex(a ** abs(k) / abs(k))
        ev = lambda th: -np.log(np.abs(1 - a * np.exp(1j * th)) ** 2) + 0.0j
        return CircleSymbol(SmoothPart.from_coeff_fn(fn, w, evaluator=ev), (),
                            label="geometric", params={"a": a},
                            ext_coeff_tag="vseries")

    raise SymbolError(f"unknown builtin symbol {name!r}")


def _half_log_ratio_evaluator(a, sign):
    """V(theta) = sign * (1/2) [log(1 - a e^{-i theta}) - log(1 - a e^{i theta})], |a| < 1."""
    def ev(theta):
        z = np.exp(1j * theta)
        return sign * 0.5 * (np.log(1 - a / z) - np.log(1 - a * z))
    return ev


def _make_onsager_evaluator(g1, g2):
    def ev(theta):
        z = np.exp(1j * theta)
        return 0.5 * (np.log(1 - g1 * z) - np.log(1 - g1 / z)
                      + np.log(1 - g2 / z) - np.log(1 - g2 * z))
    return ev


# ---------------------------------------------------------------------------
# symbol description files (key=value)
# ---------------------------------------------------------------------------

def parse_symbol_text(text: str) -> CircleSymbol:
    """Parse the plain key=value symbol description format.

    kind=builtin requires name=... and param.<key>=<value> lines;
    kind=fh takes prefactor=, V.<k>=, and sing.<j>.{theta,alpha,beta}= lines.
    """
    entries = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise SymbolError(f"bad symbol-file line: {line!r}")
        key, _, value = line.partition("=")
        entries[key.strip()] = value.strip()
    kind = entries.pop("kind", "fh")
    if kind == "builtin":
        name = entries.pop("name", None)
        if name is None:
            raise SymbolError("builtin symbol file needs a name= line")
        params = {}
        for key, value in entries.items():
            if not key.startswith("param."):
                raise SymbolError(f"unexpected key {key!r} in builtin symbol file")
            pname = key[len("param."):]
            try:
                params[pname] = float(value)
            except ValueError:
                params[pname] = parse_complex(value)
        return builtin(name, **params)
    if kind != "fh":
        raise SymbolError(f"unknown symbol kind {kind!r}")
    prefactor = parse_complex(entries.pop("prefactor", "1"))
    coeffs = {}
    sing_fields: dict = {}
    for key, value in entries.items():
        if key.startswith("V."):
            coeffs[int(key[2:])] = parse_complex(value)
        elif key.startswith("sing."):
            _, idx, fieldname = key.split(".")
            sing_fields.setdefault(int(idx), {})[fieldname] = value
        else:
            raise SymbolError(f"unexpected key {key!r} in symbol file")
    sings = []
    for idx in sorted(sing_fields):
        f = sing_fields[idx]
        sings.append(FHSingularity(float(f["theta"]),
                                   parse_complex(f.get("alpha", "0")),
                                   parse_complex(f.get("beta", "0"))))
    coeffs.setdefault(0, 0.0j)
    return CircleSymbol(SmoothPart(coeffs, window=max([abs(k) for k in coeffs] + [0])),
                        tuple(sorted(sings, key=lambda s: s.theta)),
                        prefactor, label="file")
