"""Panel Gauss-Legendre grids with geometric grading toward algebraic singularities.

Used for Fourier coefficients of Fisher-Hartwig symbols on the circle and for
moments of singular weights on [-1, 1].  Uniform grids lose all accuracy on
|z - z_j|^{2 alpha} factors; dyadically graded panels restore geometric
convergence per panel.
"""

import numpy as np

_GL_CACHE: dict = {}


def _gl(order: int):
    if order not in _GL_CACHE:
        _GL_CACHE[order] = np.polynomial.legendre.leggauss(order)
    return _GL_CACHE[order]


def _panel_nodes(panels, order):
    x0, w0 = _gl(order)
    a = np.asarray([p[0] for p in panels])
    b = np.asarray([p[1] for p in panels])
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    nodes = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
    weights = (half[:, None] * w0[None, :]).ravel()
    return nodes, weights


def graded_panels(a: float, b: float, grade_left: bool, grade_right: bool,
                  levels: int = 50, max_len: float = np.inf):
    """Split [a, b] into panels, halving geometrically toward graded endpoints.

    The innermost panel touching a graded endpoint has length (b-a) 2^{-levels},
    so an integrand ~ u^p (p > -1) near that endpoint is resolved to
    ~ 2^{-levels (p+1)} absolute error.
    """
    if not (b > a):
        raise ValueError("empty panel interval")
    length = b - a
    cuts = [0.0, 1.0]
    if grade_left and grade_right:
        cuts = [0.5]
        cuts += [0.5 ** k for k in range(2, levels + 1)]
        cuts += [1.0 - 0.5 ** k for k in range(2, levels + 1)]
        cuts += [0.0, 1.0]
    elif grade_left:
        cuts = [0.0] + [0.5 ** k for k in range(1, levels + 1)] + [1.0]
    elif grade_right:
        cuts = [0.0] + [1.0 - 0.5 ** k for k in range(1, levels + 1)] + [1.0]
    cuts = np.unique(np.asarray(cuts))
    pts = a + length * cuts
    panels = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi - lo <= max_len or lo == pts[0] and grade_left or hi == pts[-1] and grade_right:
            seg = [(lo, hi)]
        else:
            k = int(np.ceil((hi - lo) / max_len))
            edges = np.linspace(lo, hi, k + 1)
            seg = list(zip(edges[:-1], edges[1:]))
        panels.extend(seg)
    return panels


def circle_grid(singular_angles, ell_max: int, order: int = 24, levels: int = 48):
    """Quadrature nodes/weights on [0, 2pi) resolving the given singular angles.

    Panels are cut at each singular angle and graded toward it from both sides;
    panel length is additionally capped so that order-`order` Gauss-Legendre
    resolves e^{i ell theta} for |ell| <= ell_max.
    """
    two_pi = 2 * np.pi
    max_len = min(np.pi / 3, 0.25 * order * two_pi / max(ell_max, 1) / 3.0)
    angs = sorted(a % two_pi for a in singular_angles)
    if not angs:
        panels = graded_panels(0.0, two_pi, False, False, max_len=max_len)
        return _panel_nodes(panels, order)
    panels = []
    for i, a in enumerate(angs):
        b = angs[i + 1] if i + 1 < len(angs) else angs[0] + two_pi
        if b - a < 1e-13:
            raise ValueError("coincident singular angles")
        panels += graded_panels(a, b, True, True, levels=levels, max_len=max_len)
    nodes, weights = _panel_nodes(panels, order)
    return nodes % two_pi, weights


def interval_grid(a: float, b: float, singular_points, order: int = 24, levels: int = 40,
                  grade_ends: bool = True, max_len: float = np.inf):
    """Quadrature nodes/weights on [a, b] graded toward interior singular points
    (both sides) and, optionally, toward the endpoints."""
    pts = sorted(set([a, b]) | {float(p) for p in singular_points if a < p < b})
    panels = []
    for lo, hi in zip(pts[:-1], pts[1:]):
        gl = grade_ends if lo == a else True
        gr = grade_ends if hi == b else True
        panels += graded_panels(lo, hi, gl, gr, levels=levels, max_len=max_len)
    return _panel_nodes(panels, order)
