"""Special functions, adaptive quadrature and KS kernels shared by the package.

All quadrature routines expect *vectorized* integrands: ``f(x)`` (or
``f(x, y)``) receives numpy arrays and must return an array of the same shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special, stats


class ConvergenceError(RuntimeError):
    """Adaptive quadrature ran out of evaluations before meeting tolerance."""

    def __init__(self, message: str, result: "QuadratureResult"):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class Tolerance:
    abs_tol: float = 1e-10
    rel_tol: float = 0.0
    max_evals: int = 5_000_000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.rel_tol < 0:
            raise ValueError("rel_tol must be non-negative")
        if self.max_evals < 1:
            raise ValueError("max_evals must be at least 1")

    def target(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evals: int


# ---------------------------------------------------------------------------
# scalar distribution functions
# ---------------------------------------------------------------------------

def std_normal_pdf(x):
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def std_normal_cdf(x):
    """Standard normal cdf through the complementary error function.

    Evaluating ``0.5 * erfc(-x / sqrt(2))`` keeps full relative accuracy in the
    lower tail and saturates to 0 / 1 beyond the double range.
    """
    x = np.asarray(x, dtype=float)
    out = 0.5 * special.erfc(-x / math.sqrt(2.0))
    return out if out.ndim else float(out)


def laplace_pdf(x):
    x = np.asarray(x, dtype=float)
    return 0.5 * np.exp(-np.abs(x))


def laplace_cdf(x):
    x = np.asarray(x, dtype=float)
    # 0.5*exp(-|x|) is the smaller tail on both sides
    tail = 0.5 * np.exp(-np.abs(x))
    out = np.where(x <= 0, tail, 1.0 - tail)
    return out if out.ndim else float(out)


def log_gamma(w: float) -> float:
    if not w > 0:
        raise ValueError(f"log_gamma requires a positive argument, got {w!r}")
    return math.lgamma(w)


# ---------------------------------------------------------------------------
# Gauss-Kronrod 7/15 rule on [-1, 1]
# ---------------------------------------------------------------------------

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

GK_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
GK_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss nodes sit at the odd Kronrod positions
G_WEIGHTS = np.zeros(15)
G_WEIGHTS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])


_EPS = np.finfo(float).eps


def _qk_error(k, g, resasc, resabs):
    """QUADPACK-style error scaling of |K - G|, floored at roundoff level."""
    err = np.abs(k - g)
    scaled = np.where(resasc > 0,
                      resasc * np.minimum(1.0, (200.0 * err / np.where(resasc > 0, resasc, 1.0)) ** 1.5),
                      err)
    floor = 50.0 * _EPS * resabs
    return np.maximum(scaled, floor), floor


def _panels_1d(f, a, b):
    """Kronrod value, error estimate and roundoff floor on each panel [a_i, b_i]."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * GK_NODES[None, :]
    fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    k = half * (fx @ GK_WEIGHTS)
    g = half * (fx @ G_WEIGHTS)
    mean = (fx @ GK_WEIGHTS) / 2.0
    resabs = np.abs(half) * (np.abs(fx) @ GK_WEIGHTS)
    resasc = np.abs(half) * (np.abs(fx - mean[:, None]) @ GK_WEIGHTS)
    err, floor = _qk_error(k, g, resasc, resabs)
    return k, err, floor


def _map_infinite(f, a, b):
    """Rewrite an improper integral as one over a finite interval."""
    if np.isfinite(a) and np.isfinite(b):
        return f, a, b
    if np.isinf(a) and np.isinf(b):
        if a > 0 or b < 0:
            raise ValueError("degenerate infinite interval")

        def g(t):
            d = 1.0 - t * t
            return f(t / d) * (1.0 + t * t) / (d * d)
        return g, -1.0, 1.0
    if np.isinf(b):
        def g(t):
            d = 1.0 - t
            return f(a + t / d) / (d * d)
        return g, 0.0, 1.0

    def g(t):
        d = 1.0 - t
        return f(b - t / d) / (d * d)
    return g, 0.0, 1.0


def _adaptive(evaluate, split, cells, tol, evals_per_cell, name):
    values, errors, floors = evaluate(cells)
    evals = len(values) * evals_per_cell
    while True:
        total = float(np.sum(values))
        err = float(np.sum(errors))
        target = tol.target(total)
        if err <= target:
            return QuadratureResult(total, err, evals)
        # refine every cell whose error exceeds its fair share of the budget,
        # leaving alone cells already at roundoff level
        share = 0.5 * target / len(errors)
        live = errors > 2.0 * floors
        bad = (errors > share) & live
        if not np.any(bad):
            if not np.any(live):
                # nothing left to gain from subdivision
                return QuadratureResult(total, err, evals)
            bad = errors >= errors[live].max()
        children = split(cells, bad)
        n_new = children[0].shape[0]
        if evals + n_new * evals_per_cell > tol.max_evals:
            result = QuadratureResult(total, err, evals)
            raise ConvergenceError(
                f"{name}: max_evals={tol.max_evals} exceeded "
                f"(estimate {total:.15g}, error {err:.3g})", result)
        cv, ce, cf = evaluate(children)
        keep = ~bad
        cells = tuple(np.concatenate([c[keep], ch]) for c, ch in zip(cells, children))
        values = np.concatenate([values[keep], cv])
        errors = np.concatenate([errors[keep], ce])
        floors = np.concatenate([floors[keep], cf])
        evals += n_new * evals_per_cell


def integrate_1d(f, a: float, b: float, tol: Tolerance | None = None,
                 initial_panels: int = 8) -> QuadratureResult:
    """Globally adaptive Gauss-Kronrod (7, 15) integration of ``f`` over [a, b].

    Infinite limits are handled by the usual rational substitution onto a
    finite interval.  Raises ConvergenceError (carrying the best estimate)
    when ``tol.max_evals`` would be exceeded.
    """
    tol = tol or Tolerance()
    if not a < b:
        raise ValueError("integrate_1d requires a < b")
    g, lo, hi = _map_infinite(f, float(a), float(b))
    edges = np.linspace(lo, hi, initial_panels + 1)

    def evaluate(cells):
        return _panels_1d(g, cells[0], cells[1])

    def split(cells, bad):
        lo_, hi_ = cells[0][bad], cells[1][bad]
        mid = 0.5 * (lo_ + hi_)
        return np.concatenate([lo_, mid]), np.concatenate([mid, hi_])

    return _adaptive(evaluate, split, (edges[:-1], edges[1:]), tol, 15, "integrate_1d")


def integrate_2d(f, box, tol: Tolerance | None = None,
                 initial_panels: int = 4) -> QuadratureResult:
    """Adaptive product Gauss-Kronrod cubature over a rectangle.

    ``box`` is ``((x0, x1), (y0, y1))`` with finite limits; ``f(x, y)`` is
    called with equally shaped arrays.  Each panel uses the 15x15 Kronrod
    product rule with the embedded 7x7 Gauss rule as error estimate; panels
    are quartered until the summed estimate meets the tolerance.
    """
    tol = tol or Tolerance()
    (x0, x1), (y0, y1) = box
    if not (x0 < x1 and y0 < y1):
        raise ValueError("integrate_2d requires a non-degenerate box")
    if not all(np.isfinite([x0, x1, y0, y1])):
        raise ValueError("integrate_2d requires a finite box")
    xe = np.linspace(x0, x1, initial_panels + 1)
    ye = np.linspace(y0, y1, initial_panels + 1)
    xa, ya = np.meshgrid(xe[:-1], ye[:-1], indexing="ij")
    xb, yb = np.meshgrid(xe[1:], ye[1:], indexing="ij")
    cells = tuple(c.ravel() for c in (xa, xb, ya, yb))
    wk = np.outer(GK_WEIGHTS, GK_WEIGHTS).ravel()
    wg = np.outer(G_WEIGHTS, G_WEIGHTS).ravel()
    nx, ny = (c.ravel() for c in np.meshgrid(GK_NODES, GK_NODES, indexing="ij"))

    def evaluate(cells, chunk=4096):
        xa, xb, ya, yb = cells
        vals = np.empty(len(xa))
        errs = np.empty(len(xa))
        floors = np.empty(len(xa))
        for s in range(0, len(xa), chunk):
            sl = slice(s, s + chunk)
            hx, hy = 0.5 * (xb[sl] - xa[sl]), 0.5 * (yb[sl] - ya[sl])
            mx, my = 0.5 * (xb[sl] + xa[sl]), 0.5 * (yb[sl] + ya[sl])
            px = mx[:, None] + hx[:, None] * nx[None, :]
            py = my[:, None] + hy[:, None] * ny[None, :]
            fv = np.asarray(f(px, py), dtype=float)
            area = hx * hy
            k = area * (fv @ wk)
            g = area * (fv @ wg)
            resabs = np.abs(area) * (np.abs(fv) @ wk)
            vals[sl] = k
            errs[sl], floors[sl] = _qk_error(k, g, np.abs(k - g), resabs)
        return vals, errs, floors

    def split(cells, bad):
        xa, xb, ya, yb = (c[bad] for c in cells)
        xm, ym = 0.5 * (xa + xb), 0.5 * (ya + yb)
        return (np.concatenate([xa, xm, xa, xm]), np.concatenate([xm, xb, xm, xb]),
                np.concatenate([ya, ya, ym, ym]), np.concatenate([ym, ym, yb, yb]))

    return _adaptive(evaluate, split, cells, tol, 225, "integrate_2d")


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KSResult:
    statistic: float
    pvalue: float


def ks_two_sample(a, b) -> KSResult:
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size == 0 or b.size == 0:
        raise ValueError("ks_two_sample needs two non-empty samples")
    res = stats.ks_2samp(a, b, method="asymp")
    return KSResult(float(res.statistic), float(res.pvalue))


def ks_one_sample(a, cdf) -> KSResult:
    """KS test of a sample against a reference cdf (callable)."""
    a = np.asarray(a, dtype=float).ravel()
    if a.size == 0:
        raise ValueError("ks_one_sample needs a non-empty sample")
    res = stats.kstest(a, cdf, method="asymp")
    return KSResult(float(res.statistic), float(res.pvalue))
