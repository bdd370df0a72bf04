"""Closed forms for the product-gamma base with Laplace modulation.

The density is 2 f1(z1) f1(z2) G{alpha (z1 - z2)} with f1 the Gamma(omega, 1)
density and G the Laplace cdf.  For alpha > 0, Z1 is distributed as Y1 given
T < Y1 where T = X / alpha + Y2, X ~ Laplace; ``f_T`` / ``F_T`` are the density
and cdf of T.
"""

from __future__ import annotations

import math

import numpy as np

from .numerics import Tolerance, integrate_1d, laplace_pdf, log_gamma


def _check_omega(omega) -> int:
    if isinstance(omega, (bool, np.bool_)) or int(omega) != omega or omega < 1:
        raise ValueError(f"closed forms need an integer omega >= 1, got {omega!r}")
    return int(omega)


def _sum_terms(t, c, omega):
    """sum_{k<omega} t^k / (k! c^(omega-k))."""
    k = np.arange(omega)
    fact = np.array([math.factorial(i) for i in k], dtype=float)
    return np.sum(t[..., None] ** k / (fact * c ** (omega - k)), axis=-1)


def _scaled_lower(t, alpha, omega):
    """exp(-alpha t) * int_0^t x^(omega-1) exp(-(1 - alpha) x) dx, t >= 0."""
    c = 1.0 - alpha
    if alpha == 1.0:
        return np.exp(-alpha * t) * t ** omega / omega
    ct = c * t
    # power series where the closed form cancels badly
    series = np.zeros_like(t)
    term = t ** omega
    for j in range(60):
        series = series + term / (omega + j)
        term = term * (-ct) / (j + 1)
    series = np.exp(-alpha * t) * series
    with np.errstate(over="ignore", invalid="ignore"):
        closed = math.gamma(omega) * (np.exp(-alpha * t) / c ** omega - np.exp(-t) * _sum_terms(t, c, omega))
    return np.where(np.abs(ct) < 1.0, series, closed)


def f_T(t, alpha: float, omega: int = 1):
    """Density of T = X/alpha + Y2 (alpha > 0, integer omega)."""
    omega = _check_omega(omega)
    if not alpha > 0:
        raise ValueError("f_T needs alpha > 0; pass |alpha|")
    t = np.asarray(t, dtype=float)
    neg = alpha / (2.0 * (1.0 + alpha) ** omega) * np.exp(alpha * np.minimum(t, 0.0))
    tp = np.maximum(t, 0.0)
    # exp(-alpha t) I1 + exp(alpha t) I2, each factor folded in to avoid overflow
    lower = _scaled_lower(tp, alpha, omega)
    upper = math.gamma(omega) * np.exp(-tp) * _sum_terms(tp, 1.0 + alpha, omega)
    pos = alpha / (2.0 * math.gamma(omega)) * (lower + upper)
    out = np.where(t <= 0, neg, pos)
    return out if out.ndim else float(out)


def f_T_quadrature(t: float, alpha: float, omega: float = 1, tol: Tolerance | None = None) -> float:
    """Direct numerical evaluation of int_0^inf f1(y) g[alpha (t - y)] alpha dy."""
    lg = log_gamma(omega)

    def integrand(y):
        ys = np.maximum(y, 1e-300)
        f1 = np.exp((omega - 1.0) * np.log(ys) - ys - lg)
        return f1 * laplace_pdf(alpha * (t - y)) * alpha

    tol = tol or Tolerance(abs_tol=1e-13)
    if t > 0:
        # split at the kink of the Laplace density
        return (integrate_1d(integrand, 0.0, t, tol).value
                + integrate_1d(integrand, t, math.inf, tol).value)
    return integrate_1d(integrand, 0.0, math.inf, tol).value


def F_T(t, alpha: float):
    """Cdf of T for omega = 1 and alpha > 0."""
    if not alpha > 0:
        raise ValueError("F_T needs alpha > 0; pass |alpha|")
    t = np.asarray(t, dtype=float)
    neg = np.exp(alpha * np.minimum(t, 0.0)) / (2.0 * (1.0 + alpha))
    tp = np.maximum(t, 0.0)
    if alpha == 1.0:
        pos = 1.0 - np.exp(-tp) * (0.75 + tp / 2.0)
    else:
        pos = 1.0 - alpha ** 2 / (alpha ** 2 - 1.0) * np.exp(-tp) + np.exp(-alpha * tp) / (2.0 * (alpha - 1.0))
    out = np.where(t <= 0, neg, pos)
    return out if out.ndim else float(out)


def F_T_numeric(t: float, alpha: float, omega: int = 1, tol: Tolerance | None = None) -> float:
    """Cdf of T for any integer omega by integrating the closed-form f_T."""
    tol = tol or Tolerance(abs_tol=1e-13)
    f = lambda x: f_T(x, alpha, omega)  # noqa: E731
    if t <= 0:
        return integrate_1d(f, -math.inf, t, tol).value
    return integrate_1d(f, -math.inf, 0.0, tol).value + integrate_1d(f, 0.0, t, tol).value


def _exp_pdf(z):
    z = np.asarray(z, dtype=float)
    return np.where(z > 0, np.exp(-np.maximum(z, 0.0)), 0.0)


def marginal_pdf(which: str, z, alpha: float):
    """Marginal density of Z1 or Z2 (omega = 1)."""
    if which not in ("Z1", "Z2"):
        raise ValueError("which must be 'Z1' or 'Z2'")
    z = np.asarray(z, dtype=float)
    f1 = _exp_pdf(z)
    if alpha == 0:
        return f1
    if alpha < 0:
        which = "Z2" if which == "Z1" else "Z1"
    F = F_T(np.maximum(z, 0.0), abs(alpha))
    out = 2.0 * f1 * (F if which == "Z1" else 1.0 - F)
    return out if out.ndim else float(out)


def marginal_cdf(which: str, z: float, alpha: float, tol: Tolerance | None = None) -> float:
    if z <= 0:
        return 0.0
    tol = tol or Tolerance(abs_tol=1e-12)
    return integrate_1d(lambda x: marginal_pdf(which, x, alpha), 0.0, float(z), tol).value


def moment(which: str, r: float, alpha: float) -> float:
    """E{Z^r} of the chosen marginal (omega = 1, any r > 0)."""
    if which not in ("Z1", "Z2"):
        raise ValueError("which must be 'Z1' or 'Z2'")
    if not r > 0:
        raise ValueError("r must be positive")
    if alpha < 0:
        return moment("Z2" if which == "Z1" else "Z1", r, -alpha)
    g = math.exp(log_gamma(r + 1.0))
    if alpha == 1.0:
        m1 = g * (2.0 - (r + 4.0) / 2.0 ** (r + 2.0))
    else:
        a2 = alpha * alpha
        m1 = g * (2.0 - (a2 / 2.0 ** r - 1.0 / (1.0 + alpha) ** r) / (a2 - 1.0))
    return m1 if which == "Z1" else 2.0 * g - m1


def correlation(alpha: float) -> float:
    """cor(Z1, Z2) for omega = 1, using E{Z1 Z2} = 1."""
    mu1, mu2 = moment("Z1", 1, alpha), moment("Z2", 1, alpha)
    v1 = moment("Z1", 2, alpha) - mu1 ** 2
    v2 = moment("Z2", 2, alpha) - mu2 ** 2
    return (1.0 - mu1 * mu2) / math.sqrt(v1 * v2)
