"""Base densities f0: pdf, exact sampler, truncation box and symmetry flags.

Points are numpy arrays whose last axis holds the coordinates, so a bivariate
pdf maps shape ``(..., 2)`` to shape ``(...)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .numerics import std_normal_cdf, std_normal_pdf

FULL_PLANE = "full-plane"
POSITIVE_QUADRANT = "positive-quadrant"
INTERVAL = "interval"


@dataclass(frozen=True)
class SymmetryMeta:
    centrally_symmetric: bool
    exchange_symmetric: bool
    support: str


class BaseDensity:
    """Common surface of every base density."""

    dim: int = 2
    symmetry: SymmetryMeta

    def pdf(self, y):
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        raise NotImplementedError

    def box(self):
        """Truncated support used for numerical integration."""
        raise NotImplementedError

    def marginal_cdfs(self):
        """Coordinate cdfs for bases with independent components, else None."""
        return None


def _split(y):
    y = np.asarray(y, dtype=float)
    return y[..., 0], y[..., 1]


@dataclass(frozen=True)
class BivariateNormalBase(BaseDensity):
    """N2(0, Omega) with Omega a correlation matrix with off-diagonal rho."""

    rho: float = 0.0
    symmetry: SymmetryMeta = field(
        default=SymmetryMeta(True, True, FULL_PLANE), init=False, repr=False)

    def __post_init__(self):
        if not -1.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (-1, 1), got {self.rho}")

    @property
    def omega(self) -> np.ndarray:
        return np.array([[1.0, self.rho], [self.rho, 1.0]])

    def mahalanobis(self, y):
        y1, y2 = _split(y)
        return (y1 * y1 - 2.0 * self.rho * y1 * y2 + y2 * y2) / (1.0 - self.rho ** 2)

    def pdf(self, y):
        det = 1.0 - self.rho ** 2
        return np.exp(-0.5 * self.mahalanobis(y)) / (2.0 * math.pi * math.sqrt(det))

    def sample(self, rng, n):
        chol = np.linalg.cholesky(self.omega)
        return rng.standard_normal((n, 2)) @ chol.T

    def box(self):
        return ((-8.0, 8.0), (-8.0, 8.0))


@dataclass(frozen=True)
class ProductGammaBase(BaseDensity):
    """Independent Gamma(omega, 1) coordinates."""

    omega: float = 1.0
    symmetry: SymmetryMeta = field(
        default=SymmetryMeta(False, True, POSITIVE_QUADRANT), init=False, repr=False)

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")

    def marginal_pdf(self, x):
        x = np.asarray(x, dtype=float)
        w = self.omega
        pos = x > 0
        xs = np.where(pos, x, 1.0)
        logf = (w - 1.0) * np.log(xs) - xs - math.lgamma(w)
        return np.where(pos, np.exp(logf), 0.0)

    def marginal_cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, special.gammainc(self.omega, np.maximum(x, 0.0)), 0.0)

    def pdf(self, y):
        y1, y2 = _split(y)
        return self.marginal_pdf(y1) * self.marginal_pdf(y2)

    def sample(self, rng, n):
        return rng.gamma(self.omega, 1.0, size=(n, 2))

    def box(self):
        hi = self.omega + 40.0 * max(1.0, math.sqrt(self.omega))
        return ((0.0, hi), (0.0, hi))

    def marginal_cdfs(self):
        return (self.marginal_cdf, self.marginal_cdf)


@dataclass(frozen=True)
class GumbelBivExpBase(BaseDensity):
    """Gumbel's type I bivariate exponential, S(y) = exp(-y1 - y2 - lam*y1*y2)."""

    lam: float = 0.0
    symmetry: SymmetryMeta = field(
        default=SymmetryMeta(False, True, POSITIVE_QUADRANT), init=False, repr=False)

    def __post_init__(self):
        if not 0.0 <= self.lam < 1.0:
            raise ValueError(f"lambda must lie in [0, 1), got {self.lam}")

    def survival(self, y):
        y1, y2 = _split(y)
        y1, y2 = np.maximum(y1, 0.0), np.maximum(y2, 0.0)
        return np.exp(-y1 - y2 - self.lam * y1 * y2)

    def pdf(self, y):
        # mixed second derivative of the survival function
        y1, y2 = _split(y)
        lam = self.lam
        inside = (y1 > 0) & (y2 > 0)
        val = np.exp(-y1 - y2 - lam * y1 * y2) * ((1 + lam * y1) * (1 + lam * y2) - lam)
        return np.where(inside, val, 0.0)

    def sample(self, rng, n):
        # Y1 ~ Exp(1); given Y1 = y1, Y2 is a mixture of Exp(c) and Gamma(2, c)
        # with c = 1 + lam*y1 and weights (c - lam)/c, lam/c.
        y1 = rng.exponential(1.0, size=n)
        c = 1.0 + self.lam * y1
        second = rng.random(n) < self.lam / c
        shape = np.where(second, 2.0, 1.0)
        y2 = rng.gamma(shape, 1.0) / c
        return np.column_stack([y1, y2])

    def box(self):
        return ((0.0, 41.0), (0.0, 41.0))


# ---------------------------------------------------------------------------
# univariate bases, used by the one-dimensional integral-transform construction
# ---------------------------------------------------------------------------

class UnivariateBase(BaseDensity):
    dim = 1

    def cdf(self, x):
        raise NotImplementedError


@dataclass(frozen=True)
class UniformBase(UnivariateBase):
    """Uniform density on (-1/2, 1/2)."""

    symmetry: SymmetryMeta = field(
        default=SymmetryMeta(True, False, INTERVAL), init=False, repr=False)

    def pdf(self, y):
        x = np.asarray(y, dtype=float)[..., 0]
        return np.where(np.abs(x) < 0.5, 1.0, 0.0)

    def cdf(self, x):
        return np.clip(np.asarray(x, dtype=float) + 0.5, 0.0, 1.0)

    def sample(self, rng, n):
        return rng.uniform(-0.5, 0.5, size=(n, 1))

    def box(self):
        return ((-0.5, 0.5),)


@dataclass(frozen=True)
class ExponentialBase(UnivariateBase):
    """Exponential density with the given rate."""

    rate: float = 1.0
    symmetry: SymmetryMeta = field(
        default=SymmetryMeta(False, False, INTERVAL), init=False, repr=False)

    def pdf(self, y):
        x = np.asarray(y, dtype=float)[..., 0]
        return np.where(x >= 0, self.rate * np.exp(-self.rate * np.maximum(x, 0.0)), 0.0)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x > 0, -np.expm1(-self.rate * np.maximum(x, 0.0)), 0.0)

    def sample(self, rng, n):
        return rng.exponential(1.0 / self.rate, size=(n, 1))

    def box(self):
        return ((0.0, 40.0 / self.rate),)


@dataclass(frozen=True)
class NormalBase(UnivariateBase):
    """Standard normal on the line."""

    symmetry: SymmetryMeta = field(
        default=SymmetryMeta(True, False, FULL_PLANE), init=False, repr=False)

    def pdf(self, y):
        return std_normal_pdf(np.asarray(y, dtype=float)[..., 0])

    def cdf(self, x):
        return np.asarray(std_normal_cdf(x))

    def sample(self, rng, n):
        return rng.standard_normal((n, 1))

    def box(self):
        return ((-8.0, 8.0),)


def check_symmetry_meta(base: BaseDensity, points, atol: float = 1e-12) -> dict:
    """Spot-check the declared flags; returns the max deviation per flag."""
    pts = np.asarray(points, dtype=float)
    out = {}
    f = base.pdf(pts)
    if base.symmetry.centrally_symmetric:
        out["central"] = float(np.max(np.abs(f - base.pdf(-pts))))
    if base.symmetry.exchange_symmetric:
        out["exchange"] = float(np.max(np.abs(f - base.pdf(pts[..., ::-1]))))
    return out
