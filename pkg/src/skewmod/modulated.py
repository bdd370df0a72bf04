"""Densities of the form 2 f0(z) G{w(z)} and the tools that check them."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import numerics
from .bases import BaseDensity
from .numerics import QuadratureResult, Tolerance
from .perturbations import Perturbation, Pit1dSpec, evaluate


@dataclass(frozen=True)
class ModulationCdf:
    """A distribution G on the line with G(-x) = 1 - G(x)."""

    kind: str
    cdf: Callable
    density: Callable

    @classmethod
    def normal(cls):
        return cls("normal", numerics.std_normal_cdf, numerics.std_normal_pdf)

    @classmethod
    def laplace(cls):
        return cls("laplace", numerics.laplace_cdf, numerics.laplace_pdf)

    @classmethod
    def from_name(cls, name: str):
        try:
            return {"normal": cls.normal, "laplace": cls.laplace}[name]()
        except KeyError:
            raise ValueError(f"unknown modulation cdf {name!r}") from None

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == "normal":
            return rng.standard_normal(n)
        if self.kind == "laplace":
            return rng.laplace(0.0, 1.0, size=n)
        raise ValueError(f"no sampler for modulation cdf {self.kind!r}")


@dataclass(frozen=True)
class ModulatedDensity:
    """f(z) = 2 f0(z) G{w(z)}; with ``dual=True`` the factor is G{-w(z)}."""

    base: BaseDensity
    g_cdf: ModulationCdf
    w: Perturbation
    dual: bool = False

    @property
    def dim(self) -> int:
        return self.base.dim

    def modulation(self, z):
        v = np.asarray(evaluate(self.w, z), dtype=float)
        return -v if self.dual else v

    def pdf(self, z):
        z = np.asarray(z, dtype=float)
        f0 = self.base.pdf(z)
        # outside the support f0 = 0; skip G to avoid NaN from w there
        g = np.where(f0 > 0, self.g_cdf.cdf(self.modulation(z)), 0.0)
        return 2.0 * f0 * g

    def dual_pdf(self, z):
        return self.dualized().pdf(z)

    def dualized(self) -> "ModulatedDensity":
        return replace(self, dual=not self.dual)

    def pdf_xy(self, x, y):
        return self.pdf(np.stack([np.asarray(x, float), np.asarray(y, float)], axis=-1))


def pdf(m: ModulatedDensity, z):
    return m.pdf(z)


def dual_pdf(m: ModulatedDensity, z):
    return m.dual_pdf(z)


def build_pit_1d(spec: Pit1dSpec, g_cdf: ModulationCdf, check_points: int = 2001) -> ModulatedDensity:
    """2 f0(x) G{w1[F0(x) - 1/2]} (orientation plus) or with 1/2 - F0(x) (minus)."""
    (lo, hi), = spec.base.box()
    grid = np.linspace(lo, hi, check_points)
    F = np.asarray(spec.base.cdf(grid), dtype=float)
    if np.any(np.diff(F) < -1e-15):
        raise ValueError("base cdf is not monotone on its support")
    u = np.linspace(-0.5, 0.5, 101)
    if np.max(np.abs(spec.inner(-u) + spec.inner(u))) > 1e-12:
        raise ValueError("inner function must be odd on (-1/2, 1/2)")
    return ModulatedDensity(spec.base, g_cdf, spec.perturbation())


@dataclass(frozen=True)
class NormalizationReport:
    result: QuadratureResult
    passed: bool

    @property
    def value(self) -> float:
        return self.result.value


def integrate_density(m, tol: Tolerance | None = None, box=None) -> QuadratureResult:
    """Integral of ``m.pdf`` over its base's truncated support."""
    tol = tol or Tolerance(abs_tol=1e-8)
    box = box or m.base.box()
    if m.dim == 1:
        (lo, hi), = box
        return numerics.integrate_1d(lambda x: m.pdf(x[..., None]), lo, hi, tol)
    return numerics.integrate_2d(m.pdf_xy, box, tol)


def verify_normalization(m: ModulatedDensity, tol: Tolerance | None = None) -> NormalizationReport:
    tol = tol or Tolerance(abs_tol=1e-8)
    res = integrate_density(m, tol)
    return NormalizationReport(res, abs(res.value - 1.0) <= 10.0 * tol.abs_tol)


def grid_axes(x_range, y_range, nx: int, ny: int):
    """Cell-centre coordinates of an nx-by-ny partition of the box."""
    if nx < 2 or ny < 2:
        raise ValueError("grid needs nx, ny >= 2")
    (x0, x1), (y0, y1) = x_range, y_range
    xs = x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx
    ys = y0 + (np.arange(ny) + 0.5) * (y1 - y0) / ny
    return xs, ys


def density_grid(m: ModulatedDensity, x_range, y_range, nx: int, ny: int) -> np.ndarray:
    """Density at cell centres; entry [i, j] is pdf(x_i, y_j)."""
    xs, ys = grid_axes(x_range, y_range, nx, ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return m.pdf_xy(X, Y)


def count_modes(grid: np.ndarray) -> int:
    """Number of strict local maxima over the 8-neighbourhood (edges padded)."""
    g = np.asarray(grid, dtype=float)
    padded = np.pad(g, 1, constant_values=-np.inf)
    is_max = np.ones_like(g, dtype=bool)
    nx, ny = g.shape
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            neighbour = padded[1 + di:1 + di + nx, 1 + dj:1 + dj + ny]
            is_max &= g > neighbour
    return int(np.count_nonzero(is_max))
