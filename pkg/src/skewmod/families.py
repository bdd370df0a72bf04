"""Ready-made constructions used throughout the tests and the CLI."""

from __future__ import annotations

import math

from .bases import (BivariateNormalBase, ExponentialBase, GumbelBivExpBase,
                    ProductGammaBase)
from .modulated import ModulatedDensity, ModulationCdf, build_pit_1d
from .perturbations import Perturbation, Pit1dSpec

SQRT_HALF_PI = math.sqrt(math.pi / 2.0)


def _g(g):
    if isinstance(g, ModulationCdf):
        return g
    return ModulationCdf.from_name(g)


def skew_normal(alpha=(1.0, -0.5), rho=0.0, g="normal"):
    """Classical bivariate skew-normal with linear odd modulation."""
    return ModulatedDensity(BivariateNormalBase(rho), _g(g), Perturbation.linear_odd(alpha))


def sn_diff_sq(alpha=2.0, rho=2.0 / 3.0, g="normal"):
    """2 phi2(z; rho) G{alpha (z1^2 - z2^2)}."""
    return ModulatedDensity(BivariateNormalBase(rho), _g(g), Perturbation.diff_squares(alpha))


def sn_poly(coeffs=(1.0, -1.0), rho=2.0 / 3.0, g="normal"):
    return ModulatedDensity(BivariateNormalBase(rho), _g(g), Perturbation.poly_exchange(coeffs))


def sn_product(alpha=SQRT_HALF_PI, rho=0.0, g="normal"):
    """2 phi2(z; rho) G(alpha z1 z2); only a density when rho = 0."""
    return ModulatedDensity(BivariateNormalBase(rho), _g(g), Perturbation.product_even(alpha))


def sn_product_rho(alpha=SQRT_HALF_PI, rho=-2.0 / 3.0, form=1, g="normal"):
    return ModulatedDensity(BivariateNormalBase(rho), _g(g),
                            Perturbation.product_rho(alpha, rho, form))


def gamma_laplace(omega=1.0, alpha=2.0, g="laplace"):
    """Product-gamma base with w = alpha (y1 - y2)."""
    return ModulatedDensity(ProductGammaBase(omega), _g(g), Perturbation.poly_exchange((alpha,)))


def gumbel_laplace(lam=0.5, alpha=1.0, g="laplace"):
    return ModulatedDensity(GumbelBivExpBase(lam), _g(g), Perturbation.poly_exchange((alpha,)))


def pit1d(alpha=4.0, rate=1.0, orientation="plus", g="normal"):
    """Exponential base, w1(u) = alpha u."""
    spec = Pit1dSpec(ExponentialBase(rate), lambda u: alpha * u, orientation)
    return build_pit_1d(spec, _g(g))


def pit2d(alpha=4.0, omega=1.0, g="normal"):
    """Product-gamma base modulated through p[F1(y1) F2(y2)] - 1/2."""
    base = ProductGammaBase(omega)
    w = Perturbation.pit_2d(base.marginal_cdf, base.marginal_cdf, alpha=alpha)
    return ModulatedDensity(base, _g(g), w)
