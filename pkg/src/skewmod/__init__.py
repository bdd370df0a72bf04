"""Densities 2 f0(z) G{w(z)}: construction, evaluation, sampling and checks."""

from .bases import (BivariateNormalBase, ExponentialBase, GumbelBivExpBase, NormalBase,
                    ProductGammaBase, SymmetryMeta, UniformBase)
from .modulated import (ModulatedDensity, ModulationCdf, build_pit_1d, count_modes,
                        density_grid, verify_normalization)
from .numerics import Tolerance, QuadratureResult, integrate_1d, integrate_2d
from .perturbations import Perturbation, Pit1dSpec, symmetry_test
from .samplers import RepresentationUnavailable, flip_sample, invariance_check, rejection_sample
from .transforms import GenSymTransform, solve_R_product_rho, verify_R_conditions

__version__ = "0.1.0"
