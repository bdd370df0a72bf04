"""Modulation functions w(z) and an empirical test for symmetry of w(Y)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .numerics import ks_two_sample

ODD = "odd"
EXCHANGE_ANTISYMMETRIC = "exchange_antisymmetric"
EVEN = "even"
NONE_DECLARED = "none_declared"

SYMMETRIC = "symmetric"
ASYMMETRIC = "asymmetric"
INCONCLUSIVE = "inconclusive"


def product_cdf_transform(t):
    """P{F1(Y1) F2(Y2) <= t} = t (1 - log t) for independent continuous Y1, Y2."""
    t = np.asarray(t, dtype=float)
    pos = t > 0
    ts = np.where(pos, t, 1.0)
    return np.where(pos, ts * (1.0 - np.log(ts)), 0.0)


def _linear_inner(alpha):
    return lambda u: alpha * u


@dataclass(frozen=True)
class Perturbation:
    """A modulation function of one of the supported families.

    ``params`` holds the numeric parameters (see the constructors below);
    ``parity`` is the declared symmetry class, spot-checked by
    :func:`check_parity`.  The integral-transform kinds additionally carry the
    coordinate cdfs and the odd inner function.
    """

    kind: str
    params: tuple
    parity: str
    cdfs: Optional[tuple] = field(default=None, compare=False)
    inner: Optional[Callable] = field(default=None, compare=False)

    # -- constructors -------------------------------------------------------

    @classmethod
    def linear_odd(cls, alpha: Sequence[float]):
        return cls("linear_odd", tuple(float(a) for a in alpha), ODD)

    @classmethod
    def poly_exchange(cls, coeffs: Sequence[float]):
        """sum_k a_k (z1^k - z2^k), k = 1..m."""
        return cls("poly_exchange", tuple(float(a) for a in coeffs), EXCHANGE_ANTISYMMETRIC)

    @classmethod
    def diff_squares(cls, alpha: float):
        return cls.poly_exchange((0.0, alpha))

    @classmethod
    def product_even(cls, alpha: float):
        return cls("product_even", (float(alpha),), EVEN)

    @classmethod
    def product_rho(cls, alpha: float, rho: float, form: int = 1):
        """alpha z1 (z2 - rho z1) (form 1) or alpha z2 (z1 - rho z2) (form 2)."""
        if form not in (1, 2):
            raise ValueError("form must be 1 or 2")
        return cls("product_rho", (float(alpha), float(rho), form), EVEN)

    @classmethod
    def sin_diff(cls, alpha: float):
        return cls("sin_diff", (float(alpha),), EXCHANGE_ANTISYMMETRIC)

    @classmethod
    def pit_1d(cls, cdf: Callable, inner: Callable | None = None, alpha: float = 1.0,
               orientation: str = "plus"):
        if orientation not in ("plus", "minus"):
            raise ValueError("orientation must be 'plus' or 'minus'")
        inner = inner or _linear_inner(alpha)
        return cls("pit_1d", (orientation,), NONE_DECLARED, cdfs=(cdf,), inner=inner)

    @classmethod
    def pit_2d(cls, cdf1: Callable, cdf2: Callable, inner: Callable | None = None,
               alpha: float = 1.0):
        inner = inner or _linear_inner(alpha)
        return cls("pit_2d", (), NONE_DECLARED, cdfs=(cdf1, cdf2), inner=inner)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, z):
        return evaluate(self, z)


def evaluate(w: Perturbation, z):
    z = np.asarray(z, dtype=float)
    k, p = w.kind, w.params
    if k == "pit_1d":
        u = np.asarray(w.cdfs[0](z[..., 0]), dtype=float) - 0.5
        return w.inner(u if p[0] == "plus" else -u)
    z1, z2 = z[..., 0], z[..., 1]
    if k == "linear_odd":
        if len(p) != 2:
            raise ValueError("linear_odd on R^2 needs two coefficients")
        return p[0] * z1 + p[1] * z2
    if k == "poly_exchange":
        out = np.zeros(np.broadcast(z1, z2).shape)
        for order, a in enumerate(p, start=1):
            if a:
                out = out + a * (z1 ** order - z2 ** order)
        return out
    if k == "product_even":
        return p[0] * z1 * z2
    if k == "product_rho":
        alpha, rho, form = p
        if form == 1:
            return alpha * z1 * (z2 - rho * z1)
        return alpha * z2 * (z1 - rho * z2)
    if k == "sin_diff":
        return np.sin(p[0] * (z1 - z2))
    if k == "pit_2d":
        t = np.asarray(w.cdfs[0](z1), dtype=float) * np.asarray(w.cdfs[1](z2), dtype=float)
        return w.inner(product_cdf_transform(t) - 0.5)
    raise ValueError(f"unknown perturbation kind {k!r}")


def check_parity(w: Perturbation, points) -> float:
    """Largest violation of the declared parity over ``points`` (0 if none declared)."""
    z = np.asarray(points, dtype=float)
    v = evaluate(w, z)
    if w.parity == ODD:
        return float(np.max(np.abs(evaluate(w, -z) + v)))
    if w.parity == EVEN:
        return float(np.max(np.abs(evaluate(w, -z) - v)))
    if w.parity == EXCHANGE_ANTISYMMETRIC:
        return float(np.max(np.abs(evaluate(w, z[..., ::-1]) + v)))
    return 0.0


@dataclass(frozen=True)
class SymmetryVerdict:
    verdict: str
    pvalue: float
    statistic: float


def symmetry_test(w: Perturbation, base, n: int, rng: np.random.Generator) -> SymmetryVerdict:
    """Compare w(Y) with -w(Y') on two independent base samples by two-sample KS."""
    if n < 1000:
        raise ValueError("symmetry_test needs n >= 1000")
    a = evaluate(w, base.sample(rng, n))
    b = -evaluate(w, base.sample(rng, n))
    ks = ks_two_sample(a, b)
    if ks.pvalue > 0.01:
        verdict = SYMMETRIC
    elif ks.pvalue < 1e-4:
        verdict = ASYMMETRIC
    else:
        verdict = INCONCLUSIVE
    return SymmetryVerdict(verdict, ks.pvalue, ks.statistic)


@dataclass(frozen=True)
class Pit1dSpec:
    """Ingredients of the one-dimensional integral-transform construction.

    ``base`` is a univariate base exposing ``pdf`` and ``cdf``; ``inner`` must
    be odd on (-1/2, 1/2).
    """

    base: object
    inner: Callable
    orientation: str = "plus"

    def perturbation(self) -> Perturbation:
        return Perturbation.pit_1d(self.base.cdf, inner=self.inner,
                                   orientation=self.orientation)
