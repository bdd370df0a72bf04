"""Generalized-symmetry maps R and checks of the conditions they must meet.

A map R qualifies when f0(R y) = f0(y), |det R'(y)| = 1 and w(R y) = -w(y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .perturbations import evaluate

# linear kinds: negation, the coordinate swap and the four quarter-turn /
# reflection matrices used for the product-type modulation
MATRICES = {
    "negation": np.array([[-1.0, 0.0], [0.0, -1.0]]),
    "swap": np.array([[0.0, 1.0], [1.0, 0.0]]),
    "rot_plus": np.array([[0.0, -1.0], [1.0, 0.0]]),
    "rot_minus": np.array([[0.0, 1.0], [-1.0, 0.0]]),
    "reflect_x": np.array([[-1.0, 0.0], [0.0, 1.0]]),
    "reflect_y": np.array([[1.0, 0.0], [0.0, -1.0]]),
}
R1, R2, R3, R4 = (MATRICES[k] for k in ("rot_plus", "rot_minus", "reflect_x", "reflect_y"))
R0 = MATRICES["swap"]


@dataclass(frozen=True)
class GenSymTransform:
    kind: str
    forward: Callable = field(compare=False)
    inverse: Callable = field(compare=False)
    matrix: Optional[np.ndarray] = field(default=None, compare=False)

    def __call__(self, z):
        return self.forward(z)


def _apply(mat):
    return lambda z: np.asarray(z, dtype=float) @ mat.T


def linear(kind: str) -> GenSymTransform:
    mat = MATRICES[kind]
    inv = np.linalg.inv(mat)
    return GenSymTransform(kind, _apply(mat), _apply(inv), mat)


def negation(dim: int = 2) -> GenSymTransform:
    if dim == 2:
        return linear("negation")
    neg = lambda z: -np.asarray(z, dtype=float)  # noqa: E731
    return GenSymTransform("negation", neg, neg)


def swap() -> GenSymTransform:
    return linear("swap")


def rotation(j: int) -> GenSymTransform:
    """R_j for j = 1..4 (quarter turns and axis reflections)."""
    return linear(("rot_plus", "rot_minus", "reflect_x", "reflect_y")[j - 1])


# ---------------------------------------------------------------------------
# correlated product modulation: w(z) = alpha z1 (z2 - rho z1)
# ---------------------------------------------------------------------------

def _quadratic_form(z, rho):
    z = np.asarray(z, dtype=float)
    z1, z2 = z[..., 0], z[..., 1]
    return (z1 * z1 - 2.0 * rho * z1 * z2 + z2 * z2) / (1.0 - rho * rho)


def _w_unit(z, rho):
    z = np.asarray(z, dtype=float)
    return z[..., 0] * (z[..., 1] - rho * z[..., 0])


@dataclass(frozen=True)
class RootSolution:
    candidates: list  # (tag, point) pairs; tag = (root, sign)
    d0: float
    w0: float
    diagnostic: str = ""

    @property
    def points(self) -> list:
        return [p for _, p in self.candidates]


def solve_R_product_rho(z0, rho: float, alpha: float = 1.0) -> RootSolution:
    """Points sharing the density of z0 under N2(0, Omega) and with w = -w(z0).

    With u = z1^2 the two conditions reduce to
    (1 - rho^2) u^2 - D0 (1 - rho^2) u + w0^2 = 0 and z2 = (rho z1^2 - w0) / z1,
    where w0 is the unscaled product z1 (z2 - rho z1); alpha only rescales w.
    """
    z0 = np.asarray(z0, dtype=float)
    if z0[0] == 0.0:
        raise ValueError("z0 must have a non-zero first coordinate")
    if not -1.0 < rho < 1.0:
        raise ValueError("rho must lie in (-1, 1)")
    d0 = float(_quadratic_form(z0, rho))
    w0 = float(_w_unit(z0, rho))
    a = 1.0 - rho * rho
    disc = (d0 * a) ** 2 - 4.0 * a * w0 * w0
    if disc < 0:
        return RootSolution([], d0, alpha * w0, f"negative discriminant {disc:.3g}")
    sq = math.sqrt(disc)
    roots = ((d0 * a + sq) / (2 * a), (d0 * a - sq) / (2 * a))
    out = []
    for ri, u in enumerate(roots):
        if u <= 0:
            continue
        for sign in (1.0, -1.0):
            z1 = sign * math.sqrt(u)
            z2 = (rho * z1 * z1 - w0) / z1
            out.append(((ri, int(sign)), np.array([z1, z2])))
    return RootSolution(out, d0, alpha * w0)


def product_rho_branch(index: int, rho: float, alpha: float = 1.0) -> GenSymTransform:
    """One of the four root-selection maps z -> candidate, tracked continuously.

    At each z the roots of the quadratic are u = z1^2 and u = D(z) - z1^2
    (the latter computed as w0^2 / ((1 - rho^2) z1^2)).
    Branches 3 / 4 take the first root with z1' = -z1 / z1' = z1; branches
    1 / 2 take the second root with z1' = -/+ sign(z2 - rho z1) sqrt(u).
    These sign conventions make each branch continuous off z1 = 0 and reduce
    to R_1 ... R_4 when rho = 0.  Branches 1 and 2 are mutual inverses, 3 and
    4 are involutions.
    """
    if index not in (1, 2, 3, 4):
        raise ValueError("branch index must be 1..4")
    partner = {1: 2, 2: 1, 3: 3, 4: 4}[index]
    return GenSymTransform(f"product_rho_branch{index}", _branch_map(index, rho),
                           _branch_map(partner, rho))


def _branch_map(index, rho):
    def forward(z):
        z = np.asarray(z, dtype=float)
        z1, z2 = z[..., 0], z[..., 1]
        w0 = _w_unit(z, rho)
        if index in (3, 4):
            u = z1 * z1
            ref = np.sign(z1)
        else:
            # other root from the product of roots, avoiding D - z1^2 cancellation
            with np.errstate(divide="ignore", invalid="ignore"):
                u = w0 * w0 / ((1.0 - rho * rho) * z1 * z1)
            ref = np.sign(z2 - rho * z1)
        flip = -1.0 if index in (1, 3) else 1.0
        n1 = flip * ref * np.sqrt(u)
        with np.errstate(divide="ignore", invalid="ignore"):
            n2 = (rho * n1 * n1 - w0) / n1
        return np.stack([n1, n2], axis=-1)
    return forward


# ---------------------------------------------------------------------------
# numeric checks
# ---------------------------------------------------------------------------

def jacobian_numeric(R: Callable, z, h=None) -> np.ndarray:
    """Central-difference Jacobian(s); z has shape (..., d)."""
    z = np.asarray(z, dtype=float)
    d = z.shape[-1]
    if h is None:
        h = 1e-5 * (1.0 + np.linalg.norm(z, axis=-1))
    h = np.asarray(h, dtype=float)[..., None]
    cols = []
    for k in range(d):
        e = np.zeros(d)
        e[k] = 1.0
        cols.append((np.asarray(R(z + h * e)) - np.asarray(R(z - h * e))) / (2.0 * h))
    return np.stack(cols, axis=-1)


def jacobian_det_numeric(R: Callable, z):
    J = jacobian_numeric(R, z)
    det = np.linalg.det(J)
    return float(det) if np.ndim(det) == 0 else det


@dataclass(frozen=True)
class RConditionReport:
    density_match: float
    jacobian_dev: float
    w_antisym: float
    tol: float
    inverse_dev: float = 0.0

    @property
    def passed(self) -> bool:
        return max(self.density_match, self.jacobian_dev, self.w_antisym) < self.tol

    def failures(self) -> list:
        names = ("density_match", "jacobian_dev", "w_antisym")
        return [n for n in names if getattr(self, n) >= self.tol]


def verify_R_conditions(base, w, R: GenSymTransform, probes: int = 200,
                        tol: float = 1e-6, rng: np.random.Generator | None = None) -> RConditionReport:
    """Check the three conditions on R at points drawn from the base itself.

    The density condition is measured relative to the local density value so
    that the test is scale free.
    """
    if probes < 100:
        raise ValueError("verify_R_conditions needs at least 100 probes")
    rng = rng if rng is not None else np.random.default_rng(0)
    y = base.sample(rng, probes)
    ry = np.asarray(R.forward(y), dtype=float)
    f = base.pdf(y)
    density = float(np.max(np.abs(f - base.pdf(ry)) / np.maximum(f, 1e-300)))
    det = np.abs(np.atleast_1d(jacobian_det_numeric(R.forward, y)))
    jac = float(np.max(np.abs(det - 1.0)))
    wy = np.asarray(evaluate(w, y), dtype=float)
    anti = float(np.max(np.abs(np.asarray(evaluate(w, ry)) + wy) / (1.0 + np.abs(wy))))
    inv = float(np.max(np.abs(np.asarray(R.inverse(ry)) - y)))
    return RConditionReport(density, jac, anti, tol, inv)
