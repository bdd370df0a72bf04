import math

import numpy as np
import pytest

from skewmod import families
from skewmod.bases import BivariateNormalBase, GumbelBivExpBase, ProductGammaBase
from skewmod.perturbations import Perturbation
from skewmod.transforms import (R1, R2, R3, R4, jacobian_det_numeric, linear, negation,
                                product_rho_branch, rotation, solve_R_product_rho, swap,
                                verify_R_conditions, _quadratic_form, _w_unit)

from conftest import random_points

SQ = math.sqrt(math.pi / 2)


def test_rotation_algebra():
    np.testing.assert_array_equal(R2, R1.T)
    np.testing.assert_allclose(R1 @ R2, np.eye(2))
    np.testing.assert_allclose(np.linalg.matrix_power(R1, 4), np.eye(2))
    np.testing.assert_allclose(R3 @ R3, np.eye(2))
    np.testing.assert_allclose(R4 @ R4, np.eye(2))


@pytest.mark.parametrize("kind", ["negation", "swap", "rot_plus", "rot_minus", "reflect_x", "reflect_y"])
def test_linear_maps_have_unit_determinant(kind):
    R = linear(kind)
    assert abs(jacobian_det_numeric(R.forward, np.array([0.3, -1.2]))) == pytest.approx(1.0, abs=1e-9)
    z = random_points(2)
    np.testing.assert_allclose(R.inverse(R.forward(z)), z, atol=1e-14)


@pytest.mark.parametrize("base,w,R", [
    (BivariateNormalBase(2 / 3), Perturbation.linear_odd((1, -0.5)), negation()),
    (BivariateNormalBase(2 / 3), Perturbation.diff_squares(2.0), swap()),
    (BivariateNormalBase(2 / 3), Perturbation.poly_exchange((1, -1)), swap()),
    (ProductGammaBase(2.0), Perturbation.poly_exchange((2.0,)), swap()),
    (GumbelBivExpBase(0.5), Perturbation.poly_exchange((1.0,)), swap()),
    (BivariateNormalBase(0.0), Perturbation.product_even(SQ), rotation(1)),
    (BivariateNormalBase(0.0), Perturbation.product_even(SQ), rotation(2)),
    (BivariateNormalBase(0.0), Perturbation.product_even(SQ), rotation(3)),
    (BivariateNormalBase(0.0), Perturbation.product_even(SQ), rotation(4)),
])
def test_valid_transforms_pass(base, w, R):
    rep = verify_R_conditions(base, w, R)
    assert rep.passed, rep.failures()
    assert rep.inverse_dev < 1e-12


def test_swap_fails_for_odd_linear():
    rep = verify_R_conditions(BivariateNormalBase(0.5), Perturbation.linear_odd((1, -0.5)), swap())
    assert "w_antisym" in rep.failures()


def test_rotation_fails_with_correlation():
    rep = verify_R_conditions(BivariateNormalBase(0.6), Perturbation.product_even(1.0), rotation(1))
    assert "density_match" in rep.failures()


def test_too_few_probes():
    with pytest.raises(ValueError):
        verify_R_conditions(BivariateNormalBase(0), Perturbation.product_even(1), swap(), probes=50)


@pytest.mark.parametrize("rho", [1 / 3, 2 / 3, -2 / 3])
def test_solver_residuals(rho):
    z0 = np.array([2.0, 1.0])
    sol = solve_R_product_rho(z0, rho)
    assert len(sol.candidates) == 4
    for z in sol.points:
        assert abs(_quadratic_form(z, rho) - sol.d0) < 1e-9
        assert abs(_w_unit(z, rho) + sol.w0) < 1e-9


def test_solver_at_zero_correlation_gives_quarter_turns():
    z0 = np.array([2.0, 1.0])
    pts = solve_R_product_rho(z0, 0.0).points
    for M in (R1, R2, R3, R4):
        assert min(np.max(np.abs(p - M @ z0)) for p in pts) < 1e-12


def test_solver_domain():
    with pytest.raises(ValueError):
        solve_R_product_rho([0.0, 1.0], 0.5)
    with pytest.raises(ValueError):
        solve_R_product_rho([1.0, 1.0], 1.0)


@pytest.mark.parametrize("index", [1, 2, 3, 4])
def test_branches_reduce_to_matrices(index):
    z = random_points(6)
    np.testing.assert_allclose(product_rho_branch(index, 0.0).forward(z), z @ (R1, R2, R3, R4)[index - 1].T,
                               atol=1e-12)


@pytest.mark.parametrize("index", [1, 2, 3, 4])
@pytest.mark.parametrize("rho", [1 / 3, -2 / 3])
def test_branches_solve_the_conditions(index, rho):
    R = product_rho_branch(index, rho)
    z = random_points(7)
    out = R.forward(z)
    np.testing.assert_allclose(_quadratic_form(out, rho), _quadratic_form(z, rho), rtol=1e-10)
    np.testing.assert_allclose(_w_unit(out, rho), -_w_unit(z, rho), atol=1e-10)
    np.testing.assert_allclose(R.inverse(out), z, atol=1e-10)


@pytest.mark.parametrize("index", [1, 2, 3, 4])
def test_branch_jacobian_departs_from_one(index):
    # expected to fail: every root-selection branch turns out to be linear with |det| = 1
    rho = -2 / 3
    m = families.sn_product_rho(SQ, rho)
    R = product_rho_branch(index, rho)
    rep = verify_R_conditions(m.base, m.w, R)
    assert rep.jacobian_dev > 0.01
