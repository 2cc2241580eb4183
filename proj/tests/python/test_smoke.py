"""Smoke tests for the python bindings."""

import math

import pytest

import cmcshoot as cs


def test_pointwise_operations():
    p = cs.Params("s2n", 2, 1.0)
    dr, dtheta, dalpha = cs.rhs(p, cs.State(math.pi / 4, math.pi / 4, -math.pi / 2))
    assert abs(dr) < 1e-15
    assert dtheta == pytest.approx(-math.sqrt(2.0), abs=1e-14)
    assert dalpha == pytest.approx(4.0, abs=1e-14)

    assert cs.beta_angle(math.atan(math.sqrt(2.0)), math.pi / 4) == pytest.approx(
        -math.pi / 6, abs=1e-13
    )

    fam = cs.Family.s3n_minus_1(2)
    point = cs.lift(fam, math.atan(math.sqrt(2.0)), math.pi / 4)
    assert len(point) == 6
    assert sum(c * c for c in point) == pytest.approx(1.0, abs=1e-12)


def test_on_shell_identity():
    p = cs.Params("s3n-1", 3, 2.5)
    st = cs.State(0.7, 0.5, -0.9)
    h = cs.mean_curvature(p.family, st, cs.rhs_alpha(p, st))
    assert h == pytest.approx(2.5, abs=1e-10)


def test_shoot_exit_classes():
    p = cs.Params("s2n", 2, 1.0)
    assert cs.shoot(p, 0.005).exit == "AlphaZero"
    assert cs.shoot(p, 1.55).exit == "RWall"
    with pytest.raises(ValueError):
        cs.shoot(p, 0.0)
    with pytest.raises(ValueError):
        cs.Params("s2n", 2, 0.0)


def test_solve_assemble_certify():
    p = cs.Params("s2n", 2, 1.0)
    res = cs.solve(p, tol_r0=1e-10)
    assert res.converged
    assert res.residual_alpha <= 1e-6
    assert res.residual_wall <= 1e-6

    curve = cs.assemble(p, res.shot)
    assert curve.copies == 4
    assert curve.closed
    assert curve.length <= 2.0 * math.pi

    cert = cs.certify(curve)
    assert cert["simple"] is True
    assert cert["min_boundary_dist"] > 0.0

    h = cs.check_H(curve, p)
    assert h["algebraic"] <= 1e-10
    assert h["finite_difference"] <= 1e-6
