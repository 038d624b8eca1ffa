import math
import warnings

import numpy as np
import pytest

from quatstft.bargmann import (
    CoefficientSequence,
    TruncationRisk,
    bargmann_coefficients,
    bargmann_transform,
    bargmann_transform_many,
    default_probe_points,
    derivative_fd4,
    fock_gram_plane,
    inverse_bargmann,
    kernel_coefficients,
    momentum_equivalence_residual,
    position_equivalence_residual,
    schwartz_decay_report,
    slice_derivative,
)
from quatstft.basis import bargmann_kernel, fock_monomial, hermite_table
from quatstft.fixtures import random_combos
from quatstft.quadrature import PlaneGrid, SampledSignal, default_time_grid, inner_l2, make_grid
from quatstft.quaternion import UNIT_I, ImaginaryUnit, Quaternion, qabs, qmul

NU = 2 * math.pi


def _psi(k, nu):
    g = default_time_grid(nu)
    return SampledSignal(g, hermite_table(k, nu, g.nodes)[k])


def _disk_points(radius, n=7, unit=None):
    unit = unit or ImaginaryUnit.from_vector([1.0, 2.0, -1.0])
    pts = []
    for r in np.linspace(0, radius, n):
        for a in np.linspace(0, 2 * math.pi, n)[:-1]:
            pts.append([r * math.cos(a), *(r * math.sin(a) * unit.vector)])
    return np.array(pts)


@pytest.mark.parametrize("nu", [1.0, NU])
def test_hermite_to_monomial(nu):
    pts = _disk_points(1.0, 4)
    for k in range(11):
        B = bargmann_transform(_psi(k, nu), nu, pts)
        assert np.max(np.abs(B - fock_monomial(k, nu, pts))) < 1e-8


def test_zero_signal(tgrid):
    z = SampledSignal.zeros(tgrid)
    assert bargmann_transform(z, NU, Quaternion(0.3, 0.1)).allclose(Quaternion(), 0.0)
    c = bargmann_coefficients(z, NU, 5)
    assert np.all(c.coeffs == 0)


def test_scalar_api_returns_quaternion():
    val = bargmann_transform(_psi(0, NU), NU, Quaternion(0.2, 0.0, 0.3))
    assert isinstance(val, Quaternion)


def test_right_linearity(combos):
    f = combos[0]
    lam = Quaternion(0.5, -1.0, 2.0, 0.25)
    pts = _disk_points(1.2, 4)
    lhs = bargmann_transform(f.rmul(lam), NU, pts)
    rhs = qmul(bargmann_transform(f, NU, pts), lam.as_array())
    assert np.max(np.abs(lhs - rhs)) < 1e-13


def test_coefficient_examples():
    for nu in (1.0, NU):
        c = bargmann_coefficients(_psi(3, nu), nu, 10)
        expect = np.zeros((11, 4))
        expect[3, 0] = math.sqrt(nu ** 4 / (math.pi * 6))
        assert np.max(np.abs(c.coeffs - expect)) < 1e-10
    g = default_time_grid()
    psi0 = hermite_table(0, NU, g.nodes)[0]
    f = SampledSignal(g, np.column_stack([0 * psi0, 0 * psi0, psi0, 0 * psi0]))
    c = bargmann_coefficients(f, NU, 4)
    assert np.allclose(c.coeffs[0], [0, 0, math.sqrt(NU / math.pi), 0], atol=1e-12)
    assert np.max(np.abs(c.coeffs[1:])) < 1e-12


def test_series_matches_quadrature(combos):
    f = combos[1]
    c = bargmann_coefficients(f, NU)
    q = Quaternion(0.5, 0.5)
    assert c(q).allclose(bargmann_transform(f, NU, q), 1e-8)
    pts = _disk_points(2.0)
    assert np.max(np.abs(c(pts) - bargmann_transform(f, NU, pts))) < 1e-8
    assert c(Quaternion()).allclose(Quaternion.from_array(c.coeffs[0]), 0.0)


def test_inverse_roundtrip(combos):
    f = combos[2]
    back = inverse_bargmann(bargmann_coefficients(f, NU), f.grid)
    assert back.max_abs_diff(f) < 1e-12


def test_unitarity_two_routes():
    nu = 1.0
    fs = random_combos(4, 10, nu, seed=11)
    axis = make_grid(-8, 8, 128)
    G = fock_gram_plane(fs, nu, PlaneGrid(axis, axis), UNIT_I)
    cs = [bargmann_coefficients(f, nu) for f in fs]
    for a in range(4):
        for b in range(4):
            l2 = inner_l2(fs[a], fs[b]).as_array()
            assert np.max(np.abs(G[a, b] - l2)) < 1e-7
            assert np.max(np.abs(cs[a].fock_inner(cs[b]).as_array() - l2)) < 1e-7
        assert math.sqrt(G[a, a, 0]) == pytest.approx(fs[a].norm(), rel=1e-7)


def test_transform_many_matches_single(combos):
    pts = _disk_points(1.0, 3)
    many = bargmann_transform_many(combos[:2], NU, pts)
    assert many.shape == (len(pts), 2, 4)
    assert np.allclose(many[:, 1], bargmann_transform(combos[1], NU, pts), atol=1e-14)


def test_truncation_warning():
    short = make_grid(-1.5, 1.5, 200)
    f = SampledSignal(short, np.exp(-0.5 * short.nodes ** 2))
    with pytest.warns(TruncationRisk):
        bargmann_transform(f, 1.0, Quaternion(0.5))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        bargmann_transform(_psi(0, NU), NU, Quaternion(0.5, 0.5))


def test_schwartz_examples():
    g = default_time_grid(1.0)
    f = SampledSignal(g, hermite_table(0, 1.0, g.nodes)[0])
    r20 = schwartz_decay_report(bargmann_coefficients(f, 1.0, 20), [1, 2, 4])
    r40 = schwartz_decay_report(bargmann_coefficients(f, 1.0, 40), [1, 2, 4])
    for a, b in zip(r20.scores, r40.scores):
        assert b <= 1.05 * a
    assert all(math.isfinite(s) and s >= 0 for s in r40.scores)

    for K in (10, 20, 40):
        c = CoefficientSequence(1.0, np.array([[1 / math.sqrt(math.factorial(k)), 0, 0, 0] for k in range(K + 1)]))
        rep = schwartz_decay_report(c, [1.0], floor=0.0)
        assert rep.scores[0] == pytest.approx(K, rel=1e-10)

    empty = CoefficientSequence(1.0, np.zeros((0, 4)))
    assert schwartz_decay_report(empty, [1, 2]).scores == (0.0, 0.0)


def test_slice_derivative_examples():
    d = slice_derivative(CoefficientSequence(1.0, [[0, 0, 0, 0], [1, 0, 0, 0]]))
    assert np.array_equal(d.coeffs, [[1, 0, 0, 0]])
    d = slice_derivative(CoefficientSequence(1.0, [[2, 1, 0, 3]]))
    assert np.all(d.coeffs == 0)
    # e^{-q^2/2} = sum (-1/2)^m q^{2m}/m!
    K = 60
    c = np.zeros((K + 1, 4))
    for m in range(K // 2 + 1):
        c[2 * m, 0] = (-0.5) ** m / math.factorial(m)
    series = CoefficientSequence(1.0, c)
    pts = _disk_points(1.5, 5)
    lhs = slice_derivative(series)(pts)
    rhs = -qmul(pts, series(pts))
    assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_slice_derivative_right_linear(combos):
    c = bargmann_coefficients(combos[0], NU, 12)
    lam = Quaternion(0.1, 2.0, -1.0, 0.5)
    a = slice_derivative(c.rmul(lam)).coeffs
    b = qmul(slice_derivative(c).coeffs, lam.as_array())
    assert np.max(np.abs(a - b)) < 1e-14


def test_kernel_coefficients_reproduce_kernel():
    pts = _disk_points(1.5, 4)
    c = kernel_coefficients(0.4, 1.0, 60)
    assert np.max(np.abs(c(pts) - bargmann_kernel(pts, 0.4, 1.0))) < 1e-10


def test_probe_points():
    pts = default_probe_points()
    assert pts.shape == (8, 4)
    assert np.max(qabs(pts)) <= 1.5 + 1e-12


@pytest.mark.parametrize("k,pos_tol,mom_tol", [(0, 1e-8, 1e-6), (1, 1e-8, 1e-6), (5, 1e-7, 1e-6)])
def test_operator_identities(k, pos_tol, mom_tol):
    f = _psi(k, 1.0)
    assert position_equivalence_residual(f) < pos_tol
    assert momentum_equivalence_residual(f) < mom_tol


def test_operator_identities_general_nu(combos):
    f = combos[3]
    assert position_equivalence_residual(f, NU) < 1e-7
    # the fourth-order difference quotient is coarser relative to the narrower nu = 2 pi scale
    scale = np.max(qabs(bargmann_coefficients(f, NU).times_q()(default_probe_points())))
    assert momentum_equivalence_residual(f, NU) < 2e-5 * scale


def test_operator_identities_zero(tgrid):
    z = SampledSignal.zeros(tgrid)
    assert position_equivalence_residual(z, NU) == 0.0
    assert momentum_equivalence_residual(z, NU) == 0.0


def test_fd4_order():
    g = default_time_grid()
    f = SampledSignal(g, np.sin(g.nodes))
    err = np.max(np.abs(derivative_fd4(f).values[2:-2, 0] - np.cos(g.nodes[2:-2])))
    assert err < 1e-8
    with pytest.raises(ValueError):
        derivative_fd4(SampledSignal.zeros(make_grid(0, 1, 5, "gauss-legendre")))
