import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quatstft.quaternion import (
    ONE,
    QI,
    QJ,
    QK,
    UNIT_I,
    UNIT_J,
    UNIT_K,
    ImaginaryUnit,
    NonOrthogonalUnits,
    Quaternion,
    SliceComplex,
    qmul,
    quat_mul,
    slice_decompose,
    slice_exp,
    slice_recompose,
    slice_lmul,
    symplectic_join_array,
    symplectic_split,
    symplectic_split_array,
    umul,
)

comp = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
quats = st.builds(Quaternion, comp, comp, comp, comp)
dirs = st.tuples(comp, comp, comp).filter(lambda v: math.fsum(c * c for c in v) > 1e-6)


def test_multiplication_table_exact():
    assert QI * QI == Quaternion(-1.0)
    assert QJ * QJ == Quaternion(-1.0)
    assert QK * QK == Quaternion(-1.0)
    assert QI * QJ == QK
    assert QJ * QK == QI
    assert QK * QI == QJ
    assert QJ * QI == -QK
    assert QI * QJ * QK == Quaternion(-1.0)


def test_quat_mul_examples():
    assert quat_mul(QI, QJ) == QK
    q = Quaternion(0.5, -2.0, 3.0, 1.25)
    assert quat_mul(q, ONE) == q
    assert quat_mul(ONE + QI, ONE + QJ) == Quaternion(1.0, 1.0, 1.0, 1.0)


@given(quats, quats)
def test_modulus_is_multiplicative(p, q):
    lhs = abs(p * q)
    rhs = abs(p) * abs(q)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


@given(quats, quats)
def test_conjugate_reverses_products(p, q):
    assert (p * q).conj().allclose(q.conj() * p.conj(), atol=1e-9 * (1 + abs(p) * abs(q)))


@given(quats)
def test_norm_from_conjugate(q):
    n = q * q.conj()
    assert n.allclose(Quaternion(q.norm2()), atol=1e-9 * (1 + q.norm2()))
    assert q.norm2() >= 0


def test_inverse_and_division():
    q = Quaternion(1.0, 2.0, -1.0, 0.5)
    assert (q * q.inverse()).allclose(ONE)
    assert ((q / q)).allclose(ONE)


def test_array_kernels_match_value_type():
    rng = np.random.default_rng(0)
    a, b = rng.standard_normal((2, 10, 4))
    for x, y, r in zip(a, b, qmul(a, b)):
        assert (Quaternion.from_array(x) * Quaternion.from_array(y)).allclose(Quaternion.from_array(r), 1e-14)
    u = ImaginaryUnit.from_vector([1.0, 2.0, -0.5])
    assert np.allclose(umul(u.vector, a), qmul(u.to_quaternion().as_array(), a))
    re, im = rng.standard_normal((2, 10))
    lhs = slice_lmul(re, im, u.vector, a)
    for k in range(10):
        z = SliceComplex(re[k], im[k], u).to_quaternion()
        assert (z * Quaternion.from_array(a[k])).allclose(Quaternion.from_array(lhs[k]), 1e-13)


def test_unit_validation_and_parsing():
    with pytest.raises(ValueError):
        ImaginaryUnit(1.0, 1.0, 0.0)
    assert ImaginaryUnit.parse("j") == UNIT_J
    u = ImaginaryUnit.parse("1,1,0")
    assert u.ux == pytest.approx(1 / math.sqrt(2)) and u.uz == 0.0
    with pytest.raises(ValueError):
        ImaginaryUnit.parse("0,0,0")
    with pytest.raises(ValueError):
        ImaginaryUnit.parse("q")
    assert (u.to_quaternion() * u.to_quaternion()).allclose(Quaternion(-1.0))


def test_slice_decompose_examples():
    assert slice_decompose(Quaternion(1.0, 2.0)) == (1.0, 2.0, UNIT_I)
    assert slice_decompose(Quaternion(3.0)) == (3.0, 0.0, None)
    x, y, u = slice_decompose(Quaternion(1.0, 1.0, 1.0, 1.0))
    assert x == 1.0 and y == pytest.approx(math.sqrt(3.0))
    assert np.allclose(u.vector, np.ones(3) / math.sqrt(3.0))


@given(comp, dirs)
def test_slice_roundtrip(w, v):
    q = Quaternion(w, *v)
    x, y, u = slice_decompose(q)
    assert y > 0
    assert slice_recompose(x, y, u).allclose(q, atol=1e-12 * (1 + abs(q)))


def test_symplectic_examples():
    q1, q2 = symplectic_split(Quaternion(2.0, 0.0, -3.0, 0.0), UNIT_I, UNIT_J)
    assert (q1.re, q1.im, q2.re, q2.im) == (2.0, 0.0, -3.0, 0.0)
    q1, q2 = symplectic_split(QK, UNIT_I, UNIT_J)
    assert (q1.re, q1.im, q2.re, q2.im) == (0.0, 0.0, 0.0, 1.0)
    assert (q2.to_quaternion() * QJ) == QK
    with pytest.raises(NonOrthogonalUnits):
        symplectic_split(QK, UNIT_I, ImaginaryUnit.from_vector([1.0, 1.0, 0.0]))


@given(quats, dirs)
def test_symplectic_roundtrip(q, v):
    I = ImaginaryUnit.from_vector(v)
    J = I.orthogonal()
    assert abs(I.dot(J)) < 1e-12
    a, b = symplectic_split(q, I, J)
    back = a.to_quaternion() + b.to_quaternion() * J.to_quaternion()
    assert back.allclose(q, atol=1e-14 * max(1.0, abs(q)) * 10)


def test_symplectic_array_roundtrip():
    rng = np.random.default_rng(3)
    q = rng.standard_normal((50, 4))
    I = ImaginaryUnit.from_vector([0.3, -1.0, 2.0])
    J = I.orthogonal()
    a, b = symplectic_split_array(q, I, J)
    assert np.max(np.abs(symplectic_join_array(a, b, I, J) - q)) < 1e-14


@given(comp, comp, comp, comp)
def test_slice_products_commute(a, b, c, d):
    z1 = SliceComplex(a, b, UNIT_K)
    z2 = SliceComplex(c, d, UNIT_K)
    assert z1 * z2 == z2 * z1


def test_slice_exp_examples():
    e0 = slice_exp(SliceComplex(0.0, 0.0, UNIT_I))
    assert (e0.re, e0.im) == (1.0, 0.0)
    e = slice_exp(SliceComplex(0.0, math.pi, UNIT_J))
    assert e.re == pytest.approx(-1.0) and abs(e.im) < 1e-15
    q = slice_exp(SliceComplex(0.0, 2 * math.pi * 0.25, UNIT_I)).to_quaternion()
    assert q.allclose(QI, atol=1e-15)


@given(st.floats(-50, 50), dirs)
def test_slice_exp_unimodular(y, v):
    z = slice_exp(SliceComplex(0.0, y, ImaginaryUnit.from_vector(v)))
    assert abs(z) == pytest.approx(1.0, abs=1e-14)
