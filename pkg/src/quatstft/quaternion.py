"""Quaternion arithmetic, imaginary units and slice decompositions.

Scalars are immutable :class:`Quaternion` values.  Sampled data is kept in
plain ``numpy`` arrays whose trailing axis holds the components
``(w, x, y, z)`` along ``(1, i, j, k)``; the ``q*`` helpers below operate on
such arrays with broadcasting.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

ORTHOGONALITY_TOL = 1e-10
_UNIT_NORM_TOL = 1e-12


class NonOrthogonalUnits(ValueError):
    """Raised when two imaginary units are required to be orthogonal but are not."""


# ---------------------------------------------------------------------------
# array kernels


def qmul(p, q):
    """Hamilton product of quaternion arrays (trailing axis of length 4)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    pw, px, py, pz = np.moveaxis(p, -1, 0)
    qw, qx, qy, qz = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ],
        axis=-1,
    )


def qconj(q):
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qabs(q):
    return np.sqrt(np.sum(np.square(q), axis=-1))


def umul(u, q):
    """Left product ``u*q`` of a pure quaternion ``u`` (3-vector array) with ``q``.

    Cheaper than :func:`qmul` because the real part of ``u`` is zero.
    """
    u = np.asarray(u, dtype=float)
    q = np.asarray(q, dtype=float)
    ux, uy, uz = np.moveaxis(u, -1, 0)
    qw, qx, qy, qz = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            -ux * qx - uy * qy - uz * qz,
            ux * qw + uy * qz - uz * qy,
            uy * qw - ux * qz + uz * qx,
            uz * qw + ux * qy - uy * qx,
        ],
        axis=-1,
    )


def slice_lmul(re, im, u, q):
    """Left-multiply ``q`` by the slice number ``re + im*I`` where ``I`` has direction ``u``.

    ``re`` and ``im`` broadcast against ``q[..., 0]``.
    """
    re = np.asarray(re, dtype=float)[..., None]
    im = np.asarray(im, dtype=float)[..., None]
    return re * np.asarray(q, dtype=float) + im * umul(u, q)


def as_qarray(values) -> np.ndarray:
    """Coerce real or quaternion-shaped data to an ``(..., 4)`` float array.

    A real array (no trailing axis of 4) is promoted to quaternions with zero
    imaginary part.  Use :func:`real_to_qarray` when the input could
    legitimately have a last axis of length 4.
    """
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 4:
        return real_to_qarray(arr)
    return arr


def real_to_qarray(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    out = np.zeros(arr.shape + (4,))
    out[..., 0] = arr
    return out


def complex_to_qarray(z, u) -> np.ndarray:
    """Embed complex numbers into the slice with unit direction ``u`` (3-vector)."""
    z = np.asarray(z)
    u = np.asarray(u, dtype=float)
    out = np.empty(z.shape + (4,))
    out[..., 0] = z.real
    out[..., 1:] = z.imag[..., None] * u
    return out


def qarray_to_slice(q):
    """Slice form of a quaternion array: ``q = x + I*y`` with ``y >= 0``.

    Returns ``(z, u)`` where ``z = x + 1j*y`` and ``u`` holds unit directions.
    Real entries get ``u = (1, 0, 0)``; their imaginary part is zero so the
    choice never affects a product.
    """
    q = np.asarray(q, dtype=float)
    vec = q[..., 1:]
    y = np.sqrt(np.sum(vec * vec, axis=-1))
    u = np.zeros_like(vec)
    nz = y > 0
    u[nz] = vec[nz] / y[nz][..., None]
    u[~nz] = (1.0, 0.0, 0.0)
    return q[..., 0] + 1j * y, u


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        a = np.asarray(arr, dtype=float).reshape(4)
        return cls(float(a[0]), float(a[1]), float(a[2]), float(a[3]))

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, SliceComplex):
            return value.to_quaternion()
        if np.isscalar(value):
            return cls(float(value))
        return cls.from_array(value)

    def as_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.hypot(self.w, self.x, self.y, self.z)

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroDivisionError("quaternion 0 has no inverse")
        c = self.conj()
        return Quaternion(c.w / n2, c.x / n2, c.y / n2, c.z / n2)

    def __add__(self, other):
        o = Quaternion.coerce(other)
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __sub__(self, other):
        return self + (-Quaternion.coerce(other))

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __mul__(self, other):
        if np.isscalar(other):
            s = float(other)
            return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)
        return quat_mul(self, Quaternion.coerce(other))

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return quat_mul(Quaternion.coerce(other), self)

    def __truediv__(self, other):
        if np.isscalar(other):
            return self * (1.0 / float(other))
        # right division p * q**-1
        return self * Quaternion.coerce(other).inverse()

    def allclose(self, other, atol: float = 1e-12) -> bool:
        o = Quaternion.coerce(other)
        return bool(np.all(np.abs(self.as_array() - o.as_array()) <= atol))

    def __repr__(self) -> str:
        return f"Quaternion({self.w!r}, {self.x!r}, {self.y!r}, {self.z!r})"


ONE = Quaternion(1.0)
QI = Quaternion(0.0, 1.0)
QJ = Quaternion(0.0, 0.0, 1.0)
QK = Quaternion(0.0, 0.0, 0.0, 1.0)


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p*q``."""
    return Quaternion(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )


@dataclass(frozen=True)
class ImaginaryUnit:
    """Unit pure quaternion ``I`` with ``I**2 == -1``; selects the slice ``R + R*I``."""

    ux: float
    uy: float
    uz: float

    def __post_init__(self):
        n = math.sqrt(self.ux ** 2 + self.uy ** 2 + self.uz ** 2)
        if abs(n - 1.0) > _UNIT_NORM_TOL:
            raise ValueError(f"imaginary unit must have unit norm, got |u| = {n!r}")

    @classmethod
    def from_vector(cls, v) -> "ImaginaryUnit":
        v = np.asarray(v, dtype=float).reshape(3)
        n = float(np.linalg.norm(v))
        if n == 0.0 or not np.isfinite(n):
            raise ValueError("cannot normalize a zero or non-finite direction")
        v = v / n
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @classmethod
    def parse(cls, text: str) -> "ImaginaryUnit":
        """Accept ``i``, ``j``, ``k`` or a comma-separated direction triple."""
        key = text.strip().lower()
        named = {"i": (1.0, 0.0, 0.0), "j": (0.0, 1.0, 0.0), "k": (0.0, 0.0, 1.0)}
        if key in named:
            return cls(*named[key])
        parts = key.split(",")
        if len(parts) != 3:
            raise ValueError(f"cannot parse imaginary unit {text!r}")
        return cls.from_vector([float(p) for p in parts])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.ux, self.uy, self.uz])

    def to_quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.ux, self.uy, self.uz)

    def dot(self, other: "ImaginaryUnit") -> float:
        return self.ux * other.ux + self.uy * other.uy + self.uz * other.uz

    def orthogonal(self) -> "ImaginaryUnit":
        """A deterministic unit orthogonal to this one."""
        v = self.vector
        helper = np.eye(3)[int(np.argmin(np.abs(v)))]
        w = helper - np.dot(helper, v) * v
        return ImaginaryUnit.from_vector(w)

    def label(self) -> str:
        for name, vec in (("i", (1, 0, 0)), ("j", (0, 1, 0)), ("k", (0, 0, 1))):
            if (self.ux, self.uy, self.uz) == vec:
                return name
        return f"{self.ux!r},{self.uy!r},{self.uz!r}"


UNIT_I = ImaginaryUnit(1.0, 0.0, 0.0)
UNIT_J = ImaginaryUnit(0.0, 1.0, 0.0)
UNIT_K = ImaginaryUnit(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class SliceComplex:
    """The number ``re + im*I`` of the slice selected by ``unit``."""

    re: float
    im: float
    unit: ImaginaryUnit

    def to_quaternion(self) -> Quaternion:
        u = self.unit
        return Quaternion(self.re, self.im * u.ux, self.im * u.uy, self.im * u.uz)

    def to_complex(self) -> complex:
        return complex(self.re, self.im)

    @classmethod
    def from_complex(cls, z: complex, unit: ImaginaryUnit) -> "SliceComplex":
        return cls(float(z.real), float(z.imag), unit)

    def __mul__(self, other):
        if isinstance(other, SliceComplex):
            if other.unit != self.unit:
                raise ValueError("slice numbers live in different slices")
            return SliceComplex.from_complex(self.to_complex() * other.to_complex(), self.unit)
        if np.isscalar(other):
            return SliceComplex(self.re * float(other), self.im * float(other), self.unit)
        return self.to_quaternion() * Quaternion.coerce(other)

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return Quaternion.coerce(other) * self.to_quaternion()

    def __add__(self, other: "SliceComplex") -> "SliceComplex":
        if other.unit != self.unit:
            raise ValueError("slice numbers live in different slices")
        return SliceComplex(self.re + other.re, self.im + other.im, self.unit)

    def __abs__(self) -> float:
        return math.hypot(self.re, self.im)


def slice_decompose(q: Quaternion) -> Tuple[float, float, Optional[ImaginaryUnit]]:
    """Write ``q = x + I*y`` with ``y > 0``; real ``q`` returns ``(q, 0, None)``."""
    q = Quaternion.coerce(q)
    y = math.sqrt(q.x * q.x + q.y * q.y + q.z * q.z)
    if y == 0.0:
        return q.w, 0.0, None
    return q.w, y, ImaginaryUnit.from_vector([q.x, q.y, q.z])


def slice_recompose(x: float, y: float, unit: Optional[ImaginaryUnit]) -> Quaternion:
    if unit is None:
        return Quaternion(x)
    return SliceComplex(x, y, unit).to_quaternion()


def symplectic_split(q, I: ImaginaryUnit, J: ImaginaryUnit) -> Tuple[SliceComplex, SliceComplex]:
    """Split ``q = q1 + q2*J`` with ``q1, q2`` in the slice of ``I``.

    ``I`` and ``J`` must be orthogonal (``|I.J| <= 1e-10``).
    """
    a, b = symplectic_split_array(Quaternion.coerce(q).as_array(), I, J)
    return SliceComplex.from_complex(complex(a), I), SliceComplex.from_complex(complex(b), I)


def symplectic_split_array(q, I: ImaginaryUnit, J: ImaginaryUnit):
    """Vectorized split; returns complex arrays ``(q1, q2)`` in the coordinates of ``I``."""
    check_orthogonal(I, J)
    q = np.asarray(q, dtype=float)
    u = I.vector
    v = J.vector
    n = np.cross(u, v)  # I*J for orthogonal units
    w = q[..., 0]
    vec = q[..., 1:]
    q1 = w + 1j * (vec @ u)
    # q2*J = (c + d I) J = c J + d I J
    q2 = (vec @ v) + 1j * (vec @ n)
    return q1, q2


def symplectic_join_array(q1, q2, I: ImaginaryUnit, J: ImaginaryUnit) -> np.ndarray:
    """Inverse of :func:`symplectic_split_array`: ``q1 + q2*J``."""
    u = I.vector
    v = J.vector
    n = np.cross(u, v)
    q1 = np.asarray(q1)
    q2 = np.asarray(q2)
    out = np.zeros(np.broadcast(q1, q2).shape + (4,))
    out[..., 0] = q1.real
    out[..., 1:] = q1.imag[..., None] * u + q2.real[..., None] * v + q2.imag[..., None] * n
    return out


def check_orthogonal(I: ImaginaryUnit, J: ImaginaryUnit, tol: float = ORTHOGONALITY_TOL) -> None:
    d = I.dot(J)
    if abs(d) > tol:
        raise NonOrthogonalUnits(f"units are not orthogonal: I.J = {d!r}")


def slice_exp(z: SliceComplex) -> SliceComplex:
    """``exp(x + I*y) = e**x (cos y + I sin y)``."""
    r = math.exp(z.re)
    return SliceComplex(r * math.cos(z.im), r * math.sin(z.im), z.unit)


def qpow(q, k: int):
    """``q**k`` for a quaternion array by repeated multiplication."""
    q = np.asarray(q, dtype=float)
    out = np.zeros_like(q)
    out[..., 0] = 1.0
    for _ in range(k):
        out = qmul(out, q)
    return out
