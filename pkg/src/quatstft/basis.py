"""Weighted Hermite functions, normalized Fock monomials and the Bargmann kernel."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quaternion import (
    Quaternion,
    complex_to_qarray,
    qarray_to_slice,
    qmul,
    qpow,
)

DEFAULT_KMAX = 40


def hermite_norm(k: int, nu: float) -> float:
    """L2 norm of the unnormalized weighted Hermite function ``h_k``.

    ``||h_k||**2 = 2**k nu**k k! sqrt(pi/nu)``; evaluated in log space.
    """
    log_n2 = k * math.log(2 * nu) + math.lgamma(k + 1) + 0.5 * math.log(math.pi / nu)
    return math.exp(0.5 * log_n2)


def fock_coefficient(k: int, nu: float) -> float:
    """``sqrt(nu**(k+1) / (pi k!))``, the factor turning ``q**k`` into a unit vector."""
    return math.exp(0.5 * ((k + 1) * math.log(nu) - math.log(math.pi) - math.lgamma(k + 1)))


def monomial_norm2(k: int, nu: float) -> float:
    """Squared Fock norm of ``q**k``."""
    return 1.0 / fock_coefficient(k, nu) ** 2


def hermite_table(kmax: int, nu: float, t) -> np.ndarray:
    """Rows ``psi_0 .. psi_kmax`` sampled at ``t``.

    Uses the normalized three-term recurrence
    ``psi_{k+1} = (sqrt(2 nu) t psi_k - sqrt(k) psi_{k-1}) / sqrt(k+1)``,
    which stays well scaled where the Rodrigues formula overflows.
    """
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    if nu <= 0:
        raise ValueError("nu must be positive")
    t = np.asarray(t, dtype=float)
    out = np.empty((kmax + 1,) + t.shape)
    out[0] = (nu / math.pi) ** 0.25 * np.exp(-0.5 * nu * t * t)
    s = math.sqrt(2 * nu) * t
    if kmax >= 1:
        out[1] = s * out[0]
    for k in range(1, kmax):
        out[k + 1] = (s * out[k] - math.sqrt(k) * out[k - 1]) / math.sqrt(k + 1)
    return out


def hermite_psi(k: int, nu: float, t):
    """Normalized weighted Hermite function ``psi_k^nu`` at ``t`` (scalar or array)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    val = hermite_table(k, nu, t)[k]
    return float(val) if np.ndim(val) == 0 else val


def hermite_h(k: int, nu: float, t):
    """Unnormalized ``h_k^nu = ||h_k|| psi_k``."""
    return hermite_norm(k, nu) * hermite_psi(k, nu, t)


@dataclass(frozen=True)
class HermiteBasis:
    nu: float
    kmax: int = DEFAULT_KMAX

    @property
    def norms(self) -> np.ndarray:
        return np.array([hermite_norm(k, self.nu) for k in range(self.kmax + 1)])

    def __call__(self, t) -> np.ndarray:
        return hermite_table(self.kmax, self.nu, t)


@dataclass(frozen=True)
class FockMonomialBasis:
    nu: float
    kmax: int = DEFAULT_KMAX

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([fock_coefficient(k, self.nu) for k in range(self.kmax + 1)])


def fock_monomial(k: int, nu: float, q):
    """``f_k(q) = sqrt(nu**(k+1)/(pi k!)) q**k``.

    Accepts a :class:`Quaternion` (returns one) or an ``(..., 4)`` array.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if isinstance(q, Quaternion):
        return Quaternion.from_array(fock_coefficient(k, nu) * qpow(q.as_array(), k))
    return fock_coefficient(k, nu) * qpow(q, k)


def kernel_exponent(z, t, nu: float):
    """Complex exponent ``-(nu/2)(z^2 + t^2) + nu sqrt(2) z t`` (broadcasting)."""
    z = np.asarray(z)
    t = np.asarray(t, dtype=float)
    return -0.5 * nu * (z * z + t * t) + nu * math.sqrt(2.0) * z * t


def bargmann_kernel(q, t, nu: float):
    """The Segal-Bargmann kernel ``(nu/pi)^(3/4) exp(-(nu/2)(q^2+t^2) + nu sqrt(2) q t)``.

    The exponent is formed in the slice of ``q`` and exponentiated there.
    ``q`` may be a :class:`Quaternion` or an ``(..., 4)`` array; ``t`` a
    scalar or an array broadcasting against ``q[..., 0]``.
    """
    scalar = isinstance(q, Quaternion)
    qa = q.as_array() if scalar else np.asarray(q, dtype=float)
    z, u = qarray_to_slice(qa)
    val = (nu / math.pi) ** 0.75 * np.exp(kernel_exponent(z, t, nu))
    u = np.broadcast_to(u, np.shape(val) + (3,))
    out = complex_to_qarray(val, u)
    if scalar and out.shape == (4,):
        return Quaternion.from_array(out)
    return out


def kernel_series(q, t, nu: float, K: int):
    """Truncated generating series ``sum_{k<=K} f_k(q) psi_k(t)`` for one ``q`` and many ``t``."""
    qa = q.as_array() if isinstance(q, Quaternion) else np.asarray(q, dtype=float)
    t = np.asarray(t, dtype=float)
    psi = hermite_table(K, nu, t)
    out = np.zeros(t.shape + (4,))
    power = np.array([1.0, 0.0, 0.0, 0.0])
    for k in range(K + 1):
        out += fock_coefficient(k, nu) * psi[k][..., None] * power
        power = qmul(power, qa)
    return out
