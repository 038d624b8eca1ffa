"""The slice hyperholomorphic Segal-Bargmann transform and its coefficient calculus.

The transform maps a signal to a slice power series ``F(q) = sum q**k c_k``
with right quaternion coefficients.  Two evaluation routes are provided: direct
quadrature of the kernel against the signal (:func:`bargmann_transform`), and
time-domain projection onto the Hermite basis (:func:`bargmann_coefficients`).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .basis import (
    DEFAULT_KMAX,
    fock_coefficient,
    hermite_table,
    kernel_exponent,
    monomial_norm2,
)
from .quadrature import LineGrid, SampledSignal, integrate
from .quaternion import (
    ImaginaryUnit,
    Quaternion,
    qabs,
    qarray_to_slice,
    qconj,
    qmul,
    umul,
)

TAIL_TOL = 1e-12
_CHUNK = 2048


class TruncationRisk(UserWarning):
    """The integrand is not negligible at the edge of the time grid."""


@dataclass(frozen=True, eq=False)
class CoefficientSequence:
    """Right coefficients ``c_0 .. c_K`` of ``F(q) = sum q**k c_k``."""

    nu: float
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(-1, 4)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def kmax(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self) -> int:
        return len(self.coeffs)

    def __call__(self, q):
        """Evaluate the series at a :class:`Quaternion` or an ``(..., 4)`` array (Horner, ``q`` on the left)."""
        scalar = isinstance(q, Quaternion)
        qa = q.as_array() if scalar else np.asarray(q, dtype=float)
        acc = np.zeros(qa.shape)
        for c in self.coeffs[::-1]:
            acc = qmul(qa, acc) + c
        return Quaternion.from_array(acc) if scalar else acc

    def _padded(self, n: int) -> np.ndarray:
        out = np.zeros((n, 4))
        out[: len(self.coeffs)] = self.coeffs
        return out

    def __add__(self, other: "CoefficientSequence") -> "CoefficientSequence":
        n = max(len(self), len(other))
        return CoefficientSequence(self.nu, self._padded(n) + other._padded(n))

    def __sub__(self, other: "CoefficientSequence") -> "CoefficientSequence":
        n = max(len(self), len(other))
        return CoefficientSequence(self.nu, self._padded(n) - other._padded(n))

    def scale(self, s: float) -> "CoefficientSequence":
        return CoefficientSequence(self.nu, self.coeffs * float(s))

    def rmul(self, lam) -> "CoefficientSequence":
        return CoefficientSequence(self.nu, qmul(self.coeffs, Quaternion.coerce(lam).as_array()))

    def derivative(self) -> "CoefficientSequence":
        return slice_derivative(self)

    def times_q(self) -> "CoefficientSequence":
        """Creation operator ``F -> q F``: an index shift of the coefficients."""
        return CoefficientSequence(self.nu, np.vstack([np.zeros((1, 4)), self.coeffs]))

    def fock_inner(self, other: "CoefficientSequence") -> Quaternion:
        """``<F, G>`` from coefficients alone: ``sum conj(g_k) f_k ||q^k||^2``."""
        n = min(len(self), len(other))
        w = np.array([monomial_norm2(k, self.nu) for k in range(n)])
        prod = qmul(qconj(other.coeffs[:n]), self.coeffs[:n])
        return Quaternion.from_array(w @ prod)

    def hermite_coefficients(self) -> np.ndarray:
        """``<f, psi_k>`` for the signal whose transform this is."""
        s = np.array([fock_coefficient(k, self.nu) for k in range(len(self))])
        return self.coeffs / s[:, None]

    def to_signal(self, grid: LineGrid) -> SampledSignal:
        """Inverse transform: ``sum psi_k(t) <f, psi_k>`` resampled on ``grid``."""
        if len(self) == 0:
            return SampledSignal.zeros(grid)
        psi = hermite_table(self.kmax, self.nu, grid.nodes)
        return SampledSignal(grid, psi.T @ self.hermite_coefficients())


@dataclass(frozen=True)
class SchwartzReport:
    pvalues: tuple
    scores: tuple
    kmax: int


def _bargmann_batch(grid: LineGrid, values: np.ndarray, nu: float, qa: np.ndarray, check: bool):
    """Kernel quadrature for many points and signals.

    ``values`` is ``(n, S, 4)``, ``qa`` is ``(m, 4)``; returns ``(m, S, 4)``.
    """
    n, S, _ = values.shape
    wv = (grid.weights[:, None, None] * values).reshape(n, S * 4)
    z, u = qarray_to_slice(qa)
    pref = (nu / math.pi) ** 0.75
    out = np.empty((len(qa), S, 4))
    fmag = qabs(values).max(axis=1)
    risky = False
    t = grid.nodes
    for start in range(0, len(qa), _CHUNK):
        sl = slice(start, start + _CHUNK)
        E = kernel_exponent(z[sl, None], t[None, :], nu)
        A = pref * np.exp(E)
        re = (A.real @ wv).reshape(-1, S, 4)
        im = (A.imag @ wv).reshape(-1, S, 4)
        out[sl] = re + umul(u[sl, None, :], im)
        if check and fmag.any():
            mag = np.exp(E.real) * fmag[None, :]
            peak = mag.max(axis=1)
            edge = np.maximum(mag[:, 0], mag[:, -1])
            risky = risky or bool(np.any(edge > TAIL_TOL * peak))
    if risky:
        warnings.warn(
            "Bargmann integrand exceeds 1e-12 of its peak at the time-grid edge; "
            "widen the grid or reduce |q|",
            TruncationRisk,
            stacklevel=3,
        )
    return out


def bargmann_transform(f: SampledSignal, nu: float, q, check_truncation: bool = True):
    """``B f(q) = int A(q, x) f(x) dx`` by quadrature, kernel on the left of ``f``.

    ``q`` is a :class:`Quaternion` (returns one) or an ``(..., 4)`` array.
    """
    scalar = isinstance(q, Quaternion)
    qa = q.as_array() if scalar else np.asarray(q, dtype=float)
    shape = qa.shape[:-1]
    res = _bargmann_batch(f.grid, f.values[:, None, :], nu, qa.reshape(-1, 4), check_truncation)
    res = res[:, 0, :].reshape(shape + (4,))
    return Quaternion.from_array(res) if scalar else res


def bargmann_transform_many(signals, nu: float, q, check_truncation: bool = True) -> np.ndarray:
    """Transform several signals sharing one grid; returns ``q.shape[:-1] + (S, 4)``."""
    grid = signals[0].grid
    for s in signals[1:]:
        if not s.grid.same_as(grid):
            raise ValueError("signals must share a grid")
    vals = np.stack([s.values for s in signals], axis=1)
    qa = np.asarray(q, dtype=float)
    res = _bargmann_batch(grid, vals, nu, qa.reshape(-1, 4), check_truncation)
    return res.reshape(qa.shape[:-1] + (len(signals), 4))


def bargmann_coefficients(f: SampledSignal, nu: float, kmax: int = DEFAULT_KMAX) -> CoefficientSequence:
    """Power-series coefficients ``c_k = <f, psi_k> sqrt(nu**(k+1)/(pi k!))``."""
    psi = hermite_table(kmax, nu, f.grid.nodes)
    proj = integrate(f.grid, psi.T[:, :, None] * f.values[:, None, :])
    scale = np.array([fock_coefficient(k, nu) for k in range(kmax + 1)])
    return CoefficientSequence(nu, proj * scale[:, None])


def inverse_bargmann(c: CoefficientSequence, grid: LineGrid) -> SampledSignal:
    return c.to_signal(grid)


def slice_derivative(c: CoefficientSequence) -> CoefficientSequence:
    """``d/dq sum q**k c_k = sum q**(k-1) k c_k``."""
    if len(c) <= 1:
        return CoefficientSequence(c.nu, np.zeros((1, 4)))
    k = np.arange(1, len(c), dtype=float)
    return CoefficientSequence(c.nu, c.coeffs[1:] * k[:, None])


def kernel_coefficients(x: float, nu: float, K: int = 60) -> CoefficientSequence:
    """Power series of ``q -> A(q, x)``: ``c_k = sqrt(nu**(k+1)/(pi k!)) psi_k(x)``."""
    psi = hermite_table(K, nu, np.array(x, dtype=float))
    c = np.zeros((K + 1, 4))
    c[:, 0] = [fock_coefficient(k, nu) * psi[k] for k in range(K + 1)]
    return CoefficientSequence(nu, c)


def schwartz_decay_report(c: CoefficientSequence, pvalues, floor: float = 1e-13) -> SchwartzReport:
    """``sup_k |c_k| k**p sqrt(k!)`` for each ``p``.

    Terms whose Hermite coefficient ``|<f, psi_k>|`` is below ``floor`` are
    treated as quadrature noise and skipped; otherwise the ``sqrt(k!)`` factor
    turns roundoff into spurious growth.
    """
    pvalues = tuple(float(p) for p in pvalues)
    if len(c) == 0:
        return SchwartzReport(pvalues, tuple(0.0 for _ in pvalues), -1)
    mags = qabs(c.coeffs)
    herm = qabs(c.hermite_coefficients())
    k = np.arange(len(c))
    keep = (herm >= floor) & (mags > 0)
    scores = []
    for p in pvalues:
        if not keep.any():
            scores.append(0.0)
            continue
        kk = k[keep]
        with np.errstate(divide="ignore"):
            logk = np.where(kk > 0, np.log(np.maximum(kk, 1)), -np.inf)
        log_terms = np.log(mags[keep]) + 0.5 * np.array([math.lgamma(j + 1) for j in kk])
        if p == 0:
            log_s = log_terms
        else:
            log_s = log_terms + p * logk
        best = float(np.max(log_s))
        scores.append(0.0 if best == -np.inf else math.exp(best))
    return SchwartzReport(pvalues, tuple(scores), c.kmax)


def default_probe_points() -> np.ndarray:
    """Eight test points with ``|q| <= 1.5``, four in the slice of ``i`` and four in that of ``(i+j)/sqrt 2``."""
    units = [ImaginaryUnit(1.0, 0.0, 0.0), ImaginaryUnit.from_vector([1.0, 1.0, 0.0])]
    radii = [0.4, 0.9, 1.2, 1.5]
    angles = [0.3, 1.9, 3.6, 5.1]
    pts = []
    for s, unit in enumerate(units):
        for r, a in zip(radii, angles):
            a = a + 0.7 * s
            pts.append([r * math.cos(a), *(r * math.sin(a) * unit.vector)])
    return np.array(pts)


def derivative_fd4(f: SampledSignal) -> SampledSignal:
    """Fourth-order central differences on a uniform grid (second order at the two end nodes on each side)."""
    if not f.grid.is_uniform:
        raise ValueError("finite differences need a uniform grid")
    h = f.grid.spacing
    v = f.values
    d = np.gradient(v, h, axis=0, edge_order=2)
    d[2:-2] = (-v[4:] + 8 * v[3:-1] - 8 * v[1:-3] + v[:-4]) / (12 * h)
    return SampledSignal(f.grid, d)


def position_equivalence_residual(f: SampledSignal, nu: float = 1.0, points=None, kmax: int = DEFAULT_KMAX) -> float:
    """``max |(d_S + nu q) B f - nu sqrt 2 B(x f)|`` over probe points.

    At ``nu = 1`` this is the position-operator identity; the left side is
    built from coefficients, the right side by kernel quadrature.
    """
    pts = default_probe_points() if points is None else np.asarray(points, dtype=float)
    c = bargmann_coefficients(f, nu, kmax)
    lhs = (c.derivative() + c.times_q().scale(nu))(pts)
    xf = f.times_real(f.grid.nodes)
    rhs = nu * math.sqrt(2.0) * bargmann_transform(xf, nu, pts)
    return float(np.max(qabs(lhs - rhs))) if len(pts) else 0.0


def momentum_equivalence_residual(f: SampledSignal, nu: float = 1.0, points=None, kmax: int = DEFAULT_KMAX) -> float:
    """``max |q B f - B((X - D/nu) f) / sqrt 2|`` over probe points.

    At ``nu = 1`` this is the creation-operator identity ``M_q B = B (X - D)/sqrt 2``.
    ``D`` is approximated with :func:`derivative_fd4`.
    """
    pts = default_probe_points() if points is None else np.asarray(points, dtype=float)
    c = bargmann_coefficients(f, nu, kmax)
    lhs = c.times_q()(pts)
    g = f.times_real(f.grid.nodes) - derivative_fd4(f).scale(1.0 / nu)
    rhs = bargmann_transform(g, nu, pts) / math.sqrt(2.0)
    return float(np.max(qabs(lhs - rhs))) if len(pts) else 0.0


FOCK_WEIGHT_CUTOFF = 60.0


def fock_gram_plane(signals, nu: float, grid, unit: ImaginaryUnit, cutoff: float = FOCK_WEIGHT_CUTOFF) -> np.ndarray:
    """Fock Gram matrix ``G[a, b] = <B f_a, B f_b>`` by 2D quadrature on one slice.

    ``B f`` is evaluated by kernel quadrature at every plane node with
    ``nu |q|^2 <= cutoff``; beyond that the weight ``exp(-nu |q|^2)`` is below
    ``1e-26`` and the node is dropped.  Returns an ``(S, S, 4)`` array.
    """
    X, Y = grid.mesh()
    r2 = X * X + Y * Y
    keep = nu * r2 <= cutoff
    pts = grid.points(unit)[keep]
    w = (grid.weights * np.exp(-nu * r2))[keep]
    B = bargmann_transform_many(signals, nu, pts, check_truncation=False)  # (P, S, 4)
    prod = qmul(qconj(B)[:, None, :, :], B[:, :, None, :])  # [p, a, b] = conj(B_b) B_a
    return np.tensordot(w, prod, axes=(0, 0))
