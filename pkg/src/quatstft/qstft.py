"""Quaternion short-time Fourier transform with the Gaussian window ``2**(1/4) exp(-pi t^2)``.

Two evaluation routes exist.  The windowed route integrates
``sqrt 2 * exp(-2 pi I w t) f(t) phi(t - x)`` directly; the Bargmann route
evaluates ``exp(-I pi x w) B f(conj(q)/sqrt 2) exp(-pi |q|^2 / 2)`` with
``q = x + I w`` and ``nu = 2 pi``.  The windowed route is the production path,
the Bargmann route is kept for verification.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .bargmann import _bargmann_batch
from .quadrature import LineGrid, SampledSignal, default_time_grid, make_grid
from .quaternion import (
    ImaginaryUnit,
    Quaternion,
    UNIT_I,
    qabs,
    qconj,
    qmul,
    slice_lmul,
    umul,
)
from .qft import QftPlan, qft_forward

NU_WINDOW = 2.0 * math.pi
SQRT2 = math.sqrt(2.0)
TWO_PI = 2.0 * math.pi

DEFAULT_LATTICE_HALFWIDTH = 4.0
DEFAULT_LATTICE_N = 129


class BadExponent(ValueError):
    pass


def gaussian_window(t):
    return 2.0 ** 0.25 * np.exp(-math.pi * np.square(t))


def window_signal(grid: Optional[LineGrid] = None) -> SampledSignal:
    grid = grid or default_time_grid()
    return SampledSignal(grid, gaussian_window(grid.nodes))


def default_axis() -> LineGrid:
    return make_grid(-DEFAULT_LATTICE_HALFWIDTH, DEFAULT_LATTICE_HALFWIDTH, DEFAULT_LATTICE_N)


@dataclass(frozen=True, eq=False)
class TimeFreqGrid:
    """Coefficients ``V f(x, w)`` with ``values[i, j]`` at ``(xgrid.nodes[i], wgrid.nodes[j])``."""

    xgrid: LineGrid
    wgrid: LineGrid
    unit: ImaginaryUnit
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.xgrid.n, self.wgrid.n, 4):
            raise ValueError(f"values of shape {vals.shape} do not match the lattice")
        if not np.all(np.isfinite(vals)):
            raise ValueError("non-finite time-frequency coefficients")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def weights(self) -> np.ndarray:
        """Product of the 1D quadrature weights, i.e. the cell areas."""
        return np.outer(self.xgrid.weights, self.wgrid.weights)

    def inner(self, other: "TimeFreqGrid") -> Quaternion:
        """``<V, W> = sum w conj(W) V`` over the lattice."""
        prod = qmul(qconj(other.values), self.values)
        return Quaternion.from_array(np.tensordot(self.weights, prod, axes=([0, 1], [0, 1])))

    def energy(self) -> float:
        return float(np.sum(self.weights * np.sum(self.values ** 2, axis=-1)))

    def norm(self) -> float:
        return math.sqrt(self.energy())

    def magnitude(self) -> np.ndarray:
        return qabs(self.values)

    def with_values(self, values) -> "TimeFreqGrid":
        return TimeFreqGrid(self.xgrid, self.wgrid, self.unit, values)


# ---------------------------------------------------------------------------
# analysis


def _windowed_points(f: SampledSignal, xs, ws, unit: ImaginaryUnit) -> np.ndarray:
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ws = np.atleast_1d(np.asarray(ws, dtype=float))
    t = f.grid.nodes
    win = gaussian_window(t[None, :] - xs[:, None]) * f.grid.weights[None, :]
    g = win[:, :, None] * f.values[None, :, :]
    ph = TWO_PI * ws[:, None] * t[None, :]
    c = np.einsum("mt,mtc->mc", np.cos(ph), g)
    s = np.einsum("mt,mtc->mc", np.sin(ph), g)
    return SQRT2 * (c - umul(unit.vector, s))


def _bargmann_points(f: SampledSignal, xs, ws, unit: ImaginaryUnit, check: bool = True) -> np.ndarray:
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ws = np.atleast_1d(np.asarray(ws, dtype=float))
    u = unit.vector
    # p = conj(x + I w) / sqrt 2
    p = np.zeros((len(xs), 4))
    p[:, 0] = xs / SQRT2
    p[:, 1:] = (-ws / SQRT2)[:, None] * u
    B = _bargmann_batch(f.grid, f.values[:, None, :], NU_WINDOW, p, check)[:, 0, :]
    ph = math.pi * xs * ws
    damp = np.exp(-0.5 * math.pi * (xs * xs + ws * ws))
    return slice_lmul(np.cos(ph), -np.sin(ph), u, B) * damp[:, None]


def qstft_points(f: SampledSignal, xs, ws, unit: ImaginaryUnit = UNIT_I, route: str = "windowed") -> np.ndarray:
    """``V f`` at paired coordinates ``(xs[m], ws[m])``; returns ``(m, 4)``."""
    if route == "windowed":
        return _windowed_points(f, xs, ws, unit)
    if route == "bargmann":
        return _bargmann_points(f, xs, ws, unit)
    raise ValueError(f"unknown route {route!r}")


def qstft_windowed(f: SampledSignal, x: float, omega: float, unit: ImaginaryUnit = UNIT_I) -> Quaternion:
    """``sqrt 2 * int exp(-2 pi I w t) f(t) phi(t - x) dt``."""
    return Quaternion.from_array(_windowed_points(f, x, omega, unit)[0])


def qstft_bargmann(f: SampledSignal, x: float, omega: float, unit: ImaginaryUnit = UNIT_I) -> Quaternion:
    """``exp(-I pi x w) * B f(conj(q)/sqrt 2) * exp(-pi |q|^2/2)`` with ``q = x + I w``, ``nu = 2 pi``."""
    return Quaternion.from_array(_bargmann_points(f, x, omega, unit)[0])


def qstft_grid(
    f: SampledSignal,
    xgrid: Optional[LineGrid] = None,
    wgrid: Optional[LineGrid] = None,
    unit: ImaginaryUnit = UNIT_I,
    route: str = "windowed",
) -> TimeFreqGrid:
    """Evaluate the transform on the lattice ``xgrid x wgrid`` (default ``[-4, 4]^2``, 129 x 129)."""
    xgrid = xgrid or default_axis()
    wgrid = wgrid or default_axis()
    if route == "bargmann":
        X, W = np.meshgrid(xgrid.nodes, wgrid.nodes, indexing="ij")
        vals = _bargmann_points(f, X.ravel(), W.ravel(), unit).reshape(xgrid.n, wgrid.n, 4)
        return TimeFreqGrid(xgrid, wgrid, unit, vals)
    if route != "windowed":
        raise ValueError(f"unknown route {route!r}")
    t = f.grid.nodes
    n = f.grid.n
    win = gaussian_window(t[:, None] - xgrid.nodes[None, :]) * f.grid.weights[:, None]  # (n, nx)
    g = (win[:, :, None] * f.values[:, None, :]).reshape(n, xgrid.n * 4)
    ph = TWO_PI * np.outer(wgrid.nodes, t)
    c = (np.cos(ph) @ g).reshape(wgrid.n, xgrid.n, 4)
    s = (np.sin(ph) @ g).reshape(wgrid.n, xgrid.n, 4)
    vals = SQRT2 * (c - umul(unit.vector, s))
    return TimeFreqGrid(xgrid, wgrid, unit, vals.transpose(1, 0, 2))


# ---------------------------------------------------------------------------
# synthesis


def _synthesis(V: TimeFreqGrid, tgrid: LineGrid, scale: float) -> SampledSignal:
    """``scale * sum w exp(2 pi I w y) V(x, w) exp(-pi (y - x)^2)`` at every node ``y``."""
    y = tgrid.nodes
    gx = np.exp(-math.pi * np.square(y[:, None] - V.xgrid.nodes[None, :])) * V.xgrid.weights[None, :]
    H = np.einsum("yx,xwc->ywc", gx, V.values)
    ph = TWO_PI * y[:, None] * V.wgrid.nodes[None, :]
    ww = V.wgrid.weights[None, :]
    c = np.einsum("yw,ywc->yc", np.cos(ph) * ww, H)
    s = np.einsum("yw,ywc->yc", np.sin(ph) * ww, H)
    return SampledSignal(tgrid, scale * (c + umul(V.unit.vector, s)))


def qstft_reconstruct(V: TimeFreqGrid, tgrid: Optional[LineGrid] = None) -> SampledSignal:
    """Inversion ``f(y) = 2**(-1/4) * iint exp(2 pi I w y) V f(x, w) exp(-pi (y-x)^2) dx dw``."""
    return _synthesis(V, tgrid or default_time_grid(), 2.0 ** -0.25)


def qstft_adjoint(F: TimeFreqGrid, tgrid: Optional[LineGrid] = None) -> SampledSignal:
    """Adjoint of the transform, ``2**(3/4) * iint exp(2 pi I w y) F(x, w) exp(-pi (y-x)^2) dx dw``.

    Applied to a transform it returns twice the signal.
    """
    return _synthesis(F, tgrid or default_time_grid(), 2.0 ** 0.75)


# ---------------------------------------------------------------------------
# reproducing kernel


def gabor_kernel(
    x: float,
    omega: float,
    xp: float,
    omegap: float,
    unit: ImaginaryUnit = UNIT_I,
    tgrid: Optional[LineGrid] = None,
) -> Quaternion:
    """``K(w, x; w', x') = int exp(-2 pi I w' t) phi(t-x') conj(exp(-2 pi I w t) phi(t-x)) dt``.

    Evaluated literally, conjugated factor on the right.
    """
    tgrid = tgrid or default_time_grid()
    t = tgrid.nodes
    u = unit.vector
    zeros = np.zeros((len(t), 4))
    zeros[:, 0] = 1.0
    a = slice_lmul(np.cos(TWO_PI * omegap * t), -np.sin(TWO_PI * omegap * t), u, zeros)
    a *= gaussian_window(t - xp)[:, None]
    b = slice_lmul(np.cos(TWO_PI * omega * t), -np.sin(TWO_PI * omega * t), u, zeros)
    b *= gaussian_window(t - x)[:, None]
    return Quaternion.from_array(tgrid.weights @ qmul(a, qconj(b)))


def gabor_kernel_lattice(xp: float, omegap: float, xgrid: LineGrid, wgrid: LineGrid, tgrid: Optional[LineGrid] = None):
    """Kernel against a fixed ``(x', w')`` for every lattice node ``(x, w)``.

    All factors lie in one slice, so the integrand collapses to
    ``exp(-2 pi I (w' - w) t) phi(t - x') phi(t - x)``.  Returns the real and
    ``I`` components as two ``(nx, nw)`` arrays.
    """
    tgrid = tgrid or default_time_grid()
    t = tgrid.nodes
    prod = gaussian_window(t[None, :] - xp) * gaussian_window(t[None, :] - xgrid.nodes[:, None])
    prod = prod * tgrid.weights[None, :]  # (nx, n)
    ph = TWO_PI * (omegap - wgrid.nodes)[:, None] * t[None, :]  # (nw, n)
    re = prod @ np.cos(ph).T
    im = -(prod @ np.sin(ph).T)
    return re, im


def reproduce(V: TimeFreqGrid, xp: float, omegap: float, tgrid: Optional[LineGrid] = None) -> Quaternion:
    """``iint K(w, x; w', x') V(x, w) dx dw`` with the kernel on the left."""
    re, im = gabor_kernel_lattice(xp, omegap, V.xgrid, V.wgrid, tgrid)
    integrand = slice_lmul(re, im, V.unit.vector, V.values)
    return Quaternion.from_array(np.tensordot(V.weights, integrand, axes=([0, 1], [0, 1])))


# ---------------------------------------------------------------------------
# uncertainty


def lieb_bound(p: float, fnorm: float) -> float:
    return 2.0 ** (p + 1) / p * fnorm ** p


def lieb_functional(f: SampledSignal, p: float, V: Optional[TimeFreqGrid] = None):
    """``(iint |V f|^p, (2**(p+1)/p) ||f||^p)``; requires ``p >= 2``."""
    if not p >= 2:
        raise BadExponent(f"Lieb's inequality needs p >= 2, got {p}")
    V = V if V is not None else qstft_grid(f)
    lhs = float(np.sum(V.weights * V.magnitude() ** p))
    return lhs, lieb_bound(p, f.norm())


def sharp_constant(p: float) -> float:
    """``c_p = (2**(p+1)/p) ** (-2/(p-2))``."""
    if not p > 2:
        raise BadExponent(f"the sharpened bound needs p > 2, got {p}")
    return (2.0 ** (p + 1) / p) ** (-2.0 / (p - 2.0))


class ConcentrationReport(NamedTuple):
    measure: float
    weak_bound: float
    sharp_bound: float
    p_used: float
    epsilon: float
    energy: float
    hypothesis_holds: bool
    scale: float

    @property
    def passes(self) -> bool:
        """Bounds respected, or the hypothesis fails and the check is vacuous."""
        if not self.hypothesis_holds:
            return True
        return self.measure >= self.weak_bound and self.measure >= self.sharp_bound


def box_cells(xgrid: LineGrid, wgrid: LineGrid, xlo: float, xhi: float, wlo: float, whi: float) -> np.ndarray:
    """Boolean mask of lattice nodes inside ``[xlo, xhi] x [wlo, whi]``."""
    xm = (xgrid.nodes >= xlo) & (xgrid.nodes <= xhi)
    wm = (wgrid.nodes >= wlo) & (wgrid.nodes <= whi)
    return np.outer(xm, wm)


def concentration_check(
    f: SampledSignal,
    U,
    eps: Optional[float] = None,
    p: float = 4.0,
    V: Optional[TimeFreqGrid] = None,
) -> ConcentrationReport:
    """Test the weak and sharpened concentration bounds on the cell set ``U``.

    ``f`` is normalized internally (the factor is returned as ``scale``).
    When ``eps`` is omitted it is measured as ``max(0, 1 - energy on U)``.
    """
    fnorm = f.norm()
    V = V if V is not None else qstft_grid(f)
    U = np.asarray(U, dtype=bool)
    if U.shape != V.values.shape[:2]:
        raise ValueError("cell mask does not match the lattice")
    scale = 1.0 / fnorm if fnorm > 0 else 0.0
    dens = V.weights * np.sum(V.values ** 2, axis=-1) * scale ** 2
    energy = float(np.sum(dens[U]))
    measure = float(np.sum(V.weights[U]))
    if eps is None:
        eps = max(0.0, 1.0 - energy)
    holds = fnorm > 0 and energy >= 1.0 - eps
    base = max(1.0 - eps, 0.0)
    weak = base / 2.0
    sharp = sharp_constant(p) * base ** (p / (p - 2.0))
    return ConcentrationReport(measure, weak, sharp, float(p), float(eps), energy, bool(holds), scale)


# ---------------------------------------------------------------------------
# Fourier intertwining


class IntertwineResult(NamedTuple):
    residual_sqrt2: float
    residual_one: float
    fitted_constant: float
    empirical_constant: float


def default_intertwine_probes():
    vals = (-0.75, 0.0, 0.75)
    xs, ws = np.meshgrid(vals, vals, indexing="ij")
    return xs.ravel(), ws.ravel()


def fourier_intertwine_residual(f: SampledSignal, unit: ImaginaryUnit = UNIT_I, probes=None) -> IntertwineResult:
    """Compare ``V f(x, w)`` with ``C exp(-2 pi I w x) V(F_I f)(w, -x)`` for ``C = sqrt 2`` and ``C = 1``.

    ``fitted_constant`` is the real least-squares ``C``; ``empirical_constant``
    is whichever candidate leaves the smaller residual.
    """
    xs, ws = probes if probes is not None else default_intertwine_probes()
    xs = np.asarray(xs, dtype=float)
    ws = np.asarray(ws, dtype=float)
    plan = QftPlan(unit, f.grid, f.grid)
    Ff = qft_forward(f, plan)
    lhs = _windowed_points(f, xs, ws, unit)
    base = _windowed_points(Ff, ws, -xs, unit)
    ph = TWO_PI * ws * xs
    rhs = slice_lmul(np.cos(ph), -np.sin(ph), unit.vector, base)
    r_sqrt2 = float(np.max(qabs(lhs - SQRT2 * rhs))) if len(xs) else 0.0
    r_one = float(np.max(qabs(lhs - rhs))) if len(xs) else 0.0
    den = float(np.sum(rhs * rhs))
    fitted = float(np.sum(rhs * lhs)) / den if den > 0 else math.nan
    empirical = 1.0 if r_one <= r_sqrt2 else SQRT2
    return IntertwineResult(r_sqrt2, r_one, fitted, empirical)
