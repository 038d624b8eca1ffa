"""Line and plane quadrature, sampled signals and the L2 / Fock inner products."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .quaternion import ImaginaryUnit, Quaternion, as_qarray, qconj, qmul

RULES = ("trapezoid", "gauss-legendre")

# Defaults are tuned for functions decaying like exp(-pi t^2) (nu = 2*pi).
DEFAULT_TIME_HALFWIDTH = 8.0
DEFAULT_TIME_N = 1024
DEFAULT_PLANE_HALFWIDTH = 6.0
DEFAULT_PLANE_N = 256


class BadGridSpec(ValueError):
    pass


class GridMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LineGrid:
    lo: float
    hi: float
    n: int
    rule: str
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        for arr in (self.nodes, self.weights):
            arr.setflags(write=False)

    @property
    def spacing(self) -> float:
        """Node spacing of a uniform grid (NaN for Gauss-Legendre)."""
        if self.rule == "gauss-legendre":
            return math.nan
        return (self.hi - self.lo) / (self.n - 1)

    @property
    def is_uniform(self) -> bool:
        return self.rule == "trapezoid"

    def same_as(self, other: "LineGrid") -> bool:
        if self is other:
            return True
        return (
            self.n == other.n
            and self.rule == other.rule
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
        )

    def __eq__(self, other):
        return isinstance(other, LineGrid) and self.same_as(other)

    def __hash__(self):
        return hash((self.lo, self.hi, self.n, self.rule))

    @classmethod
    def from_nodes(cls, nodes) -> "LineGrid":
        """Trapezoid grid on arbitrary strictly increasing nodes."""
        nodes = np.array(nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise BadGridSpec("need at least two nodes")
        d = np.diff(nodes)
        if np.any(d <= 0):
            raise BadGridSpec("nodes must be strictly increasing")
        if np.allclose(d, d.mean(), rtol=1e-9, atol=0.0):
            return make_grid(float(nodes[0]), float(nodes[-1]), nodes.size)
        w = np.zeros_like(nodes)
        w[:-1] += d / 2
        w[1:] += d / 2
        return cls(float(nodes[0]), float(nodes[-1]), nodes.size, "trapezoid-nonuniform", nodes, w)


def make_grid(lo: float, hi: float, n: int, rule: str = "trapezoid") -> LineGrid:
    """Nodes and weights of the named rule on ``[lo, hi]``."""
    if not (np.isfinite(lo) and np.isfinite(hi)) or not lo < hi:
        raise BadGridSpec(f"need finite lo < hi, got [{lo}, {hi}]")
    if int(n) != n or n < 2:
        raise BadGridSpec(f"need an integer n >= 2, got {n}")
    n = int(n)
    if rule == "trapezoid":
        nodes = np.linspace(lo, hi, n)
        h = (hi - lo) / (n - 1)
        weights = np.full(n, h)
        weights[0] = weights[-1] = h / 2
    elif rule == "gauss-legendre":
        x, w = np.polynomial.legendre.leggauss(n)
        half = (hi - lo) / 2
        nodes = lo + half * (x + 1.0)
        weights = half * w
    else:
        raise BadGridSpec(f"unknown rule {rule!r}; expected one of {RULES}")
    return LineGrid(float(lo), float(hi), n, rule, nodes, weights)


def default_time_grid(nu: float = 2 * math.pi) -> LineGrid:
    """Default time axis: ``[-8, 8]`` with 1024 nodes at ``nu = 2*pi``.

    Smaller ``nu`` means wider Hermite functions, so the interval is widened by
    ``sqrt(2*pi/nu)`` while keeping the node spacing fixed.
    """
    s = max(1.0, math.sqrt(2 * math.pi / nu))
    half = DEFAULT_TIME_HALFWIDTH * s
    n = int(round((DEFAULT_TIME_N - 1) * s)) + 1
    return make_grid(-half, half, n)


def default_plane_grid(nu: float = 2 * math.pi) -> "PlaneGrid":
    half = max(DEFAULT_PLANE_HALFWIDTH, 8.0 / math.sqrt(nu))
    g = make_grid(-half, half, DEFAULT_PLANE_N)
    return PlaneGrid(g, g)


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Quaternion samples of a function on the nodes of ``grid``."""

    grid: LineGrid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = as_qarray(self.values)
        if vals.shape != (self.grid.n, 4):
            raise GridMismatch(f"expected {self.grid.n} samples, got array of shape {vals.shape}")
        vals = np.array(vals, dtype=float)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, grid: LineGrid, fn) -> "SampledSignal":
        return cls(grid, as_qarray(fn(grid.nodes)))

    @classmethod
    def zeros(cls, grid: LineGrid) -> "SampledSignal":
        return cls(grid, np.zeros((grid.n, 4)))

    @property
    def t(self) -> np.ndarray:
        return self.grid.nodes

    def _check(self, other: "SampledSignal") -> None:
        if not self.grid.same_as(other.grid):
            raise GridMismatch("signals live on different grids")

    def __add__(self, other: "SampledSignal") -> "SampledSignal":
        self._check(other)
        return SampledSignal(self.grid, self.values + other.values)

    def __sub__(self, other: "SampledSignal") -> "SampledSignal":
        self._check(other)
        return SampledSignal(self.grid, self.values - other.values)

    def scale(self, s: float) -> "SampledSignal":
        return SampledSignal(self.grid, self.values * float(s))

    def rmul(self, lam) -> "SampledSignal":
        """Right multiplication ``f(t) * lam`` by a quaternion constant."""
        lam = Quaternion.coerce(lam).as_array()
        return SampledSignal(self.grid, qmul(self.values, lam))

    def lmul(self, lam) -> "SampledSignal":
        lam = Quaternion.coerce(lam).as_array()
        return SampledSignal(self.grid, qmul(lam, self.values))

    def times_real(self, r) -> "SampledSignal":
        """Pointwise product with a real function given by its samples."""
        return SampledSignal(self.grid, self.values * np.asarray(r, dtype=float)[:, None])

    def norm(self) -> float:
        return math.sqrt(max(inner_l2(self, self).w, 0.0))

    def max_abs_diff(self, other: "SampledSignal") -> float:
        self._check(other)
        return float(np.max(np.abs(self.values - other.values)))


@dataclass(frozen=True, eq=False)
class PlaneGrid:
    """Cartesian product grid; ``xgrid`` runs along the real axis, ``ygrid`` along ``I``."""

    xgrid: LineGrid
    ygrid: LineGrid

    @property
    def shape(self):
        return (self.xgrid.n, self.ygrid.n)

    @property
    def weights(self) -> np.ndarray:
        return np.outer(self.xgrid.weights, self.ygrid.weights)

    def mesh(self):
        return np.meshgrid(self.xgrid.nodes, self.ygrid.nodes, indexing="ij")

    def points(self, unit: ImaginaryUnit) -> np.ndarray:
        """Quaternion nodes ``x + I*y`` as an ``(nx, ny, 4)`` array."""
        X, Y = self.mesh()
        out = np.zeros(self.shape + (4,))
        out[..., 0] = X
        out[..., 1:] = Y[..., None] * unit.vector
        return out

    def same_as(self, other: "PlaneGrid") -> bool:
        return self.xgrid.same_as(other.xgrid) and self.ygrid.same_as(other.ygrid)


def integrate(grid: LineGrid, samples) -> np.ndarray:
    """Weighted sum over the first axis of ``samples``."""
    return np.tensordot(grid.weights, np.asarray(samples, dtype=float), axes=(0, 0))


def inner_l2(f: SampledSignal, g: SampledSignal) -> Quaternion:
    """``<f, g> = sum_t w_t conj(g(t)) f(t)``: right-linear in ``f``, conjugated in ``g``."""
    if not f.grid.same_as(g.grid):
        raise GridMismatch("inner product of signals on different grids")
    prod = qmul(qconj(g.values), f.values)
    return Quaternion.from_array(integrate(f.grid, prod))


def inner_fock(F, G, nu: float, grid: PlaneGrid) -> Quaternion:
    """Slice-plane Fock inner product ``sum w conj(G) F exp(-nu |q|^2)``.

    ``F`` and ``G`` are ``(nx, ny, 4)`` samples on ``grid.points(I)`` for one
    common unit ``I``.
    """
    F = np.asarray(F, dtype=float)
    G = np.asarray(G, dtype=float)
    if F.shape != grid.shape + (4,) or G.shape != F.shape:
        raise GridMismatch(f"samples of shape {F.shape}, {G.shape} do not match grid {grid.shape}")
    X, Y = grid.mesh()
    w = grid.weights * np.exp(-nu * (X * X + Y * Y))
    prod = qmul(qconj(G), F)
    return Quaternion.from_array(np.tensordot(w, prod, axes=([0, 1], [0, 1])))
