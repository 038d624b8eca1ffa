"""Deterministic quaternion-valued Hermite combinations used by the checks and tests."""
from __future__ import annotations

import math
from typing import List

import numpy as np

from .basis import hermite_table
from .quadrature import LineGrid, SampledSignal, default_time_grid

NU_WINDOW = 2.0 * math.pi


def hermite_combo(coeffs, nu: float = NU_WINDOW, grid: LineGrid = None) -> SampledSignal:
    """``sum_k psi_k^nu(t) c_k`` for quaternion coefficients ``coeffs`` of shape ``(K+1, 4)``."""
    coeffs = np.asarray(coeffs, dtype=float).reshape(-1, 4)
    grid = grid or default_time_grid(nu)
    psi = hermite_table(len(coeffs) - 1, nu, grid.nodes)
    return SampledSignal(grid, psi.T @ coeffs)


def random_coefficients(seed: int, kmax: int) -> np.ndarray:
    """Gaussian quaternion coefficients damped as ``2**(-k/2)``."""
    rng = np.random.default_rng(seed)
    c = rng.standard_normal((kmax + 1, 4))
    return c * (2.0 ** (-0.5 * np.arange(kmax + 1)))[:, None]


def random_combos(count: int, kmax: int, nu: float = NU_WINDOW, seed: int = 20240601, grid: LineGrid = None) -> List[SampledSignal]:
    """``count`` reproducible combinations with every coefficient in all of ``1, i, j, k``."""
    grid = grid or default_time_grid(nu)
    return [hermite_combo(random_coefficients(seed + s, kmax), nu, grid) for s in range(count)]


def standard_fixtures(grid: LineGrid = None) -> List[SampledSignal]:
    """The fixed signal set: the window, ``psi_3``, ``psi_1 + psi_2 j`` and three random combos."""
    grid = grid or default_time_grid()
    psi = hermite_table(5, NU_WINDOW, grid.nodes)
    out = [SampledSignal(grid, psi[0]), SampledSignal(grid, psi[3])]
    mixed = np.zeros((grid.n, 4))
    mixed[:, 0] = psi[1]
    mixed[:, 2] = psi[2]
    out.append(SampledSignal(grid, mixed))
    out.extend(random_combos(3, 4, NU_WINDOW, grid=grid))
    return out
