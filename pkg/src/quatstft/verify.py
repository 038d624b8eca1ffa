"""Executable identity checks and the JSON verification report.

Every check computes a residual by quadrature and compares it with a fixed
tolerance.  All inputs come from seeded fixtures, so a report is a pure
function of the code and the tolerance overrides.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from .bargmann import (
    bargmann_coefficients,
    bargmann_transform,
    fock_gram_plane,
    momentum_equivalence_residual,
    position_equivalence_residual,
)
from .basis import fock_monomial, hermite_norm, hermite_table, kernel_series, bargmann_kernel
from .fixtures import random_combos, standard_fixtures
from .quadrature import SampledSignal, default_plane_grid, default_time_grid, inner_l2
from .quaternion import ImaginaryUnit, Quaternion, UNIT_I, qconj, qmul, qpow, slice_lmul
from .qft import QftPlan, convolve, modulate, qft_eigenvalues, qft_forward, qft_inverse, translate
from .qstft import (
    box_cells,
    concentration_check,
    fourier_intertwine_residual,
    gabor_kernel,
    lieb_functional,
    qstft_adjoint,
    qstft_grid,
    qstft_points,
    qstft_reconstruct,
    reproduce,
    window_signal,
)

SUITES = ("all", "qft", "bargmann", "qstft")
TWO_PI = 2.0 * math.pi
EIGEN_KMAX = 6


class UnknownCheck(KeyError):
    pass


@dataclass(frozen=True)
class Check:
    name: str
    paper_ref: str
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.residual)) and self.residual <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "paper_ref": self.paper_ref,
            "residual": float(self.residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
        }


# name -> (reference, default tolerance)
CHECKS: Dict[str, tuple] = {
    # qft
    "qft_window_fixed_point": ("Fourier transform of the Gaussian window is the window", 1e-9),
    "qft_plancherel_norm": ("Plancherel theorem, norm form (relative)", 1e-8),
    "qft_plancherel_inner": ("Plancherel theorem, inner-product form", 1e-7),
    "qft_roundtrip": ("inverse transform recovers the signal", 1e-7),
    "qft_translation_f1": ("F(tau_x f) = M_-x F(f)", 1e-7),
    "qft_modulation_f2": ("F(M_w f) = tau_w F(f)", 1e-7),
    "qft_combined_f3": ("F(M_w tau_x f) = tau_w M_-x F(f)", 1e-7),
    "qft_commutation": ("tau_x M_w f = exp(-2 pi I w x) M_w tau_x f", 1e-7),
    "qft_symplectic_factorization": ("F(f1 + f2 J) = F(f1) + F(f2) J", 1e-12),
    "qft_convolution_theorem": ("F(g * f) = F(g) F(f) for a real window g", 1e-6),
    "qft_eigen_residual": ("Hermite functions are eigenfunctions of F", 1e-7),
    "qft_eigen_unimodular": ("eigenvalues have modulus one", 1e-6),
    "qft_eigen_geometric": ("eigenvalues form a geometric progression lambda_1**k", 1e-6),
    # bargmann
    "hermite_orthonormality_nu1": ("weighted Hermite functions are orthonormal, nu = 1, k <= 20", 1e-9),
    "hermite_orthonormality_nu2pi": ("weighted Hermite functions are orthonormal, nu = 2 pi, k <= 20", 1e-9),
    "kernel_generating_function": ("kernel equals sum f_k(q) psi_k(t), K = 60, nu = 1, two slices", 1e-8),
    "bargmann_hermite_to_monomial": ("B psi_k = f_k for k <= 10", 1e-8),
    "bargmann_unitarity_plane": ("<Bf, Bg>_Fock = <f, g> with 2D plane quadrature", 1e-7),
    "bargmann_unitarity_coefficients": ("<Bf, Bg>_Fock = <f, g> via Hermite coefficients", 1e-7),
    "bargmann_fock_routes_agree": ("plane and coefficient Fock inner products agree", 1e-7),
    "bargmann_position_identity": ("(d_S + q) B f = sqrt 2 B(x f) for psi_0, psi_1, psi_5", 1e-6),
    "bargmann_momentum_identity": ("q B f = B((X - D) f) / sqrt 2 for psi_0, psi_1, psi_5", 1e-6),
    # qstft
    "qstft_window_value": ("V phi(0, 0) = sqrt 2", 1e-9),
    "qstft_route_equivalence": ("Bargmann route equals windowed route, 5x5 lattice, 10 signals", 1e-7),
    "qstft_hermite_prefactor": ("V of h_k/||h_k||^2 has prefactor 2**(3/4)/(2**k k!) (relative)", 1e-7),
    "qstft_isometry": ("||V f||^2 = 2 ||f||^2 (relative)", 1e-5),
    "qstft_moyal": ("<V f, V g> = 2 <f, g> (relative)", 1e-5),
    "qstft_reconstruction": ("inversion formula recovers f", 1e-5),
    "qstft_adjoint_double": ("adjoint of V applied to V f equals 2 f", 1e-5),
    "qstft_adjoint_pairing": ("<A F, h> = <F, V h> (relative)", 1e-5),
    "qstft_projection": ("V applied to the reconstruction returns V f", 1e-4),
    "qstft_kernel_diagonal": ("reproducing kernel diagonal equals one", 1e-9),
    "qstft_kernel_symmetry": ("K(a; b) = conj K(b; a)", 1e-10),
    "qstft_reproducing_kernel": ("V f(x', w') = iint K V f at 9 probe points", 1e-4),
    "qstft_lieb_p2": ("Lieb inequality, p = 2", 1e-6),
    "qstft_lieb_p3": ("Lieb inequality, p = 3", 1e-6),
    "qstft_lieb_p4": ("Lieb inequality, p = 4", 1e-6),
    "qstft_lieb_p6": ("Lieb inequality, p = 6", 1e-6),
    "qstft_lieb_p2_isometry": ("Lieb functional at p = 2 equals 2 ||f||^2 (relative)", 1e-6),
    "qstft_weak_uncertainty": ("|U| >= (1 - eps)/2 and |U| >= c_p (1 - eps)**(p/(p-2))", 0.0),
    "qstft_intertwining": ("V f(x, w) = C exp(-2 pi I w x) V F(f)(w, -x), empirical C", 1e-7),
}

SUITE_OF = {name: ("qft" if name.startswith("qft") else "qstft" if name.startswith("qstft") else "bargmann") for name in CHECKS}


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def _maxabs(a) -> float:
    a = np.asarray(a, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


# ---------------------------------------------------------------------------
# suites


def _suite_qft():
    grid = default_time_grid()
    plan = QftPlan(UNIT_I, grid, grid)
    f, g = random_combos(2, 4, seed=101)
    out = {}
    constants = {}

    phi = window_signal(grid)
    out["qft_window_fixed_point"] = phi.max_abs_diff(qft_forward(phi, plan))

    Ff, Fg = qft_forward(f, plan), qft_forward(g, plan)
    out["qft_plancherel_norm"] = _rel(Ff.norm(), f.norm())
    out["qft_plancherel_inner"] = _maxabs(inner_l2(Ff, Fg).as_array() - inner_l2(f, g).as_array())
    out["qft_roundtrip"] = qft_inverse(Ff, plan).max_abs_diff(f)

    r = []
    for x, w in ((0.4, 0.0), (-0.7, 0.3), (1.1, -0.6)):
        r.append(qft_forward(translate(f, x), plan).max_abs_diff(modulate(Ff, -x, UNIT_I)))
    out["qft_translation_f1"] = max(r)
    r = []
    for w in (0.35, -0.8, 1.2):
        r.append(qft_forward(modulate(f, w, UNIT_I), plan).max_abs_diff(translate(Ff, w)))
    out["qft_modulation_f2"] = max(r)
    r3, rc = [], []
    for x, w in ((0.4, 0.35), (-0.7, -0.8), (1.1, 0.6)):
        lhs = qft_forward(modulate(translate(f, x), w, UNIT_I), plan)
        r3.append(lhs.max_abs_diff(translate(modulate(Ff, -x, UNIT_I), w)))
        a = translate(modulate(f, w, UNIT_I), x)
        b = modulate(translate(f, x), w, UNIT_I)
        ph = -TWO_PI * w * x
        b = SampledSignal(grid, slice_lmul(math.cos(ph), math.sin(ph), UNIT_I.vector, b.values))
        rc.append(a.max_abs_diff(b))
    out["qft_combined_f3"] = max(r3)
    out["qft_commutation"] = max(rc)

    # f = f1 + f2 j with f1, f2 in C_i
    fv = f.values
    f1 = np.zeros_like(fv)
    f1[:, :2] = fv[:, :2]
    f2 = np.zeros_like(fv)
    f2[:, 0], f2[:, 1] = fv[:, 2], fv[:, 3]  # (c + d i) j = c j + d k
    jq = np.array([0.0, 0.0, 1.0, 0.0])
    F1 = qft_forward(SampledSignal(grid, f1), plan).values
    F2 = qft_forward(SampledSignal(grid, f2), plan).values
    out["qft_symplectic_factorization"] = _maxabs(Ff.values - (F1 + qmul(F2, jq)))

    gw = SampledSignal(grid, np.exp(-2.0 * math.pi * np.square(grid.nodes)))
    conv = qft_forward(convolve(gw, f), plan)
    prod = qmul(qft_forward(gw, plan).values, Ff.values)
    out["qft_convolution_theorem"] = _maxabs(conv.values - prod)

    pairs = qft_eigenvalues(EIGEN_KMAX, plan)
    lams = [p.value for p in pairs]
    out["qft_eigen_residual"] = max(p.residual for p in pairs)
    mods = [abs(l) for l in lams]
    out["qft_eigen_unimodular"] = max(abs(m - 1.0) for m in mods)
    l1 = lams[1].as_array()
    geo = [_maxabs(lams[k].as_array() - qpow(l1, k)) for k in range(len(lams))]
    out["qft_eigen_geometric"] = max(geo)
    mean_mod = float(np.mean(mods))
    finding = "confirmed" if abs(mean_mod - 2.0 ** -0.5) < 1e-6 else "refuted"
    constants["eigenvalue_lambda"] = [[float(c) for c in l.as_array()] for l in lams]
    constants["eigenvalue_modulus_mean"] = mean_mod
    constants["eigenvalue_factor_2^(-1/2)"] = finding
    return out, constants


def _suite_bargmann():
    out = {}
    for label, nu in (("nu1", 1.0), ("nu2pi", TWO_PI)):
        grid = default_time_grid(nu)
        psi = hermite_table(20, nu, grid.nodes)
        gram = (psi * grid.weights) @ psi.T
        out[f"hermite_orthonormality_{label}"] = _maxabs(gram - np.eye(21))

    r = []
    ts = np.linspace(-2.0, 2.0, 9)
    for unit in (UNIT_I, ImaginaryUnit.from_vector([1.0, 1.0, 1.0])):
        for rad in np.linspace(0.0, 2.0, 5):
            for ang in np.linspace(0.0, 2 * math.pi, 7)[:-1]:
                q = np.array([rad * math.cos(ang), *(rad * math.sin(ang) * unit.vector)])
                exact = np.stack([bargmann_kernel(q, t, 1.0) for t in ts])
                r.append(_maxabs(exact - kernel_series(q, ts, 1.0, 60)))
    out["kernel_generating_function"] = max(r)

    nu = TWO_PI
    grid = default_time_grid(nu)
    psi = hermite_table(10, nu, grid.nodes)
    pts = np.array([[0.3, 0.2, 0.0, 0.0], [-0.5, 0.0, 0.4, 0.1], [0.1, -0.6, 0.2, 0.3], [0.7, 0.1, -0.2, 0.0]])
    r = []
    for k in range(11):
        Bk = bargmann_transform(SampledSignal(grid, psi[k]), nu, pts)
        r.append(_maxabs(Bk - fock_monomial(k, nu, pts)))
    out["bargmann_hermite_to_monomial"] = max(r)

    fs = random_combos(20, 10, nu, seed=202)
    G = fock_gram_plane(fs, nu, default_plane_grid(nu), ImaginaryUnit.from_vector([1.0, 1.0, 1.0]))
    cs = [bargmann_coefficients(f, nu) for f in fs]
    rp, rc, ra = [], [], []
    for a in range(len(fs)):
        b = (a + 1) % len(fs)
        l2 = inner_l2(fs[a], fs[b]).as_array()
        co = cs[a].fock_inner(cs[b]).as_array()
        rp.append(_maxabs(G[a, b] - l2))
        rc.append(_maxabs(co - l2))
        ra.append(_maxabs(G[a, b] - co))
    out["bargmann_unitarity_plane"] = max(rp)
    out["bargmann_unitarity_coefficients"] = max(rc)
    out["bargmann_fock_routes_agree"] = max(ra)

    g1 = default_time_grid(1.0)
    psi1 = hermite_table(5, 1.0, g1.nodes)
    rp, rm = [], []
    for k in (0, 1, 5):
        f = SampledSignal(g1, psi1[k])
        rp.append(position_equivalence_residual(f, 1.0))
        rm.append(momentum_equivalence_residual(f, 1.0))
    out["bargmann_position_identity"] = max(rp)
    out["bargmann_momentum_identity"] = max(rm)
    return out, {}


def _probe_lattice(n: int = 5, half: float = 2.0):
    v = np.linspace(-half, half, n)
    X, W = np.meshgrid(v, v, indexing="ij")
    return X.ravel(), W.ravel()


def _suite_qstft():
    out = {}
    constants = {}
    grid = default_time_grid()
    phi = window_signal(grid)
    out["qstft_window_value"] = _maxabs(qstft_points(phi, 0.0, 0.0)[0] - np.array([math.sqrt(2.0), 0, 0, 0]))

    xs, ws = _probe_lattice()
    unit = ImaginaryUnit.from_vector([1.0, -1.0, 2.0])
    r = []
    for f in random_combos(10, 6, seed=303):
        r.append(_maxabs(qstft_points(f, xs, ws, unit, "windowed") - qstft_points(f, xs, ws, unit, "bargmann")))
    out["qstft_route_equivalence"] = max(r)

    psi = hermite_table(4, TWO_PI, grid.nodes)
    r = []
    px, pw = _probe_lattice(3, 1.0)
    q = np.zeros((len(px), 4))
    q[:, 0], q[:, 1] = px, pw
    for k in range(5):
        f = SampledSignal(grid, psi[k] / hermite_norm(k, TWO_PI))
        V = qstft_points(f, px, pw, UNIT_I)
        ph = math.pi * px * pw
        pred = qpow(qconj(q), k) * (2.0 ** 0.75 / (2.0 ** k * math.factorial(k)))
        pred = slice_lmul(np.cos(ph), -np.sin(ph), UNIT_I.vector, pred)
        pred *= np.exp(-0.5 * math.pi * (px * px + pw * pw))[:, None]
        r.append(_maxabs(V - pred) / _maxabs(pred))
    out["qstft_hermite_prefactor"] = max(r)

    fixtures = standard_fixtures(grid)
    grids = [qstft_grid(f) for f in fixtures]
    out["qstft_isometry"] = max(_rel(V.energy(), 2.0 * f.norm() ** 2) for f, V in zip(fixtures, grids))
    r = []
    for a in range(len(fixtures)):
        b = (a + 2) % len(fixtures)
        lhs = grids[a].inner(grids[b]).as_array()
        rhs = 2.0 * inner_l2(fixtures[a], fixtures[b]).as_array()
        r.append(_maxabs(lhs - rhs) / (fixtures[a].norm() * fixtures[b].norm()))
    out["qstft_moyal"] = max(r)

    rr, ra, rpair, rproj = [], [], [], []
    for a, (f, V) in enumerate(zip(fixtures, grids)):
        rec = qstft_reconstruct(V, grid)
        rr.append(rec.max_abs_diff(f))
        ra.append(qstft_adjoint(V, grid).max_abs_diff(f.scale(2.0)))
        h = fixtures[(a + 1) % len(fixtures)]
        Vh = grids[(a + 1) % len(fixtures)]
        lhs = inner_l2(qstft_adjoint(V, grid), h).as_array()
        rhs = V.inner(Vh).as_array()
        rpair.append(_maxabs(lhs - rhs) / (V.norm() * Vh.norm()))
        rproj.append(_maxabs(qstft_grid(rec).values - V.values))
    out["qstft_reconstruction"] = max(rr)
    out["qstft_adjoint_double"] = max(ra)
    out["qstft_adjoint_pairing"] = max(rpair)
    out["qstft_projection"] = max(rproj)

    pts = [(0.3, -0.4), (-1.2, 0.8), (0.0, 0.0), (2.0, 1.5), (-0.6, -1.7), (1.1, 0.2), (-2.1, 0.5), (0.5, 2.2), (1.7, -1.3)]
    out["qstft_kernel_diagonal"] = max(abs(gabor_kernel(x, w, x, w, UNIT_I, grid) - Quaternion(1.0)) for x, w in pts)
    r = []
    for (x, w), (xp, wp) in zip(pts, pts[1:] + pts[:1]):
        k1 = gabor_kernel(x, w, xp, wp, unit, grid)
        k2 = gabor_kernel(xp, wp, x, w, unit, grid)
        r.append(abs(k1 - k2.conj()))
    out["qstft_kernel_symmetry"] = max(r)
    r = []
    for f, V in zip(fixtures[:3], grids[:3]):
        direct = qstft_points(f, [p[0] for p in pts], [p[1] for p in pts], UNIT_I)
        for (x, w), d in zip(pts, direct):
            r.append(_maxabs(reproduce(V, x, w, grid).as_array() - d))
    out["qstft_reproducing_kernel"] = max(r)

    for p in (2, 3, 4, 6):
        excess = 0.0
        for f, V in zip(fixtures, grids):
            lhs, bound = lieb_functional(f, p, V)
            excess = max(excess, lhs - bound)
        out[f"qstft_lieb_p{p}"] = excess
    out["qstft_lieb_p2_isometry"] = max(
        _rel(lieb_functional(f, 2, V)[0], 2.0 * f.norm() ** 2) for f, V in zip(fixtures, grids)
    )

    V = grids[0]
    U = box_cells(V.xgrid, V.wgrid, -2.0, 2.0, -2.0, 2.0)
    rep = concentration_check(fixtures[0], U, V=V)
    gap = 0.0 if not rep.hypothesis_holds else max(0.0, rep.weak_bound - rep.measure, rep.sharp_bound - rep.measure)
    out["qstft_weak_uncertainty"] = gap

    res = [fourier_intertwine_residual(f) for f in fixtures[:3]]
    r_sqrt2 = max(x.residual_sqrt2 for x in res)
    r_one = max(x.residual_one for x in res)
    C = 1.0 if r_one <= r_sqrt2 else math.sqrt(2.0)
    out["qstft_intertwining"] = min(r_one, r_sqrt2)
    constants["ps1_C"] = C
    constants["ps1_C_fitted"] = float(np.mean([x.fitted_constant for x in res]))
    constants["ps1_residual_C_sqrt2"] = r_sqrt2
    constants["ps1_residual_C_1"] = r_one
    constants["ps1_sqrt2_finding"] = "confirmed" if C != 1.0 else "refuted"
    return out, constants


_SUITE_FUNCS = {"qft": _suite_qft, "bargmann": _suite_bargmann, "qstft": _suite_qstft}


def parse_tolerances(items) -> Dict[str, float]:
    """Turn ``name=value`` strings into a tolerance map; names must be known checks."""
    tol = {}
    for item in items or ():
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep:
            raise ValueError(f"tolerance override {item!r} is not name=value")
        if name not in CHECKS:
            raise UnknownCheck(name)
        v = float(value)
        if not v >= 0 or not math.isfinite(v):
            raise ValueError(f"tolerance for {name} must be finite and >= 0")
        tol[name] = v
    return tol


def run_suite(suite: str = "all", tolerances: Optional[Dict[str, float]] = None) -> dict:
    """Run the named suite and return the report dictionary."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {SUITES}")
    tolerances = tolerances or {}
    names = ("qft", "bargmann", "qstft") if suite == "all" else (suite,)
    checks: List[Check] = []
    constants: dict = {}
    for s in names:
        residuals, consts = _SUITE_FUNCS[s]()
        constants.update(consts)
        for name, res in residuals.items():
            ref, tol = CHECKS[name]
            checks.append(Check(name, ref, float(res), float(tolerances.get(name, tol))))
    return {
        "suite": suite,
        "checks": [c.as_dict() for c in checks],
        "empirical_constants": constants,
        "pass": all(c.passed for c in checks),
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def residual_table(report: dict) -> str:
    """Plain-text table of the checks for terminal output."""
    rows = [("check", "residual", "tolerance", "status")]
    for c in report["checks"]:
        rows.append((c["name"], f"{c['residual']:.3e}", f"{c['tolerance']:.1e}", "ok" if c["pass"] else "FAIL"))
    widths = [max(len(r[i]) for r in rows) for i in range(4)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in rows]
    return "\n".join(lines) + "\n"
