"""Acceptance criteria, one printed PASS/FAIL line each."""
import math

import numpy as np
import pytest

from quatstft.bargmann import (
    bargmann_coefficients,
    fock_gram_plane,
    momentum_equivalence_residual,
    position_equivalence_residual,
)
from quatstft.basis import bargmann_kernel, hermite_table, kernel_series
from quatstft.cli import main
from quatstft.fixtures import random_combos, standard_fixtures
from quatstft.quadrature import SampledSignal, default_plane_grid, default_time_grid, inner_l2
from quatstft.quaternion import UNIT_I, ImaginaryUnit, qpow, slice_lmul
from quatstft.qft import QftPlan, modulate, qft_forward, qft_inverse, translate
from quatstft.qstft import (
    gabor_kernel,
    lieb_functional,
    qstft_adjoint,
    qstft_grid,
    qstft_points,
    qstft_reconstruct,
    qstft_windowed,
    reproduce,
)

NU = 2 * math.pi
UNIT = ImaginaryUnit.from_vector([1.0, 2.0, 2.0])


@pytest.fixture
def report_line(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail

    return emit


@pytest.fixture(scope="module")
def fixtures():
    tg = default_time_grid()
    fs = standard_fixtures(tg)
    return fs, [qstft_grid(f, unit=UNIT) for f in fs]


@pytest.fixture(scope="module")
def reports(tmp_path_factory):
    d = tmp_path_factory.mktemp("verify")
    paths = [d / "a.json", d / "b.json"]
    codes = [main(["verify", "--suite", "all", "--report", str(p)]) for p in paths]
    return codes, [p.read_bytes() for p in paths]


def test_01_hermite_orthonormality(report_line):
    worst = {}
    for nu in (1.0, NU):
        g = default_time_grid(nu)
        psi = hermite_table(20, nu, g.nodes)
        worst[nu] = float(np.max(np.abs((psi * g.weights) @ psi.T - np.eye(21))))
    ok = max(worst.values()) < 1e-9
    report_line(1, ok, f"max |<psi_j,psi_k> - delta| nu=1: {worst[1.0]:.2e}, nu=2pi: {worst[NU]:.2e} (tol 1e-9)")


def test_02_kernel_generating_function(report_line):
    ts = np.linspace(-2, 2, 21)
    worst = 0.0
    for unit in (UNIT_I, ImaginaryUnit.from_vector([0.0, 1.0, -1.0])):
        for r in np.linspace(0, 2, 9):
            for a in np.linspace(0, 2 * math.pi, 13)[:-1]:
                q = np.array([r * math.cos(a), *(r * math.sin(a) * unit.vector)])
                err = np.max(np.abs(bargmann_kernel(q[None, :], ts, 1.0) - kernel_series(q, ts, 1.0, 60)))
                worst = max(worst, float(err))
    report_line(2, worst < 1e-8, f"sup |A - sum_{{k<=60}} f_k psi_k| on |q|,|t|<=2, two slices: {worst:.2e} (tol 1e-8)")


def test_03_bargmann_unitarity(report_line):
    fs = random_combos(20, 10, NU, seed=303)
    G = fock_gram_plane(fs, NU, default_plane_grid(NU), UNIT)
    cs = [bargmann_coefficients(f, NU) for f in fs]
    ep = ec = em = 0.0
    for a in range(20):
        for b in range(20):
            l2 = inner_l2(fs[a], fs[b]).as_array()
            co = cs[a].fock_inner(cs[b]).as_array()
            ep = max(ep, float(np.max(np.abs(G[a, b] - l2))))
            ec = max(ec, float(np.max(np.abs(co - l2))))
            em = max(em, float(np.max(np.abs(G[a, b] - co))))
    ok = max(ep, ec, em) < 1e-7
    report_line(3, ok, f"plane {ep:.2e}, coefficients {ec:.2e}, plane vs coefficients {em:.2e} (tol 1e-7)")


def test_04_position_momentum(report_line):
    g = default_time_grid(1.0)
    psi = hermite_table(5, 1.0, g.nodes)
    rp = rm = 0.0
    for k in (0, 1, 5):
        f = SampledSignal(g, psi[k])
        rp = max(rp, position_equivalence_residual(f, 1.0))
        rm = max(rm, momentum_equivalence_residual(f, 1.0))
    report_line(4, max(rp, rm) < 1e-6, f"position {rp:.2e}, momentum {rm:.2e} (tol 1e-6)")


def test_05_qft(report_line):
    g = default_time_grid()
    plan = QftPlan(UNIT, g, g)
    fs = random_combos(3, 5, seed=55)
    ratio = rt = f13 = 0.0
    for f in fs:
        Ff = qft_forward(f, plan)
        ratio = max(ratio, abs(Ff.norm() / f.norm() - 1))
        rt = max(rt, qft_inverse(Ff, plan).max_abs_diff(f))
        for x, w in ((0.6, -0.45), (-1.3, 0.8)):
            f13 = max(f13, qft_forward(translate(f, x), plan).max_abs_diff(modulate(Ff, -x, UNIT)))
            f13 = max(f13, qft_forward(modulate(f, w, UNIT), plan).max_abs_diff(translate(Ff, w)))
            lhs = qft_forward(modulate(translate(f, x), w, UNIT), plan)
            f13 = max(f13, lhs.max_abs_diff(translate(modulate(Ff, -x, UNIT), w)))
            a = translate(modulate(f, w, UNIT), x).values
            b = modulate(translate(f, x), w, UNIT).values
            ph = -2 * math.pi * w * x
            f13 = max(f13, float(np.max(np.abs(a - slice_lmul(math.cos(ph), math.sin(ph), UNIT.vector, b)))))
    ok = ratio <= 1e-8 and rt < 1e-7 and f13 < 1e-7
    report_line(5, ok, f"| ||Ff||/||f|| - 1 | {ratio:.2e} (1e-8), round trip {rt:.2e}, F1-F3/commutation {f13:.2e} (1e-7)")


def test_06_route_equivalence(report_line):
    v = np.linspace(-3, 3, 5)
    X, W = np.meshgrid(v, v, indexing="ij")
    worst = 0.0
    for f in random_combos(10, 6, seed=66):
        a = qstft_points(f, X.ravel(), W.ravel(), UNIT, "windowed")
        b = qstft_points(f, X.ravel(), W.ravel(), UNIT, "bargmann")
        worst = max(worst, float(np.max(np.abs(a - b))))
    report_line(6, worst < 1e-7, f"sup |bargmann route - windowed route|, 5x5 lattice, 10 signals: {worst:.2e} (tol 1e-7)")


def test_07_isometry_moyal(report_line, fixtures):
    fs, Vs = fixtures
    iso = max(abs(V.energy() - 2 * f.norm() ** 2) / (2 * f.norm() ** 2) for f, V in zip(fs, Vs))
    moyal = 0.0
    for a in range(len(fs)):
        for b in range(len(fs)):
            lhs = Vs[a].inner(Vs[b]).as_array()
            rhs = 2 * inner_l2(fs[a], fs[b]).as_array()
            moyal = max(moyal, float(np.max(np.abs(lhs - rhs))) / (2 * fs[a].norm() * fs[b].norm()))
    ok = iso < 1e-5 and moyal < 1e-5
    report_line(7, ok, f"isometry rel {iso:.2e}, Moyal rel {moyal:.2e} on 129x129 lattice (tol 1e-5)")


def test_08_reconstruction_adjoint(report_line, fixtures):
    fs, Vs = fixtures
    tg = fs[0].grid
    rec = max(qstft_reconstruct(V, tg).max_abs_diff(f) for f, V in zip(fs, Vs))
    adj = max(qstft_adjoint(V, tg).max_abs_diff(f.scale(2.0)) for f, V in zip(fs, Vs))
    ok = rec < 1e-5 and adj < 1e-5
    report_line(8, ok, f"||reconstruct(Vf) - f||_inf {rec:.2e}, ||A Vf - 2f||_inf {adj:.2e} (tol 1e-5)")


def test_09_reproducing_kernel(report_line, fixtures):
    fs, Vs = fixtures
    probes = [(-1.5, 0.5), (0.0, 0.0), (0.8, -1.2), (2.0, 2.0), (-0.4, -2.4), (1.6, 0.3), (-2.3, 1.1), (0.25, 1.75), (1.1, -0.6)]
    rep = 0.0
    for f, V in zip(fs, Vs):
        for x, w in probes:
            rep = max(rep, abs(reproduce(V, x, w, f.grid) - qstft_windowed(f, x, w, UNIT)))
    diag = max(abs(abs(gabor_kernel(x, w, x, w, UNIT)) - 1) for x, w in probes)
    ok = rep < 1e-4 and diag < 1e-9
    report_line(9, ok, f"reproduction {rep:.2e} (1e-4), |K diagonal - 1| {diag:.2e} (1e-9)")


def test_10_lieb(report_line, fixtures):
    fs, Vs = fixtures
    worst_margin = math.inf
    p2 = 0.0
    for p in (2, 3, 4, 6):
        for f, V in zip(fs, Vs):
            lhs, bound = lieb_functional(f, p, V)
            worst_margin = min(worst_margin, bound + 1e-6 - lhs)
            if p == 2:
                p2 = max(p2, abs(lhs - 2 * f.norm() ** 2) / (2 * f.norm() ** 2))
    ok = worst_margin >= 0 and p2 < 1e-6
    report_line(10, ok, f"min (bound - lhs) over p in 2,3,4,6: {worst_margin:.3e}; p=2 vs 2||f||^2 rel {p2:.2e} (1e-6)")


def test_11_constant_adjudication(report_line, reports):
    import json

    data = json.loads(reports[1][0])
    const = data["empirical_constants"]
    lam = np.array(const["eigenvalue_lambda"])
    mods = np.linalg.norm(lam, axis=1)
    geo = max(float(np.max(np.abs(lam[k] - qpow(lam[1], k)))) for k in range(len(lam)))
    stable = abs(const["ps1_C_fitted"] - const["ps1_C"]) < 1e-6
    ok = (
        "ps1_C" in const
        and len(lam) >= 7
        and float(np.max(np.abs(mods - 1))) < 1e-6
        and geo < 1e-6
        and const["eigenvalue_factor_2^(-1/2)"] in ("confirmed", "refuted")
        and stable
    )
    report_line(
        11,
        ok,
        f"ps1_C = {const['ps1_C']} (fitted {const['ps1_C_fitted']:.12f}, sqrt2 {const['ps1_sqrt2_finding']}); "
        f"max ||lambda_k| - 1| {np.max(np.abs(mods - 1)):.1e}, geometric {geo:.1e}; "
        f"2^(-1/2) factor {const['eigenvalue_factor_2^(-1/2)']}",
    )


def test_12_determinism(report_line, reports):
    codes, blobs = reports
    ok = blobs[0] == blobs[1] and codes == [0, 0]
    report_line(12, ok, f"two verify --suite all reports byte-identical: {blobs[0] == blobs[1]}, exit codes {codes}")
