"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line with its worst observed figure; the lines
are printed in the terminal summary (see conftest.py).
"""

import itertools
import math
import time

import numpy as np
import pytest

from topotunnel.cupcap import rank_one
from topotunnel.diagram import evaluate
from topotunnel.doublewell import WellParams, map_well
from topotunnel.dynamics import Propagator, closed_form_populations, tunneling_time, zeno_analytic, zeno_limit, zeno_run
from topotunnel.hamiltonian import ModelParams, build_h, spectrum
from topotunnel.numerics import max_abs
from topotunnel.tl_algebra import TLParams, verify_relations
from topotunnel.topo_basis import consistency_report, graphical_basis, spectral_basis, two_d_rep

import oracles

R2 = math.sqrt(2)
PHIS = [k * math.pi / 6 for k in range(12)]
EPSS = (1, -1)
TL_GRID = [TLParams(phi, eps) for phi in PHIS for eps in EPSS]
TYPES = ("d1", "d2", "o1", "o2")
J_GRID = (0.5, 1.0, 2.0)
DELTA_GRID = (0.0, 0.1, -0.1, 0.5, -0.5)
# points where every labelled level is distinct
MODEL_GRID = [
    ModelParams(J=j, delta=dl, phi=phi, eps=eps)
    for j, dl, phi, eps in itertools.product(J_GRID, (0.1, -0.1, 0.5, -0.5), PHIS[::3], EPSS)
]


def test_criterion_01_tl_relations(acceptance):
    start = time.perf_counter()
    worst = 0.0
    for p in TL_GRID:
        for m in range(2, 6):
            worst = max(worst, verify_relations(p, m).max_residual())
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-12 and elapsed < 5.0
    acceptance(1, ok, f"max residual {worst:.1e} (tol 1e-12), {elapsed:.2f}s (limit 5s)")
    assert ok


def test_criterion_02_generator_decomposition(acceptance):
    worst = 0.0
    for p in TL_GRID:
        ref = np.array([[oracles.generator_entry(r, c, p.phi, p.eps) for c in range(4)] for r in range(4)])
        worst = max(worst, max_abs(rank_one("d1", p) + rank_one("d2", p) - ref))
    ok = worst <= 1e-12
    acceptance(2, ok, f"max entry error {worst:.1e} (tol 1e-12)")
    assert ok


def test_criterion_03_loop_value(acceptance):
    same = cross = 0.0
    for p in TL_GRID:
        for a, b in itertools.product(TYPES, TYPES):
            val = evaluate(f"cap(1,2:{a}) ; cup(1,2:{b})", p).value
            if a == b:
                same = max(same, abs(val - R2))
            else:
                cross = max(cross, abs(val))
    ok = same <= 1e-12 and cross <= 1e-12
    acceptance(3, ok, f"|loop - sqrt2| {same:.1e}, |cross-type| {cross:.1e} (tol 1e-12)")
    assert ok


def test_criterion_04_two_d_representation(acceptance):
    dev = res = 0.0
    for p in TL_GRID:
        for family in ("d", "0"):
            rep = two_d_rep(*graphical_basis(p, family), p)
            dev = max(dev, rep.deviation())
            res = max(res, rep.max_residual)
    ok = dev <= 1e-12 and res <= 1e-12
    acceptance(4, ok, f"entry deviation {dev:.1e}, 2D relation residual {res:.1e} (tol 1e-12)")
    assert ok


def test_criterion_05_spectrum(acceptance):
    worst = 0.0
    zero_ok = degenerate_ok = True
    for j, dl, phi, eps in itertools.product(J_GRID, DELTA_GRID, PHIS[::2], EPSS):
        vals = np.linalg.eigvalsh(build_h(ModelParams(j, dl, phi, eps)))
        nonzero = np.sort(vals[np.abs(vals) > 1e-9])
        expected = np.sort([j * (1 + dl), j * (1 - dl), 4 * j * (1 + dl), 4 * j * (1 - dl)])
        zero_ok &= nonzero.size == 4 and int(np.sum(np.abs(vals) <= 1e-9)) == 12
        if nonzero.size == 4:
            worst = max(worst, float(np.max(np.abs(nonzero - expected))))
        if dl == 0.0:
            rows = spectrum(ModelParams(j, dl, phi, eps)).as_rows()
            mult = {round(v / j): k for v, k in rows}
            degenerate_ok &= mult == {0: 12, 1: 2, 4: 2}
    ok = worst <= 1e-10 and zero_ok and degenerate_ok
    acceptance(
        5, ok, f"max level error {worst:.1e} (tol 1e-10), kernel dim 12: {zero_ok}, Δ=0 double: {degenerate_ok}"
    )
    assert ok


def test_criterion_06_eigenstate_relations(acceptance):
    rel = gram = 0.0
    for mp in MODEL_GRID:
        b = spectral_basis(mp)
        h = build_h(mp)
        for plus, minus, scale in ((b.e1, b.e3, 1), (b.e2, b.e4, 4)):
            for sign in (1, -1):
                v = (plus + sign * minus) / R2
                rel = max(rel, max_abs(h @ v - scale * mp.J * (1 + sign * mp.delta) * v))
        gram = max(gram, max_abs(b.gram() - np.eye(4)))
    ok = rel <= 1e-10 and gram <= 1e-12
    acceptance(6, ok, f"eigenrelation residual {rel:.1e} (tol 1e-10), Gram error {gram:.1e} (tol 1e-12)")
    assert ok


def test_criterion_07_tunneling(acceptance):
    worst = transfer = 0.0
    for mp in MODEL_GRID:
        b = spectral_basis(mp)
        prop = Propagator(mp)
        tau = tunneling_time(mp)
        times = np.linspace(0.0, 3 * tau, 120)
        psi = prop.evolve_many(b.e1, times)
        p1 = np.abs(psi @ b.e1.conj()) ** 2
        p3 = np.abs(psi @ b.e3.conj()) ** 2
        c2, s2 = closed_form_populations(mp, times)
        worst = max(worst, float(np.max(np.abs(p1 - c2))), float(np.max(np.abs(p3 - s2))))
        at_tau = abs(np.vdot(b.e3, prop.evolve(b.e1, tau))) ** 2
        transfer = max(transfer, abs(at_tau - 1.0))
    ok = worst <= 1e-10 and transfer <= 1e-10
    acceptance(7, ok, f"closed-form error {worst:.1e} over 120 samples/point, |p_e3(τ)-1| {transfer:.1e} (tol 1e-10)")
    assert ok


def test_criterion_08_zeno(acceptance):
    mp = ModelParams(J=1.0, delta=0.1)
    worst = 0.0
    for n in (1, 2, 5, 10, 50, 100, 200):
        worst = max(worst, abs(zeno_run(mp, n).survival_exact - (math.cos(math.pi / (2 * n)) ** 2) ** n))
    gap = abs(zeno_analytic(10) - zeno_limit(10))
    s100 = zeno_run(mp, 100).survival_exact
    seq = [zeno_run(mp, n).survival_exact for n in range(2, 201)]
    monotone = all(b > a for a, b in zip(seq, seq[1:])) and seq[-1] < 1.0
    ok = worst <= 1e-10 and gap < 0.001 and s100 >= 0.9756 and monotone
    acceptance(
        8,
        ok,
        f"sim vs analytic {worst:.1e} (tol 1e-10), n=10 gap {gap:.6f} (<0.001), n=100 {s100:.6f} (>=0.9756), "
        f"monotone: {monotone}",
    )
    assert ok


def test_criterion_09_double_well(acceptance):
    wm = map_well(WellParams(m=1.0, L=2.0, a=0.5, V0=10.0, hbar=1.0))
    errs = (abs(wm.xi - 4.472136), abs(wm.J - 2.19325), abs(wm.delta - 0.006812))
    by_v0 = [map_well(WellParams(V0=v)).delta for v in np.geomspace(0.1, 100.0, 10)]
    by_a = [map_well(WellParams(a=a)).delta for a in np.geomspace(0.01, 1.9, 10)]
    dec = all(y < x for x, y in zip(by_v0, by_v0[1:])) and all(y < x for x, y in zip(by_a, by_a[1:]))
    ok = max(errs) <= 1e-5 and dec
    acceptance(9, ok, f"max |ξ,J,Δ error| {max(errs):.1e} (tol 1e-5), decreasing in V0 and a: {dec}")
    assert ok


def test_criterion_10_consistency_report(acceptance, validate):
    worst = 0.0
    valid = informational = True
    for mp in MODEL_GRID:
        rep = consistency_report(mp)
        worst = max(worst, rep.projector_difference)
        d = rep.as_dict()
        valid &= validate(d, "consistency")
        informational &= "single_basis_compatible" in d["flags"] and d["informational"] == ["single_basis_compatible"]
    ok = worst <= 1e-10 and valid and informational
    acceptance(
        10, ok, f"projector difference {worst:.1e} (tol 1e-10), schema-valid: {valid}, informational flag: {informational}"
    )
    assert ok
