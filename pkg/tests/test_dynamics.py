import math

import numpy as np
import pytest

from topotunnel.dynamics import (
    EvolutionTrace,
    Propagator,
    ZenoRun,
    closed_form_populations,
    evolve,
    tunneling_time,
    tunneling_trace,
    zeno_analytic,
    zeno_limit,
    zeno_run,
)
from topotunnel.hamiltonian import ModelParams
from topotunnel.numerics import inner, max_abs, norm
from topotunnel.topo_basis import DegenerateSpectrum, eigenstates, spectral_basis

import oracles

MP = ModelParams(J=1.0, delta=0.1)


def test_zero_time_is_identity():
    b = spectral_basis(MP)
    assert max_abs(evolve(MP, b.e1, 0.0) - b.e1) <= 1e-14


def test_amplitude_pattern():
    # e1(t) = e^{-iJt}(cos(dt/2) e1 - i sin(dt/2) e3), up to the global sign of e3
    b = spectral_basis(MP)
    for t in (0.3, 2.0, 7.5):
        psi = evolve(MP, b.e1, t)
        c = math.cos(0.1 * t)
        s = math.sin(0.1 * t)
        a1, a3 = inner(b.e1, psi), inner(b.e3, psi)
        assert abs(a1 - np.exp(-1j * t) * c) <= 1e-12
        assert abs(abs(a3) - abs(s)) <= 1e-12
        assert max_abs(psi - a1 * b.e1 - a3 * b.e3) <= 1e-12


def test_eigenstate_only_picks_up_phase():
    v = eigenstates(MP)["E1+"]
    psi = evolve(MP, v, 3.0)
    assert max_abs(psi - np.exp(-1.1j * 3.0) * v) <= 1e-12


def test_half_and_full_tunneling_time():
    tau = tunneling_time(MP)
    assert tau == pytest.approx(5 * math.pi, abs=1e-12)
    tr = tunneling_trace(MP, tau, 3)
    assert tr.p_e1[1] == pytest.approx(0.5, abs=1e-10)
    assert tr.p_e3[2] == pytest.approx(1.0, abs=1e-10)
    assert tr.p_e1[2] <= 1e-10


def test_population_at_t5():
    tr = tunneling_trace(MP, 5.0, 2)
    assert tr.p_e1[-1] == pytest.approx(math.cos(0.5) ** 2, abs=1e-12)
    assert tr.p_e1[-1] == pytest.approx(0.7701511529340699, abs=1e-12)


def test_unitarity():
    u = Propagator(ModelParams(J=1.7, delta=-0.3, phi=0.8, eps=-1)).matrix(2.3)
    assert max_abs(u.conj().T @ u - np.eye(16)) <= 1e-12


def test_matches_closed_form_on_grid():
    tr = tunneling_trace(MP, 4 * tunneling_time(MP), 257)
    c2, s2 = closed_form_populations(MP, tr.times)
    assert np.max(np.abs(tr.p_e1 - c2)) <= 1e-10
    assert np.max(np.abs(tr.p_e3 - s2)) <= 1e-10
    assert np.max(tr.leak) <= 1e-10


def test_matches_expm_oracle():
    # independent propagator: Taylor series of exp(-iHt) on the oracle Hamiltonian
    h = oracles.hamiltonian(1.0, 0.1, 0.4, -1)
    mp = ModelParams(J=1.0, delta=0.1, phi=0.4, eps=-1)
    t, k = 0.7, 1
    ref = term = np.eye(16, dtype=complex)
    while k < 60:
        term = term @ (-1j * t * h) / k
        ref = ref + term
        k += 1
    assert max_abs(Propagator(mp).matrix(t) - ref) <= 1e-11


def test_periodicity():
    b = spectral_basis(MP)
    period = 2 * math.pi / 0.2
    p0 = abs(inner(b.e1, evolve(MP, b.e1, 1.3))) ** 2
    p1 = abs(inner(b.e1, evolve(MP, b.e1, 1.3 + period))) ** 2
    assert abs(p0 - p1) <= 1e-9


def test_trace_rows_and_header():
    tr = tunneling_trace(MP, 1.0, 5)
    assert isinstance(tr, EvolutionTrace)
    assert EvolutionTrace.HEADER == ("t", "p_e1", "p_e3", "leak")
    assert len(list(tr.rows())) == 5


def test_trace_rejects_bad_input():
    with pytest.raises(DegenerateSpectrum):
        tunneling_trace(ModelParams(delta=0.0), 1.0, 10)
    with pytest.raises(ValueError):
        tunneling_trace(MP, 1.0, 1)
    with pytest.raises(ValueError):
        evolve(MP, np.ones(4), 1.0)


@pytest.mark.parametrize(
    "J,delta,expected",
    [(1.0, 0.1, 15.70796), (1.0, 0.5, 3.14159), (2.0, 0.1, 7.85398), (1.0, -0.1, 15.70796)],
)
def test_tunneling_time_examples(J, delta, expected):
    assert tunneling_time(ModelParams(J=J, delta=delta)) == pytest.approx(expected, abs=1e-5)


def test_tunneling_time_halves_when_delta_doubles():
    assert tunneling_time(ModelParams(delta=0.2)) == pytest.approx(tunneling_time(MP) / 2, rel=1e-14)


def test_tunneling_time_undefined_at_zero():
    with pytest.raises(DegenerateSpectrum):
        tunneling_time(ModelParams(delta=0.0))


def test_zeno_single_measurement():
    run = zeno_run(MP, 1)
    assert run.survival_exact <= 1e-20
    assert run.survival_analytic <= 1e-30


def test_zeno_values():
    run = zeno_run(MP, 10)
    assert isinstance(run, ZenoRun)
    assert run.survival_exact == pytest.approx(0.7805460697811402, abs=1e-10)
    assert run.survival_analytic == pytest.approx(oracles.zeno_survival(10), abs=1e-14)
    assert run.survival_limit == pytest.approx(0.7813437305474443, abs=1e-14)
    assert abs(run.survival_analytic - run.survival_limit) < 0.001
    assert zeno_analytic(100) == pytest.approx(0.9756269141439003, abs=1e-13)


def test_zeno_exact_matches_analytic_on_grid():
    for mp in (MP, ModelParams(J=2.0, delta=-0.3, phi=1.1, eps=-1)):
        for n in (2, 3, 7, 25, 64):
            assert abs(zeno_run(mp, n).survival_exact - zeno_analytic(n)) <= 1e-10


def test_zeno_monotone():
    vals = [zeno_analytic(n) for n in range(2, 201)]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    assert zeno_limit(10) < zeno_limit(11)


def test_zeno_rejects_n():
    with pytest.raises(ValueError):
        zeno_run(MP, 0)
