"""Exact unitary evolution, e1 <-> e3 tunneling and the Zeno measurement loop."""

from dataclasses import dataclass
import math

import numpy as np

from .hamiltonian import ModelParams, build_h, splitting
from .numerics import as_state, hermitian_eig
from .topo_basis import DegenerateSpectrum, spectral_basis


class Propagator:
    """exp(-i H t / hbar) from a single eigendecomposition of H."""

    def __init__(self, mp: ModelParams):
        self.mp = mp
        self.eig = hermitian_eig(build_h(mp))

    def phases(self, t) -> np.ndarray:
        return np.exp(-1j * self.eig.values * t / self.mp.hbar)

    def matrix(self, t) -> np.ndarray:
        v = self.eig.vectors
        return (v * self.phases(t)) @ v.conj().T

    def evolve(self, psi, t) -> np.ndarray:
        v = self.eig.vectors
        return v @ (self.phases(t) * (v.conj().T @ psi))

    def evolve_many(self, psi, times) -> np.ndarray:
        """Rows are psi(t) for each t in ``times``."""
        v = self.eig.vectors
        c = v.conj().T @ psi
        ph = np.exp(-1j * np.outer(times, self.eig.values) / self.mp.hbar)
        return (ph * c) @ v.T


def evolve(mp: ModelParams, initial, t: float) -> np.ndarray:
    psi = as_state(initial)
    if psi.size != 16:
        raise ValueError(f"expected a 16-dim four-spin state, got {psi.size}")
    return Propagator(mp).evolve(psi, t)


def tunneling_time(mp: ModelParams) -> float:
    if mp.delta == 0:
        raise DegenerateSpectrum("delta = 0: no splitting, tunneling time is infinite")
    return math.pi * mp.hbar / (2 * mp.J * abs(mp.delta))


@dataclass(frozen=True)
class EvolutionTrace:
    times: np.ndarray
    p_e1: np.ndarray
    p_e3: np.ndarray
    leak: np.ndarray

    HEADER = ("t", "p_e1", "p_e3", "leak")

    def rows(self):
        return zip(self.times, self.p_e1, self.p_e3, self.leak)


def tunneling_trace(mp: ModelParams, t_max: float, steps: int) -> EvolutionTrace:
    """Start in e1 and sample the e1 / e3 populations on a uniform grid."""
    if mp.delta == 0:
        raise DegenerateSpectrum("delta = 0: e1 is stationary and the labels are undefined")
    if steps < 2:
        raise ValueError("steps must be at least 2")
    basis = spectral_basis(mp)
    times = np.linspace(0.0, t_max, steps)
    psi = Propagator(mp).evolve_many(basis.e1, times)
    a1 = psi @ basis.e1.conj()
    a3 = psi @ basis.e3.conj()
    rest = psi - np.outer(a1, basis.e1) - np.outer(a3, basis.e3)
    return EvolutionTrace(
        times=times,
        p_e1=np.abs(a1) ** 2,
        p_e3=np.abs(a3) ** 2,
        leak=np.sum(np.abs(rest) ** 2, axis=1),
    )


def closed_form_populations(mp: ModelParams, t) -> tuple:
    """cos^2(delta t / 2) and sin^2(delta t / 2)."""
    _, _, dfreq = splitting(mp)
    x = np.asarray(t) * dfreq / 2
    return np.cos(x) ** 2, np.sin(x) ** 2


@dataclass(frozen=True)
class ZenoRun:
    n: int
    interval: float
    survival_exact: float
    survival_analytic: float
    survival_limit: float

    HEADER = ("n", "survival_exact", "survival_analytic", "survival_limit")

    def row(self) -> tuple:
        return (self.n, self.survival_exact, self.survival_analytic, self.survival_limit)


def zeno_analytic(n: int) -> float:
    return math.cos(math.pi / (2 * n)) ** (2 * n)


def zeno_limit(n: int) -> float:
    return math.exp(-math.pi**2 / (4 * n))


def zeno_run(mp: ModelParams, n: int) -> ZenoRun:
    """n rounds of (evolve tau/n, measure e1, keep the e1 outcome)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    tau = tunneling_time(mp)
    e1 = spectral_basis(mp).e1
    step = Propagator(mp).matrix(tau / n)
    psi = e1
    survival = 1.0
    for _ in range(n):
        amp = np.vdot(e1, step @ psi)
        p = abs(amp) ** 2
        survival *= p
        if p == 0.0:
            break
        psi = e1 * (amp / abs(amp))
    return ZenoRun(
        n=n,
        interval=tau / n,
        survival_exact=float(survival),
        survival_analytic=zeno_analytic(n),
        survival_limit=zeno_limit(n),
    )
