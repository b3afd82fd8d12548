"""Four-site projector Hamiltonian and its exact spectrum."""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .cupcap import rank_one
from .numerics import EigenSystem, group_levels, hermitian_eig, kron
from .tl_algebra import TLParams

GROUP_TOL = 1e-9
ZERO_TOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    J: float = 1.0
    delta: float = 0.0
    phi: float = 0.0
    eps: int = 1
    hbar: float = 1.0

    def __post_init__(self):
        if not self.J > 0:
            raise ValueError(f"J must be positive, got {self.J}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not math.isfinite(self.delta):
            raise ValueError("delta must be finite")
        if abs(self.delta) >= 1:
            warnings.warn(f"|delta| = {abs(self.delta)} >= 1 flips the sign of some levels", stacklevel=2)
        TLParams(self.phi, self.eps)

    @property
    def tl(self) -> TLParams:
        return TLParams(self.phi, self.eps)


@dataclass(frozen=True)
class Level:
    value: float
    multiplicity: int
    projector: np.ndarray


@dataclass(frozen=True)
class Spectrum:
    levels: tuple
    eig: EigenSystem

    def nonzero(self) -> tuple:
        return tuple(lv for lv in self.levels if abs(lv.value) > ZERO_TOL)

    def as_rows(self) -> list:
        return [(lv.value, lv.multiplicity) for lv in self.levels]


def bond_terms(p: TLParams) -> dict:
    """The four bond operators, keyed by (superscript, tilde)."""
    return {
        (1, False): rank_one("d1", p),
        (1, True): rank_one("d2", p),
        (2, False): rank_one("o1", p),
        (2, True): rank_one("o2", p),
    }


def build_h(mp: ModelParams) -> np.ndarray:
    p = mp.tl
    u = bond_terms(p)
    plus = kron(u[1, False], u[1, False]) + 4 * kron(u[1, True], u[1, True])
    minus = kron(u[2, False], u[2, False]) + 4 * kron(u[2, True], u[2, True])
    return mp.J / p.d**2 * ((1 + mp.delta) * plus + (1 - mp.delta) * minus)


def spectrum(mp: ModelParams, tol: float = GROUP_TOL) -> Spectrum:
    eig = hermitian_eig(build_h(mp))
    levels = []
    for value, idx in group_levels(eig.values, tol):
        if abs(value) <= ZERO_TOL:
            value = 0.0
        levels.append(Level(value, len(idx), eig.projector(idx)))
    return Spectrum(tuple(levels), eig)


def topological_projector(mp: ModelParams) -> np.ndarray:
    """Projector onto the span of the eigenvectors with nonzero energy."""
    sp = spectrum(mp)
    return sum((lv.projector for lv in sp.nonzero()), np.zeros((16, 16), dtype=complex))


def splitting(mp: ModelParams) -> tuple:
    """(omega_plus, omega_minus, delta) angular frequencies."""
    omega_plus = mp.J * (1 + mp.delta) / mp.hbar
    omega_minus = mp.J * (1 - mp.delta) / mp.hbar
    return omega_plus, omega_minus, 2 * mp.J * mp.delta / mp.hbar
