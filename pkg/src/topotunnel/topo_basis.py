"""Four-state topological subspace built two ways.

The graphical route seeds a side-by-side cup product on sites (1,2)(3,4) and
completes it by Gram-Schmidt against ``U23``; the resulting pair carries the
2x2 Temperley-Lieb representation. Seeding with ``d1 d1`` gives the partner
``~ o2 o2`` and seeding with ``d2 d2`` gives the partner ``~ o1 o1``, so the two
families together span the nonzero-energy block of the Hamiltonian.

The spectral route reads off the four Hamiltonian eigenvectors and rotates
each (E+, E-) pair into (e_a, e_b) = (E+ +- E-)/sqrt(2).

No single quadruple does both jobs; :func:`consistency_report` measures how
far apart the two routes are.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .cupcap import cup_state
from .hamiltonian import ModelParams, build_h, spectrum
from .numerics import TOL_ABS, TOL_EIG, kron_states, max_abs
from .tl_algebra import TLParams, embed

FAMILY_SEEDS = {"d": "d1", "0": "d2"}


class DegenerateGramSchmidt(ArithmeticError):
    pass


class DegenerateSpectrum(ValueError):
    pass


@dataclass(frozen=True)
class TopoBasis:
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    e4: np.ndarray
    route: str
    params: object

    @property
    def matrix(self) -> np.ndarray:
        return np.column_stack([self.e1, self.e2, self.e3, self.e4])

    def gram(self) -> np.ndarray:
        b = self.matrix
        return b.conj().T @ b

    def projector(self) -> np.ndarray:
        b = self.matrix
        return b @ b.conj().T


@dataclass(frozen=True)
class TwoDRep:
    uA: np.ndarray
    uB: np.ndarray
    residuals: dict

    def deviation(self, d=math.sqrt(2.0)) -> float:
        ref_a, ref_b = reference_rep(d)
        return max(max_abs(self.uA - ref_a), max_abs(self.uB - ref_b))

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())


def reference_rep(d=math.sqrt(2.0)) -> tuple:
    """The 2x2 images of U12 and U23 on a topological pair."""
    s = math.sqrt(1 - d**-2)
    ua = np.array([[d, 0.0], [0.0, 0.0]])
    ub = np.array([[1 / d, s], [s, d - 1 / d]])
    return ua, ub


def _chain_generators(p: TLParams):
    return embed(p, 4, 1).op, embed(p, 4, 2).op, embed(p, 4, 3).op


def graphical_basis(p: TLParams, family: str = "d", tol: float = TOL_ABS) -> tuple:
    """Orthonormal pair (v1, v2) spanning one copy of the 2x2 representation.

    ``family`` is ``"d"`` (seed psi_d1 x psi_d1) or ``"0"`` (seed psi_d2 x
    psi_d2, whose partner is built from psi_0 cups).
    """
    try:
        t = FAMILY_SEEDS[family]
    except KeyError:
        raise ValueError(f"family must be 'd' or '0', got {family!r}") from None
    psi = cup_state(t, p)
    v1 = kron_states(psi, psi)
    _, u23, _ = _chain_generators(p)
    w = u23 @ v1
    w = w - np.vdot(v1, w) * v1
    n = np.linalg.norm(w)
    if n < tol:
        raise DegenerateGramSchmidt(f"U23 maps the seed onto itself (residual norm {n:.2e})")
    return v1, w / n


def two_d_rep(v1, v2, p: TLParams) -> TwoDRep:
    u12, u23, _ = _chain_generators(p)
    basis = np.column_stack([v1, v2])
    ua = basis.conj().T @ u12 @ basis
    ub = basis.conj().T @ u23 @ basis
    d = p.d
    residuals = {
        "imaginary_part": max(max_abs(ua.imag), max_abs(ub.imag)),
        "uA^2=d uA": max_abs(ua @ ua - d * ua),
        "uB^2=d uB": max_abs(ub @ ub - d * ub),
        "uA uB uA=uA": max_abs(ua @ ub @ ua - ua),
        "uB uA uB=uB": max_abs(ub @ ua @ ub - ub),
    }
    return TwoDRep(ua.real.copy(), ub.real.copy(), residuals)


def graphical_route(p: TLParams) -> TopoBasis:
    """Both families stacked as (v1_d, v2_d, v1_0, v2_0)."""
    a1, a2 = graphical_basis(p, "d")
    b1, b2 = graphical_basis(p, "0")
    return TopoBasis(a1, a2, b1, b2, route="graphical", params=p)


def labelled_energies(mp: ModelParams) -> dict:
    j, dl = mp.J, mp.delta
    return {"E1+": j * (1 + dl), "E1-": j * (1 - dl), "E2+": 4 * j * (1 + dl), "E2-": 4 * j * (1 - dl)}


def eigenstates(mp: ModelParams, sep_tol: float = 1e-6) -> dict:
    """Phase-fixed eigenvectors for the four labelled nonzero levels."""
    targets = labelled_energies(mp)
    values = sorted(list(targets.values()) + [0.0])
    if min(np.diff(values)) < sep_tol:
        raise DegenerateSpectrum(f"labelled levels coincide at delta={mp.delta}; labels undefined")
    eig = spectrum(mp).eig
    out = {}
    for label, energy in targets.items():
        k = int(np.argmin(np.abs(eig.values - energy)))
        if abs(eig.values[k] - energy) > TOL_EIG * max(1.0, abs(energy)):
            raise DegenerateSpectrum(f"no eigenvalue near {label}={energy}")
        out[label] = eig.vectors[:, k]
    return out


def spectral_basis(mp: ModelParams) -> TopoBasis:
    if mp.delta == 0:
        raise DegenerateSpectrum("delta = 0: E+ and E- coincide")
    es = eigenstates(mp)
    r = 1 / math.sqrt(2.0)
    return TopoBasis(
        e1=r * (es["E1+"] + es["E1-"]),
        e2=r * (es["E2+"] + es["E2-"]),
        e3=r * (es["E1+"] - es["E1-"]),
        e4=r * (es["E2+"] - es["E2-"]),
        route="spectral",
        params=mp,
    )


def eigenrelation_residual(basis: TopoBasis, mp: ModelParams) -> float:
    """max |H v - E v| over v = (e1 +- e3)/sqrt2, (e2 +- e4)/sqrt2."""
    h = build_h(mp)
    en = labelled_energies(mp)
    r = 1 / math.sqrt(2.0)
    pairs = {
        "E1+": r * (basis.e1 + basis.e3),
        "E1-": r * (basis.e1 - basis.e3),
        "E2+": r * (basis.e2 + basis.e4),
        "E2-": r * (basis.e2 - basis.e4),
    }
    return max(max_abs(h @ v - en[k] * v) for k, v in pairs.items())


@dataclass
class ConsistencyReport:
    overlap: np.ndarray
    overlap_unitarity: float
    projector_difference: float
    graphical_reps: dict
    spectral_reps: dict
    graphical_gram: float
    spectral_gram: float
    spectral_eigen_residual: float
    graphical_eigen_residual: float
    tol_abs: float = TOL_ABS
    tol_eig: float = TOL_EIG
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        g_ok = all(
            rep.max_residual <= self.tol_abs and rep.deviation() <= self.tol_abs
            for rep in self.graphical_reps.values()
        )
        s_ok = self.spectral_eigen_residual <= self.tol_eig and self.spectral_gram <= self.tol_abs
        spec_rep_ok = all(rep.deviation() <= self.tol_abs for rep in self.spectral_reps.values())
        graph_eig_ok = self.graphical_eigen_residual <= self.tol_eig
        self.flags = {
            "graphical_satisfies_2d_rep": bool(g_ok and self.graphical_gram <= self.tol_abs),
            "spectral_satisfies_eigenrelations": bool(s_ok),
            "same_subspace": bool(
                self.projector_difference <= self.tol_eig and self.overlap_unitarity <= self.tol_eig
            ),
            "single_basis_compatible": bool(spec_rep_ok or graph_eig_ok),
        }

    @property
    def passed(self) -> bool:
        f = self.flags
        return f["graphical_satisfies_2d_rep"] and f["spectral_satisfies_eigenrelations"] and f["same_subspace"]

    def as_dict(self) -> dict:
        def rep_dict(rep):
            return {
                "uA": rep.uA.tolist(),
                "uB": rep.uB.tolist(),
                "deviation": rep.deviation(),
                "residuals": dict(rep.residuals),
            }

        return {
            "overlap": [[[float(z.real), float(z.imag)] for z in row] for row in self.overlap],
            "overlap_unitarity": self.overlap_unitarity,
            "projector_difference": self.projector_difference,
            "graphical": {
                "gram_residual": self.graphical_gram,
                "eigenrelation_residual": self.graphical_eigen_residual,
                "reps": {k: rep_dict(v) for k, v in self.graphical_reps.items()},
            },
            "spectral": {
                "gram_residual": self.spectral_gram,
                "eigenrelation_residual": self.spectral_eigen_residual,
                "reps": {k: rep_dict(v) for k, v in self.spectral_reps.items()},
            },
            "flags": dict(self.flags),
            "informational": ["single_basis_compatible"],
            "passed": self.passed,
        }


def consistency_report(mp: ModelParams, tol_abs: float = TOL_ABS, tol_eig: float = TOL_EIG) -> ConsistencyReport:
    p = mp.tl
    g = graphical_route(p)
    s = spectral_basis(mp)
    overlap = g.matrix.conj().T @ s.matrix
    eye = np.eye(4)
    return ConsistencyReport(
        overlap=overlap,
        overlap_unitarity=max_abs(overlap.conj().T @ overlap - eye),
        projector_difference=max_abs(g.projector() - s.projector()),
        graphical_reps={"d": two_d_rep(g.e1, g.e2, p), "0": two_d_rep(g.e3, g.e4, p)},
        spectral_reps={"e1e2": two_d_rep(s.e1, s.e2, p), "e3e4": two_d_rep(s.e3, s.e4, p)},
        graphical_gram=max_abs(g.gram() - eye),
        spectral_gram=max_abs(s.gram() - eye),
        spectral_eigen_residual=eigenrelation_residual(s, mp),
        graphical_eigen_residual=eigenrelation_residual(g, mp),
        tol_abs=tol_abs,
        tol_eig=tol_eig,
    )
