"""Aggregate self-checks behind the ``verify`` subcommand."""

from dataclasses import dataclass
import itertools
import math

import numpy as np

from .cupcap import CUP_TYPES, gram, rank_one
from .diagram import evaluate
from .hamiltonian import ModelParams, build_h, spectrum
from .numerics import TOL_ABS, TOL_EIG, hermiticity_residual, max_abs
from .tl_algebra import TLParams, make_generator, verify_relations
from .topo_basis import consistency_report

PHI_GRID = tuple(k * math.pi / 6 for k in range(12))
EPS_GRID = (1, -1)
J_GRID = (0.5, 1.0, 2.0)
DELTA_GRID = (0.0, 0.1, -0.1, 0.5, -0.5)
CHAIN_LENGTHS = (2, 3, 4, 5)


@dataclass
class Check:
    name: str
    max_residual: float
    tol: float
    mandatory: bool = True

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tol)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "max_residual": float(self.max_residual),
            "tol": self.tol,
            "passed": self.passed,
            "mandatory": self.mandatory,
        }


def _grid(phi=None, eps=None):
    phis = PHI_GRID if phi is None else (phi,)
    epss = EPS_GRID if eps is None else (eps,)
    return [TLParams(ph, e) for ph, e in itertools.product(phis, epss)]


def _nonzero_spectrum_error(mp: ModelParams) -> tuple:
    sp = spectrum(mp)
    vals = np.sort(sp.eig.values)
    kernel = int(np.sum(np.abs(vals) <= 1e-9))
    nonzero = np.sort(vals[np.abs(vals) > 1e-9])
    j, dl = mp.J, mp.delta
    expected = np.sort([j * (1 + dl), j * (1 - dl), 4 * j * (1 + dl), 4 * j * (1 - dl)])
    if nonzero.size != 4:
        return math.inf, kernel
    return max_abs(nonzero - expected), kernel


def run_verification(
    phi=None,
    eps=None,
    J: float = 1.0,
    delta: float = 0.1,
    hbar: float = 1.0,
    tol_abs: float = TOL_ABS,
    tol_eig: float = TOL_EIG,
    perturb: float = 0.0,
) -> dict:
    grid = _grid(phi, eps)
    worst = {}

    def record(name, value):
        worst[name] = max(worst.get(name, 0.0), float(value))

    for p in grid:
        for m in CHAIN_LENGTHS:
            rep = verify_relations(p, m, tol=tol_abs, perturb=perturb)
            for rel in ("idempotent", "contraction", "commutation"):
                record(f"tl.{rel}", rep.max_residual(rel))
        u = make_generator(p, perturb)
        record("tl.generator_hermitian", hermiticity_residual(u))
        record("cupcap.orthonormality", max_abs(gram(p) - np.eye(4)))
        record("cupcap.generator_decomposition", max_abs(rank_one("d1", p) + rank_one("d2", p) - u))
        for a, b in itertools.product(CUP_TYPES, CUP_TYPES):
            val = evaluate(f"cap(1,2:{a.value}) ; cup(1,2:{b.value})", p).value
            target = p.d if a == b else 0.0
            record("diagram.loop_value", abs(val - target))

        for j, dl in itertools.product(J_GRID, DELTA_GRID):
            mp = ModelParams(J=j, delta=dl, phi=p.phi, eps=p.eps, hbar=hbar)
            record("hamiltonian.hermitian", hermiticity_residual(build_h(mp)))
            err, kernel = _nonzero_spectrum_error(mp)
            record("hamiltonian.nonzero_spectrum", err)
            record("hamiltonian.kernel_dimension", abs(kernel - 12))

    checks = [
        Check("tl.idempotent", worst["tl.idempotent"], tol_abs),
        Check("tl.contraction", worst["tl.contraction"], tol_abs),
        Check("tl.commutation", worst["tl.commutation"], tol_abs),
        Check("tl.generator_hermitian", worst["tl.generator_hermitian"], tol_abs),
        Check("cupcap.orthonormality", worst["cupcap.orthonormality"], tol_abs),
        Check("cupcap.generator_decomposition", worst["cupcap.generator_decomposition"], tol_abs),
        Check("diagram.loop_value", worst["diagram.loop_value"], tol_abs),
        Check("hamiltonian.hermitian", worst["hamiltonian.hermitian"], tol_abs),
        Check("hamiltonian.nonzero_spectrum", worst["hamiltonian.nonzero_spectrum"], tol_eig),
        Check("hamiltonian.kernel_dimension", worst["hamiltonian.kernel_dimension"], 0.0),
    ]

    consistency = None
    notes = []
    if delta == 0:
        notes.append("delta = 0: spectral route undefined, consistency report skipped")
    else:
        reports = [
            consistency_report(ModelParams(J=J, delta=delta, phi=p.phi, eps=p.eps, hbar=hbar), tol_abs, tol_eig)
            for p in grid
        ]
        g_dev = max(max(max(r.deviation(), r.max_residual) for r in rep.graphical_reps.values()) for rep in reports)
        checks += [
            Check("topo.graphical_2d_rep", g_dev, tol_abs),
            Check("topo.graphical_orthonormality", max(r.graphical_gram for r in reports), tol_abs),
            Check("topo.spectral_orthonormality", max(r.spectral_gram for r in reports), tol_abs),
            Check("topo.spectral_eigenrelations", max(r.spectral_eigen_residual for r in reports), tol_eig),
            Check("topo.same_subspace", max(r.projector_difference for r in reports), tol_eig),
            Check(
                "topo.single_basis_compatible",
                min(
                    min(min(s.deviation() for s in r.spectral_reps.values()), r.graphical_eigen_residual)
                    for r in reports
                ),
                tol_eig,
                mandatory=False,
            ),
        ]
        consistency = reports[0].as_dict()
        consistency["params"] = {"J": J, "delta": delta, "phi": grid[0].phi, "eps": grid[0].eps, "hbar": hbar}

    passed = all(c.passed for c in checks if c.mandatory)
    return {
        "grid": {"phi": sorted({p.phi for p in grid}), "eps": sorted({p.eps for p in grid}), "sites": list(CHAIN_LENGTHS)},
        "perturb": perturb,
        "checks": [c.as_dict() for c in checks],
        "consistency": consistency,
        "notes": notes,
        "passed": passed,
    }
