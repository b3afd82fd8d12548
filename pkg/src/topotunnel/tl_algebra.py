"""Temperley-Lieb generator with loop value sqrt(2) and its chain embeddings."""

from dataclasses import dataclass, field
import math

import numpy as np

from .numerics import TOL_ABS, kron, max_abs

LOOP_VALUE = math.sqrt(2.0)
MAX_SITES = 8


class BondOutOfRange(ValueError):
    pass


@dataclass(frozen=True)
class TLParams:
    phi: float = 0.0
    eps: int = 1
    d: float = LOOP_VALUE

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError(f"eps must be +1 or -1, got {self.eps!r}")
        if self.d != LOOP_VALUE:
            raise ValueError("only the loop value d = sqrt(2) is supported")
        if not math.isfinite(self.phi):
            raise ValueError("phi must be finite")

    @property
    def q(self) -> complex:
        return complex(np.exp(1j * self.phi))


@dataclass(frozen=True)
class ChainOperator:
    sites: int
    bond: int
    op: np.ndarray


def make_generator(p: TLParams, perturb: float = 0.0) -> np.ndarray:
    """4x4 generator in the basis |uu>, |ud>, |du>, |dd>.

    ``perturb`` adds a fixed Hermitian offset of that size; it exists only so
    the verification harness can check that it notices a broken generator.
    """
    q, e = p.q, p.eps
    u = np.array(
        [
            [1, 0, 0, 1j / q],
            [0, 1, 1j * e, 0],
            [0, -1j * e, 1, 0],
            [-1j * q, 0, 0, 1],
        ],
        dtype=complex,
    ) / math.sqrt(2.0)
    if perturb:
        noise = np.arange(16, dtype=float).reshape(4, 4) / 15.0
        u = u + perturb * (noise + noise.T) / 2
    return u


def embed_operator(u, sites: int, bond: int) -> np.ndarray:
    if not 2 <= sites <= MAX_SITES:
        raise BondOutOfRange(f"chain length must be in [2, {MAX_SITES}], got {sites}")
    if not 1 <= bond <= sites - 1:
        raise BondOutOfRange(f"bond {bond} outside 1..{sites - 1}")
    left = np.eye(2 ** (bond - 1))
    right = np.eye(2 ** (sites - bond - 1))
    return kron(left, u, right)


def embed(p: TLParams, sites: int, bond: int, perturb: float = 0.0) -> ChainOperator:
    op = embed_operator(make_generator(p, perturb), sites, bond)
    return ChainOperator(sites=sites, bond=bond, op=op)


@dataclass
class RelationReport:
    sites: int
    tol: float = TOL_ABS
    entries: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def add(self, relation: str, bonds: tuple, residual: float):
        self.entries.append((relation, bonds, float(residual)))

    def max_residual(self, relation: str | None = None) -> float:
        vals = [r for rel, _, r in self.entries if relation is None or rel == relation]
        return max(vals) if vals else 0.0

    @property
    def relations(self) -> list:
        return sorted({rel for rel, _, _ in self.entries})

    @property
    def passed(self) -> bool:
        return all(r <= self.tol for _, _, r in self.entries)

    def failures(self) -> list:
        return [e for e in self.entries if e[2] > self.tol]

    def as_dict(self) -> dict:
        return {
            "sites": self.sites,
            "passed": self.passed,
            "max_residual": {rel: self.max_residual(rel) for rel in self.relations},
            "notes": list(self.notes),
        }


def verify_relations(p: TLParams, sites: int, tol: float = TOL_ABS, perturb: float = 0.0) -> RelationReport:
    """Check U_i^2 = d U_i, U_i U_{i+-1} U_i = U_i and distant commutation."""
    if sites < 2:
        raise BondOutOfRange("need at least two sites")
    gens = {i: embed(p, sites, i, perturb).op for i in range(1, sites)}
    report = RelationReport(sites=sites, tol=tol)
    for i, u in gens.items():
        report.add("idempotent", (i,), max_abs(u @ u - p.d * u))
    for i in gens:
        for j in (i - 1, i + 1):
            if j in gens:
                ui, uj = gens[i], gens[j]
                report.add("contraction", (i, j), max_abs(ui @ uj @ ui - ui))
    for i in gens:
        for j in gens:
            if j >= i + 2:
                report.add("commutation", (i, j), max_abs(gens[i] @ gens[j] - gens[j] @ gens[i]))
    if sites == 2:
        report.notes.append("single bond: only the idempotent relation applies")
    elif sites == 3:
        report.notes.append("no bonds two apart: commutation relation not applicable")
    return report
