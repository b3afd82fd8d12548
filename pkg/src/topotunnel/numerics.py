"""Dense complex linear algebra shared by the rest of the package.

States are 1-D complex numpy arrays and operators are square 2-D complex
arrays. Site 1 of a spin chain is the most significant bit of the basis
index; spin up is bit 0 and spin down is bit 1.
"""

from dataclasses import dataclass

import numpy as np

TOL_ABS = 1e-12
TOL_EIG = 1e-10

UP = np.array([1, 0], dtype=complex)
DOWN = np.array([0, 1], dtype=complex)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class NumericsError(ValueError):
    pass


class NotHermitian(NumericsError):
    pass


class DimensionMismatch(NumericsError):
    pass


@dataclass(frozen=True)
class EigenSystem:
    """Ascending real eigenvalues with orthonormal eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray

    def projector(self, index) -> np.ndarray:
        v = self.vectors[:, index]
        if v.ndim == 1:
            v = v[:, None]
        return v @ v.conj().T


def as_operator(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"operator must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NumericsError("operator has non-finite entries")
    return m


def as_state(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise DimensionMismatch(f"state must be a vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise NumericsError("state has non-finite amplitudes")
    return v


def kron(*ops) -> np.ndarray:
    """Tensor product, first factor on the most significant sites."""
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, as_operator(op))
    return out


def kron_states(*states) -> np.ndarray:
    out = np.ones(1, dtype=complex)
    for s in states:
        out = np.kron(out, as_state(s))
    return out


def dagger(m) -> np.ndarray:
    return np.asarray(m, dtype=complex).conj().T


def inner(a, b) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    a, b = as_state(a), as_state(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"cannot pair states of dim {a.size} and {b.size}")
    return complex(np.vdot(a, b))


def apply(m, v) -> np.ndarray:
    m, v = as_operator(m), as_state(v)
    if m.shape[1] != v.size:
        raise DimensionMismatch(f"operator dim {m.shape[1]} vs state dim {v.size}")
    return m @ v


def mat_mul(a, b) -> np.ndarray:
    a, b = as_operator(a), as_operator(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return a @ b


def add(a, b) -> np.ndarray:
    a, b = as_operator(a), as_operator(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return a + b


def scale(c, m) -> np.ndarray:
    return complex(c) * np.asarray(m, dtype=complex)


def expectation(m, v) -> complex:
    return inner(v, apply(m, v))


def norm(v) -> float:
    return float(np.linalg.norm(as_state(v)))


def max_abs(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def hermiticity_residual(m) -> float:
    m = as_operator(m)
    return max_abs(m - m.conj().T)


def is_hermitian(m, tol=TOL_ABS) -> bool:
    return hermiticity_residual(m) <= tol


def commutator(a, b) -> np.ndarray:
    return a @ b - b @ a


def fix_phase(v, tol=1e-9) -> np.ndarray:
    """Rotate the global phase so the largest component is real and positive.

    Components within ``tol`` of the largest magnitude count as ties and the
    lowest basis index wins, so equal-weight superpositions stay deterministic.
    """
    v = as_state(v)
    mags = np.abs(v)
    k = int(np.argmax(mags >= mags.max() - tol))
    return v * (abs(v[k]) / v[k])


def hermitian_eig(m, tol_abs=TOL_ABS) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix.

    Eigenvalues come back ascending. Each eigenvector is phase-fixed with
    :func:`fix_phase`; inside a degenerate eigenspace the vectors are only an
    orthonormal basis, so compare eigenspace projectors rather than columns.
    """
    m = as_operator(m)
    resid = hermiticity_residual(m)
    if resid > tol_abs:
        raise NotHermitian(f"max|M - M^dag| = {resid:.3e} exceeds {tol_abs:.1e}")
    herm = 0.5 * (m + m.conj().T)
    values, vectors = np.linalg.eigh(herm)
    vectors = np.column_stack([fix_phase(vectors[:, k]) for k in range(vectors.shape[1])])
    return EigenSystem(values=values, vectors=vectors)


def reconstruct(es: EigenSystem) -> np.ndarray:
    v = es.vectors
    return (v * es.values) @ v.conj().T


def group_levels(values, tol=1e-9):
    """Cluster sorted eigenvalues into (mean value, index list) groups."""
    groups = []
    for k, val in enumerate(values):
        if groups and abs(val - groups[-1][1][-1]) <= tol:
            groups[-1][0].append(k)
            groups[-1][1].append(val)
        else:
            groups.append(([k], [val]))
    return [(float(np.mean(vals)), idx) for idx, vals in groups]
