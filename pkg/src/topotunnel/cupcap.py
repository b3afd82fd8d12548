"""The four two-spin cup states and the rank-one bond operators built on them.

A cup (or cap) diagram equals sqrt(d) times the normalized state returned by
:func:`cup_state`. The d-type cups span the range of the generator and the
0-type cups span its kernel, so ``rank_one("d1") + rank_one("d2")`` is the
generator itself.

The relative phase on the ``|dd>`` component of the type-1 states is
``-i e^{i phi}``; with that phase the sum above reproduces the generator
matrix entry for entry. A ``+e^{-i phi}`` phase would not.
"""

import math
from enum import Enum

import numpy as np

from .tl_algebra import TLParams


class CupType(str, Enum):
    D1 = "d1"
    D2 = "d2"
    O1 = "o1"
    O2 = "o2"


CUP_TYPES = tuple(CupType)


def _cup_type(t) -> CupType:
    try:
        return CupType(t)
    except ValueError:
        raise ValueError(f"unknown cup type {t!r}; expected one of d1, d2, o1, o2") from None


def cup_state(t, p: TLParams) -> np.ndarray:
    """Normalized two-spin state for cup type ``t`` (basis uu, ud, du, dd)."""
    t = _cup_type(t)
    w = -1j * p.q
    e = p.eps
    amps = {
        CupType.D1: (1, 0, 0, w),
        CupType.O1: (1, 0, 0, -w),
        CupType.D2: (0, 1, -1j * e, 0),
        CupType.O2: (0, 1, 1j * e, 0),
    }[t]
    return np.array(amps, dtype=complex) / math.sqrt(2.0)


def cup_vector(t, p: TLParams) -> np.ndarray:
    """The cup diagram itself: sqrt(d) times :func:`cup_state`."""
    return math.sqrt(p.d) * cup_state(t, p)


def rank_one(t, p: TLParams) -> np.ndarray:
    """Cup over cap of the same type, ``d |psi_t><psi_t|``."""
    psi = cup_state(t, p)
    return p.d * np.outer(psi, psi.conj())


def gram(p: TLParams) -> np.ndarray:
    basis = np.column_stack([cup_state(t, p) for t in CUP_TYPES])
    return basis.conj().T @ basis
