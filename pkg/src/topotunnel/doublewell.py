"""Map a symmetric square double well onto the model couplings (J, delta).

With wall half-width ``L``, barrier half-width ``a`` and barrier height
``V0``::

    xi    = sqrt(2 m V0) / hbar
    J     = hbar^2 pi^2 / (2 m (L - a)^2)
    delta = 4 exp(-2 xi a) / (xi (L - a))

The map runs one way only; (J, delta) does not determine the well.
"""

from dataclasses import dataclass
import math

INDEPENDENT_WELLS_THRESHOLD = 1e-12


@dataclass(frozen=True)
class WellParams:
    m: float = 1.0
    L: float = 2.0
    a: float = 0.5
    V0: float = 10.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("m", "L", "a", "V0", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be positive and finite, got {value}")
        if not self.a < self.L:
            raise ValueError(f"barrier half-width a={self.a} must be smaller than L={self.L}")


@dataclass(frozen=True)
class WellMap:
    xi: float
    J: float
    delta: float
    delta_freq: float
    tau: float

    def as_dict(self) -> dict:
        return {"xi": self.xi, "J": self.J, "delta": self.delta, "delta_freq": self.delta_freq, "tau": self.tau}


def map_well(w: WellParams) -> WellMap:
    xi = math.sqrt(2 * w.m * w.V0) / w.hbar
    width = w.L - w.a
    J = w.hbar**2 * math.pi**2 / (2 * w.m * width**2)
    delta = 4 * math.exp(-2 * xi * w.a) / (xi * width)
    delta_freq = 2 * J * delta / w.hbar
    tau = math.pi / delta_freq if delta_freq > 0 else math.inf
    return WellMap(xi=xi, J=J, delta=delta, delta_freq=delta_freq, tau=tau)


def potential(w: WellParams, x: float) -> float:
    """Barrier on |x| <= a, flat floor inside, ``math.inf`` for |x| >= L."""
    ax = abs(x)
    if ax >= w.L:
        return math.inf
    if ax <= w.a:
        return w.V0
    return 0.0


def independent_wells_limit(w: WellParams, v0_list) -> list:
    """Rows (V0, delta, tau, note) for increasing barrier heights."""
    v0_list = list(v0_list)
    if any(b <= a for a, b in zip(v0_list, v0_list[1:])):
        raise ValueError("V0 values must be strictly increasing")
    rows = []
    for v0 in v0_list:
        wm = map_well(WellParams(m=w.m, L=w.L, a=w.a, V0=v0, hbar=w.hbar))
        note = "independent wells" if wm.delta < INDEPENDENT_WELLS_THRESHOLD else ""
        rows.append((v0, wm.delta, wm.tau, note))
    return rows

