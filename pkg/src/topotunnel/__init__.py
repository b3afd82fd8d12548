"""Temperley-Lieb spin realization of a four-quasiparticle topological basis,
its projector Hamiltonian, tunneling between basis states and the Zeno effect
under repeated measurement."""

__version__ = "0.1.0"

from .cupcap import CupType, cup_state, rank_one
from .diagram import evaluate, parse
from .doublewell import WellParams, map_well, potential
from .dynamics import evolve, tunneling_time, tunneling_trace, zeno_run
from .hamiltonian import ModelParams, build_h, spectrum, splitting
from .tl_algebra import TLParams, embed, make_generator, verify_relations
from .topo_basis import consistency_report, graphical_basis, spectral_basis, two_d_rep
