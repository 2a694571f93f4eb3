"""Coherence generating power of dephasing channels and dephasing Lindbladians."""

from .closed_forms import (
    cgp2_commutator,
    cgp2_from_unistochastic,
    cgp2_max_bound,
    cgp2_max_dephasing,
    cgp2_partial_dephasing,
    cgp2_unital,
    cgp2_unitary,
    cgp_rel_max_dephasing,
    cgp_rel_qubit_closed,
    fourier_matrix,
    qubit_basis,
    unistochastic_of,
)
from .coherence import c2, c_rel, shannon_entropy, subentropy, von_neumann_entropy
from .core import Channel, ProjectorFamily, Superoperator, dephase
from .montecarlo import MCEstimate, cgp_mc, cgp_mc_haar

__all__ = [
    "Channel",
    "MCEstimate",
    "ProjectorFamily",
    "Superoperator",
    "c2",
    "c_rel",
    "cgp2_commutator",
    "cgp2_from_unistochastic",
    "cgp2_max_bound",
    "cgp2_max_dephasing",
    "cgp2_partial_dephasing",
    "cgp2_unital",
    "cgp2_unitary",
    "cgp_mc",
    "cgp_mc_haar",
    "cgp_rel_max_dephasing",
    "cgp_rel_qubit_closed",
    "dephase",
    "fourier_matrix",
    "qubit_basis",
    "shannon_entropy",
    "subentropy",
    "unistochastic_of",
    "von_neumann_entropy",
]
