"""Exact algebra for homogeneous and colored coupled cell networks:
semigroup closure, symbolic composition and bracket, kernels of the
network map, SN-splitting and graded normal forms."""

from .colored import ColoredNetworkSpec, ColoredPolyFamily, colored_bracket, colored_compose
from .errors import (CellNetError, DocumentError, DomainError, GuardError, InternalError, StateError,
                     ValidationError)
from .finmap import FiniteMap, SemigroupTable, semigroup_closure
from .liealg import NetworkAlgebra, kernel_gamma, sigma_bracket, sigma_compose
from .network import NetworkSpec, a_map, fundamental_network, gamma_eval, gamma_symbolic, pi
from .normalform import homological_solve, normal_form, normal_form_symmetry_check, sn_decompose
from .polyspace import PolyMap, basis, parse_polymap
from .structure import (Partition, balanced_partitions, dynamical_input_symmetries, invariant_subbasis,
                        network_symmetries)

__all__ = [
    "CellNetError", "ColoredNetworkSpec", "ColoredPolyFamily", "DocumentError", "DomainError", "FiniteMap",
    "GuardError", "InternalError", "NetworkAlgebra", "NetworkSpec", "Partition", "PolyMap", "SemigroupTable",
    "StateError", "ValidationError", "a_map", "balanced_partitions", "basis", "colored_bracket",
    "colored_compose", "dynamical_input_symmetries", "fundamental_network", "gamma_eval", "gamma_symbolic",
    "homological_solve", "invariant_subbasis", "kernel_gamma", "network_symmetries", "normal_form",
    "normal_form_symmetry_check", "parse_polymap", "pi", "semigroup_closure", "sigma_bracket",
    "sigma_compose", "sn_decompose",
]

__version__ = "0.1.0"
