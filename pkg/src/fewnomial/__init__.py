"""Fewnomial bounds, Gale duality and Khovanskii-Rolle real solution counting."""

from .bounds import bound_report, kr_ledger, new_bound, positive_bound
from .errors import EvenIndex, FewnomialError, RankDeficient
from .gale import GaleDual, SparseSystem, build_gale_dual, lift_to_torus
from .instances import random_instance, read_instance, write_instance
from .lattice import kouchnirenko_bound, normalize_support, span_index_parity
from .master import MasterSystem, build_gamma_chain
from .oracle import oracle_count
from .solver import SolutionSet, SolveOptions, solve_master, solve_sparse

__all__ = [
    "EvenIndex",
    "FewnomialError",
    "GaleDual",
    "MasterSystem",
    "RankDeficient",
    "SolutionSet",
    "SolveOptions",
    "SparseSystem",
    "bound_report",
    "build_gale_dual",
    "build_gamma_chain",
    "kouchnirenko_bound",
    "kr_ledger",
    "lift_to_torus",
    "new_bound",
    "normalize_support",
    "oracle_count",
    "positive_bound",
    "random_instance",
    "read_instance",
    "solve_master",
    "solve_sparse",
    "span_index_parity",
    "write_instance",
]
