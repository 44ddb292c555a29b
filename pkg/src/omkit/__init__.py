"""Exact combinatorics of oriented matroids and their Salvetti complexes."""

from .signs import SignVector, GroundSetMismatchError
from .posets import FinitePoset, PosetMap, SimplicialComplexRecord
from .matroids import (
    AffineCovectorSystem,
    AxiomReport,
    CovectorSystem,
    RationalArrangement,
    from_arrangement,
)
from .lattices import GeometricLattice, MChain, build_lattice, flat_id, parse_flat
from .corpus import CORPUS_NAMES, corpus
from .salvetti import SalvettiPoset, salvetti, salvetti_localization, stratify_fiber
from .morse import (
    Matching,
    matching_convex_critical,
    matching_from_shelling,
    matching_salvetti_fiber,
    patchwork,
)
from .homology import (
    HomologyResult,
    graph_free_rank,
    homology,
    quasi_fibration_certify,
    semidirect_rank_sequence,
)

__all__ = [
    "SignVector",
    "GroundSetMismatchError",
    "FinitePoset",
    "PosetMap",
    "SimplicialComplexRecord",
    "AffineCovectorSystem",
    "AxiomReport",
    "CovectorSystem",
    "RationalArrangement",
    "from_arrangement",
    "GeometricLattice",
    "MChain",
    "build_lattice",
    "flat_id",
    "parse_flat",
    "CORPUS_NAMES",
    "corpus",
    "SalvettiPoset",
    "salvetti",
    "salvetti_localization",
    "stratify_fiber",
    "Matching",
    "matching_convex_critical",
    "matching_from_shelling",
    "matching_salvetti_fiber",
    "patchwork",
    "HomologyResult",
    "graph_free_rank",
    "homology",
    "quasi_fibration_certify",
    "semidirect_rank_sequence",
]
