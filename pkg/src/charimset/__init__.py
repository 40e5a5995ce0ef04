"""Characteristic-imset algebra for Bayesian network structures.

Construction, transformation, equivalence testing and graph reconstruction
for characteristic imsets, plus exact learners for restricted structure
classes (forests, spanning trees, degree-bounded variants, chordal graphs)
under decomposable score-equivalent criteria.
"""

from .core import (
    CharVector,
    Dag,
    Imset,
    UndirectedGraph,
    VarSet,
    characteristic_direct,
    characteristic_imset,
    characteristic_of_chordal,
    extend_from_low_cardinality,
    markov_equivalent,
    masks_by_size,
    mobius_restore,
    portrait,
    standard_imset,
)
from .recon import (
    ExtensionError,
    Immorality,
    MixedGraph,
    ValidationResult,
    consistent_extension,
    essential_graph,
    immoralities,
    is_chordal,
    meek_closure,
    pattern,
    pattern_from_charvector,
    perfect_elimination_ordering,
    validate_characteristic_vector,
)
from .scoring import AffineFit, Dataset, DatasetError, ScoreOracle, affine_fit, ingest_csv
from .learners import (
    CliqueObjective,
    LearnResult,
    SearchCapError,
    WeightTable,
    best_chordal_subgraph,
    clique_reduction,
    degree_bounded_forest,
    degree_bounded_spanning_tree,
    max_weight_forest,
    max_weight_spanning_tree,
)
from .bruteforce import DagUniverse, brute_force_optimum, enumerate_dags

__version__ = "0.1.0"

__all__ = [
    "AffineFit",
    "CharVector",
    "CliqueObjective",
    "Dag",
    "DagUniverse",
    "Dataset",
    "DatasetError",
    "ExtensionError",
    "Immorality",
    "Imset",
    "LearnResult",
    "MixedGraph",
    "ScoreOracle",
    "SearchCapError",
    "UndirectedGraph",
    "ValidationResult",
    "VarSet",
    "WeightTable",
    "affine_fit",
    "best_chordal_subgraph",
    "brute_force_optimum",
    "characteristic_direct",
    "characteristic_imset",
    "characteristic_of_chordal",
    "clique_reduction",
    "consistent_extension",
    "degree_bounded_forest",
    "degree_bounded_spanning_tree",
    "enumerate_dags",
    "essential_graph",
    "extend_from_low_cardinality",
    "immoralities",
    "ingest_csv",
    "is_chordal",
    "markov_equivalent",
    "masks_by_size",
    "max_weight_forest",
    "max_weight_spanning_tree",
    "meek_closure",
    "mobius_restore",
    "pattern",
    "pattern_from_charvector",
    "perfect_elimination_ordering",
    "portrait",
    "standard_imset",
    "validate_characteristic_vector",
]
