"""Quantum 2n-balls as graph C*-algebras: graphs, words, truncated representations."""

from .graphs import (
    DirectedGraph,
    Edge,
    GraphError,
    LoopEncodedPath,
    SHORT_LABELS,
    Path,
    ball_graph,
    double_suspension,
    enumerate_paths,
    hereditary_saturated_sets,
    path_classes,
    point_graph,
    quotient_graph,
)
from .representation import (
    EpsilonRep,
    PiRep,
    QParam,
    SigmaRep,
    TruncatedPathSpace,
    aggregate_shift,
    build_generators,
    build_irrep,
    evaluate_word,
    lambda_coeff,
    list_irreps,
    weighted_shift,
)
from .words import GeneratorLetter, NormalWord, WordExpr, adjoint, ck_expand, gauge, multiply, parse_expr, reduce, render

__version__ = "0.1.0"
