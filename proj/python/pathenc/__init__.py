"""Hamiltonian encoding of quantum transition pathways."""

from ._core import (
    AmplitudeTable,
    ControlField,
    EncodingScheme,
    HamiltonianGraph,
    PathencError,
    QuantumSystem,
    analyze,
    build_graph,
    class_amplitude,
    decompose,
    extract_spectrum,
    fidelity,
    make_scheme,
    pathway_frequency,
    populations,
    propagate,
    recompose,
    synthesize,
    translate,
)

__all__ = [
    "AmplitudeTable",
    "ControlField",
    "EncodingScheme",
    "HamiltonianGraph",
    "PathencError",
    "QuantumSystem",
    "analyze",
    "build_graph",
    "class_amplitude",
    "decompose",
    "extract_spectrum",
    "fidelity",
    "make_scheme",
    "pathway_frequency",
    "populations",
    "propagate",
    "recompose",
    "synthesize",
    "translate",
]
