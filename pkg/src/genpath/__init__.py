"""Chains of antiregular graphs that stay single-input Laplacian controllable."""

from .graph_core import (
    BlockLayout,
    ControlSetup,
    DegreeSequence,
    Graph,
    append_vertex,
    build_antiregular,
    build_generalized_path,
    build_path,
    conjugate,
    degree_sequence,
    diameter,
    interconnect_antiregular,
    is_graphical,
    is_threshold,
    laplacian,
    max_degree,
    trace_of,
)
from .spectral import SpectralDecomposition, TheoremReport, eigh
from .control import (
    gramian,
    kalman_rank_oracle,
    min_energy_control,
    pbh_controllable,
    simulate_autonomous,
    verify_append_vertex,
)

__all__ = [
    "BlockLayout",
    "ControlSetup",
    "DegreeSequence",
    "Graph",
    "SpectralDecomposition",
    "TheoremReport",
    "append_vertex",
    "build_antiregular",
    "build_generalized_path",
    "build_path",
    "conjugate",
    "degree_sequence",
    "diameter",
    "eigh",
    "gramian",
    "interconnect_antiregular",
    "is_graphical",
    "is_threshold",
    "kalman_rank_oracle",
    "laplacian",
    "max_degree",
    "min_energy_control",
    "pbh_controllable",
    "simulate_autonomous",
    "trace_of",
    "verify_append_vertex",
]

__version__ = "0.1.0"
