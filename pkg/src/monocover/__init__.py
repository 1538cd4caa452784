"""Covering edge-coloured graphs by monochromatic paths of few colours."""

from .constructions import (
    ConstructionOutput,
    construct_case1,
    construct_case2,
    construct_case3,
    construct_lower_bound,
    johnson,
)
from .engine import (
    EngineConfig,
    EngineTrace,
    baseline_cover,
    balanced_hyperedge,
    cover_few_colours,
    exclusive_cover_set,
    filter_colours,
    potential,
    removable_batch,
)
from .graph import (
    ColouredGraph,
    CoverReport,
    Covering,
    MonoPiece,
    build_graph,
    colour_profile,
    independence_number,
    validate_covering,
)
from .kneser import KneserHypergraph, build_kneser, chi_exact, chi_formula, proper_colouring
from .oracle import enumerate_mono_paths, min_cover_exact

__version__ = "0.1.0"
