"""Symplectic graphs over F_2, Godsil-McKay switching, and triple invariants."""

__version__ = "0.1.0"

from .gf2 import BitVector, Gf2Matrix, pair_swap, rank, solve_affine, symp_form
from .graph import (
    SympGraph,
    build_symplectic,
    common_neighbors,
    edge_difference,
    verify_srg,
)
from .graph6 import graph6_decode, graph6_encode
from .orbits import (
    SpecialQuadruple,
    VertexPartition,
    ah_partition,
    canonical_quadruple,
    classify_E,
    classify_S,
    generate_autE_group,
    orbit_closure,
    orbit_partition_E,
    orbit_partition_S,
)
from .switching import apply_switch, build_variant, find_gm_cells, is_equitable
from .triples import (
    predict_switched_count,
    scan_min_nonzero,
    table52_expected,
    triple_count,
)
