"""Welded solid codes: construction, welding and energy barriers of CSS codes."""
from __future__ import annotations

from .barrier import (
    BarrierResult,
    ErrorPath,
    IsingGraph,
    barrier_bounds,
    defect_walk_path,
    exact_barrier,
    ising_exact_barrier,
    ising_projection_lower_bound,
    membrane_growth_path,
    path_peak,
    scaling_sweep,
    welded_traversal_path,
)
from .builders import (
    SolidSpec,
    WeldGraph,
    build_cubic_lattice,
    build_repetition,
    build_solid,
    build_three_weld,
    build_welded_lattice,
    cubic_weld_graph,
)
from .css import (
    Classification,
    CssCode,
    CssOperator,
    Pauli,
    classify,
    commutation_audit,
    defect_energy,
    encoded_qubits,
    min_weight_logical,
    restrict,
    syndrome,
)
from .welding import (
    WeldIdentification,
    check_independent_on_weld,
    check_well_matched,
    encoded_count_formula,
    verify_locality_corollary,
    weld_pair,
)

__version__ = "0.1.0"

__all__ = [
    "BarrierResult",
    "Classification",
    "CssCode",
    "CssOperator",
    "ErrorPath",
    "IsingGraph",
    "Pauli",
    "SolidSpec",
    "WeldGraph",
    "WeldIdentification",
    "barrier_bounds",
    "build_cubic_lattice",
    "build_repetition",
    "build_solid",
    "build_three_weld",
    "build_welded_lattice",
    "check_independent_on_weld",
    "check_well_matched",
    "classify",
    "commutation_audit",
    "cubic_weld_graph",
    "defect_energy",
    "defect_walk_path",
    "encoded_count_formula",
    "encoded_qubits",
    "exact_barrier",
    "ising_exact_barrier",
    "ising_projection_lower_bound",
    "membrane_growth_path",
    "min_weight_logical",
    "path_peak",
    "restrict",
    "scaling_sweep",
    "syndrome",
    "verify_locality_corollary",
    "weld_pair",
    "welded_traversal_path",
]
