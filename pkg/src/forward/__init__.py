from .boundary import BoundaryFunction, from_knot_values, mode_orders
from .disk import DiskEigenvalueReport, detect_disk_eigenvalue
from .green import (
    DiskGreenTraces,
    GreenFunction,
    psi_test_trace,
    psi_tilde_prime_test_trace,
    psi_tilde_test_trace,
    tilde_green_function,
    tilde_prime_green_function,
    u0_interior_value,
    u0_series_value,
)
from .scenario import (
    DirichletObstacle,
    EmptyObject,
    ImpedanceObstacle,
    InteriorObject,
    NeumannObstacle,
    PenetrableDisk,
    Resolution,
    Scenario,
    object_from_dict,
    scenario_hash,
)
from .solver import BoundarySolver, DtnMatrix, assemble_dtn, dtn_empty_disk, solve_forward
from .storage import load_cauchy_data, load_dtn_matrix, save_cauchy_data, save_dtn_matrix
from .synthesis import (
    CauchyData,
    EmptyDiskReference,
    ImpedanceHatReference,
    MediumHatReference,
    ReferenceKind,
    synthesize_cauchy_data,
    u0_reference_trace,
)

__all__ = [
    "BoundaryFunction", "from_knot_values", "mode_orders",
    "DiskEigenvalueReport", "detect_disk_eigenvalue",
    "DiskGreenTraces", "GreenFunction", "psi_test_trace", "psi_tilde_prime_test_trace",
    "psi_tilde_test_trace", "tilde_green_function", "tilde_prime_green_function",
    "u0_interior_value", "u0_series_value",
    "DirichletObstacle", "EmptyObject", "ImpedanceObstacle", "InteriorObject",
    "NeumannObstacle", "PenetrableDisk", "Resolution", "Scenario", "object_from_dict",
    "scenario_hash",
    "BoundarySolver", "DtnMatrix", "assemble_dtn", "dtn_empty_disk", "solve_forward",
    "load_cauchy_data", "load_dtn_matrix", "save_cauchy_data", "save_dtn_matrix",
    "CauchyData", "EmptyDiskReference", "ImpedanceHatReference", "MediumHatReference",
    "ReferenceKind", "synthesize_cauchy_data", "u0_reference_trace",
]
