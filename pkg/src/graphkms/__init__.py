"""Exact computation of the KMS-weight structure of discrete graph algebras."""

from .boundary import (
    BoundarySpace,
    build_boundary,
    cylinder_members,
    pi_system_partition,
    rho,
    rho_inf,
    shift,
)
from .graphs import (
    Cycle,
    DiscreteGraph,
    EventuallyCyclicPath,
    FinitePath,
    classify_vertices,
    enumerate_paths,
    find_cycles,
    graph_from_json,
    is_principal,
    periodicity_group,
    prefix,
    segment,
)
from .measures import (
    AtomicMeasure,
    Cover,
    DiscreteSpace,
    LocalHomeoPresentation,
    SpaceMap,
    SubsetOfSpace,
    check_locality,
    dirac,
    glue,
    integrate,
    pullback,
    pushforward,
    restrict,
    transfer_apply,
    zero_measure,
)
from .solver import (
    MeasureTower,
    SolutionCone,
    SubInvarianceProblem,
    TransferMatrix,
    build_tower,
    kms_spectrum_exact,
    kms_spectrum_scan,
    pushforward_to_vertices,
    solve_cone,
    transfer_matrix,
    verify_quasi_invariance,
    weight_eval,
)

__version__ = "0.1.0"
