"""Stable partnerships on capacitated graphs with substitutable choices."""

from .core import (
    BudgetError,
    EdgeSpace,
    EdgeVector,
    InputError,
    Instance,
    InternalError,
    VerificationError,
    instance_from_dict,
    instance_to_dict,
    parse_instance,
    serialize_instance,
    vector_op,
)
from .choice import (
    AxiomReport,
    ChoiceFunction,
    LinearOrderQuotaCF,
    RenamedCF,
    TableCF,
    check_axiom,
    is_acceptable,
    is_interesting,
    prefers,
)
from .bipartite import (
    Rotation,
    Route,
    RouteStep,
    StabilityReport,
    apply_rotation,
    build_full_route,
    deferred_acceptance,
    find_rotations,
    is_stable,
    max_feasible_weight,
    precedes_F,
    precedes_W,
)
from .brute import enumerate_stable, immediate_successors, lattice_extremes
from .poset import (
    ClosedFunction,
    Occurrence,
    RotationOrder,
    WeightedRotationFamily,
    closed_from_vector,
    family_from_route,
    full_routes,
    is_closed,
    principal_graph,
    rotation_order,
    vector_from_closed,
)
from .symmetric import (
    QBOutcome,
    SymmetricInstance,
    is_singular,
    mirror_occurrences,
    reflect,
    run_qb,
    symmetrize,
)
from .solver import (
    HalfPartnership,
    OddCycle,
    SolveResult,
    VertexContext,
    cycle_rotation,
    lift_vector,
    project_cycle,
    project_solution,
    solve,
    verify_half_partnership,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
