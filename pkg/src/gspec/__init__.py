"""Closure orders of tilted hearts over finite prime-spectrum posets."""

from .filtration import (
    FiltrationWarning,
    NotCodimensionFunction,
    NotDescending,
    NotSpecializationClosed,
    SpFiltration,
    classify,
    codim_filtration,
    f_to_filtration,
    filtration_to_f,
    height_filtration,
    validate_filtration,
)
from .mutation import (
    POLICIES,
    POLICY_ASSUME_COHERENT,
    POLICY_ASSUME_NONCOHERENT,
    POLICY_ERROR,
    BoundedOrder,
    ClosureOrder,
    MutationStep,
    NotClosed,
    NotDiscrete,
    UndeterminedCoherence,
    chain_order,
    exact_bounds,
    final_order,
    mutate_discrete,
    mutate_general,
    mutate_perfect,
    onestep_order,
    standard_order,
    theta_map,
)
from .poset import (
    AxiomReport,
    CbFiltration,
    CycleError,
    Order,
    SizeExceeded,
    UnknownElement,
    build_order,
    cb_filtration,
    check_axioms,
    covering_pairs,
    enumerate_closed_sets,
    longest_chain,
    upper_sets,
)
from .spectra import (
    COHERENT,
    NOT_COHERENT,
    PRESET_NAMES,
    UNDETERMINED,
    AnnotationKeyError,
    CoherenceVerdict,
    NotComparable,
    PrimePoset,
    SchemaError,
    UnknownPreset,
    load_prime_poset,
    preset,
)
from .verify import (
    ElementMismatch,
    PropertyReport,
    brute_force_discrete_law,
    brute_force_perfect_law,
    check_piecewise,
    check_refinement,
    run_suite,
)

__all__ = [name for name in dir() if not name.startswith("_")]
