"""Learning-space (antimatroid) toolkit.

Build spaces from partial orders or learning sequences, enumerate their
states, find minimal sequence representations and dimensions, adapt them
by adding or removing states, and run Bayesian knowledge assessments.
"""

from .core import (
    CapacityError,
    Domain,
    LspaceError,
    ParseError,
    SetFamily,
    State,
    ValidationError,
    is_accessible,
    is_learning_space,
    is_union_closed,
    parse_states,
    powerset_family,
    serialize_states,
    state_fringes_bruteforce,
)
from .quasi_ordinal import (
    HasseDiagram,
    PartialOrder,
    concept_distance,
    enumerate_lower_sets,
    fringe_qos,
    is_lower_set,
    lower_set_family,
    order_from_hasse,
    parse_hasse,
    restrict,
    serialize_hasse,
    topological_order,
    transitive_reduction,
)
from .sequence_space import (
    MexBitState,
    SequenceSpace,
    contains,
    enumerate_states,
    family,
    fringes,
    mex,
    new_sequence_space,
    parse_seqs,
    predecessor,
    project,
    serialize_seqs,
    successors,
    union_via_mex,
    up,
)
from .base_dimension import (
    BaseFamily,
    ChainCover,
    DimensionReport,
    base_of_family,
    base_of_sequences,
    chain_cover,
    dimensions,
    enumerate_basic_words,
    extend_chain_to_sequence,
    is_join_of_two_hierarchies,
    minimize,
)
from .adaptation import (
    SpaceFringe,
    add_state,
    remove_state,
    space_fringe,
    space_inner_fringe,
    space_outer_fringe,
)
from .assessment import (
    AssessmentConfig,
    AssessmentError,
    AssessmentResult,
    Marginals,
    ProjectionAssessment,
    ResponseLog,
    ResponseModel,
    answer_term,
    assess,
    augment_with_random_sample,
    run_projection_assessment,
    select_question,
    simulated_student,
)
from .fibers_algebra import (
    AntimatroidRepresentation,
    ElementClasses,
    GeneratorFamily,
    QuasiOrdinalRepresentation,
    SemilatticeTable,
    classify_elements,
    closure_membership,
    fiber,
    has_separated_equalizers,
    is_safe,
    join,
    parse_semilattice,
    recognize_upper_subfamily,
    serialize_semilattice,
    to_antimatroid,
    to_quasi_ordinal,
    union_semilattice,
)

__version__ = "0.1.0"
