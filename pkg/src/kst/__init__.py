"""Knowledge space toolkit: structures, learning-space checks, bases and
atoms, projections, learning strings, belief-based adaptive assessment,
query-driven space construction, and a small HTTP session service."""

from .errors import KstError
from .structures import (
    Domain,
    FringePair,
    KnowledgeStructure,
    PropertyFlags,
    build_structure,
    check_l1_l2,
    classify,
    covering_diagram,
    fringes,
    state_from_fringes,
)
from .base_surmise import (
    QuasiOrder,
    SurmiseMap,
    atoms_at,
    base,
    quasi_order_to_space,
    space_from_attribution,
    space_to_quasi_order,
    span,
    surmise_function,
)
from .projection import children, partition_classes, project
from .strings import (
    check_string_axioms,
    check_word_axioms,
    encode_space_from_strings,
    greedy_string_cover,
    is_learning_word,
    learning_strings,
)
from .probabilistic import (
    ResponseParams,
    StateDistribution,
    extend_distribution,
    project_distribution,
    uniform_distribution,
)
from .assessment import (
    BeliefState,
    Responder,
    StopRule,
    choose_final_state,
    extra_problem_metrics,
    make_responder,
    parallel_assessment,
    run_assessment,
    select_question,
    simulate_response,
    update_distribution,
)
from .builder import (
    QueryOracle,
    QueryRelation,
    adapted_guard,
    adapted_query_run,
    adjusted_query_run,
    all_negative_oracle,
    block1_build,
    data_oracle_from_transcripts,
    entailed_space,
    gradations,
    hanging_states,
    largest_learning_subspace,
    removal_set,
    scripted_oracle,
    space_to_entailment,
    truthful_oracle,
)
from .io_service import load_space, save_space, summarize_space

__version__ = "0.1.0"
