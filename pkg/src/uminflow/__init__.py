"""Exact invariant measures on countable total orders, universal structures,
finite-level randomness tests, and effective back-and-forth isomorphisms."""

from .orders import (
    And,
    Atom,
    EventExpr,
    FiniteOrder,
    Not,
    Or,
    OrderPrefix,
    ParseError,
    PartialPermutation,
    act,
    act_on_event,
    evaluate,
    parse_event,
    print_event,
    relabel_event,
    support,
)
from .measure import (
    CapExceededError,
    DyadicApprox,
    FinitePoset,
    adjacency_event,
    linear_extension_count,
    mu_adjacency,
    mu_cylinder,
    mu_exact,
    mu_weight_exact,
    mu_weight_recursive,
)
from .fraisse import (
    DensityReport,
    ExtensionAudit,
    GraphPresentation,
    OrderPresentation,
    PosetStage,
    SearchBudgetError,
    back_and_forth,
    check_density,
    poset_canon_presentation,
    poset_extension_audit,
    rado_adjacent,
    rado_extension_witness,
    rado_presentation,
    rational_order_less,
    rational_presentation,
    rational_presentation_variant,
    rational_value,
    universal_poset_stage,
)
from .sampler import (
    FamilyVerdict,
    GraphPrefix,
    MLLevelUnavailable,
    MLTestFamily,
    PresentationOrderSource,
    RandomOrderStream,
    TestLevel,
    bits_from_graph,
    density_test_family,
    graph_extension_witness,
    graph_from_bits,
    pair_code,
    poset_extension_test,
    poset_level_measure,
    poset_test_family,
    run_ml_tests,
    sample_bits,
    sample_prefix,
    unbounded_test_family,
)
from .randomizer import (
    ObstructionReport,
    RandomizerCertificate,
    compute_randomizer,
    conjugation_check,
    poset_automorphism_obstruction,
    stage_automorphisms,
    verify_certificate,
)

__version__ = "0.1.0"
