"""cablegraph: combinatorial engine for multi-cable knot diagrams.

Represents n-cable knotted configurations as annotated graphs, classifies
crossings as trivial or non-trivial, rewrites diagrams under straightening,
under-segment removal, and cable-extraction moves, and plans complete
disentangling rollouts with an exhaustive oracle for small instances.
"""

from .analysis import (
    EndpointSelection,
    NodeDeletionTarget,
    TrivialityReport,
    classify_trivial,
    find_node_deletion_target,
    first_nontrivial_undercrossing,
    is_semi_disentangled,
    select_endpoints,
)
from .corpus import (
    CorpusEntry,
    KnotSpec,
    OracleResult,
    add_slack,
    bfs_solve,
    default_corpus_dir,
    generate,
    generate_random,
    gen_braid3,
    gen_carrick,
    gen_carrick3,
    gen_crown,
    gen_fisherman,
    gen_overhand2,
    gen_sheet3,
    gen_sheet_bend,
    gen_square,
    gen_square3,
    gen_twist,
    golden_specs,
    load_golden_corpus,
    replay_witness,
    write_golden_corpus,
)
from .diagram import (
    CableTrace,
    Crossing,
    Diagram,
    Endpoint,
    SegmentRef,
    ValidationReport,
    Violation,
    Visit,
    parse,
    potential,
    serialize,
    trace_cable,
    validate,
)
from .errors import (
    CableGraphError,
    EmptyWorkspaceError,
    InvalidDiagramError,
    MCDParseError,
    MovePreconditionError,
    StaleActionError,
    StuckError,
    UnknownCableError,
    UnknownKnotError,
)
from .moves import (
    Action,
    ActionKind,
    ExtractionTarget,
    NoiseConfig,
    apply_action,
    apply_cable_extraction,
    apply_node_deletion,
    apply_noisy,
    apply_reidemeister,
    spawn_monogon,
)
from .planner import (
    Budget,
    DEFAULT_TIER_BUDGETS,
    Outcome,
    RolloutTrace,
    StatsTable,
    StepRecord,
    TierStats,
    bench,
    format_trace,
    plan_step,
    run,
)

__version__ = "0.1.0"
