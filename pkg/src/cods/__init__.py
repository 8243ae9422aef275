"""cods: Java code generation from predicate-encoded class and state models.

Instead of an explicit transformation rule set, a knowledge base of past
model-to-code examples (mapping blocks) is searched with a particle swarm
for the best block-per-construct assignment, which then drives the
transformation into code predicates and finally into Java source files.
"""

from .errors import (
    CodegenError,
    CodsError,
    KnowledgeBaseError,
    LintWarning,
    PipelineError,
    PredicateSyntaxError,
    ProjectError,
    SearchError,
)
from .javagen import (
    CodegenReport,
    CodegenRow,
    SourceFile,
    check_structure,
    render_files,
    write_codegen_report,
)
from .knowledge import (
    KnowledgeBase,
    MatchKind,
    MatchResult,
    Substitution,
    best_match_in_kb,
    build_kb,
    find_exact_in_block,
    find_nearest_in_kb,
    match_score,
)
from .predicates import (
    Literal,
    MappingBlock,
    MappingEntry,
    ModelConstruct,
    Placeholder,
    Predicate,
    parse_mapping_blocks,
    parse_predicate,
    parse_predicates,
    serialize_mapping_block,
    serialize_mapping_blocks,
    serialize_model,
    serialize_predicate,
)
from .search import (
    Assignment,
    Particle,
    PsoParams,
    SearchOutcome,
    brute_force_oracle,
    fitness,
    greedy_oracle,
    pso_search,
)
from .transform import (
    CodeGroup,
    ConstructOutcome,
    MismatchDetail,
    OutcomeStatus,
    TransformReport,
    groups_from_outcomes,
    read_predicates_file,
    transform_all,
    transform_one,
    write_predicates_file,
    write_transform_report,
)

__version__ = "0.1.0"
