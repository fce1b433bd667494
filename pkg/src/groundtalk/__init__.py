"""Ground natural language referring expressions in scene graphs.

The pipeline parses an expression into a small language graph, prunes the
image graph's relation triplets through an incremental matching cascade,
and, when the expression is ambiguous or wrong, asks the user distinctive
questions until one object (and its bounding box) is grounded.
"""

from .ask import (
    PhraseSignature,
    Question,
    QuestionKind,
    QuestionOption,
    find_node_relation,
    find_relation,
    generate_question,
    render_phrase,
)
from .errors import (
    DanglingEdge,
    DuplicateId,
    EmptyExpression,
    EmptyToken,
    GroundtalkError,
    InvalidAction,
    InvalidOption,
    MalformedCommands,
    MalformedDocument,
    MissingBBox,
    MissingScene,
    ParseError,
    ProviderUnavailable,
    SessionFinished,
    WrongReplyKind,
)
from .evaluate import (
    EvalCommand,
    MetricsReport,
    load_commands,
    oracle_reply,
    run_eval,
)
from .model import (
    BBox,
    ObjectNode,
    RelationEdge,
    SceneGraph,
    dump_scene_graph,
    load_scene_graph,
    load_scene_graph_file,
    normalize_token,
)
from .parse import LanguageGraph, parse_expression, strip_action_prefix
from .reason import (
    Action,
    LanguageEdge,
    MatchOutcome,
    MatchStage,
    incremental_match,
    match_attribute,
    match_node,
    match_object,
    match_predicate,
    match_subject,
)
from .session import (
    SessionState,
    SessionStatus,
    answer,
    snapshot,
    start_session,
)
from .similarity import (
    SimilarityConfig,
    SimilarityProvider,
    build_provider,
    bundled_lexicon_path,
    bundled_vectors_path,
)
from .store import SceneStore

__version__ = "0.1.0"
