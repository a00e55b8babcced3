"""City-guessing game toolkit: describer, zero-shot guesser, and harness."""

from .core import (
    Game,
    GameSet,
    GameTranscript,
    Outcome,
    Reply,
    ScoringPolicy,
    TranscriptEvent,
    game_score,
    load_gameset,
    total_score,
)
from .describer import Describer, DescriberReply
from .gazetteer import Gazetteer, default_gazetteer, load_gazetteer
from .guesser import (
    GuessState,
    HintMode,
    PlayResult,
    ScoreLog,
    StrategyConfig,
    WeightMode,
    build_premise,
    fuse_country,
    play_game,
    rank,
    score_candidates,
    update_weights,
)
from .harness import RunReport, compare_backends, render_leaderboard, run_evaluation
from .scorers import (
    CachedScorer,
    RemoteScorer,
    ScoreRequest,
    ScoreVector,
    TableOracle,
    UniformScorer,
    build_scorer,
    load_table_oracle,
)
from .wire import HttpDescriber, create_app

__version__ = "0.1.0"

__all__ = [
    "Game",
    "GameSet",
    "GameTranscript",
    "Outcome",
    "Reply",
    "ScoringPolicy",
    "TranscriptEvent",
    "game_score",
    "load_gameset",
    "total_score",
    "Describer",
    "DescriberReply",
    "Gazetteer",
    "default_gazetteer",
    "load_gazetteer",
    "GuessState",
    "HintMode",
    "PlayResult",
    "ScoreLog",
    "StrategyConfig",
    "WeightMode",
    "build_premise",
    "fuse_country",
    "play_game",
    "rank",
    "score_candidates",
    "update_weights",
    "RunReport",
    "compare_backends",
    "render_leaderboard",
    "run_evaluation",
    "CachedScorer",
    "RemoteScorer",
    "ScoreRequest",
    "ScoreVector",
    "TableOracle",
    "UniformScorer",
    "build_scorer",
    "load_table_oracle",
    "HttpDescriber",
    "create_app",
    "__version__",
]
