"""The guessing pipeline: premise templating, scoring, fusion, ranking.

Each round the current hint (or the comma-joined run of hints so far) is
rendered through the "This text is about ..." template and scored against
every remaining candidate city, then against their countries with the same
premise; a city's score and its country's score are added before ranking.
The top-ranked city is guessed; a wrong guess eliminates it for the rest of
the game.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import IO, Optional

from .core import (
    GameError,
    GameTranscript,
    InvariantViolation,
    Outcome,
    Reply,
    TranscriptEvent,
)
from .describer import DescriberReply
from .gazetteer import Gazetteer
from .scorers import ScoreRequest, ScoreVector, ScorerBackend, ScoringError
from .wire import DescriberHandle

log = logging.getLogger(__name__)

PREMISE_TEMPLATE = "This text is about {}"
HINT_JOINER = ", "


class WeightMode(str, Enum):
    INITIALIZE = "initialize"
    ACCUMULATE = "accumulate"


class HintMode(str, Enum):
    INDEPENDENT = "independent"
    CUMULATIVE = "cumulative"


class LoadError(GameError):
    """Could not fetch the game list from the describer."""


class CandidatesExhausted(GameError):
    """Every candidate has been eliminated; the game must be given up."""


@dataclass(frozen=True)
class StrategyConfig:
    """Knobs of one guessing run; defaults mirror the best published setup:
    weights re-initialized each hint, hints aggregated cumulatively, country
    fusion on."""

    weight_mode: WeightMode = WeightMode.INITIALIZE
    hint_mode: HintMode = HintMode.CUMULATIVE
    multi_label: bool = True
    country_fusion: bool = True
    scorer: str = "uniform"

    def as_dict(self) -> dict:
        return {
            "weight_mode": self.weight_mode.value,
            "hint_mode": self.hint_mode.value,
            "multi_label": self.multi_label,
            "country_fusion": self.country_fusion,
            "scorer": self.scorer,
        }


@dataclass(frozen=True)
class GuessState:
    """Per-game guesser state. Eliminated cities leave the weight map for good."""

    game_id: str
    candidate_weights: dict[str, float]
    eliminated: frozenset[str] = frozenset()
    hints_seen: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        overlap = self.eliminated & set(self.candidate_weights)
        if overlap:
            raise InvariantViolation(
                f"eliminated cities still weighted: {sorted(overlap)}"
            )

    @classmethod
    def fresh(cls, game_id: str, candidates: list[str]) -> "GuessState":
        # Every new game starts from all-zero weights.
        return cls(game_id=game_id, candidate_weights={c: 0.0 for c in candidates})

    def candidates(self) -> list[str]:
        return list(self.candidate_weights)


def load_games(describer: DescriberHandle, retries: int = 3,
               backoff_seconds: float = 0.2) -> list[str]:
    """Fetch the game id list; content (hints, answers) is never prefetched."""
    last_exc: Exception | None = None
    for attempt in range(retries):
        try:
            return describer.list_games()
        except Exception as exc:  # wire failures vary by transport
            last_exc = exc
            log.warning("game list fetch failed (attempt %d/%d): %s", attempt + 1, retries, exc)
            if attempt + 1 < retries:
                time.sleep(backoff_seconds * (attempt + 1))
    raise LoadError(f"describer unreachable after {retries} attempts: {last_exc}")


def build_premise(hints_seen: list[str] | tuple[str, ...], hint_mode: HintMode) -> str:
    """Render the hint(s) through the classification template."""
    if not hints_seen:
        raise InvariantViolation("cannot build a premise from zero hints")
    if hint_mode is HintMode.INDEPENDENT:
        return PREMISE_TEMPLATE.format(hints_seen[-1])
    return PREMISE_TEMPLATE.format(HINT_JOINER.join(hints_seen))


def score_candidates(premise: str, candidates: list[str], scorer: ScorerBackend,
                     multi_label: bool) -> ScoreVector:
    """One probability per candidate from the backend; enforces the contract."""
    if not candidates:
        raise CandidatesExhausted("no candidates left to score")
    request = ScoreRequest(premise=premise, labels=tuple(candidates), multi_label=multi_label)
    try:
        vector = scorer.score(request)
    except ScoringError:
        raise
    except Exception as exc:
        raise ScoringError(f"backend failed: {exc}", premise=premise) from exc
    missing = set(candidates) - set(vector)
    if missing:
        raise ScoringError(f"backend omitted {sorted(missing)}", premise=premise)
    if not multi_label:
        vector.check_distribution()
    return vector


def fuse_country(city_scores: ScoreVector, country_scores: ScoreVector,
                 gazetteer: Gazetteer) -> ScoreVector:
    """Add each city's country score onto its own; unresolvable cities add zero."""
    fused: dict[str, float] = {}
    for city, p in city_scores.items():
        country = gazetteer.country_of(city)
        bonus = 0.0
        if country is None:
            log.debug("no country for city %r; fusing 0", city)
        else:
            bonus = country_scores.get(country, 0.0)
        fused[city] = p + bonus
    # Fused values are ranking weights, not probabilities; range [0, 2].
    return FusedVector(fused)


class FusedVector(ScoreVector):
    """ScoreVector with the bound widened to [0, 2] for city+country sums."""

    def __init__(self, entries):
        self._entries = dict(entries)
        for label, v in self._entries.items():
            if not (0.0 <= v <= 2.0):
                raise ScoringError(f"fused weight for {label!r} out of range: {v}")


def update_weights(state: GuessState, new_scores: ScoreVector,
                   weight_mode: WeightMode) -> GuessState:
    """Replace or accumulate the candidate weights with this round's scores."""
    leaked = set(new_scores) & state.eliminated
    if leaked:
        raise InvariantViolation(f"scores for eliminated cities: {sorted(leaked)}")
    unknown = set(new_scores) - set(state.candidate_weights)
    if unknown:
        raise InvariantViolation(f"scores for unknown candidates: {sorted(unknown)}")
    if weight_mode is WeightMode.INITIALIZE:
        weights = {c: float(new_scores.get(c, 0.0)) for c in state.candidate_weights}
    else:
        weights = {
            c: w + float(new_scores.get(c, 0.0))
            for c, w in state.candidate_weights.items()
        }
    return replace(state, candidate_weights=weights)


def rank(state: GuessState) -> list[tuple[str, float]]:
    """Candidates by descending weight; ties broken by ascending city name."""
    if not state.candidate_weights:
        raise CandidatesExhausted(f"game {state.game_id!r}: all candidates eliminated")
    return sorted(state.candidate_weights.items(), key=lambda kv: (-kv[1], kv[0]))


def eliminate(state: GuessState, city: str) -> GuessState:
    """Drop a wrongly guessed city and its weight for the rest of the game."""
    if city not in state.candidate_weights:
        raise InvariantViolation(f"cannot eliminate unknown candidate {city!r}")
    weights = {c: w for c, w in state.candidate_weights.items() if c != city}
    return replace(
        state, candidate_weights=weights, eliminated=state.eliminated | {city}
    )


class ScoreLog:
    """Append-only per-guess log: ``game, hint, Flag`` with 0-based indexes."""

    def __init__(self, stream: Optional[IO[str]] = None):
        self._stream = stream
        self.lines: list[str] = []

    def record(self, game_index: int, hint_index: int, successful: bool) -> None:
        flag = "successful" if successful else "unsuccessful"
        line = f"{game_index}, {hint_index}, {flag}"
        self.lines.append(line)
        if self._stream is not None:
            self._stream.write(line + "\n")
            self._stream.flush()

    @classmethod
    def to_file(cls, path: str | Path) -> "ScoreLog":
        return cls(stream=open(path, "a", encoding="utf-8"))


@dataclass(frozen=True)
class RoundRecord:
    """Everything that went into one guess, for replay checks."""

    hint_index: int
    premise: str
    city_scores: ScoreVector
    country_scores: Optional[ScoreVector]
    fused_scores: ScoreVector
    weights_after: dict[str, float]
    guess: str
    reply: Reply


@dataclass(frozen=True)
class PlayResult:
    transcript: GameTranscript
    rounds: tuple[RoundRecord, ...]

    @property
    def won(self) -> bool:
        return self.transcript.outcome is Outcome.WON


def play_game(
    game_id: str,
    describer: DescriberHandle,
    config: StrategyConfig,
    scorer: ScorerBackend,
    candidate_universe: list[str],
    gazetteer: Gazetteer,
    score_log: Optional[ScoreLog] = None,
    game_index: int = 0,
) -> PlayResult:
    """Play one full game and return its transcript plus round records."""
    if not candidate_universe:
        raise InvariantViolation("candidate universe must be non-empty")

    events: list[TranscriptEvent] = []
    rounds: list[RoundRecord] = []

    def finish(outcome: Outcome, hints_consumed: int) -> PlayResult:
        transcript = GameTranscript(
            game_id=game_id,
            events=tuple(events),
            outcome=outcome,
            hints_consumed=hints_consumed,
            guesses_made=len(events),
        )
        transcript.validate()
        return PlayResult(transcript=transcript, rounds=tuple(rounds))

    try:
        first_hint = describer.start_game(game_id)
    except Exception as exc:
        log.error("game %s: start failed: %s", game_id, exc)
        return finish(Outcome.LOST, hints_consumed=0)

    state = GuessState.fresh(game_id, candidate_universe)
    state = replace(state, hints_seen=(first_hint,))

    while True:
        hint_index = len(state.hints_seen) - 1
        premise = build_premise(state.hints_seen, config.hint_mode)
        candidates = state.candidates()
        if not candidates:
            # Nothing left to guess: give the game up as lost.
            log.info("game %s: candidates exhausted after %d hints", game_id, hint_index + 1)
            return finish(Outcome.LOST, hints_consumed=len(state.hints_seen))

        city_scores = score_candidates(premise, candidates, scorer, config.multi_label)
        country_scores: Optional[ScoreVector] = None
        fused = city_scores
        if config.country_fusion:
            countries = sorted(
                {c for c in (gazetteer.country_of(city) for city in candidates) if c}
            )
            if countries:
                country_scores = score_candidates(
                    premise, countries, scorer, config.multi_label
                )
                fused = fuse_country(city_scores, country_scores, gazetteer)

        state = update_weights(state, fused, config.weight_mode)
        guess = rank(state)[0][0]

        try:
            reply: DescriberReply = describer.submit_guess(game_id, guess)
        except Exception as exc:
            log.error("game %s: guess failed: %s", game_id, exc)
            events.append(TranscriptEvent(hint_index, guess, Reply.TIMEOUT))
            if score_log:
                score_log.record(game_index, hint_index, successful=False)
            return finish(Outcome.LOST, hints_consumed=len(state.hints_seen))

        successful = reply.kind is Reply.YES
        if score_log:
            score_log.record(game_index, hint_index, successful=successful)

        if successful:
            recorded = Reply.YES
        elif reply.kind is Reply.NO_MORE_HINTS:
            recorded = Reply.TIMEOUT if reply.timed_out else Reply.NO_MORE_HINTS
        else:
            recorded = Reply.NO
        events.append(TranscriptEvent(hint_index, guess, recorded))
        rounds.append(
            RoundRecord(
                hint_index=hint_index,
                premise=premise,
                city_scores=city_scores,
                country_scores=country_scores,
                fused_scores=fused,
                weights_after=dict(state.candidate_weights),
                guess=guess,
                reply=recorded,
            )
        )

        if reply.kind is Reply.YES:
            return finish(Outcome.WON, hints_consumed=len(state.hints_seen))
        if reply.kind is Reply.NO_MORE_HINTS:
            return finish(Outcome.LOST, hints_consumed=len(state.hints_seen))

        state = eliminate(state, guess)
        assert reply.hint is not None
        state = replace(state, hints_seen=state.hints_seen + (reply.hint,))
