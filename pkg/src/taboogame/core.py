"""Domain types and scoring rules for the city-guessing game.

Pure logic, no I/O except gameset (de)serialization helpers. A game is a
hidden city plus an ordered list of hints; a transcript records the guesses
made against it and how the game ended. Lower total score is better: a won
game costs the number of guesses it took, a lost game costs a hint-count
penalty plus five.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

import yaml

DEFAULT_DEADLINE_SECONDS = 1200


class GameError(Exception):
    """Base class for domain errors."""


class InvariantViolation(GameError):
    """A value broke one of its declared invariants."""


class GameSetError(GameError):
    """A gameset file failed to parse or validate."""


class Reply(str, Enum):
    """Describer reply vocabulary, plus the timeout terminal marker."""

    YES = "yes"
    NO = "no"
    NO_MORE_HINTS = "no more hints"
    TIMEOUT = "timeout"


class Outcome(str, Enum):
    WON = "won"
    LOST = "lost"


class ScoringPolicy(str, Enum):
    """How a lost game is charged.

    HINTS_PLUS_FIVE charges the hints actually consumed plus five;
    TOTAL_HINTS_PLUS_FIVE charges the game's full hint count plus five.
    Both readings of the published rule are kept because the historical
    leaderboard totals cannot all be reconciled with a single one.
    """

    HINTS_PLUS_FIVE = "hints_plus_five"
    TOTAL_HINTS_PLUS_FIVE = "total_hints_plus_five"


def normalize_city(name: str) -> str:
    """Case-fold, trim, and collapse internal whitespace."""
    return " ".join(name.split()).casefold()


@dataclass(frozen=True)
class Game:
    """One game: a hidden city, its country, and the ordered hint list."""

    id: str
    answer_city: str
    answer_country: str
    hints: tuple[str, ...]
    deadline_seconds: int = DEFAULT_DEADLINE_SECONDS

    def __post_init__(self) -> None:
        if not self.id:
            raise InvariantViolation("game id must be non-empty")
        if not self.answer_city.strip():
            raise InvariantViolation(f"game {self.id}: answer_city must be non-empty")
        if not self.hints:
            raise InvariantViolation(f"game {self.id}: hints must be non-empty")
        if any(not h.strip() for h in self.hints):
            raise InvariantViolation(f"game {self.id}: hints must contain no empty strings")
        if self.deadline_seconds <= 0:
            raise InvariantViolation(f"game {self.id}: deadline_seconds must be positive")
        object.__setattr__(self, "hints", tuple(self.hints))


@dataclass(frozen=True)
class GameSet:
    """An ordered, id-unique collection of games."""

    name: str
    games: tuple[Game, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "games", tuple(self.games))
        seen: set[str] = set()
        for g in self.games:
            if g.id in seen:
                raise InvariantViolation(f"duplicate game id {g.id!r} in gameset {self.name!r}")
            seen.add(g.id)

    def __len__(self) -> int:
        return len(self.games)

    def __iter__(self):
        return iter(self.games)

    def get(self, game_id: str) -> Game | None:
        for g in self.games:
            if g.id == game_id:
                return g
        return None

    def ids(self) -> list[str]:
        return [g.id for g in self.games]


@dataclass(frozen=True)
class TranscriptEvent:
    """One guess: the 0-based index of the hint it answered, and the reply."""

    hint_index: int
    guess: str
    reply: Reply


@dataclass(frozen=True)
class GameTranscript:
    """Ordered record of one played game.

    ``hints_consumed`` counts hints shown to the guesser; ``guesses_made``
    counts guesses submitted. The two are equal unless the game ended by
    timeout or candidate exhaustion, in which case guesses fall short.
    """

    game_id: str
    events: tuple[TranscriptEvent, ...]
    outcome: Outcome
    hints_consumed: int
    guesses_made: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", tuple(self.events))

    def validate(self) -> None:
        if self.guesses_made != len(self.events):
            raise InvariantViolation(
                f"{self.game_id}: guesses_made={self.guesses_made} != {len(self.events)} events"
            )
        if self.guesses_made > self.hints_consumed:
            raise InvariantViolation(
                f"{self.game_id}: more guesses ({self.guesses_made}) than hints shown "
                f"({self.hints_consumed})"
            )
        won = bool(self.events) and self.events[-1].reply is Reply.YES
        if (self.outcome is Outcome.WON) != won:
            raise InvariantViolation(
                f"{self.game_id}: outcome {self.outcome.value} inconsistent with events"
            )
        for e in self.events[:-1]:
            if e.reply is Reply.YES:
                raise InvariantViolation(f"{self.game_id}: YES reply before the final event")


def game_score(
    transcript: GameTranscript,
    total_hints: int,
    policy: ScoringPolicy = ScoringPolicy.HINTS_PLUS_FIVE,
) -> int:
    """Score one game: guesses if won, hint penalty plus five if lost."""
    transcript.validate()
    if transcript.outcome is Outcome.WON:
        return transcript.guesses_made
    if policy is ScoringPolicy.HINTS_PLUS_FIVE:
        return transcript.hints_consumed + 5
    return total_hints + 5


def total_score(
    transcripts: Iterable[GameTranscript],
    gameset: GameSet,
    policy: ScoringPolicy = ScoringPolicy.HINTS_PLUS_FIVE,
) -> int:
    """Sum of per-game scores over a gameset; expects one transcript per game."""
    by_id = {t.game_id: t for t in transcripts}
    expected = set(gameset.ids())
    if set(by_id) != expected:
        missing = sorted(expected - set(by_id))
        extra = sorted(set(by_id) - expected)
        raise GameSetError(f"transcript/gameset mismatch: missing={missing} extra={extra}")
    return sum(
        game_score(by_id[g.id], len(g.hints), policy) for g in gameset
    )


# --- gameset file format -------------------------------------------------
#
# YAML document: {name: str, games: [{id, answer_city, answer_country,
# hints: [str], deadline_seconds?}]}. Formal schema in docs/gameset.schema.json.


def gameset_from_dict(doc: dict) -> GameSet:
    if not isinstance(doc, dict) or "games" not in doc:
        raise GameSetError("gameset document must be a mapping with a 'games' list")
    games = []
    for i, rec in enumerate(doc["games"]):
        try:
            games.append(
                Game(
                    id=str(rec["id"]),
                    answer_city=str(rec["answer_city"]),
                    answer_country=str(rec["answer_country"]),
                    hints=tuple(str(h) for h in rec["hints"]),
                    deadline_seconds=int(rec.get("deadline_seconds", DEFAULT_DEADLINE_SECONDS)),
                )
            )
        except KeyError as exc:
            raise GameSetError(f"game record {i}: missing field {exc}") from exc
        except InvariantViolation as exc:
            raise GameSetError(f"game record {i}: {exc}") from exc
    try:
        return GameSet(name=str(doc.get("name", "unnamed")), games=tuple(games))
    except InvariantViolation as exc:
        raise GameSetError(str(exc)) from exc


def gameset_to_dict(gs: GameSet) -> dict:
    return {
        "name": gs.name,
        "games": [
            {
                "id": g.id,
                "answer_city": g.answer_city,
                "answer_country": g.answer_country,
                "hints": list(g.hints),
                "deadline_seconds": g.deadline_seconds,
            }
            for g in gs
        ],
    }


def load_gameset(path: str | Path) -> GameSet:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise GameSetError(f"cannot read gameset file {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise GameSetError(f"cannot parse gameset file {path}: {exc}") from exc
    return gameset_from_dict(doc)


def save_gameset(gs: GameSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(gameset_to_dict(gs), fh, sort_keys=False, allow_unicode=True)
