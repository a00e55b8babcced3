"""The describer: serves hints, judges guesses, enforces the deadline.

Replies are drawn from a closed vocabulary: yes, no (with the next hint),
or no more hints. The per-game deadline is checked lazily at guess time so
tests can drive a fake clock; when it has expired the wire reply is still
"no more hints" but the session marks the game as timed out.

One describer instance handles concurrent sessions for different games;
guesses within a single session are strictly serial and overlapping guesses
are rejected rather than interleaved.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import (
    Game,
    GameError,
    GameSet,
    GameTranscript,
    Outcome,
    Reply,
    TranscriptEvent,
    normalize_city,
)


class UnknownGameError(GameError):
    """Game id not present in the loaded gameset."""


class SessionConflictError(GameError):
    """Start requested while an unfinished session exists for the game."""


class NoActiveSessionError(GameError):
    """Guess submitted with no active, unfinished session."""


class ConcurrentGuessError(GameError):
    """Two guesses raced on one session; the loser is rejected."""


@dataclass(frozen=True)
class DescriberReply:
    """One describer response to a guess.

    ``kind`` is YES, NO (carrying the next hint), or NO_MORE_HINTS.
    ``timed_out`` marks replies forced to NO_MORE_HINTS by the deadline.
    """

    kind: Reply
    game_id: str
    hint: Optional[str] = None
    hint_index: Optional[int] = None
    timed_out: bool = False

    def __post_init__(self) -> None:
        if self.kind is Reply.NO and not self.hint:
            raise GameError("NO reply must carry a non-empty hint")
        if self.kind is not Reply.NO and self.hint is not None:
            raise GameError(f"{self.kind.value!r} reply must not carry a hint")


@dataclass
class SessionState:
    """Mutable per-game session bookkeeping."""

    game: Game
    next_hint_index: int = 1  # hints[0] went out at start
    started_at: float = 0.0
    finished: bool = False
    timed_out: bool = False
    events: list[TranscriptEvent] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def hints_shown(self) -> int:
        return self.next_hint_index


class Describer:
    """In-process describer over a loaded gameset."""

    def __init__(self, gameset: GameSet, clock: Callable[[], float] = time.monotonic):
        self.gameset = gameset
        self._clock = clock
        self._sessions: dict[str, SessionState] = {}
        self._registry_lock = threading.Lock()

    def list_games(self) -> list[str]:
        """Ids only; hints and answers are never listed."""
        return self.gameset.ids()

    def start_game(self, game_id: str) -> str:
        """Open a session and return the first hint."""
        game = self.gameset.get(game_id)
        if game is None:
            raise UnknownGameError(f"unknown game id {game_id!r}")
        with self._registry_lock:
            existing = self._sessions.get(game_id)
            if existing is not None and not existing.finished:
                raise SessionConflictError(f"game {game_id!r} already has an active session")
            self._sessions[game_id] = SessionState(game=game, started_at=self._clock())
        return game.hints[0]

    def submit_guess(self, game_id: str, city: str) -> DescriberReply:
        """Judge a guess against the active session for ``game_id``."""
        with self._registry_lock:
            session = self._sessions.get(game_id)
        if session is None or session.finished:
            raise NoActiveSessionError(f"no active session for game {game_id!r}")
        if not session.lock.acquire(blocking=False):
            raise ConcurrentGuessError(f"overlapping guess on game {game_id!r}")
        try:
            return self._judge(session, city)
        finally:
            session.lock.release()

    def _judge(self, session: SessionState, city: str) -> DescriberReply:
        if session.finished:
            raise NoActiveSessionError(f"no active session for game {session.game.id!r}")
        game = session.game
        guessed_hint_index = session.next_hint_index - 1
        expired = self._clock() - session.started_at > game.deadline_seconds

        if normalize_city(city) == normalize_city(game.answer_city):
            session.finished = True
            session.events.append(TranscriptEvent(guessed_hint_index, city, Reply.YES))
            return DescriberReply(kind=Reply.YES, game_id=game.id)

        if expired:
            session.finished = True
            session.timed_out = True
            session.events.append(TranscriptEvent(guessed_hint_index, city, Reply.TIMEOUT))
            return DescriberReply(kind=Reply.NO_MORE_HINTS, game_id=game.id, timed_out=True)

        if session.next_hint_index < len(game.hints):
            hint = game.hints[session.next_hint_index]
            hint_index = session.next_hint_index
            session.next_hint_index += 1
            session.events.append(TranscriptEvent(guessed_hint_index, city, Reply.NO))
            return DescriberReply(
                kind=Reply.NO, game_id=game.id, hint=hint, hint_index=hint_index
            )

        session.finished = True
        session.events.append(TranscriptEvent(guessed_hint_index, city, Reply.NO_MORE_HINTS))
        return DescriberReply(kind=Reply.NO_MORE_HINTS, game_id=game.id)

    def session(self, game_id: str) -> Optional[SessionState]:
        with self._registry_lock:
            return self._sessions.get(game_id)

    def transcript(self, game_id: str) -> GameTranscript:
        """The describer-side transcript of the (finished or live) session."""
        session = self.session(game_id)
        if session is None:
            raise NoActiveSessionError(f"game {game_id!r} was never started")
        events = tuple(session.events)
        won = bool(events) and events[-1].reply is Reply.YES
        return GameTranscript(
            game_id=game_id,
            events=events,
            outcome=Outcome.WON if won else Outcome.LOST,
            hints_consumed=session.hints_shown,
            guesses_made=len(events),
        )
