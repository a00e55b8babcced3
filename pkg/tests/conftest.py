import random

import pytest

from taboogame.core import (
    Game,
    GameSet,
    GameTranscript,
    Outcome,
    Reply,
    TranscriptEvent,
)
from taboogame.gazetteer import Gazetteer, GazetteerEntry
from taboogame.scorers import TableOracle


@pytest.fixture
def demo_game() -> Game:
    return Game(
        id="g1",
        answer_city="Dundee",
        answer_country="UK",
        hints=("tea", "whiskey", "kilt", "crocodile"),
    )


@pytest.fixture
def demo_gameset(demo_game) -> GameSet:
    athens = Game(
        id="g2",
        answer_city="Athens",
        answer_country="Greece",
        hints=("olives", "philosophy"),
    )
    return GameSet(name="demo", games=(demo_game, athens))


@pytest.fixture
def small_gazetteer() -> Gazetteer:
    return Gazetteer(
        [
            GazetteerEntry("Dundee", "UK"),
            GazetteerEntry("Glasgow", "UK"),
            GazetteerEntry("Athens", "Greece", aliases=("Athína",)),
            GazetteerEntry("Cairo", "Egypt", population=20_484_965),
        ]
    )


@pytest.fixture
def demo_oracle() -> TableOracle:
    # Values from the worked single-hint example: city scores plus their
    # countries under the same premise.
    return TableOracle(
        {
            ("tea", "Dundee"): 0.05485,
            ("tea", "Athens"): 0.0029,
            ("tea", "UK"): 0.30,
            ("tea", "Greece"): 0.10,
            ("olives", "Athens"): 0.8,
            ("olives", "Dundee"): 0.01,
            ("olives", "Greece"): 0.5,
            ("olives", "UK"): 0.02,
        }
    )


def make_transcript(
    game_id: str,
    won: bool,
    guesses: int,
    hints_consumed: int | None = None,
    timeout: bool = False,
    giveup: bool = False,
) -> GameTranscript:
    """Build a well-formed synthetic transcript."""
    if hints_consumed is None:
        hints_consumed = guesses
    events = []
    for i in range(guesses):
        last = i == guesses - 1
        if last and won:
            reply = Reply.YES
        elif last and giveup:
            reply = Reply.NO
        elif last and timeout:
            reply = Reply.TIMEOUT
        elif last:
            reply = Reply.NO_MORE_HINTS
        else:
            reply = Reply.NO
        events.append(TranscriptEvent(i, f"city{i}", reply))
    return GameTranscript(
        game_id=game_id,
        events=tuple(events),
        outcome=Outcome.WON if won else Outcome.LOST,
        hints_consumed=hints_consumed,
        guesses_made=guesses,
    )


def random_run(rng: random.Random, n_games: int) -> tuple[GameSet, list[GameTranscript]]:
    """A random gameset together with consistent random transcripts."""
    games = []
    transcripts = []
    for i in range(n_games):
        n_hints = rng.randint(1, 8)
        game = Game(
            id=f"game{i}",
            answer_city=f"city-{i}",
            answer_country=f"country-{i}",
            hints=tuple(f"hint-{i}-{j}" for j in range(n_hints)),
        )
        games.append(game)
        won = rng.random() < 0.5
        if won:
            guesses = rng.randint(1, n_hints)
            transcripts.append(make_transcript(game.id, True, guesses))
        else:
            kind = rng.choice(["exhausted", "timeout", "giveup"])
            if kind == "exhausted":
                transcripts.append(make_transcript(game.id, False, n_hints))
            elif kind == "timeout":
                guesses = rng.randint(1, n_hints)
                transcripts.append(make_transcript(game.id, False, guesses, timeout=True))
            else:
                # Guesser stopped early: hints shown exceed guesses made.
                consumed = rng.randint(1, n_hints)
                guesses = rng.randint(0, consumed)
                t = make_transcript(game.id, False, guesses, hints_consumed=consumed,
                                    giveup=True)
                transcripts.append(t)
    return GameSet(name="random", games=tuple(games)), transcripts
