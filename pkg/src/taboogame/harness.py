"""Evaluation harness: full runs over a gameset, leaderboards, comparisons.

A run plays every game once, aggregates wins/guesses/score, and writes a
human-readable leaderboard row plus machine-readable artifacts (report JSON,
per-game transcripts, the per-guess score log). Given a deterministic
backend the whole report is reproducible byte for byte, timestamps aside.
"""

from __future__ import annotations

import concurrent.futures
import json
import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .core import (
    GameSet,
    GameTranscript,
    Outcome,
    Reply,
    ScoringPolicy,
    TranscriptEvent,
    load_gameset,
    total_score,
)
from .describer import Describer
from .gazetteer import Gazetteer, default_gazetteer
from .guesser import PlayResult, ScoreLog, StrategyConfig, play_game
from .scorers import ScorerBackend, build_scorer
from .wire import DescriberHandle

log = logging.getLogger(__name__)


@dataclass
class RunReport:
    """Aggregate result of one evaluation run."""

    gameset_name: str
    config: dict
    transcripts: list[GameTranscript]
    games_played: int
    games_won: int
    win_rate: float
    total_guesses: int
    total_score: int
    wall_time_seconds: float
    policy: ScoringPolicy = ScoringPolicy.HINTS_PLUS_FIVE

    def leaderboard_row(self, label: str = "run") -> dict:
        return {
            "team": label,
            "games_won": self.games_won,
            "win_rate_pct": round(100.0 * self.win_rate),
            "guesses": self.total_guesses,
            "score": self.total_score,
        }

    def to_dict(self, include_wall_time: bool = True) -> dict:
        doc = {
            "gameset": self.gameset_name,
            "config": self.config,
            "policy": self.policy.value,
            "games_played": self.games_played,
            "games_won": self.games_won,
            "win_rate": self.win_rate,
            "total_guesses": self.total_guesses,
            "total_score": self.total_score,
            "transcripts": [_transcript_to_dict(t) for t in self.transcripts],
        }
        if include_wall_time:
            doc["wall_time_seconds"] = self.wall_time_seconds
        return doc


def _transcript_to_dict(t: GameTranscript) -> dict:
    return {
        "game_id": t.game_id,
        "outcome": t.outcome.value,
        "hints_consumed": t.hints_consumed,
        "guesses_made": t.guesses_made,
        "events": [
            {"hint_index": e.hint_index, "guess": e.guess, "reply": e.reply.value}
            for e in t.events
        ],
    }


def transcript_from_dict(doc: dict) -> GameTranscript:
    return GameTranscript(
        game_id=doc["game_id"],
        events=tuple(
            TranscriptEvent(e["hint_index"], e["guess"], Reply(e["reply"]))
            for e in doc["events"]
        ),
        outcome=Outcome(doc["outcome"]),
        hints_consumed=doc["hints_consumed"],
        guesses_made=doc["guesses_made"],
    )


def aggregate(
    gameset: GameSet,
    results: Sequence[PlayResult],
    config: StrategyConfig,
    wall_time_seconds: float,
    policy: ScoringPolicy = ScoringPolicy.HINTS_PLUS_FIVE,
) -> RunReport:
    transcripts = [r.transcript for r in results]
    won = sum(1 for t in transcripts if t.outcome is Outcome.WON)
    played = len(transcripts)
    return RunReport(
        gameset_name=gameset.name,
        config=config.as_dict(),
        transcripts=transcripts,
        games_played=played,
        games_won=won,
        win_rate=(won / played) if played else 0.0,
        total_guesses=sum(t.guesses_made for t in transcripts),
        total_score=total_score(transcripts, gameset, policy),
        wall_time_seconds=wall_time_seconds,
        policy=policy,
    )


def run_evaluation(
    gameset: GameSet | str | Path,
    config: StrategyConfig,
    describer: Optional[DescriberHandle] = None,
    scorer: Optional[ScorerBackend] = None,
    gazetteer: Optional[Gazetteer] = None,
    out_dir: Optional[str | Path] = None,
    workers: int = 1,
    policy: ScoringPolicy = ScoringPolicy.HINTS_PLUS_FIVE,
) -> RunReport:
    """Play every game in the set once and aggregate the results.

    With no explicit describer an in-process one is spun up over the
    gameset. Parallelism across games is opt-in via ``workers``; a single
    game is always sequential.
    """
    if not isinstance(gameset, GameSet):
        gameset = load_gameset(gameset)
    if describer is None:
        describer = Describer(gameset)
    if scorer is None:
        scorer = build_scorer(config.scorer)
    if gazetteer is None:
        gazetteer = default_gazetteer()
    universe = gazetteer.cities()

    out_path = Path(out_dir) if out_dir else None
    if out_path:
        out_path.mkdir(parents=True, exist_ok=True)
    score_log = ScoreLog.to_file(out_path / "score_log.txt") if out_path else ScoreLog()

    game_ids = gameset.ids()
    started = time.monotonic()

    def play_one(index_and_id: tuple[int, str]) -> PlayResult:
        index, game_id = index_and_id
        return play_game(
            game_id,
            describer,
            config,
            scorer,
            universe,
            gazetteer,
            score_log=score_log,
            game_index=index,
        )

    try:
        if workers > 1:
            with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(play_one, enumerate(game_ids)))
        else:
            results = [play_one(item) for item in enumerate(game_ids)]
    except Exception:
        # Persist whatever finished before re-raising.
        if out_path and score_log.lines:
            log.error("evaluation aborted; partial score log kept at %s", out_path)
        raise

    wall = time.monotonic() - started
    report = aggregate(gameset, results, config, wall, policy)

    if out_path:
        with open(out_path / "report.json", "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        with open(out_path / "leaderboard.txt", "w", encoding="utf-8") as fh:
            fh.write(render_leaderboard([("run", report)]) + "\n")
    return report


def render_leaderboard(rows: Sequence[tuple[str, Optional[RunReport]]]) -> str:
    """Text table in the published leaderboard shape: team, wins, guesses, score."""
    header = f"{'Team':<28} {'Games Won':>14} {'Guesses':>8} {'Score':>6}"
    lines = [header, "-" * len(header)]
    for label, report in rows:
        if report is None:
            lines.append(f"{label:<28} {'FAILED':>14} {'-':>8} {'-':>6}")
            continue
        won = f"{report.games_won} ({round(100 * report.win_rate)}%)"
        lines.append(
            f"{label:<28} {won:>14} {report.total_guesses:>8} {report.total_score:>6}"
        )
    return "\n".join(lines)


def compare_backends(
    gameset: GameSet | str | Path,
    configs: Sequence[tuple[str, StrategyConfig]],
    gazetteer: Optional[Gazetteer] = None,
    policy: ScoringPolicy = ScoringPolicy.HINTS_PLUS_FIVE,
    out_dir: Optional[str | Path] = None,
) -> list[tuple[str, Optional[RunReport]]]:
    """One run per labeled config; rows sorted by games won descending.

    A failed run yields a row marked failed without aborting the others.
    """
    if not isinstance(gameset, GameSet):
        gameset = load_gameset(gameset)
    rows: list[tuple[str, Optional[RunReport]]] = []
    for i, (label, config) in enumerate(configs):
        sub_dir = Path(out_dir) / f"run_{i:02d}_{label}" if out_dir else None
        try:
            # A fresh describer per run: sessions are single-use per game.
            report = run_evaluation(
                gameset, config, describer=Describer(gameset),
                gazetteer=gazetteer, policy=policy, out_dir=sub_dir,
            )
            rows.append((label, report))
        except Exception as exc:
            log.error("run %r failed: %s", label, exc)
            rows.append((label, None))
    rows.sort(key=lambda row: (-(row[1].games_won if row[1] else -1), row[0]))
    if out_dir:
        with open(Path(out_dir) / "comparison.txt", "w", encoding="utf-8") as fh:
            fh.write(render_leaderboard(rows) + "\n")
    return rows
