"""Command-line entry points: serve, play, eval, compare."""

from __future__ import annotations

import json
import logging
import random
import sys

import click

from .core import ScoringPolicy, load_gameset
from .describer import Describer
from .gazetteer import default_gazetteer, load_gazetteer
from .guesser import HintMode, ScoreLog, StrategyConfig, WeightMode, play_game
from .harness import compare_backends, render_leaderboard, run_evaluation
from .scorers import build_scorer
from .wire import HttpDescriber, create_app

NLI_ENDPOINT_ENVVAR = "TABOO_NLI_ENDPOINT"


def _strategy_options(fn):
    fn = click.option("--weight-mode", type=click.Choice([m.value for m in WeightMode]),
                      default=WeightMode.INITIALIZE.value, show_default=True)(fn)
    fn = click.option("--hint-mode", type=click.Choice([m.value for m in HintMode]),
                      default=HintMode.CUMULATIVE.value, show_default=True)(fn)
    fn = click.option("--multi-label/--single-label", default=True, show_default=True)(fn)
    fn = click.option("--country-fusion/--no-country-fusion", default=True, show_default=True)(fn)
    fn = click.option("--backend", default=None,
                      help="Scorer selector: uniform | oracle:<table> | remote:<url>. "
                           f"Falls back to remote:${NLI_ENDPOINT_ENVVAR} when set.")(fn)
    fn = click.option("--cache/--no-cache", default=False, show_default=True,
                      help="Memoize scorer calls.")(fn)
    return fn


def _resolve_backend(backend: str | None) -> str:
    if backend:
        return backend
    import os

    endpoint = os.environ.get(NLI_ENDPOINT_ENVVAR)
    if endpoint:
        return f"remote:{endpoint}"
    return "uniform"


def _config(weight_mode, hint_mode, multi_label, country_fusion, backend) -> StrategyConfig:
    return StrategyConfig(
        weight_mode=WeightMode(weight_mode),
        hint_mode=HintMode(hint_mode),
        multi_label=multi_label,
        country_fusion=country_fusion,
        scorer=_resolve_backend(backend),
    )


@click.group()
@click.option("-v", "--verbose", is_flag=True)
def main(verbose: bool) -> None:
    """City-guessing game toolkit: describer service, guesser, evaluation."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )


@main.command()
@click.argument("gameset_path", type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8040, show_default=True)
def serve(gameset_path: str, host: str, port: int) -> None:
    """Serve a gameset over the describer wire protocol."""
    import uvicorn

    gameset = load_gameset(gameset_path)
    app = create_app(Describer(gameset))
    click.echo(f"serving {len(gameset)} games from {gameset.name!r} on {host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="info")


@main.command()
@click.argument("gameset_path", type=click.Path(exists=True))
@click.argument("game_id")
@_strategy_options
@click.option("--gazetteer", "gazetteer_path", type=click.Path(exists=True), default=None)
@click.option("--describer-url", default=None,
              help="Play against a remote describer instead of in-process.")
def play(gameset_path, game_id, weight_mode, hint_mode, multi_label, country_fusion,
         backend, cache, gazetteer_path, describer_url) -> None:
    """Play a single game with a verbose round-by-round trace."""
    gameset = load_gameset(gameset_path)
    config = _config(weight_mode, hint_mode, multi_label, country_fusion, backend)
    gaz = load_gazetteer(gazetteer_path) if gazetteer_path else default_gazetteer()
    scorer = build_scorer(config.scorer, cache=cache)
    describer = HttpDescriber(describer_url) if describer_url else Describer(gameset)

    result = play_game(game_id, describer, config, scorer, gaz.cities(), gaz,
                       score_log=ScoreLog(sys.stdout))
    for rnd in result.rounds:
        top = sorted(rnd.fused_scores.items(), key=lambda kv: (-kv[1], kv[0]))[:5]
        click.echo(f"hint {rnd.hint_index}: premise={rnd.premise!r}")
        click.echo(f"  top candidates: {[(c, round(w, 5)) for c, w in top]}")
        click.echo(f"  guessed {rnd.guess!r} -> {rnd.reply.value}")
    t = result.transcript
    click.echo(f"outcome: {t.outcome.value} after {t.guesses_made} guesses "
               f"({t.hints_consumed} hints shown)")


@main.command(name="eval")
@click.argument("gameset_path", type=click.Path(exists=True))
@_strategy_options
@click.option("--gazetteer", "gazetteer_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_dir", type=click.Path(), default=None,
              help="Directory for report.json, transcripts, and the score log.")
@click.option("--workers", default=1, show_default=True)
@click.option("--seed", default=0, show_default=True, help="Recorded in the report.")
@click.option("--deadline", default=None, type=int,
              help="Override every game's deadline (seconds).")
@click.option("--policy", type=click.Choice([p.value for p in ScoringPolicy]),
              default=ScoringPolicy.HINTS_PLUS_FIVE.value, show_default=True)
def eval_cmd(gameset_path, weight_mode, hint_mode, multi_label, country_fusion, backend,
             cache, gazetteer_path, out_dir, workers, seed, deadline, policy) -> None:
    """Run a full evaluation over a gameset and print the leaderboard row."""
    from dataclasses import replace as dc_replace

    from .core import GameSet

    random.seed(seed)
    gameset = load_gameset(gameset_path)
    if deadline is not None:
        gameset = GameSet(
            name=gameset.name,
            games=tuple(dc_replace(g, deadline_seconds=deadline) for g in gameset),
        )
    config = _config(weight_mode, hint_mode, multi_label, country_fusion, backend)
    gaz = load_gazetteer(gazetteer_path) if gazetteer_path else default_gazetteer()
    scorer = build_scorer(config.scorer, cache=cache)
    report = run_evaluation(
        gameset, config, scorer=scorer, gazetteer=gaz, out_dir=out_dir,
        workers=workers, policy=ScoringPolicy(policy),
    )
    click.echo(f"config: {json.dumps(report.config)}")
    click.echo(render_leaderboard([("this run", report)]))
    click.echo(f"wall time: {report.wall_time_seconds:.2f}s")


@main.command()
@click.argument("gameset_path", type=click.Path(exists=True))
@click.option("--config", "config_specs", multiple=True, required=True,
              help="label=backend-selector, repeatable; e.g. oracleA=oracle:a.csv")
@click.option("--gazetteer", "gazetteer_path", type=click.Path(exists=True), default=None)
@click.option("--out", "out_dir", type=click.Path(), default=None)
@click.option("--multi-label/--single-label", default=True, show_default=True)
def compare(gameset_path, config_specs, gazetteer_path, out_dir, multi_label) -> None:
    """Run several backends over one gameset and print the comparison table."""
    gaz = load_gazetteer(gazetteer_path) if gazetteer_path else default_gazetteer()
    configs = []
    for spec in config_specs:
        label, _, selector = spec.partition("=")
        if not selector:
            raise click.BadParameter(f"expected label=selector, got {spec!r}")
        configs.append((label, StrategyConfig(scorer=selector, multi_label=multi_label)))
    rows = compare_backends(gameset_path, configs, gazetteer=gaz, out_dir=out_dir)
    click.echo(render_leaderboard(rows))


if __name__ == "__main__":
    main()
