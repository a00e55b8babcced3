"""A full evaluation run and a backend comparison on a synthetic gameset.

Builds a 20-game world where a strong oracle resolves every game on its
first hint and a weak one resolves half, runs both, and renders the
leaderboard. With a deterministic backend the whole run reproduces exactly.
"""

import tempfile
from pathlib import Path

from taboogame import Game, GameSet, StrategyConfig, compare_backends, render_leaderboard
from taboogame.gazetteer import Gazetteer, GazetteerEntry

N = 20
cities = [f"City{i}" for i in range(N)] + ["Decoy"]
gazetteer = Gazetteer([GazetteerEntry(c, "Nowhereland") for c in cities])
games = tuple(
    Game(id=f"g{i}", answer_city=f"City{i}", answer_country="Nowhereland",
         hints=(f"clue-{i}-end",))
    for i in range(N)
)
gameset = GameSet(name="synthetic", games=games)

with tempfile.TemporaryDirectory() as tmp:
    strong = Path(tmp) / "strong.csv"
    strong.write_text("".join(f"clue-{i}-end,City{i},0.9\n" for i in range(N)))
    weak = Path(tmp) / "weak.csv"
    weak.write_text(
        "".join(
            f"clue-{i}-end,City{i},0.9\n" if i % 2 == 0 else f"clue-{i}-end,Decoy,0.9\n"
            for i in range(N)
        )
    )

    rows = compare_backends(
        gameset,
        [
            ("strong-oracle", StrategyConfig(scorer=f"oracle:{strong}", country_fusion=False)),
            ("weak-oracle", StrategyConfig(scorer=f"oracle:{weak}", country_fusion=False)),
        ],
        gazetteer=gazetteer,
    )
    print(render_leaderboard(rows))
