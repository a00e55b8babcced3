"""Playing through the remote scoring service.

Starts the NLI microservice in-process (with its lightweight lexical
classifier, so no model weights are needed), points the remote scorer
backend at it, and plays a game end to end through HTTP on both sides:
describer wire protocol on one, scoring wire protocol on the other.

To use the real pretrained NLI model instead, run
``nli-service`` (from the nli_service package) and point the CLI at it:
``taboogame eval games.yaml --backend remote:http://127.0.0.1:8050``.
"""

from fastapi.testclient import TestClient
from nli_service import LexicalClassifier, ServiceConfig
from nli_service import create_app as create_nli_app

from taboogame import (
    Describer,
    Game,
    GameSet,
    RemoteScorer,
    StrategyConfig,
    play_game,
)
from taboogame.gazetteer import Gazetteer, GazetteerEntry

nli_app = create_nli_app(ServiceConfig(model_id="lexical-overlap"),
                         classifier=LexicalClassifier())
scorer = RemoteScorer("http://testserver", client=TestClient(nli_app))

# The lexical classifier scores by token overlap, so these hints name their
# cities outright; a real NLI model resolves genuinely indirect hints.
game = Game(id="g1", answer_city="Dundee", answer_country="UK",
            hints=("the famous Dundee cake", "whiskey"))
gameset = GameSet(name="remote-demo", games=(game,))
gazetteer = Gazetteer([GazetteerEntry("Dundee", "UK"), GazetteerEntry("Athens", "Greece")])

result = play_game("g1", Describer(gameset), StrategyConfig(), scorer,
                   gazetteer.cities(), gazetteer)
for rnd in result.rounds:
    print(f"hint {rnd.hint_index}: {rnd.premise!r}")
    print(f"  fused scores: {dict(rnd.fused_scores)}")
    print(f"  guessed {rnd.guess!r} -> {rnd.reply.value}")
print("outcome:", result.transcript.outcome.value)
