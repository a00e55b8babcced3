"""The guessing pipeline, step by step, on the classic worked example.

One hint ("tea") is templated into a premise, scored against the candidate
cities, then against their countries under the same premise; city and
country probabilities are added, the list is sorted descending, and the top
city becomes the guess.
"""

from taboogame import (
    Describer,
    Game,
    GameSet,
    HintMode,
    StrategyConfig,
    TableOracle,
    build_premise,
    default_gazetteer,
    fuse_country,
    play_game,
    score_candidates,
)
from taboogame.guesser import GuessState, WeightMode, rank, update_weights

gazetteer = default_gazetteer()

# A scorer that answers like the worked example: city scores for "tea",
# and country scores under the same premise.
oracle = TableOracle({
    ("tea", "Dundee"): 0.05485,
    ("tea", "Athens"): 0.0029,
    ("tea", "UK"): 0.30,
    ("tea", "Greece"): 0.10,
})

premise = build_premise(["tea"], HintMode.CUMULATIVE)
print("premise:", premise)

cities = ["Dundee", "Athens"]
city_scores = score_candidates(premise, cities, oracle, multi_label=True)
print("city scores:", dict(city_scores))

countries = sorted({gazetteer.country_of(c) for c in cities})
country_scores = score_candidates(premise, countries, oracle, multi_label=True)
print("country scores:", dict(country_scores))

fused = fuse_country(city_scores, country_scores, gazetteer)
print("fused:", dict(fused))

state = update_weights(GuessState.fresh("demo", cities), fused, WeightMode.INITIALIZE)
print("ranking:", rank(state))

# The same flow, end to end, through play_game.
game = Game(id="demo", answer_city="Dundee", answer_country="UK", hints=("tea",))
result = play_game(
    "demo",
    Describer(GameSet(name="demo", games=(game,))),
    StrategyConfig(),
    oracle,
    cities,
    gazetteer,
)
print("outcome:", result.transcript.outcome.value,
      "in", result.transcript.guesses_made, "guess(es)")
