"""Scoring rules walkthrough.

A won game costs the guesses it took; a lost game costs a hint penalty
plus five; the run total is the sum and lower is better. Two readings of
the loss penalty exist, so both policies are shown side by side.
"""

from taboogame import (
    Game,
    GameSet,
    GameTranscript,
    Outcome,
    Reply,
    ScoringPolicy,
    TranscriptEvent,
    game_score,
    total_score,
)

dundee = Game(id="dundee", answer_city="Dundee", answer_country="UK",
              hints=("tea", "whiskey", "kilt", "crocodile"))
athens = Game(id="athens", answer_city="Athens", answer_country="Greece",
              hints=("olives", "philosophy"))
gameset = GameSet(name="walkthrough", games=(dundee, athens))

# Won on the second guess: two events, the last one a yes.
won = GameTranscript(
    game_id="dundee",
    events=(
        TranscriptEvent(0, "Glasgow", Reply.NO),
        TranscriptEvent(1, "Dundee", Reply.YES),
    ),
    outcome=Outcome.WON,
    hints_consumed=2,
    guesses_made=2,
)
print("won after 2 guesses ->", game_score(won, total_hints=4))

# Given up after one wrong guess: only 1 of the 2 hints was consumed, so
# the two penalty readings diverge (1+5 versus 2+5).
lost = GameTranscript(
    game_id="athens",
    events=(TranscriptEvent(0, "Rome", Reply.NO),),
    outcome=Outcome.LOST,
    hints_consumed=1,
    guesses_made=1,
)
for policy in ScoringPolicy:
    print(f"lost, 1 of 2 hints consumed, {policy.value} ->",
          game_score(lost, total_hints=2, policy=policy))

# An immediate timeout consumes nothing and still costs the flat penalty.
timed_out = GameTranscript(game_id="athens", events=(), outcome=Outcome.LOST,
                           hints_consumed=0, guesses_made=0)
print("immediate timeout ->", game_score(timed_out, total_hints=2))

print("run total (win + loss) ->", total_score([won, lost], gameset))
