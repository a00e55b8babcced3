"""The describer's reply vocabulary, in process and over the wire.

Every exchange is one guess in, one of three replies out: yes, no plus the
next hint, or no more hints. The HTTP service speaks the same protocol
(docs/wire-protocol.md); here both are driven with the same guess sequence
to show they behave identically.
"""

from fastapi.testclient import TestClient

from taboogame import Describer, Game, GameSet, create_app
from taboogame.wire import HttpDescriber

game = Game(id="g1", answer_city="Dundee", answer_country="UK",
            hints=("tea", "whiskey", "kilt", "crocodile"))
gameset = GameSet(name="protocol-demo", games=(game,))

guesses = ["Athens", "Glasgow", "Dundee"]

print("-- in process --")
local = Describer(gameset)
print("start ->", local.start_game("g1"))
for guess in guesses:
    reply = local.submit_guess("g1", guess)
    print(f"guess {guess!r} -> {reply.kind.value}"
          + (f" (next hint: {reply.hint!r})" if reply.hint else ""))

print("-- over the wire --")
remote = HttpDescriber("http://testserver",
                       client=TestClient(create_app(Describer(gameset))))
print("games ->", remote.list_games())
print("start ->", remote.start_game("g1"))
for guess in guesses:
    reply = remote.submit_guess("g1", guess)
    print(f"guess {guess!r} -> {reply.kind.value}"
          + (f" (next hint: {reply.hint!r})" if reply.hint else ""))
