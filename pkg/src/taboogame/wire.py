"""HTTP wire protocol for the describer, plus the matching client.

Contract (docs/wire-protocol.md):

    GET  /games                -> {"game_ids": [...]}
    POST /games/{id}/start     -> {"hint": str, "hint_index": 0, "session": token}
    POST /games/{id}/guess     body {"session": token, "city": str}
        -> {"reply": "yes"}
         | {"reply": "no", "hint": str, "hint_index": int}
         | {"reply": "no more hints"} (plus "timed_out": true when the
           deadline forced it)

Reply strings are exactly the lowercase vocabulary. The answer city never
crosses the wire during play. The in-process and HTTP describers are
observationally equivalent; tests assert it transcript-for-transcript.
"""

from __future__ import annotations

import threading
import uuid
from typing import Optional, Protocol

import httpx
from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .core import GameError, Reply
from .describer import (
    ConcurrentGuessError,
    Describer,
    DescriberReply,
    NoActiveSessionError,
    SessionConflictError,
    UnknownGameError,
)

PROTOCOL_VERSION = "1"


class DescriberHandle(Protocol):
    """What a guesser needs from a describer, local or remote."""

    def list_games(self) -> list[str]: ...

    def start_game(self, game_id: str) -> str: ...

    def submit_guess(self, game_id: str, city: str) -> DescriberReply: ...


class GuessBody(BaseModel):
    session: str
    city: str


def create_app(describer: Describer) -> FastAPI:
    """Wrap an in-process describer in the wire protocol."""
    app = FastAPI(title="taboo describer", version=PROTOCOL_VERSION)
    sessions: dict[str, str] = {}  # token -> game_id
    sessions_lock = threading.Lock()

    def error(status: int, code: str, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": code, "message": message})

    @app.get("/games")
    def list_games() -> dict:
        return {"game_ids": describer.list_games()}

    @app.post("/games/{game_id}/start")
    def start(game_id: str):
        try:
            hint = describer.start_game(game_id)
        except UnknownGameError as exc:
            return error(404, "not_found", str(exc))
        except SessionConflictError as exc:
            return error(409, "conflict", str(exc))
        token = uuid.uuid4().hex
        with sessions_lock:
            sessions[token] = game_id
        return {"hint": hint, "hint_index": 0, "session": token}

    @app.post("/games/{game_id}/guess")
    def guess(game_id: str, body: GuessBody):
        with sessions_lock:
            owner = sessions.get(body.session)
        if owner != game_id:
            return error(403, "bad_session", "session token does not match this game")
        try:
            reply = describer.submit_guess(game_id, body.city)
        except NoActiveSessionError as exc:
            return error(409, "finished", str(exc))
        except ConcurrentGuessError as exc:
            return error(409, "overlapping_guess", str(exc))
        payload: dict = {"reply": reply.kind.value}
        if reply.kind is Reply.NO:
            payload["hint"] = reply.hint
            payload["hint_index"] = reply.hint_index
        if reply.timed_out:
            payload["timed_out"] = True
        return payload

    return app


class WireProtocolError(GameError):
    """Unexpected response from a remote describer."""


class HttpDescriber:
    """DescriberHandle over the wire protocol.

    Session tokens are held per game id; the same three-method surface as
    the in-process describer, so guessers cannot tell them apart.
    """

    def __init__(self, base_url: str, timeout_seconds: float = 30.0,
                 client: httpx.Client | None = None):
        self._client = client or httpx.Client(base_url=base_url, timeout=timeout_seconds)
        self._tokens: dict[str, str] = {}

    def list_games(self) -> list[str]:
        resp = self._client.get("/games")
        self._check(resp)
        return list(resp.json()["game_ids"])

    def start_game(self, game_id: str) -> str:
        resp = self._client.post(f"/games/{game_id}/start")
        if resp.status_code == 404:
            raise UnknownGameError(self._message(resp))
        if resp.status_code == 409:
            raise SessionConflictError(self._message(resp))
        self._check(resp)
        payload = resp.json()
        self._tokens[game_id] = payload["session"]
        return payload["hint"]

    def submit_guess(self, game_id: str, city: str) -> DescriberReply:
        token = self._tokens.get(game_id)
        if token is None:
            raise NoActiveSessionError(f"no session started for game {game_id!r}")
        resp = self._client.post(
            f"/games/{game_id}/guess", json={"session": token, "city": city}
        )
        if resp.status_code == 409:
            code = self._code(resp)
            if code == "overlapping_guess":
                raise ConcurrentGuessError(self._message(resp))
            raise NoActiveSessionError(self._message(resp))
        self._check(resp)
        payload = resp.json()
        try:
            kind = Reply(payload["reply"])
        except (KeyError, ValueError) as exc:
            raise WireProtocolError(f"bad reply payload: {payload!r}") from exc
        return DescriberReply(
            kind=kind,
            game_id=game_id,
            hint=payload.get("hint"),
            hint_index=payload.get("hint_index"),
            timed_out=bool(payload.get("timed_out", False)),
        )

    @staticmethod
    def _code(resp: httpx.Response) -> Optional[str]:
        try:
            return resp.json().get("error")
        except ValueError:
            return None

    @staticmethod
    def _message(resp: httpx.Response) -> str:
        try:
            return resp.json().get("message", resp.text)
        except ValueError:
            return resp.text

    def _check(self, resp: httpx.Response) -> None:
        if resp.status_code >= 400:
            raise WireProtocolError(
                f"{resp.request.method} {resp.request.url.path} -> {resp.status_code}: "
                f"{self._message(resp)}"
            )

    def close(self) -> None:
        self._client.close()
