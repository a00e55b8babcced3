"""Pluggable zero-shot scoring backends.

A backend maps a premise plus a list of candidate labels to one probability
per label. Three implementations: a deterministic table oracle for tests and
desk-scale runs, an HTTP client for the remote NLI inference service, and a
memoizing wrapper usable around either.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Protocol, runtime_checkable

import httpx

from .core import GameError, normalize_city

log = logging.getLogger(__name__)

SINGLE_LABEL_SUM_TOL = 1e-6
# Remote replies in single-label mode whose sum drifts within this band are
# renormalized with a warning; outside it they are rejected.
RENORMALIZE_BAND = (0.8, 1.2)


class ScoringError(GameError):
    """A backend failed to produce scores for a request."""

    def __init__(self, message: str, *, premise: str = "", retriable: bool = False):
        super().__init__(message)
        self.premise = premise
        self.retriable = retriable


class OracleTableError(GameError):
    """Oracle table file failed to parse."""


@dataclass(frozen=True)
class ScoreRequest:
    """One scoring call: a premise against candidate labels."""

    premise: str
    labels: tuple[str, ...]
    multi_label: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ScoringError("labels must be non-empty", premise=self.premise)
        if any(not lab.strip() for lab in self.labels):
            raise ScoringError("labels must be non-blank", premise=self.premise)
        if len(set(self.labels)) != len(self.labels):
            raise ScoringError("labels must be distinct", premise=self.premise)

    def cache_key(self) -> tuple:
        return (self.premise, tuple(sorted(self.labels)), self.multi_label)


class ScoreVector(Mapping[str, float]):
    """Label-to-probability map; values in [0, 1].

    In single-label mode the values form a distribution summing to one
    (within tolerance); in multi-label mode each value stands alone.
    """

    def __init__(self, entries: Mapping[str, float]):
        self._entries = dict(entries)
        for label, p in self._entries.items():
            if not (0.0 <= p <= 1.0):
                raise ScoringError(f"probability for {label!r} out of range: {p}")

    def __getitem__(self, label: str) -> float:
        return self._entries[label]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        return f"ScoreVector({self._entries!r})"

    def __eq__(self, other) -> bool:
        if isinstance(other, ScoreVector):
            return self._entries == other._entries
        if isinstance(other, Mapping):
            return self._entries == dict(other)
        return NotImplemented

    def as_dict(self) -> dict[str, float]:
        return dict(self._entries)

    def check_distribution(self, tol: float = SINGLE_LABEL_SUM_TOL) -> None:
        total = sum(self._entries.values())
        if abs(total - 1.0) > tol:
            raise ScoringError(f"single-label scores sum to {total}, expected 1")


@runtime_checkable
class ScorerBackend(Protocol):
    """The backend contract: one probability per requested label."""

    def score(self, request: ScoreRequest) -> ScoreVector: ...


def _validate_response(request: ScoreRequest, vector: ScoreVector) -> ScoreVector:
    missing = set(request.labels) - set(vector)
    if missing:
        raise ScoringError(
            f"backend omitted labels {sorted(missing)}", premise=request.premise
        )
    if not request.multi_label:
        vector.check_distribution()
    return vector


class TableOracle:
    """Deterministic lookup backend standing in for a language model.

    Rows key (hint token, label) to a probability. A request matches every
    hint token appearing as a substring of its premise; matched rows are
    summed per label. Premises matching no row fall back to a uniform
    distribution so every game still terminates.
    """

    def __init__(self, rows: Mapping[tuple[str, str], float]):
        self._rows: dict[str, dict[str, float]] = {}
        for (token, label), p in rows.items():
            if not (0.0 <= p <= 1.0):
                raise OracleTableError(f"probability out of range for ({token!r}, {label!r}): {p}")
            self._rows.setdefault(normalize_city(token), {})[label] = p
        self._norm_labels = {
            token: {normalize_city(lab): p for lab, p in labs.items()}
            for token, labs in self._rows.items()
        }

    def score(self, request: ScoreRequest) -> ScoreVector:
        premise = normalize_city(request.premise)
        matched = [tok for tok in self._norm_labels if tok in premise]
        raw: dict[str, float] = {}
        for label in request.labels:
            key = normalize_city(label)
            raw[label] = sum(self._norm_labels[tok].get(key, 0.0) for tok in matched)
        total = sum(raw.values())
        if not matched or total == 0.0:
            if matched:
                log.debug("oracle matched %s but no label overlap; uniform fallback", matched)
            else:
                log.debug("oracle fallback: no hint token in premise %r", request.premise)
            uniform = 1.0 / len(request.labels)
            return ScoreVector({lab: uniform for lab in request.labels})
        if request.multi_label:
            return ScoreVector({lab: min(1.0, p) for lab, p in raw.items()})
        return ScoreVector({lab: p / total for lab, p in raw.items()})


def load_table_oracle(path: str | Path) -> TableOracle:
    """Load an oracle table: one CSV record per line, ``hint,label,probability``."""
    rows: dict[tuple[str, str], float] = {}
    seen: set[tuple[str, str]] = set()
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                if not row or (len(row) == 1 and not row[0].strip()):
                    continue
                if row[0].lstrip().startswith("#"):
                    continue
                if len(row) != 3:
                    raise OracleTableError(f"line {lineno}: expected hint,label,probability")
                token, label = row[0].strip(), row[1].strip()
                try:
                    p = float(row[2])
                except ValueError as exc:
                    raise OracleTableError(f"line {lineno}: bad probability {row[2]!r}") from exc
                key = (normalize_city(token), normalize_city(label))
                if key in seen:
                    raise OracleTableError(f"line {lineno}: duplicate row for ({token!r}, {label!r})")
                seen.add(key)
                rows[(token, label)] = p
    except OSError as exc:
        raise OracleTableError(f"cannot read oracle table {path}: {exc}") from exc
    try:
        return TableOracle(rows)
    except OracleTableError as exc:
        raise OracleTableError(f"{path}: {exc}") from exc


class UniformScorer:
    """Degenerate backend: uniform over labels; handy as a null baseline."""

    def score(self, request: ScoreRequest) -> ScoreVector:
        p = 1.0 / len(request.labels)
        return ScoreVector({lab: p for lab in request.labels})


class RemoteScorer:
    """HTTP client for the NLI inference service's /score endpoint."""

    def __init__(self, endpoint: str, timeout_seconds: float = 30.0,
                 client: httpx.Client | None = None):
        self.endpoint = endpoint.rstrip("/")
        self._client = client or httpx.Client(timeout=timeout_seconds)

    def score(self, request: ScoreRequest) -> ScoreVector:
        body = {
            "premise": request.premise,
            "labels": list(request.labels),
            "multi_label": request.multi_label,
        }
        try:
            resp = self._client.post(f"{self.endpoint}/score", json=body)
            resp.raise_for_status()
            payload = resp.json()
        except httpx.TimeoutException as exc:
            raise ScoringError(
                f"scoring request timed out: {exc}", premise=request.premise, retriable=True
            ) from exc
        except httpx.HTTPError as exc:
            raise ScoringError(
                f"scoring request failed: {exc}", premise=request.premise, retriable=True
            ) from exc
        except json.JSONDecodeError as exc:
            raise ScoringError(
                f"malformed scoring response: {exc}", premise=request.premise
            ) from exc
        scores = payload.get("scores")
        if not isinstance(scores, dict):
            raise ScoringError("scoring response missing 'scores'", premise=request.premise)
        try:
            vector = ScoreVector({str(k): float(v) for k, v in scores.items()})
        except (TypeError, ValueError, ScoringError) as exc:
            raise ScoringError(
                f"invalid probabilities in response: {exc}", premise=request.premise
            ) from exc
        missing = set(request.labels) - set(vector)
        if missing:
            raise ScoringError(
                f"response omitted labels {sorted(missing)}", premise=request.premise
            )
        if not request.multi_label:
            vector = self._renormalize(vector, request)
        return vector

    @staticmethod
    def _renormalize(vector: ScoreVector, request: ScoreRequest) -> ScoreVector:
        total = sum(vector.values())
        if abs(total - 1.0) <= SINGLE_LABEL_SUM_TOL:
            return vector
        lo, hi = RENORMALIZE_BAND
        if not (lo <= total <= hi):
            raise ScoringError(
                f"single-label scores sum to {total}, outside renormalization band",
                premise=request.premise,
            )
        log.warning(
            "renormalizing single-label scores summing to %.6f for premise %r",
            total,
            request.premise,
        )
        return ScoreVector({lab: p / total for lab, p in vector.items()})

    def close(self) -> None:
        self._client.close()


class CachedScorer:
    """Memoizes an inner backend on the full request.

    Keyed by (premise, sorted labels, mode); errors pass through uncached.
    Optionally persists entries to a JSON-lines file keyed by a content hash
    so slow remote runs can be replayed.
    """

    def __init__(self, inner: ScorerBackend, persist_path: str | Path | None = None):
        self.inner = inner
        self._cache: dict[tuple, ScoreVector] = {}
        self._lock = threading.Lock()
        self._persist_path = Path(persist_path) if persist_path else None
        self.hits = 0
        self.misses = 0
        if self._persist_path and self._persist_path.exists():
            self._load_persisted()

    @staticmethod
    def _hash_key(key: tuple) -> str:
        blob = json.dumps(key, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def _load_persisted(self) -> None:
        with open(self._persist_path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = json.loads(line)
                key = (rec["premise"], tuple(rec["labels"]), rec["multi_label"])
                self._cache[key] = ScoreVector(rec["scores"])

    def _persist(self, key: tuple, vector: ScoreVector) -> None:
        rec = {
            "hash": self._hash_key(key),
            "premise": key[0],
            "labels": list(key[1]),
            "multi_label": key[2],
            "scores": vector.as_dict(),
        }
        with open(self._persist_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")

    def score(self, request: ScoreRequest) -> ScoreVector:
        key = request.cache_key()
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            self.hits += 1
            return cached
        vector = self.inner.score(request)
        with self._lock:
            if key not in self._cache:
                self._cache[key] = vector
                if self._persist_path:
                    self._persist(key, vector)
        self.misses += 1
        return vector


def build_scorer(selector: str, cache: bool = False,
                 persist_path: str | Path | None = None) -> ScorerBackend:
    """Resolve a backend selector string.

    Grammar: ``uniform`` | ``oracle:<table-path>`` | ``remote:<endpoint-url>``.
    """
    if selector == "uniform":
        backend: ScorerBackend = UniformScorer()
    elif selector.startswith("oracle:"):
        backend = load_table_oracle(selector.split(":", 1)[1])
    elif selector.startswith("remote:"):
        backend = RemoteScorer(selector.split(":", 1)[1])
    else:
        raise ScoringError(f"unknown scorer selector {selector!r}")
    if cache or persist_path:
        backend = CachedScorer(backend, persist_path=persist_path)
    return backend
