"""Static city-to-country resolution and the default candidate universe.

Replaces the live country-lookup API the original pipeline depended on with
a local file: one CSV record per line, ``city,country,aliases,population``
where aliases is a semicolon-separated list and population may be blank.
A bundled list of ~250 populous world cities ships with the package.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .core import GameError, normalize_city

log = logging.getLogger(__name__)


class GazetteerError(GameError):
    """Gazetteer file failed to parse or validate."""


@dataclass(frozen=True)
class GazetteerEntry:
    city: str
    country: str
    aliases: tuple[str, ...] = ()
    population: Optional[int] = None

    def __post_init__(self) -> None:
        if not self.country.strip():
            raise GazetteerError(f"entry {self.city!r}: country must be non-empty")
        if self.population is not None and self.population <= 0:
            raise GazetteerError(f"entry {self.city!r}: population must be positive")
        object.__setattr__(self, "aliases", tuple(self.aliases))


class Gazetteer:
    """Immutable lookup from city names (canonical or alias) to countries."""

    def __init__(self, entries: Iterable[GazetteerEntry]):
        self.entries: tuple[GazetteerEntry, ...] = tuple(entries)
        self._by_name: dict[str, GazetteerEntry] = {}
        for entry in self.entries:
            key = normalize_city(entry.city)
            if key in self._by_name:
                raise GazetteerError(f"duplicate city name {entry.city!r}")
            self._by_name[key] = entry
        # Aliases resolve after canonical names; an alias shadowing a
        # different canonical city is a load-time error.
        for entry in self.entries:
            for alias in entry.aliases:
                key = normalize_city(alias)
                existing = self._by_name.get(key)
                if existing is not None and existing is not entry:
                    raise GazetteerError(
                        f"alias {alias!r} of {entry.city!r} conflicts with {existing.city!r}"
                    )
                self._by_name[key] = entry

    def country_of(self, city: str) -> Optional[str]:
        """Resolve a city (or alias) to its country, case-insensitively."""
        entry = self._by_name.get(normalize_city(city))
        return entry.country if entry else None

    def cities(self) -> list[str]:
        """Canonical city names in file order: the default candidate universe."""
        return [e.city for e in self.entries]

    def countries(self) -> list[str]:
        """Distinct country names in first-seen order."""
        seen: dict[str, None] = {}
        for e in self.entries:
            seen.setdefault(e.country)
        return list(seen)

    def __len__(self) -> int:
        return len(self.entries)


def _parse_row(row: list[str], lineno: int) -> GazetteerEntry:
    if len(row) < 2:
        raise GazetteerError(f"line {lineno}: expected at least city,country")
    city, country = row[0].strip(), row[1].strip()
    aliases: tuple[str, ...] = ()
    if len(row) > 2 and row[2].strip():
        aliases = tuple(a.strip() for a in row[2].split(";") if a.strip())
    population = None
    if len(row) > 3 and row[3].strip():
        try:
            population = int(row[3])
        except ValueError as exc:
            raise GazetteerError(f"line {lineno}: bad population {row[3]!r}") from exc
    try:
        return GazetteerEntry(city=city, country=country, aliases=aliases, population=population)
    except GazetteerError as exc:
        raise GazetteerError(f"line {lineno}: {exc}") from exc


def load_gazetteer(path: str | Path) -> Gazetteer:
    """Load a gazetteer CSV file; raises GazetteerError with line numbers."""
    entries = []
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                if not row or (len(row) == 1 and not row[0].strip()):
                    continue
                if row[0].lstrip().startswith("#"):
                    continue
                entries.append(_parse_row(row, lineno))
    except OSError as exc:
        raise GazetteerError(f"cannot read gazetteer file {path}: {exc}") from exc
    return Gazetteer(entries)


def default_gazetteer() -> Gazetteer:
    """The bundled world-cities list."""
    ref = resources.files("taboogame.data").joinpath("world_cities.csv")
    with resources.as_file(ref) as path:
        return load_gazetteer(path)
