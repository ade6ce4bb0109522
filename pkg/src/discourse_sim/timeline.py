"""Critical event, dated day entries and keyword scanning of news text."""

from __future__ import annotations

import datetime as dt
import enum
import json
import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

from .coefficients import DEFAULT_COEFFICIENTS


class EvidenceLevel(str, enum.Enum):
    VERIFIED = "verified"
    CONTEXTUALLY_SUPPORTED = "contextually_supported"
    INFERRED = "inferred"


@dataclass(frozen=True)
class DayEntry:
    day_index: int
    date: dt.date
    text: str
    evidence: EvidenceLevel


@dataclass(frozen=True)
class Timeline:
    critical_event: str
    entries: tuple[DayEntry, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, day: int) -> DayEntry:
        return self.entries[day]


@dataclass(frozen=True)
class Lexicon:
    threat_terms: tuple[str, ...] = (
        "arson", "attack", "violence", "crime", "danger", "get them out", "deportation", "deport",
    )
    humanitarian_terms: tuple[str, ...] = (
        "refugee", "asylum", "rights", "children", "family", "compassion", "solidarity", "waiting",
    )
    pro_terms: tuple[str, ...] = (
        "welcome", "solidarity", "refugee rights", "compassion", "diversity", "welcome refugees",
    )
    anti_terms: tuple[str, ...] = (
        "ireland is full", "get them out", "deport", "invasion", "illegal", "send them back",
    )
    # Only consulted when the economic/cultural belief extension is switched on.
    economic_terms: tuple[str, ...] = ("housing", "rent", "jobs", "wages", "public services")
    cultural_terms: tuple[str, ...] = ("culture", "identity", "tradition", "integration", "values")
    longest_match: bool = False

    def __post_init__(self) -> None:
        for name in ("threat_terms", "humanitarian_terms", "pro_terms", "anti_terms"):
            if not getattr(self, name):
                raise ValueError(f"lexicon list {name!r} must not be empty")


DEFAULT_LEXICON = Lexicon()

_LEXICON_KEYS = (
    "threat_terms", "humanitarian_terms", "pro_terms", "anti_terms",
    "economic_terms", "cultural_terms", "longest_match",
)


class TimelineError(ValueError):
    pass


@lru_cache(maxsize=None)
def _phrase_pattern(phrase: str) -> re.Pattern[str]:
    words = phrase.lower().split()
    return re.compile(r"(?<!\w)" + r"\s+".join(re.escape(w) for w in words) + r"(?!\w)")


def _spans(text: str, phrase: str) -> list[tuple[int, int]]:
    return [m.span() for m in _phrase_pattern(phrase).finditer(text)]


def count_keywords(text: str, phrases: Iterable[str], longest_match: bool = False) -> int:
    """Case-insensitive count of whole-word phrase occurrences in ``text``.

    Each phrase is counted on its own, so overlapping phrases ("welcome" and
    "welcome refugees") both score. With ``longest_match`` a span already
    claimed by a longer phrase is not counted again for a shorter one.
    """
    if not text:
        return 0
    low = text.lower()
    if not longest_match:
        return sum(len(_spans(low, p)) for p in phrases)
    claimed: list[tuple[int, int]] = []
    total = 0
    for phrase in sorted(phrases, key=lambda p: (-len(p), p)):
        for a, b in _spans(low, phrase):
            if any(a < d and c < b for c, d in claimed):
                continue
            claimed.append((a, b))
            total += 1
    return total


def threat_salience(
    text: str,
    emotional_reactivity: float,
    lexicon: Lexicon = DEFAULT_LEXICON,
    coefficient: float = DEFAULT_COEFFICIENTS.salience,
) -> float:
    n = count_keywords(text, lexicon.threat_terms, lexicon.longest_match)
    return n * coefficient * emotional_reactivity


def humanitarian_salience(
    text: str,
    emotional_reactivity: float,
    openness: float,
    lexicon: Lexicon = DEFAULT_LEXICON,
    coefficient: float = DEFAULT_COEFFICIENTS.salience,
) -> float:
    n = count_keywords(text, lexicon.humanitarian_terms, lexicon.longest_match)
    return n * coefficient * emotional_reactivity * openness


def sentiment_counts(text: str, lexicon: Lexicon = DEFAULT_LEXICON) -> tuple[int, int]:
    """Return ``(pro, anti)`` lexicon hit counts."""
    return (
        count_keywords(text, lexicon.pro_terms, lexicon.longest_match),
        count_keywords(text, lexicon.anti_terms, lexicon.longest_match),
    )


def classify_sentiment(text: str, lexicon: Lexicon = DEFAULT_LEXICON) -> tuple[str, float]:
    pro, anti = sentiment_counts(text, lexicon)
    if pro + anti == 0:
        return "neutral", 0.0
    confidence = abs(pro - anti) / (pro + anti)
    if pro > anti:
        return "pro_immigration", confidence
    if anti > pro:
        return "anti_immigration", confidence
    return "neutral", confidence


def load_lexicon(path: str | Path | None = None) -> Lexicon:
    """Load phrase-list overrides from JSON; missing keys keep their defaults."""
    if path is None:
        return DEFAULT_LEXICON
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise TimelineError(f"{path}: lexicon file must hold a JSON object")
    unknown = set(raw) - set(_LEXICON_KEYS)
    if unknown:
        raise TimelineError(f"{path}: unknown lexicon key(s) {sorted(unknown)}")
    kwargs = {}
    for key, value in raw.items():
        if key == "longest_match":
            kwargs[key] = bool(value)
        elif not isinstance(value, list) or not all(isinstance(v, str) for v in value):
            raise TimelineError(f"{path}: {key!r} must be a list of strings")
        else:
            kwargs[key] = tuple(value)
    try:
        return Lexicon(**kwargs)
    except ValueError as exc:
        raise TimelineError(f"{path}: {exc}") from None


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("discourse_sim") / "data" / name))


def _parse_entry(i: int, raw: object, where: str) -> DayEntry:
    ctx = f"{where}: entries[{i}]"
    if not isinstance(raw, dict):
        raise TimelineError(f"{ctx}: expected an object")
    missing = {"day", "date", "text", "evidence"} - set(raw)
    if missing:
        raise TimelineError(f"{ctx}: missing field(s) {sorted(missing)}")
    try:
        evidence = EvidenceLevel(raw["evidence"])
    except ValueError:
        raise TimelineError(f"{ctx}: unknown evidence level {raw['evidence']!r}") from None
    try:
        date = dt.date.fromisoformat(raw["date"])
    except (TypeError, ValueError):
        raise TimelineError(f"{ctx}: bad date {raw['date']!r}, expected YYYY-MM-DD") from None
    if not isinstance(raw["day"], int) or isinstance(raw["day"], bool):
        raise TimelineError(f"{ctx}: 'day' must be an integer")
    if not isinstance(raw["text"], str):
        raise TimelineError(f"{ctx}: 'text' must be a string")
    return DayEntry(day_index=raw["day"], date=date, text=raw["text"], evidence=evidence)


def parse_timeline(raw: object, n_days: int | None = None, where: str = "<timeline>") -> Timeline:
    if not isinstance(raw, dict) or not isinstance(raw.get("critical_event"), str):
        raise TimelineError(f"{where}: expected an object with a 'critical_event' string")
    if not isinstance(raw.get("entries"), list):
        raise TimelineError(f"{where}: 'entries' must be a list")
    entries = sorted(
        (_parse_entry(i, e, where) for i, e in enumerate(raw["entries"])),
        key=lambda e: e.day_index,
    )
    seen: set[int] = set()
    for e in entries:
        if e.day_index in seen:
            raise TimelineError(f"{where}: duplicate day {e.day_index}")
        seen.add(e.day_index)
    for expected, e in enumerate(entries):
        if e.day_index != expected:
            raise TimelineError(f"{where}: day {expected} missing (next entry is day {e.day_index})")
    for prev, cur in zip(entries, entries[1:]):
        if cur.date <= prev.date:
            raise TimelineError(f"{where}: dates must increase (day {cur.day_index} is {cur.date})")
    if n_days is not None:
        if len(entries) < n_days:
            raise TimelineError(f"{where}: {len(entries)} entries but {n_days} days configured")
        entries = entries[:n_days]
    return Timeline(critical_event=raw["critical_event"], entries=tuple(entries))


def load_timeline(source: str | Path | None = None, n_days: int | None = None) -> Timeline:
    """Load and validate a timeline JSON file (the bundled fixture when ``source`` is None).

    A file longer than ``n_days`` is truncated to its first ``n_days`` entries;
    a shorter one is rejected.
    """
    path = Path(source) if source is not None else bundled_path("timeline.json")
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise TimelineError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from None
    return parse_timeline(raw, n_days, where=str(path))


@dataclass(frozen=True)
class DayContext:
    """Keyword counts for one day's news text."""

    threat: int
    humanitarian: int
    economic: int = 0
    cultural: int = 0

    @property
    def threat_present(self) -> bool:
        return self.threat > 0


def scan_day(text: str, lexicon: Lexicon = DEFAULT_LEXICON) -> DayContext:
    lm = lexicon.longest_match
    return DayContext(
        threat=count_keywords(text, lexicon.threat_terms, lm),
        humanitarian=count_keywords(text, lexicon.humanitarian_terms, lm),
        economic=count_keywords(text, lexicon.economic_terms, lm),
        cultural=count_keywords(text, lexicon.cultural_terms, lm),
    )

