"""Observe, think, act: tool calls, prompt assembly, post generation and scoring.

The orchestrator (not the model) invokes the tools. Two text backends are
provided: :class:`OllamaBackend` for an Ollama-compatible HTTP server and
:class:`StubBackend`, a deterministic template generator used offline and as
the fallback when the remote server fails.
"""

from __future__ import annotations

import hashlib
import html.parser
import json
import logging
import re
import threading
from dataclasses import dataclass
from typing import Mapping, Protocol, Sequence

import numpy as np
import requests

from .model import QUIRKS, Agent, AgentKind, ToolCallRecord
from .timeline import DEFAULT_LEXICON, DayEntry, Lexicon, classify_sentiment, sentiment_counts

log = logging.getLogger(__name__)

NEWS_BUDGET = 1200
MEMORY_WINDOW = 5
EXCERPT_CHARS = 100
MAX_WORDS = 40
GEN_TEMPERATURE = 0.75
SCORE_TEMPERATURE = 0.0
DEFAULT_MODEL = "mistral:7b-instruct-q4_0"
DEFAULT_BASE_URL = "http://localhost:11434"
SEARCH_UNAVAILABLE = "[search unavailable]"
NO_HISTORY = "no posting history yet"

SEARCH_PREFIX = "Dublin immigration march April 2025 Ireland "
KIND_QUERY_TERMS = {
    AgentKind.FAR_RIGHT: "protest housing crisis",
    AgentKind.PRO_IMM: "refugee rights solidarity",
    AgentKind.CENTRIST: "government response",
    AgentKind.MEDIA: "news coverage",
}

SEARCH_TOOL = "search_immigration_news"
RECALL_TOOL = "recall_agent_memory"
SENTIMENT_TOOL = "get_sentiment_of_text"


# ---------------------------------------------------------------- observe


@dataclass(frozen=True)
class Observation:
    news_snippet: str
    memory_summary: str
    day_entry_text: str
    critical_event: str


class NewsClient(Protocol):
    def search(self, query: str, day_index: int) -> str: ...


class OfflineNews:
    """Canned snippets keyed by day index (JSON object ``{"0": "...", ...}``)."""

    def __init__(self, snippets: Mapping[int, str]):
        self.snippets = {int(k): v for k, v in snippets.items()}

    @classmethod
    def from_file(cls, path) -> "OfflineNews":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict) or not all(isinstance(v, str) for v in raw.values()):
            raise ValueError(f"{path}: news fixture must map day index to snippet text")
        try:
            return cls({int(k): v for k, v in raw.items()})
        except ValueError:
            raise ValueError(f"{path}: news fixture keys must be integer day indices") from None

    def search(self, query: str, day_index: int) -> str:
        return self.snippets.get(day_index, "")


class _TextExtractor(html.parser.HTMLParser):
    def __init__(self):
        super().__init__()
        self.parts: list[str] = []
        self._skip = 0

    def handle_starttag(self, tag, attrs):
        if tag in ("script", "style"):
            self._skip += 1

    def handle_endtag(self, tag):
        if tag in ("script", "style") and self._skip:
            self._skip -= 1

    def handle_data(self, data):
        if not self._skip:
            self.parts.append(data)


def strip_markup(text: str) -> str:
    parser = _TextExtractor()
    parser.feed(text)
    parser.close()
    return " ".join(" ".join(parser.parts).split())


class WebSearchClient:
    """GET ``endpoint?q=<query>`` and return the page text without markup."""

    def __init__(self, endpoint: str = "https://html.duckduckgo.com/html/", timeout: float = 15.0):
        self.endpoint = endpoint
        self.timeout = timeout

    def search(self, query: str, day_index: int) -> str:
        resp = requests.get(
            self.endpoint,
            params={"q": query},
            timeout=self.timeout,
            headers={"User-Agent": "discourse-sim/0.1"},
        )
        resp.raise_for_status()
        return strip_markup(resp.text)


def search_query(agent: Agent) -> str:
    return SEARCH_PREFIX + KIND_QUERY_TERMS[agent.kind]


def recall_memory(messages: Sequence[str], window: int = MEMORY_WINDOW) -> str:
    """Summarise the last ``window`` posts, quoting the most recent one."""
    recent = list(messages)[-window:]
    if not recent:
        return NO_HISTORY
    start = len(messages) - len(recent) + 1
    lines = [f"You have written {len(messages)} post(s) so far. Your last {len(recent)}:"]
    lines += [f"  post {start + i}: {p[:EXCERPT_CHARS]}" for i, p in enumerate(recent)]
    lines.append(f'Most recent post: "{recent[-1][:EXCERPT_CHARS]}"')
    return "\n".join(lines)


def observe(agent: Agent, day: DayEntry, news_client: NewsClient | None, critical_event: str) -> Observation:
    """Run the observation tools for one agent-day, logging each call on the agent."""
    query = search_query(agent)
    agent.reasoning_log.append(ToolCallRecord(SEARCH_TOOL, query))
    if news_client is None:
        snippet = SEARCH_UNAVAILABLE
    else:
        try:
            snippet = news_client.search(query, day.day_index)[:NEWS_BUDGET]
        except Exception as exc:  # network, parsing, anything: the day goes on
            log.warning("search failed for %s on day %d: %s", agent.id, day.day_index, exc)
            snippet = SEARCH_UNAVAILABLE

    recent = agent.messages[-MEMORY_WINDOW:]
    agent.reasoning_log.append(ToolCallRecord(RECALL_TOOL, json.dumps(recent, ensure_ascii=False)))
    memory = recall_memory(agent.messages)

    return Observation(
        news_snippet=snippet,
        memory_summary=memory,
        day_entry_text=day.text,
        critical_event=critical_event,
    )


def sentiment_tool(agent: Agent, text: str, lexicon: Lexicon = DEFAULT_LEXICON) -> tuple[str, float]:
    """Optional third tool; logged like the others when an orchestrator chooses to call it."""
    agent.reasoning_log.append(ToolCallRecord(SENTIMENT_TOOL, text))
    return classify_sentiment(text, lexicon)


# ---------------------------------------------------------------- prompt

_NEWS_HEADER = "TODAY'S NEWS:"


def build_prompt(agent: Agent, obs: Observation) -> str:
    if agent.quirk is None:
        raise ValueError(f"{agent.id} has no writing quirk; assign one before the first post")
    b, p = agent.beliefs, agent.psych
    return "\n".join(
        [
            "CRITICAL EVENT (background for every day):",
            obs.critical_event,
            "",
            "YOUR PROFILE:",
            f"id: {agent.id}",
            f"kind: {agent.kind.value}",
            f"attitude: {agent.attitude:+.3f} (-1 strongly pro-immigration, +1 strongly anti-immigration)",
            f"exposure to threat narratives: {agent.exposure:.3f}",
            f"mood: {agent.mood:+.3f}",
            f"writing quirk: {agent.quirk}",
            f"openness: {p.openness:.3f}",
            f"conformity: {p.conformity:.3f}",
            f"emotional reactivity: {p.emotional_reactivity:.3f}",
            f"trust in peers: {p.trust_peers:.3f}",
            f"economic threat belief: {b.economic_threat:+.3f}",
            f"cultural threat belief: {b.cultural_threat:+.3f}",
            f"security threat belief: {b.security_threat:+.3f}",
            f"humanitarian belief: {b.humanitarian:+.3f}",
            "",
            "YOUR MEMORY:",
            obs.memory_summary,
            "",
            "SEARCH RESULTS:",
            obs.news_snippet,
            "",
            _NEWS_HEADER,
            obs.day_entry_text,
            "",
            "Write one social media post reacting to today's news as this person.",
            "Let your stance evolve gradually from your previous posts, without overnight flips.",
            f"Write in the style of your quirk ({agent.quirk}).",
            f"Maximum {MAX_WORDS} words. Output only the post.",
        ]
    )


def truncate_words(text: str, limit: int = MAX_WORDS) -> str:
    words = text.split()
    return " ".join(words[:limit])


# ---------------------------------------------------------------- backends


class BackendError(RuntimeError):
    pass


class GenerationBackend(Protocol):
    name: str

    def generate(self, prompt: str, temperature: float, rng: np.random.Generator | None = None) -> str: ...


NEUTRAL_PHRASES = (
    "hard to know what to think",
    "need the full facts first",
    "both sides have a point",
    "lots of noise today",
)

QUIRK_MARKERS = {
    "sarcasm": "oh great, just what we needed",
    "emojis": "\U0001f914\U0001f1ee\U0001f1ea",
    "hashtags": "#Dublin #IrelandTalks",
    "formal_tone": "I respectfully submit this view.",
    "rhetorical_questions": "who is actually listening?",
    "all_lowercase": "just saying",
    "statistics_citing": "(polls say 6 in 10 agree)",
    "personal_anecdote": "my neighbour said the same thing",
}
assert set(QUIRK_MARKERS) == set(QUIRKS)

_ATTITUDE_RE = re.compile(r"^attitude: ([+-]?\d+(?:\.\d+)?)", re.M)
_QUIRK_RE = re.compile(r"^writing quirk: (\S+)", re.M)


def _prompt_rng(prompt: str) -> np.random.Generator:
    digest = hashlib.sha256(prompt.encode("utf-8")).digest()
    return np.random.default_rng(int.from_bytes(digest[:8], "little"))


def day_topic(text: str, n_words: int = 6) -> str:
    words = text.split()[:n_words]
    return " ".join(words).rstrip(".,;:!?").lower()


class StubBackend:
    """Deterministic offline backend.

    Generation reads the attitude, quirk and today's news from the prompt and
    fills ``"<stance phrase> about <topic> - <quirk marker>"``; the stance phrase
    comes from the anti lexicon above +0.2 attitude, the pro lexicon below -0.2,
    and a neutral list in between. Scoring prompts get the lexicon score.
    """

    name = "stub"

    def __init__(self, lexicon: Lexicon = DEFAULT_LEXICON):
        self.lexicon = lexicon

    def generate(self, prompt: str, temperature: float = GEN_TEMPERATURE, rng: np.random.Generator | None = None) -> str:
        if prompt.startswith(_SCORE_HEADER):
            post = prompt.rsplit(_POST_MARKER, 1)[-1].strip()
            return f"{stub_score(post, self.lexicon):.4f}"
        rng = rng if rng is not None else _prompt_rng(prompt)
        m = _ATTITUDE_RE.search(prompt)
        attitude = float(m.group(1)) if m else 0.0
        m = _QUIRK_RE.search(prompt)
        quirk = m.group(1) if m else None
        news = prompt.rsplit(_NEWS_HEADER, 1)[-1].strip().split("\n", 1)[0]

        if attitude > 0.2:
            pool = self.lexicon.anti_terms
        elif attitude < -0.2:
            pool = self.lexicon.pro_terms
        else:
            pool = NEUTRAL_PHRASES
        stance = pool[int(rng.integers(len(pool)))]
        post = f"{stance.capitalize()} about {day_topic(news) or 'today'} - {QUIRK_MARKERS.get(quirk, '')}".rstrip(" -")
        if quirk == "all_lowercase":
            post = post.lower()
        return post


class OllamaBackend:
    """Client for an Ollama-compatible ``/api/generate`` endpoint.

    Transport and HTTP errors are retried ``retries`` times, then raised as
    :class:`BackendError`. At most ``max_in_flight`` requests run at once.
    """

    name = "remote"

    def __init__(
        self,
        base_url: str = DEFAULT_BASE_URL,
        model: str = DEFAULT_MODEL,
        timeout: float = 60.0,
        retries: int = 1,
        max_in_flight: int = 4,
    ):
        self.base_url = base_url.rstrip("/")
        self.model = model
        self.timeout = timeout
        self.retries = retries
        self._slots = threading.BoundedSemaphore(max_in_flight)

    def generate(self, prompt: str, temperature: float, rng: np.random.Generator | None = None) -> str:
        body = {
            "model": self.model,
            "prompt": prompt,
            "stream": False,
            "options": {"temperature": temperature},
        }
        last: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                with self._slots:
                    resp = requests.post(f"{self.base_url}/api/generate", json=body, timeout=self.timeout)
                resp.raise_for_status()
                text = resp.json()["response"]
                if not isinstance(text, str):
                    raise BackendError("'response' field is not a string")
                return text
            except (requests.RequestException, ValueError, KeyError, TypeError, BackendError) as exc:
                last = exc
        raise BackendError(f"generate failed after {self.retries + 1} attempt(s): {last}") from last


# ---------------------------------------------------------------- act + score


def generate_post(
    backend: GenerationBackend,
    prompt: str,
    temperature: float = GEN_TEMPERATURE,
    rng: np.random.Generator | None = None,
    fallback: GenerationBackend | None = None,
) -> tuple[str, bool]:
    """Return ``(post, fell_back)``; the post is cut to 40 words."""
    try:
        text = backend.generate(prompt, temperature, rng)
        fell_back = False
    except BackendError as exc:
        if fallback is None:
            raise
        log.warning("generation fell back to stub: %s", exc)
        text = fallback.generate(prompt, temperature, rng)
        fell_back = True
    return truncate_words(text.strip()), fell_back


_SCORE_HEADER = "Rate how anti-immigration the following social media post is."
_POST_MARKER = "POST:"

SCORING_PROMPT = "\n".join(
    [
        _SCORE_HEADER,
        "Answer with a single number between -1.0 and +1.0 on this scale:",
        "  -1.0  strongly pro-immigration (e.g. solidarity messaging, refugee rights advocacy)",
        "   0.0  neutral or ambivalent (e.g. reporting facts without stance)",
        "  +1.0  strongly anti-immigration (e.g. 'Ireland is Full', deportation demands)",
        "Reply with the number only.",
        "",
        _POST_MARKER,
    ]
)

# Optional sign, digits, optional fractional part. A literal reading of the
# published pattern would reject every non-negative reply.
_FLOAT_RE = re.compile(r"[-+]?\d+(?:\.\d*)?")


def scoring_prompt(post: str) -> str:
    return f"{SCORING_PROMPT}\n{post}"


def parse_score(reply: str) -> float:
    """First float-like token in ``reply``, clipped to [-1, 1]; 0.0 when none parses."""
    m = _FLOAT_RE.search(reply or "")
    if m is None:
        return 0.0
    return float(np.clip(float(m.group()), -1.0, 1.0))


def stub_score(post: str, lexicon: Lexicon = DEFAULT_LEXICON) -> float:
    """Lexicon score ``(anti - pro) / max(1, anti + pro)``."""
    pro, anti = sentiment_counts(post, lexicon)
    return (anti - pro) / max(1, anti + pro)


def score_post(
    backend: GenerationBackend,
    post: str,
    temperature: float = SCORE_TEMPERATURE,
    fallback: StubBackend | None = None,
) -> tuple[float, bool]:
    """Return ``(score, fell_back)`` for ``post``."""
    if isinstance(backend, StubBackend):
        return stub_score(post, backend.lexicon), False
    try:
        reply = backend.generate(scoring_prompt(post), temperature)
    except BackendError as exc:
        if fallback is None:
            raise
        log.warning("scoring fell back to stub: %s", exc)
        return stub_score(post, fallback.lexicon), True
    return parse_score(reply), False
