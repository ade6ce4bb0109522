"""Agent data model and kind-stratified population sampling."""

from __future__ import annotations

import copy
import enum
from dataclasses import dataclass, field
from typing import Any, Mapping

import numpy as np

from . import rng as rngmod


class AgentKind(str, enum.Enum):
    FAR_RIGHT = "far_right"
    PRO_IMM = "pro_imm"
    CENTRIST = "centrist"
    MEDIA = "media"


# Table order; also the tie-break order for largest-remainder apportionment.
KIND_ORDER = (AgentKind.CENTRIST, AgentKind.PRO_IMM, AgentKind.FAR_RIGHT, AgentKind.MEDIA)

QUIRKS = (
    "sarcasm",
    "emojis",
    "hashtags",
    "formal_tone",
    "rhetorical_questions",
    "all_lowercase",
    "statistics_citing",
    "personal_anecdote",
)

PSYCH_BOUNDS = {
    "openness": (0.1, 1.0),
    "conformity": (0.3, 0.8),
    "emotional_reactivity": (0.2, 1.0),
    "trust_peers": (0.4, 0.9),
}


class ConfigError(ValueError):
    """Invalid configuration (bad kind, bad bounds, bad graph parameters...)."""


@dataclass
class PsychProfile:
    openness: float
    conformity: float
    emotional_reactivity: float
    trust_peers: float


@dataclass
class BeliefState:
    economic_threat: float = 0.0
    cultural_threat: float = 0.0
    security_threat: float = 0.0
    humanitarian: float = 0.0

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.economic_threat, self.cultural_threat, self.security_threat, self.humanitarian)


@dataclass
class ToolCallRecord:
    tool_name: str
    tool_input: str


@dataclass
class Agent:
    id: str
    kind: AgentKind
    attitude: float
    beliefs: BeliefState
    psych: PsychProfile
    exposure: float = 0.0
    mood: float = 0.0
    quirk: str | None = None
    messages: list[str] = field(default_factory=list)
    attitude_history: list[float] = field(default_factory=list)
    reasoning_log: list[ToolCallRecord] = field(default_factory=list)

    @property
    def index(self) -> int:
        return int(self.id.rsplit("_", 1)[1])

    def copy(self) -> "Agent":
        return copy.deepcopy(self)


def _narrow(lo: float, hi: float, factor: float = 0.5) -> tuple[float, float]:
    mid, half = (lo + hi) / 2, (hi - lo) / 2 * factor
    return (mid - half, mid + half)


_CENTRIST_BELIEFS = {
    "economic_threat": (-0.2, 0.4),
    "cultural_threat": (-0.2, 0.3),
    "humanitarian": (0.0, 0.5),
}

# Per-kind uniform prior bounds. Psych bounds for openness and reactivity are
# directional choices (media: open and calm; far_right: closed and reactive).
DEFAULT_PRIORS: dict[AgentKind, dict[str, tuple[float, float]]] = {
    AgentKind.FAR_RIGHT: {
        "attitude": (0.5, 1.0),
        "economic_threat": (0.4, 0.9),
        "cultural_threat": (0.4, 0.9),
        "humanitarian": (-0.5, 0.1),
        "openness": (0.1, 0.4),
        "emotional_reactivity": (0.6, 1.0),
    },
    AgentKind.PRO_IMM: {
        "attitude": (-1.0, -0.3),
        "economic_threat": (-0.5, 0.1),
        "cultural_threat": (-0.5, 0.0),
        "humanitarian": (0.4, 1.0),
        "openness": (0.4, 0.8),
        "emotional_reactivity": (0.4, 0.8),
    },
    AgentKind.CENTRIST: {
        "attitude": (-0.4, 0.4),
        **_CENTRIST_BELIEFS,
        "openness": (0.3, 0.7),
        "emotional_reactivity": (0.3, 0.7),
    },
    AgentKind.MEDIA: {
        "attitude": (-0.3, 0.3),
        **{k: _narrow(*v) for k, v in _CENTRIST_BELIEFS.items()},
        "openness": (0.6, 1.0),
        "emotional_reactivity": (0.2, 0.5),
    },
}
for _bounds in DEFAULT_PRIORS.values():
    _bounds.setdefault("conformity", PSYCH_BOUNDS["conformity"])
    _bounds.setdefault("trust_peers", PSYCH_BOUNDS["trust_peers"])

# Draw order inside one agent's stream; fixed so populations are reproducible.
_DRAW_ORDER = (
    "attitude",
    "economic_threat",
    "cultural_threat",
    "humanitarian",
    "openness",
    "conformity",
    "emotional_reactivity",
    "trust_peers",
)


def kind_distribution() -> dict[AgentKind, float]:
    return {
        AgentKind.CENTRIST: 0.45,
        AgentKind.PRO_IMM: 0.25,
        AgentKind.FAR_RIGHT: 0.20,
        AgentKind.MEDIA: 0.10,
    }


def merge_priors(
    overrides: Mapping[str, Mapping[str, Any]] | None,
) -> dict[AgentKind, dict[str, tuple[float, float]]]:
    """Return the default prior table with per-kind, per-field overrides applied.

    ``overrides`` looks like ``{"media": {"openness": [0.5, 0.9]}}``.
    """
    priors = {k: dict(v) for k, v in DEFAULT_PRIORS.items()}
    for kind_name, fields_ in (overrides or {}).items():
        kind = _as_kind(kind_name)
        for name, bounds in fields_.items():
            if name not in _DRAW_ORDER:
                raise ConfigError(f"unknown prior field {name!r} for kind {kind.value}")
            lo, hi = (float(b) for b in bounds)
            if lo > hi:
                raise ConfigError(f"prior {kind.value}.{name}: lower bound {lo} > upper bound {hi}")
            outer = PSYCH_BOUNDS.get(name, (-1.0, 1.0))
            if lo < outer[0] or hi > outer[1]:
                raise ConfigError(f"prior {kind.value}.{name} [{lo}, {hi}] outside {list(outer)}")
            priors[kind][name] = (lo, hi)
    return priors


def _as_kind(kind: AgentKind | str) -> AgentKind:
    try:
        return AgentKind(kind)
    except ValueError:
        raise ConfigError(f"unknown agent kind: {kind!r}") from None


def sample_agent(
    id: str,
    kind: AgentKind | str,
    rng: np.random.Generator,
    priors: Mapping[AgentKind, Mapping[str, tuple[float, float]]] | None = None,
) -> Agent:
    kind = _as_kind(kind)
    bounds = (priors or DEFAULT_PRIORS)[kind]
    draws = {name: float(rng.uniform(*bounds[name])) for name in _DRAW_ORDER}
    exposure = 0.0
    return Agent(
        id=id,
        kind=kind,
        attitude=draws["attitude"],
        exposure=exposure,
        beliefs=BeliefState(
            economic_threat=draws["economic_threat"],
            cultural_threat=draws["cultural_threat"],
            security_threat=exposure,
            humanitarian=draws["humanitarian"],
        ),
        psych=PsychProfile(
            openness=draws["openness"],
            conformity=draws["conformity"],
            emotional_reactivity=draws["emotional_reactivity"],
            trust_peers=draws["trust_peers"],
        ),
    )


def apportion(n: int, proportions: Mapping[AgentKind, float]) -> dict[AgentKind, int]:
    """Largest-remainder apportionment of ``n`` seats; ties go to table order."""
    quotas = {k: n * proportions[k] for k in KIND_ORDER}
    counts = {k: int(np.floor(q + 1e-9)) for k, q in quotas.items()}
    leftover = n - sum(counts.values())
    by_remainder = sorted(KIND_ORDER, key=lambda k: (-round(quotas[k] - counts[k], 9), KIND_ORDER.index(k)))
    for k in by_remainder[:leftover]:
        counts[k] += 1
    return counts


def sample_population(
    n: int,
    seed: int = 42,
    priors: Mapping[AgentKind, Mapping[str, tuple[float, float]]] | None = None,
) -> list[Agent]:
    """Sample ``n`` agents with kind counts fixed by apportionment.

    Kind labels are shuffled over agent ids with the population stream; the
    attributes of agent ``i`` are drawn from a stream keyed by ``(seed, i)``.
    """
    if n < 0:
        raise ConfigError("population size must be >= 0")
    counts = apportion(n, kind_distribution())
    kinds = [k for k in KIND_ORDER for _ in range(counts[k])]
    rngmod.stream(seed, rngmod.POPULATION).shuffle(kinds)
    return [
        sample_agent(f"agent_{i}", kind, rngmod.stream(seed, rngmod.AGENT, i), priors)
        for i, kind in enumerate(kinds)
    ]


def assign_quirk(agent: Agent, rng: np.random.Generator) -> Agent:
    if agent.quirk is None:
        agent.quirk = QUIRKS[int(rng.integers(len(QUIRKS)))]
    return agent
