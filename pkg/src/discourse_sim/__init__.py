"""Seeded generative agent-based simulation of attitude diffusion after a critical event."""

__version__ = "0.1.0"

from .coefficients import DEFAULT_COEFFICIENTS, Coefficients
from .config import NetworkConfig, SimConfig, load_config
from .dynamics import (
    UpdateInputs,
    composite_belief,
    inertia,
    peer_pull,
    step_agent,
    update_attitude,
    update_beliefs,
    update_exposure,
    update_mood,
)
from .engine import (
    DailyMetrics,
    PanelRow,
    SimulationResult,
    compute_metrics,
    run_simulation,
    write_outputs,
)
from .generation import OllamaBackend, StubBackend, parse_score
from .model import (
    Agent,
    AgentKind,
    BeliefState,
    ConfigError,
    PsychProfile,
    kind_distribution,
    sample_agent,
    sample_population,
)
from .network import SocialGraph, build_ws_graph
from .timeline import DayContext, EvidenceLevel, Lexicon, Timeline, load_timeline

__all__ = [
    "Agent",
    "AgentKind",
    "BeliefState",
    "Coefficients",
    "ConfigError",
    "DEFAULT_COEFFICIENTS",
    "DailyMetrics",
    "DayContext",
    "EvidenceLevel",
    "Lexicon",
    "NetworkConfig",
    "OllamaBackend",
    "PanelRow",
    "PsychProfile",
    "SimConfig",
    "SimulationResult",
    "SocialGraph",
    "StubBackend",
    "Timeline",
    "UpdateInputs",
    "build_ws_graph",
    "composite_belief",
    "compute_metrics",
    "inertia",
    "kind_distribution",
    "load_config",
    "load_timeline",
    "parse_score",
    "peer_pull",
    "run_simulation",
    "sample_agent",
    "sample_population",
    "step_agent",
    "update_attitude",
    "update_beliefs",
    "update_exposure",
    "update_mood",
    "write_outputs",
]
