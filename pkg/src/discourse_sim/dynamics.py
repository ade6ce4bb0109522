"""End-of-day belief, attitude, mood and exposure updates.

All functions are pure. A day is applied in two phases by the engine: every
agent posts and is scored first, then :func:`step_agent` runs for each agent
against its neighbours' same-day scores.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .coefficients import DEFAULT_COEFFICIENTS, Coefficients
from .model import Agent, BeliefState
from .timeline import DayContext

__all__ = [
    "DayContext",
    "UpdateInputs",
    "attitude_update",
    "composite_belief",
    "inertia",
    "peer_pull",
    "step_agent",
    "update_attitude",
    "update_beliefs",
    "update_exposure",
    "update_mood",
]


def _clip(x: float, lo: float = -1.0, hi: float = 1.0) -> float:
    return float(min(hi, max(lo, x)))


@dataclass(frozen=True)
class UpdateInputs:
    own_score: float
    neighbor_scores: Sequence[float]
    day: DayContext = field(default_factory=lambda: DayContext(threat=0, humanitarian=0))


def inertia(openness: float, coef: Coefficients = DEFAULT_COEFFICIENTS) -> float:
    return 1.0 - openness * coef.inertia_openness_scale


def peer_mean(neighbor_scores: Sequence[float]) -> float | None:
    if len(neighbor_scores) == 0:
        return None
    return float(np.mean(neighbor_scores))


def peer_pull(conformity: float, trust_peers: float, peer_mean: float | None, attitude: float) -> float:
    """Pull toward the neighbourhood's mean post score; zero without neighbours."""
    if peer_mean is None:
        return 0.0
    return conformity * trust_peers * (peer_mean - attitude)


def update_mood(
    prev_mood: float, threat_present: bool, coef: Coefficients = DEFAULT_COEFFICIENTS
) -> float:
    shock = coef.mood_threat_shock if threat_present else coef.mood_calm_shock
    return _clip(coef.mood_decay * prev_mood + shock)


def composite_belief(beliefs: BeliefState, coef: Coefficients = DEFAULT_COEFFICIENTS) -> float:
    # Intentionally unclipped; only the final attitude is clipped.
    return (
        coef.w_economic * beliefs.economic_threat
        + coef.w_cultural * beliefs.cultural_threat
        + coef.w_security * beliefs.security_threat
        + coef.w_humanitarian * beliefs.humanitarian
    )


def update_beliefs(
    agent: Agent,
    day: DayContext,
    coef: Coefficients = DEFAULT_COEFFICIENTS,
    extended: bool = False,
) -> BeliefState:
    """Apply the day's keyword salience to the belief dimensions.

    Threat keywords raise ``security_threat``; humanitarian keywords raise
    ``humanitarian`` (further scaled by openness). Economic and cultural
    beliefs only move when ``extended`` is set, using the same per-keyword rule.
    """
    b, psych = agent.beliefs, agent.psych
    react = psych.emotional_reactivity
    security = b.security_threat + day.threat * coef.salience * react
    humanitarian = b.humanitarian + day.humanitarian * coef.salience * react * psych.openness
    economic, cultural = b.economic_threat, b.cultural_threat
    if extended:
        economic += day.economic * coef.salience * react
        cultural += day.cultural * coef.salience * react
    return BeliefState(
        economic_threat=_clip(economic),
        cultural_threat=_clip(cultural),
        security_threat=_clip(security),
        humanitarian=_clip(humanitarian),
    )


def attitude_update(
    prev_attitude: float,
    inertia_: float,
    own_score: float,
    pull: float,
    composite: float,
    coef: Coefficients = DEFAULT_COEFFICIENTS,
) -> float:
    flexible = coef.mix_own * own_score + coef.mix_peer * pull + coef.mix_belief * composite
    return _clip(inertia_ * prev_attitude + (1.0 - inertia_) * flexible)


def update_attitude(
    agent: Agent,
    inputs: UpdateInputs,
    beliefs: BeliefState | None = None,
    coef: Coefficients = DEFAULT_COEFFICIENTS,
) -> float:
    """New attitude for ``agent``; ``beliefs`` should be the already-updated state."""
    psych = agent.psych
    pull = peer_pull(psych.conformity, psych.trust_peers, peer_mean(inputs.neighbor_scores), agent.attitude)
    return attitude_update(
        agent.attitude,
        inertia(psych.openness, coef),
        inputs.own_score,
        pull,
        composite_belief(beliefs if beliefs is not None else agent.beliefs, coef),
        coef,
    )


def update_exposure(
    prev: float, reactivity: float, threat_present: bool, coef: Coefficients = DEFAULT_COEFFICIENTS
) -> float:
    if not threat_present:
        return prev
    return min(1.0, prev + coef.exposure_increment * reactivity)


def step_agent(
    agent: Agent,
    inputs: UpdateInputs,
    coef: Coefficients = DEFAULT_COEFFICIENTS,
    extended_beliefs: bool = False,
) -> Agent:
    """Return a new agent after one end-of-day update; ``agent`` is not modified.

    Order: beliefs, attitude (from the updated composite), mood, exposure.
    """
    beliefs = update_beliefs(agent, inputs.day, coef, extended_beliefs)
    attitude = update_attitude(agent, inputs, beliefs, coef)
    threat = inputs.day.threat_present
    new = copy.copy(agent)
    new.beliefs = beliefs
    new.attitude = attitude
    new.mood = update_mood(agent.mood, threat, coef)
    new.exposure = update_exposure(agent.exposure, agent.psych.emotional_reactivity, threat, coef)
    new.messages = list(agent.messages)
    new.reasoning_log = list(agent.reasoning_log)
    new.attitude_history = [*agent.attitude_history, attitude]
    return new
