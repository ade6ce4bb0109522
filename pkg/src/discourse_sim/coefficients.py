"""Numeric coefficients of the daily belief-update model.

The defaults are frozen; experiments that vary them build a new record with
:func:`Coefficients.with_overrides` so the defaults stay pinned by tests.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Mapping


@dataclass(frozen=True)
class Coefficients:
    # news salience, per keyword occurrence
    salience: float = 0.06
    # exposure increment on threat days, scaled by emotional reactivity
    exposure_increment: float = 0.07
    mood_decay: float = 0.8
    mood_threat_shock: float = -0.1
    mood_calm_shock: float = 0.04
    inertia_openness_scale: float = 0.5
    # composite belief weights; humanitarian enters with a negative sign
    w_economic: float = 0.3
    w_cultural: float = 0.3
    w_security: float = 0.2
    w_humanitarian: float = -0.2
    # flexible attitude mix
    mix_own: float = 0.4
    mix_peer: float = 0.3
    mix_belief: float = 0.3

    def with_overrides(self, overrides: Mapping[str, float] | None) -> "Coefficients":
        if not overrides:
            return self
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown coefficient(s): {', '.join(sorted(unknown))}")
        return replace(self, **{k: float(v) for k, v in overrides.items()})

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


DEFAULT_COEFFICIENTS = Coefficients()
