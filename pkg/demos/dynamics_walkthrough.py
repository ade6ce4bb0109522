"""Step one agent through a few days by hand to see each update rule at work.

Run: python demos/dynamics_walkthrough.py
"""

import numpy as np

from discourse_sim import UpdateInputs, sample_agent, step_agent
from discourse_sim.dynamics import composite_belief, inertia
from discourse_sim.timeline import DEFAULT_LEXICON, scan_day

agent = sample_agent("agent_0", "centrist", np.random.default_rng(3))
print(f"start: attitude {agent.attitude:+.3f}, openness {agent.psych.openness:.2f}, "
      f"inertia {inertia(agent.psych.openness):.2f}")

days = [
    "Reports of an attack spread online; protest called for the city centre.",
    "Volunteers organise a welcome event for new arrivals.",
    "Quiet day, council debates housing budget.",
    "Another protest; police report violence near the hotel.",
]
neighbours = [0.6, 0.2, -0.1]

for d, text in enumerate(days):
    ctx = scan_day(text, DEFAULT_LEXICON)
    # The agent's own post leans with its current attitude
    own = float(np.clip(agent.attitude + 0.1, -1, 1))
    agent = step_agent(agent, UpdateInputs(own_score=own, neighbor_scores=neighbours, day=ctx))
    print(f"day {d}: threat={ctx.threat_present!s:<5} attitude {agent.attitude:+.3f} "
          f"mood {agent.mood:+.3f} exposure {agent.exposure:.3f} "
          f"security {agent.beliefs.security_threat:.3f} composite {composite_belief(agent.beliefs):+.3f}")

print("history:", [round(a, 3) for a in agent.attitude_history])
