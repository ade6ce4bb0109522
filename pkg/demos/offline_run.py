"""Run the full 15-day simulation offline with the stub backend and summarise it.

Run: python demos/offline_run.py [out_dir]
"""

import sys

from discourse_sim import SimConfig, run_simulation, write_outputs

out_dir = sys.argv[1] if len(sys.argv) > 1 else "runs/demo"
config = SimConfig(backend="stub", offline=True, seed=42)
result = run_simulation(config)

print(f"{len(result.panel)} panel rows over {config.n_days} days")
print(" day  mean_att  polar   mood    exposure  far_right  pro_imm")
for m in result.metrics:
    print(f" {m.day:>3}  {m.mean_attitude:+.3f}    {m.polarization:.3f}  {m.mean_mood:+.3f}  {m.mean_exposure:.3f}"
          f"     {m.kind_attitude['far_right']:+.3f}     {m.kind_attitude['pro_imm']:+.3f}")

first = result.agents[0]
print(f"\n{first.id} ({first.kind.value}, quirk {first.quirk}) last post:\n  {first.messages[-1]}")

files = write_outputs(result, out_dir)
print("\nwrote:", ", ".join(str(p) for p in files.values()))
