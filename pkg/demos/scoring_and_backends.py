"""Score posts with the offline stub and parse free-text model replies.

Run: python demos/scoring_and_backends.py

A local Ollama server is optional; if one is listening on the default port the
last section asks it for a score, otherwise it shows the stub fallback.
"""

from discourse_sim.generation import OllamaBackend, StubBackend, parse_score, score_post
from discourse_sim.timeline import classify_sentiment

posts = [
    "Ireland is full, deport them now",
    "Solidarity with refugees, welcome to our town",
    "Council meeting about bus lanes tonight",
    "Welcome the families but deport the illegal ones",
]
for post in posts:
    label, conf = classify_sentiment(post)
    score, _ = score_post(StubBackend(), post)
    print(f"{score:+.2f}  {label:<18} ({conf:.2f})  {post}")

print()
for reply in ["Score: -0.75, supportive tone", "2.5", "cannot determine", "+0.4"]:
    print(f"{reply!r:<36} -> {parse_score(reply):+.2f}")

print()
remote = OllamaBackend(timeout=2.0, retries=0)
score, fell_back = score_post(remote, posts[0], fallback=StubBackend())
print(f"remote score {score:+.2f} ({'stub fallback' if fell_back else 'from server'})")
