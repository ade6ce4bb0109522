"""Day loop, daily metrics and output files."""

from __future__ import annotations

import csv
import dataclasses
import datetime as dt
import json
import logging
import platform
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from . import __version__
from . import rng as rngmod
from .coefficients import DEFAULT_COEFFICIENTS, Coefficients
from .config import SimConfig
from .dynamics import UpdateInputs, step_agent
from .generation import (
    GenerationBackend,
    NewsClient,
    OfflineNews,
    OllamaBackend,
    StubBackend,
    WebSearchClient,
    build_prompt,
    generate_post,
    observe,
    score_post,
)
from .model import KIND_ORDER, Agent, assign_quirk, merge_priors, sample_population
from .network import SocialGraph, build_ws_graph
from .timeline import Lexicon, Timeline, bundled_path, load_lexicon, load_timeline, scan_day

log = logging.getLogger(__name__)

KIND_NAMES = tuple(k.value for k in KIND_ORDER)


@dataclass
class PanelRow:
    day: int
    date: dt.date
    agent_id: str
    kind: str
    post: str
    own_score: float
    attitude: float
    mood: float
    exposure: float
    economic_threat: float
    cultural_threat: float
    security_threat: float
    humanitarian: float
    backend_used: str
    evidence_level: str


PANEL_FIELDS = tuple(f.name for f in dataclasses.fields(PanelRow))


@dataclass
class DailyMetrics:
    day: int
    mean_attitude: float
    polarization: float
    mean_mood: float
    mean_exposure: float
    kind_attitude: dict[str, float] = field(default_factory=dict)
    bimodality: float | None = None

    def as_row(self, with_bimodality: bool = False) -> dict[str, Any]:
        row = {
            "day": self.day,
            "mean_attitude": self.mean_attitude,
            "polarization": self.polarization,
            "mean_mood": self.mean_mood,
            "mean_exposure": self.mean_exposure,
        }
        row.update({f"mean_attitude_{k}": self.kind_attitude.get(k, float("nan")) for k in KIND_NAMES})
        if with_bimodality:
            row["bimodality"] = self.bimodality
        return row


def metrics_fields(with_bimodality: bool = False) -> list[str]:
    return list(DailyMetrics(0, 0, 0, 0, 0).as_row(with_bimodality))


def bimodality_coefficient(x: np.ndarray) -> float:
    """Sarle's sample bimodality coefficient; NaN for fewer than 4 values or zero spread."""
    n = len(x)
    if n < 4:
        return float("nan")
    d = x - x.mean()
    m2 = np.mean(d**2)
    if m2 == 0:
        return float("nan")
    g1 = np.mean(d**3) / m2**1.5
    g2 = np.mean(d**4) / m2**2 - 3.0
    skew = g1 * np.sqrt(n * (n - 1)) / (n - 2)
    kurt = ((n + 1) * g2 + 6) * (n - 1) / ((n - 2) * (n - 3))
    return float((skew**2 + 1) / (kurt + 3 * (n - 1) ** 2 / ((n - 2) * (n - 3))))


def _metrics(day: int, kinds: Sequence[str], attitude, mood, exposure) -> DailyMetrics:
    attitude = np.asarray(attitude, dtype=float)
    kinds_arr = np.asarray(kinds)
    per_kind = {}
    for k in KIND_NAMES:
        sel = attitude[kinds_arr == k]
        per_kind[k] = float(np.mean(sel)) if sel.size else float("nan")
    return DailyMetrics(
        day=day,
        mean_attitude=float(np.mean(attitude)),
        polarization=float(np.std(attitude)),
        mean_mood=float(np.mean(mood)),
        mean_exposure=float(np.mean(exposure)),
        kind_attitude=per_kind,
        bimodality=bimodality_coefficient(attitude),
    )


def compute_metrics(agents: Sequence[Agent], day: int) -> DailyMetrics:
    """Population mean, population standard deviation ("polarization") and per-kind means."""
    if not agents:
        raise ValueError("cannot compute metrics for an empty population")
    return _metrics(
        day,
        [a.kind.value for a in agents],
        [a.attitude for a in agents],
        [a.mood for a in agents],
        [a.exposure for a in agents],
    )


def metrics_from_panel(rows: Iterable[PanelRow | dict]) -> list[DailyMetrics]:
    """Recompute daily metrics from panel rows (objects or CSV dicts)."""
    by_day: dict[int, list] = {}
    for r in rows:
        r = dataclasses.asdict(r) if isinstance(r, PanelRow) else r
        by_day.setdefault(int(r["day"]), []).append(r)
    out = []
    for day in sorted(by_day):
        rs = by_day[day]
        out.append(
            _metrics(
                day,
                [r["kind"] for r in rs],
                [float(r["attitude"]) for r in rs],
                [float(r["mood"]) for r in rs],
                [float(r["exposure"]) for r in rs],
            )
        )
    return out


@dataclass
class SimulationResult:
    config: SimConfig
    panel: list[PanelRow]
    metrics: list[DailyMetrics]
    agents: list[Agent]
    initial_agents: list[Agent]
    graph: SocialGraph
    timeline: Timeline


def make_backend(config: SimConfig) -> GenerationBackend:
    if config.backend == "stub":
        return StubBackend()
    return OllamaBackend(
        base_url=config.base_url,
        model=config.model_name,
        timeout=config.request_timeout,
        max_in_flight=config.max_in_flight,
    )


def make_news_client(config: SimConfig) -> NewsClient:
    if config.offline:
        return OfflineNews.from_file(config.news_fixture_path or bundled_path("news_fixture.json"))
    return WebSearchClient(config.search_endpoint)


@dataclass
class _Setup:
    agents: list[Agent]
    graph: SocialGraph
    timeline: Timeline
    lexicon: Lexicon
    coefficients: Coefficients


def prepare(config: SimConfig) -> _Setup:
    """Validate the config and build population, graph, timeline and lexicon."""
    config.validate()
    priors = merge_priors(config.priors)
    return _Setup(
        agents=sample_population(config.n_agents, config.seed, priors),
        graph=build_ws_graph(
            config.n_agents, config.network.k, config.network.p, rngmod.stream(config.seed, rngmod.GRAPH)
        ),
        timeline=load_timeline(config.timeline_path, config.n_days),
        lexicon=load_lexicon(config.lexicon_path),
        coefficients=DEFAULT_COEFFICIENTS.with_overrides(config.coefficients),
    )


def run_simulation(
    config: SimConfig,
    backend: GenerationBackend | None = None,
    news_client: NewsClient | None = None,
) -> SimulationResult:
    """Run ``config.n_days`` days over the whole population.

    Each day has two phases separated by a barrier: every agent observes,
    posts and is scored; then every agent is updated from its own score and
    its neighbours' same-day scores. With the stub backend the result is a
    pure function of ``config``, whatever ``config.workers`` is.
    """
    setup = prepare(config)
    backend = backend if backend is not None else make_backend(config)
    news_client = news_client if news_client is not None else make_news_client(config)
    stub = backend if isinstance(backend, StubBackend) else StubBackend(setup.lexicon)
    if isinstance(backend, StubBackend):
        backend.lexicon = setup.lexicon
    timeline, graph, coef = setup.timeline, setup.graph, setup.coefficients

    agents = setup.agents
    initial = [a.copy() for a in agents]
    panel: list[PanelRow] = []
    metrics: list[DailyMetrics] = []

    def act(agent: Agent, day: int) -> tuple[float, str]:
        entry = timeline[day]
        assign_quirk(agent, rngmod.stream(config.seed, rngmod.QUIRK, agent.index))
        obs = observe(agent, entry, news_client, timeline.critical_event)
        prompt = build_prompt(agent, obs)
        post, gen_fb = generate_post(
            backend,
            prompt,
            config.gen_temperature,
            rng=rngmod.stream(config.seed, rngmod.STUB_POST, agent.index, day),
            fallback=stub,
        )
        agent.messages.append(post)
        score, score_fb = score_post(backend, post, config.score_temperature, fallback=stub)
        if backend is stub:
            used = "stub"
        else:
            used = "stub_fallback" if gen_fb or score_fb else "remote"
        return score, used

    pool = ThreadPoolExecutor(max_workers=config.workers) if config.workers > 1 else None
    try:
        for day in range(len(timeline)):
            entry = timeline[day]
            if pool is None:
                results = [act(a, day) for a in agents]
            else:
                results = list(pool.map(lambda a: act(a, day), agents))
            scores = [s for s, _ in results]

            ctx = scan_day(entry.text, setup.lexicon)
            agents = [
                step_agent(
                    a,
                    UpdateInputs(
                        own_score=scores[i],
                        neighbor_scores=[scores[j] for j in graph.neighbors(i)],
                        day=ctx,
                    ),
                    coef,
                    config.extended_beliefs,
                )
                for i, a in enumerate(agents)
            ]

            for a, (score, used) in zip(agents, results):
                b = a.beliefs
                panel.append(
                    PanelRow(
                        day=day,
                        date=entry.date,
                        agent_id=a.id,
                        kind=a.kind.value,
                        post=a.messages[-1],
                        own_score=score,
                        attitude=a.attitude,
                        mood=a.mood,
                        exposure=a.exposure,
                        economic_threat=b.economic_threat,
                        cultural_threat=b.cultural_threat,
                        security_threat=b.security_threat,
                        humanitarian=b.humanitarian,
                        backend_used=used,
                        evidence_level=entry.evidence.value,
                    )
                )
            metrics.append(compute_metrics(agents, day))
            log.info("day %d: mean attitude %+.3f", day, metrics[-1].mean_attitude)
    finally:
        if pool is not None:
            pool.shutdown()

    return SimulationResult(
        config=config,
        panel=panel,
        metrics=metrics,
        agents=agents,
        initial_agents=initial,
        graph=graph,
        timeline=timeline,
    )


# ---------------------------------------------------------------- outputs


def agent_to_dict(agent: Agent) -> dict[str, Any]:
    d = dataclasses.asdict(agent)
    d["kind"] = agent.kind.value
    return d


def _csv_value(v: Any) -> Any:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, dt.date):
        return v.isoformat()
    return v


def write_panel(rows: Sequence[PanelRow], path: Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(PANEL_FIELDS)
        for r in rows:
            w.writerow([_csv_value(getattr(r, f)) for f in PANEL_FIELDS])


def write_metrics(metrics: Sequence[DailyMetrics], path: Path, with_bimodality: bool = False) -> None:
    names = metrics_fields(with_bimodality)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(names)
        for m in metrics:
            row = m.as_row(with_bimodality)
            w.writerow([_csv_value(row[n]) for n in names])


def read_panel(path: str | Path) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def versions() -> dict[str, str]:
    return {"discourse_sim": __version__, "python": platform.python_version(), "numpy": np.__version__}


def write_population(agents: Sequence[Agent], path: Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump([agent_to_dict(a) for a in agents], fh, indent=1, ensure_ascii=False)
        fh.write("\n")


def write_outputs(result: SimulationResult, out_dir: str | Path) -> dict[str, Path]:
    """Write panel.csv, metrics.csv, run_summary.json, graph.edgelist and population.json."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        files = {
            "panel": out / "panel.csv",
            "metrics": out / "metrics.csv",
            "summary": out / "run_summary.json",
            "graph": out / "graph.edgelist",
            "population": out / "population.json",
        }
        cfg = result.config
        write_panel(result.panel, files["panel"])
        write_metrics(result.metrics, files["metrics"], cfg.bimodality)
        result.graph.write_edgelist(files["graph"])
        write_population(result.initial_agents, files["population"])
        summary = {
            "config": cfg.to_dict(),
            "seed": cfg.seed,
            "versions": versions(),
            "n_panel_rows": len(result.panel),
            "n_edges": result.graph.n_edges,
            "metrics": [m.as_row(cfg.bimodality) for m in result.metrics],
        }
        with open(files["summary"], "w", encoding="utf-8") as fh:
            # NaN is written as null so the file stays strict JSON
            json.dump(_nan_to_none(summary), fh, indent=2, ensure_ascii=False)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"cannot write outputs to {out}: {exc}") from exc
    return files


def _nan_to_none(obj: Any) -> Any:
    if isinstance(obj, float) and obj != obj:
        return None
    if isinstance(obj, dict):
        return {k: _nan_to_none(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_nan_to_none(v) for v in obj]
    return obj
