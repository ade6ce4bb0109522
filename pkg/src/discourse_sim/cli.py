"""Command line entry point: ``discourse-sim run | validate | dump-population``.

Exit codes: 0 success, 1 usage or configuration error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from typing import Sequence

from .config import SimConfig, load_config
from .engine import agent_to_dict, prepare, run_simulation, write_outputs
from .generation import OfflineNews
from .model import ConfigError
from .timeline import TimelineError

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", metavar="PATH", help="JSON config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--days", type=int, dest="n_days")
    p.add_argument("--agents", type=int, dest="n_agents")
    p.add_argument("--timeline", dest="timeline_path", metavar="PATH")
    p.add_argument("--lexicon", dest="lexicon_path", metavar="PATH")
    p.add_argument("--news-fixture", dest="news_fixture_path", metavar="PATH")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="discourse-sim", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="run a simulation and write outputs")
    _common(run)
    run.add_argument("--backend", choices=("remote", "stub"))
    run.add_argument("--offline", action="store_true", default=None, help="use the news fixture, no web search")
    run.add_argument("--out", dest="out_dir", metavar="DIR")
    run.add_argument("--model", dest="model_name")
    run.add_argument("--base-url")
    run.add_argument("--workers", type=int)

    val = sub.add_parser("validate", help="check config, timeline and lexicon without running")
    _common(val)

    dump = sub.add_parser("dump-population", help="write the day-0 population as JSON")
    _common(dump)
    dump.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    dump.add_argument("--export-graph", metavar="PATH", help="also write the social graph as an edge list")
    return parser


_OVERRIDES = (
    "seed", "n_days", "n_agents", "timeline_path", "lexicon_path", "news_fixture_path",
    "backend", "offline", "out_dir", "model_name", "base_url", "workers",
)


def resolve_config(args: argparse.Namespace, environ=os.environ) -> SimConfig:
    """Config file, then environment, then flags; later wins."""
    cfg = load_config(args.config)
    env = {}
    if environ.get("DISCOURSE_BASE_URL"):
        env["base_url"] = environ["DISCOURSE_BASE_URL"]
    if environ.get("DISCOURSE_OFFLINE") == "1":
        env["offline"] = True
    cfg = cfg.with_overrides(**env)
    flags = {k: getattr(args, k) for k in _OVERRIDES if hasattr(args, k)}
    return cfg.with_overrides(**flags).validate()


def _cmd_run(args) -> int:
    cfg = resolve_config(args)
    result = run_simulation(cfg)
    files = write_outputs(result, cfg.out_dir)
    print(f"wrote {len(result.panel)} panel rows to {files['panel']}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    cfg = resolve_config(args)
    setup = prepare(cfg)
    if cfg.news_fixture_path:
        OfflineNews.from_file(cfg.news_fixture_path)
    print(
        f"ok: {cfg.n_agents} agents, {len(setup.timeline)} days, "
        f"{setup.graph.n_edges} edges, backend={cfg.backend}"
    )
    return EXIT_OK


def _cmd_dump(args) -> int:
    cfg = resolve_config(args)
    setup = prepare(cfg)
    text = json.dumps([agent_to_dict(a) for a in setup.agents], indent=1, ensure_ascii=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.export_graph:
        setup.graph.write_edgelist(args.export_graph)
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "validate": _cmd_validate, "dump-population": _cmd_dump}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, TimelineError, FileNotFoundError, ValueError) as exc:
        print(f"discourse-sim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        print(f"discourse-sim: runtime failure: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
