"""Command line interface.

Exit codes: 0 success (warnings allowed), 1 error diagnostics or an
unknown scenario/format, 2 usage or I/O failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .analysis import NoTerminiError, coverage, lint_chain, report_to_dict
from .dsl import parse
from .model import (
    ERROR,
    ControlStatus,
    Diagnostic,
    RiskModel,
    rank_scenarios,
    validate_model,
)
from .report import render_dot, render_markdown
from .service import ModelStore, create_server, default_port
from .taxonomy import builtin_taxonomy


def _print_diagnostic(diag: Diagnostic):
    if diag.span is not None:
        locator = f"{diag.span.line}:{diag.span.column}"
    elif diag.location:
        locator = diag.location
    else:
        locator = "-"
    print(f"{diag.severity} {diag.code} {locator} {diag.message}", file=sys.stderr)


def _read_source(path: str) -> str | None:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return None


def _load_clean(path: str) -> RiskModel | int:
    """Parse and validate; print diagnostics and return an exit code on failure."""
    text = _read_source(path)
    if text is None:
        return 2
    result = parse(text)
    if result.model is None:
        for diag in result.diagnostics:
            _print_diagnostic(diag)
        return 1
    diags = validate_model(result.model, builtin_taxonomy())
    if any(d.severity == ERROR for d in diags):
        for diag in diags:
            _print_diagnostic(diag)
        return 1
    return result.model


def cmd_check(args) -> int:
    text = _read_source(args.file)
    if text is None:
        return 2
    result = parse(text)
    diags = list(result.diagnostics)
    if result.model is not None:
        diags.extend(validate_model(result.model, builtin_taxonomy()))
        # lint assumes structural validity, so skip it once errors exist
        if not any(d.severity == ERROR for d in diags):
            for scenario in result.model.scenarios:
                diags.extend(lint_chain(scenario))
    seen = set()
    for diag in diags:
        key = (diag.severity, diag.code, diag.location, diag.span, diag.message)
        if key in seen:
            continue
        seen.add(key)
        _print_diagnostic(diag)
    return 1 if any(d.severity == ERROR for d in diags) else 0


def cmd_rank(args) -> int:
    model = _load_clean(args.file)
    if isinstance(model, int):
        return model
    ranking = rank_scenarios(model)
    titles = {s.id: s.title for s in model.scenarios}
    for i, (scenario_id, score) in enumerate(ranking, start=1):
        print(f"{i} {scenario_id} {score} {titles[scenario_id]}")
    return 0


def _parse_statuses(raw: str | None):
    if not raw:
        return frozenset({ControlStatus.implemented})
    names = [part.strip() for part in raw.split(",") if part.strip()]
    statuses = set()
    for name in names:
        if name not in ControlStatus.__members__:
            return None
        statuses.add(ControlStatus[name])
    return frozenset(statuses) if statuses else None


def _print_report_text(report):
    print(f"scenario {report.scenario_id}")
    print(f"  statuses: {', '.join(sorted(s.name for s in report.statuses))}")
    print(f"  sources: {', '.join(report.sources)}")
    print(f"  sinks: {', '.join(report.sinks)}")
    capped = " (capped)" if report.capped else ""
    print(f"  paths: {report.path_count}{capped}")
    print(f"  uncut paths: {len(report.uncut_paths)}")
    print(f"  min defense depth: {report.min_defense_depth}")
    example = ", ".join(report.min_cut_example) if report.min_cut_example else "none"
    print(f"  min cut size: {report.min_cut_size} (example: {example})")


def cmd_analyze(args) -> int:
    model = _load_clean(args.file)
    if isinstance(model, int):
        return model
    statuses = _parse_statuses(args.statuses)
    if statuses is None:
        print(f"error: invalid --statuses value {args.statuses!r}", file=sys.stderr)
        return 2
    if args.scenario:
        scenario = model.find_scenario(args.scenario)
        if scenario is None:
            print(f"error: unknown scenario {args.scenario!r}", file=sys.stderr)
            return 1
        scenarios = [scenario]
    else:
        scenarios = list(model.scenarios)

    results = []
    for scenario in scenarios:
        try:
            results.append(coverage(scenario, statuses=statuses))
        except NoTerminiError as exc:
            results.append(Diagnostic(ERROR, "no-termini", str(exc), location=scenario.id))

    if args.json:
        payload = [
            report_to_dict(r) if not isinstance(r, Diagnostic) else
            {"scenario": r.location, "error": r.code, "message": r.message}
            for r in results
        ]
        print(json.dumps(payload[0] if args.scenario else payload, indent=2))
    else:
        for i, r in enumerate(results):
            if i:
                print()
            if isinstance(r, Diagnostic):
                print(f"scenario {r.location}")
                print(f"  not analyzable: {r.message}")
            else:
                _print_report_text(r)
    return 0


def cmd_render(args) -> int:
    model = _load_clean(args.file)
    if isinstance(model, int):
        return model
    if args.format == "dot":
        if not args.scenario:
            print("error: --format dot requires --scenario", file=sys.stderr)
            return 2
        scenario = model.find_scenario(args.scenario)
        if scenario is None:
            print(f"error: unknown scenario {args.scenario!r}", file=sys.stderr)
            return 1
        text = render_dot(scenario)
    elif args.format == "md":
        if args.scenario and model.find_scenario(args.scenario) is None:
            print(f"error: unknown scenario {args.scenario!r}", file=sys.stderr)
            return 1
        text = render_markdown(model)
    else:
        print(f"error: unknown format {args.format!r} (expected dot or md)", file=sys.stderr)
        return 1
    if args.output:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0


def cmd_init(args) -> int:
    target_dir = Path(args.dir)
    target = target_dir / "hiring.rcm"
    if target.exists():
        print(f"error: {target} already exists, not overwriting", file=sys.stderr)
        return 1
    try:
        target_dir.mkdir(parents=True, exist_ok=True)
        fixture = resources.files("rcmodel") / "fixtures" / "hiring.rcm"
        target.write_text(fixture.read_text(encoding="utf-8"), encoding="utf-8")
        readme = target_dir / "README.md"
        if not readme.exists():
            readme.write_text(
                "# Risk model workspace\n"
                "\n"
                "Start from `hiring.rcm`, a worked hiring-support example.\n"
                "\n"
                "    rcmodel check hiring.rcm\n"
                "    rcmodel analyze hiring.rcm --scenario R001\n"
                "    rcmodel render hiring.rcm --format md\n"
                "    rcmodel serve hiring.rcm\n",
                encoding="utf-8",
            )
    except OSError as exc:
        print(f"error: cannot initialize {target_dir}: {exc}", file=sys.stderr)
        return 2
    print(f"created {target}")
    return 0


def cmd_serve(args) -> int:
    model = _load_clean(args.file)
    if isinstance(model, int):
        return model
    store = ModelStore(Path(args.file), model)
    try:
        server = create_server(store, args.port, log_requests=True)
    except OSError as exc:
        print(f"error: cannot bind port {args.port}: {exc}", file=sys.stderr)
        return 2
    # report the bound port (it differs from the request for --port 0)
    port = server.server_address[1]
    print(f"serving {args.file} on http://127.0.0.1:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rcmodel", description="Author and analyze AI-service risk chain models."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="parse, validate and lint a model file")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("rank", help="list scenarios by impact x likelihood")
    p.add_argument("file")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("analyze", help="coverage, defense depth and cut analysis")
    p.add_argument("file")
    p.add_argument("--scenario", help="analyze a single scenario")
    p.add_argument("--statuses", help="comma-separated control statuses to count as live")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("render", help="render DOT or markdown")
    p.add_argument("file")
    p.add_argument("--format", required=True, help="dot or md")
    p.add_argument("--scenario", help="scenario id (required for dot)")
    p.add_argument("-o", "--output", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("init", help="write a starter model into a directory")
    p.add_argument("dir")
    p.set_defaults(func=cmd_init)

    p = sub.add_parser("serve", help="serve the model over HTTP with the editing UI")
    p.add_argument("file")
    p.add_argument("--port", type=int, default=default_port())
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entrypoint():
    sys.exit(main())
