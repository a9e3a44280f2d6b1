"""Command line interface.

Subcommands:

* ``run``      - replay an input trace against a scene, write a trajectory
* ``check``    - run both scripting paths and report equivalence
* ``validate`` - parse + validate a graph file, optionally re-emit it
* ``scene``    - write the standard table as a scene document
* ``serve``    - interactive WebSocket session server

Exit codes: 0 success, 1 check found a divergence, 2 input/validation errors,
3 runtime faults (graph fault or numerical divergence).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import graphlang
from .errors import FlowballError, NumericalDivergence, RuntimeFault
from .graph.validate import validate as validate_graph
from .harness import InputTrace, check_equivalence, run as run_trace
from .physics import PhysicsConfig
from .scenefile import SceneConfig, load_scene, pool_document

EXIT_OK = 0
EXIT_DIVERGED = 1
EXIT_INVALID = 2
EXIT_FAULT = 3


def _load_trace(path: str | None) -> InputTrace:
    if path is None:
        return InputTrace()
    return InputTrace.load(path)


def _cmd_run(args: argparse.Namespace) -> int:
    trace = _load_trace(args.trace)
    scene = load_scene(args.scene, mode=args.mode)
    cfg = scene.physics or PhysicsConfig()
    if args.fixed_dt is not None:
        cfg = PhysicsConfig(
            fixed_dt=args.fixed_dt,
            table_half_extent=cfg.table_half_extent,
            rail_restitution=cfg.rail_restitution,
        )
    trajectory = run_trace(scene, args.mode, trace, args.steps, config=cfg)
    text = trajectory.to_jsonl()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        last = trajectory.records[-1] if trajectory.records else None
        won = " won" if trajectory.won else ""
        summary = f"{len(trajectory.records)} steps{won}"
        if last and "ball" in last:
            px, _, pz = last["ball"]["p"]
            summary += f", ball at ({px:.3f}, {pz:.3f}), {len(last['active_cubes'])} cubes left"
        print(summary)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    trace = _load_trace(args.trace)
    report = check_equivalence(
        args.scene, trace, args.steps, tolerance=args.tolerance
    )
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK if report.equivalent else EXIT_DIVERGED


def _cmd_validate(args: argparse.Namespace) -> int:
    try:
        source = Path(args.graph).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    result = graphlang.parse(source)
    if not result.ok:
        for diag in result.diagnostics:
            print(f"{args.graph}:{diag}", file=sys.stderr)
        return EXIT_INVALID
    diags = validate_graph(result.graph)
    if diags:
        for diag in diags:
            print(f"{args.graph}: {diag}", file=sys.stderr)
        return EXIT_INVALID
    if args.emit == "text":
        sys.stdout.write(graphlang.serialize(result.graph))
    elif args.emit == "json":
        sys.stdout.write(graphlang.to_json_text(result.graph))
    else:
        print(f"{args.graph}: ok ({len(result.graph.nodes)} nodes)")
    return EXIT_OK


def _cmd_scene(args: argparse.Namespace) -> int:
    doc = pool_document(
        drive_mode=args.drive_mode,
        config=SceneConfig(),
        ball_graph=args.ball_graph,
        cube_graph=args.cube_graph,
    )
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    # Imported here so the simulation-only commands work without the
    # service dependencies installed.
    import uvicorn

    from .service import create_app

    app = create_app(
        scene_path=args.scene,
        mode=args.mode,
        tick_hz=args.tick_hz,
        record_dir=args.record,
        static_dir=args.static,
    )
    port = args.port if args.port is not None else int(os.environ.get("FLOW_PORT", "8000"))
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flowball", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="replay a trace and write a trajectory")
    p_run.add_argument("--scene", required=True, help="scene document path")
    p_run.add_argument("--mode", choices=("graph", "script"), default="script")
    p_run.add_argument("--trace", help="input trace (.jsonl); omit for idle input")
    p_run.add_argument("--steps", type=int, default=600)
    p_run.add_argument("--fixed-dt", type=float, default=None, dest="fixed_dt")
    p_run.add_argument("--out", help="trajectory output path (default stdout)")
    p_run.set_defaults(func=_cmd_run)

    p_check = sub.add_parser("check", help="compare graph vs. script trajectories")
    p_check.add_argument("--scene", required=True)
    p_check.add_argument("--trace", help="input trace (.jsonl); omit for idle input")
    p_check.add_argument("--steps", type=int, default=600)
    p_check.add_argument("--tolerance", type=float, default=1e-12)
    p_check.set_defaults(func=_cmd_check)

    p_val = sub.add_parser("validate", help="check a graph file")
    p_val.add_argument("graph", help=".fg file")
    p_val.add_argument(
        "--emit", choices=("text", "json"), default=None, help="re-emit in canonical form"
    )
    p_val.set_defaults(func=_cmd_validate)

    p_scene = sub.add_parser("scene", help="emit the standard scene document")
    p_scene.add_argument("--drive-mode", choices=("force", "torque"), default="force")
    p_scene.add_argument("--ball-graph", default="../graphs/ball_force.fg")
    p_scene.add_argument("--cube-graph", default="../graphs/cube_full.fg")
    p_scene.add_argument("--out")
    p_scene.set_defaults(func=_cmd_scene)

    p_serve = sub.add_parser("serve", help="interactive session server")
    p_serve.add_argument("--scene", required=True)
    p_serve.add_argument("--mode", choices=("graph", "script"), default="script")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument(
        "--port", type=int, default=None, help="default: $FLOW_PORT or 8000"
    )
    p_serve.add_argument("--tick-hz", type=float, default=50.0, dest="tick_hz")
    p_serve.add_argument("--record", help="directory for recorded input traces")
    p_serve.add_argument("--static", help="directory of client files to serve at /")
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RuntimeFault, NumericalDivergence) as exc:
        print(f"runtime fault: {exc}", file=sys.stderr)
        return EXIT_FAULT
    except FlowballError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
