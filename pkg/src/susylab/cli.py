"""Command line for the laboratory: a thin client of the HTTP service.

By default the service application is mounted in-process (no network, same
request/response surface); ``--server URL`` points the same client at a
running remote instance instead. Exit codes: 0 all verdicts true, 1 a
verdict failed, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import httpx

from .eigensolve import DEFAULT_SEED
from .report import emit_report, write_curves


def _make_client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=None)
    from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app())


def _load_config_file(path: str) -> dict:
    if not os.path.exists(path):
        print(f"config file not found: {path}", file=sys.stderr)
        raise SystemExit(2)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _apply_overrides(cfg: dict, args) -> dict:
    if args.tol_solver is not None:
        cfg.setdefault("tolerances", {})["solver"] = args.tol_solver
    if getattr(args, "levels", None) is not None:
        cfg["levels"] = args.levels
    if getattr(args, "lambdas", None):
        cfg["lambdas"] = args.lambdas
    return cfg


def _output_targets(cfg: dict | None, args) -> tuple[str | None, str | None]:
    """CLI flags win; otherwise fall back to the config's outputs block."""
    outputs = (cfg or {}).get("outputs") or {}
    return (args.json or outputs.get("report_path"),
            args.csv_dir or outputs.get("csv_dir"))


def _post(client, path: str, payload: dict) -> tuple[dict, int]:
    """POST and translate HTTP failures into the exit-code convention."""
    try:
        resp = client.post(path, json=payload)
    except httpx.HTTPError as err:
        print(f"transport error: {err}", file=sys.stderr)
        raise SystemExit(3) from None
    if resp.status_code in (400, 422):
        print(f"configuration rejected: {resp.text}", file=sys.stderr)
        raise SystemExit(2)
    if resp.status_code != 200:
        print(f"service error {resp.status_code}: {resp.text}", file=sys.stderr)
        raise SystemExit(3)
    body = resp.json()
    return body["report"], body["exit_code"]


def _finish(report: dict, code: int, args, name: str | None = None) -> int:
    json_target, csv_target = _output_targets(report.get("config"), args)
    curves = report.pop("curves", None)
    if csv_target:
        target = os.path.join(csv_target, name) if name else csv_target
        if curves:
            paths = write_curves(
                target, {k: (v["header"], v["columns"]) for k, v in curves.items()}
            )
            print(f"wrote {len(paths)} curve files under {target}")
    if json_target:
        path = os.path.join(json_target, f"{name}.json") if name else json_target
        emit_report(report, path)
        print(f"report written to {path}")
    sid = report.get("scenario_id", "?")
    for key, value in sorted(report.get("verdicts", {}).items()):
        print(f"{sid}: {key}: {'PASS' if value else 'FAIL'}")
    for err in report.get("captured_errors", []):
        print(f"{sid}: error: {err}")
    return code


def _wants_curves(cfg: dict | None, args) -> bool:
    return _output_targets(cfg, args)[1] is not None


def _cmd_partners(client, args) -> int:
    cfg = _apply_overrides(_load_config_file(args.config), args)
    payload = {"config": cfg, "include_curves": _wants_curves(cfg, args)}
    report, code = _post(client, "/partners", payload)
    return _finish(report, code, args)


def _cmd_spectrum(client, args) -> int:
    cfg = _apply_overrides(_load_config_file(args.config), args)
    payload = {"config": cfg, "seed": args.seed,
               "include_curves": _wants_curves(cfg, args)}
    report, code = _post(client, "/spectrum", payload)
    return _finish(report, code, args)


def _cmd_gozzi(client, args) -> int:
    cfg = _apply_overrides(_load_config_file(args.config), args)
    report, code = _post(client, "/gozzi", {"config": cfg, "seed": args.seed})
    return _finish(report, code, args)


def _cmd_deform(client, args) -> int:
    cfg = _apply_overrides(_load_config_file(args.config), args)
    payload = {"config": cfg, "seed": args.seed,
               "include_curves": _wants_curves(cfg, args)}
    report, code = _post(client, "/deform", payload)
    return _finish(report, code, args)


def _cmd_winding(client, args) -> int:
    report, code = _post(client, "/winding", {"omega": args.omega, "n_max": args.n})
    return _finish(report, code, args)


def _cmd_scenario(client, args) -> int:
    if args.action == "run-all":
        try:
            resp = client.post("/scenario/run-all",
                               json={"seed": args.seed,
                                     "include_curves": bool(args.csv_dir)})
        except httpx.HTTPError as err:
            print(f"transport error: {err}", file=sys.stderr)
            return 3
        if resp.status_code != 200:
            print(f"service error {resp.status_code}: {resp.text}", file=sys.stderr)
            return 2 if resp.status_code in (400, 422) else 3
        worst = 0
        for envelope in resp.json():
            report, code = envelope["report"], envelope["exit_code"]
            _finish(report, code, args, name=report["scenario_id"])
            order = {0: 0, 1: 1, 2: 2, 3: 3}
            worst = max(worst, order.get(code, 3))
        return worst

    target = args.target
    payload: dict = {"seed": args.seed, "include_curves": bool(args.csv_dir)}
    if os.path.exists(target):
        cfg = _apply_overrides(_load_config_file(target), args)
        payload["config"] = cfg
        payload["include_curves"] = _wants_curves(cfg, args)
    else:
        payload["scenario_id"] = target
        if args.tol_solver is not None:
            payload["tol_solver"] = args.tol_solver
    report, code = _post(client, "/scenario/run", payload)
    return _finish(report, code, args)


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("susylab.service:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="susylab",
        description="Verification laboratory for supersymmetric partner potentials.",
    )
    parser.add_argument("--server", default=None,
                        help="URL of a running service; default runs in-process")
    parser.add_argument("--json", default=None, metavar="PATH",
                        help="write the JSON report here (a directory for run-all)")
    parser.add_argument("--csv-dir", default=None, metavar="DIR",
                        help="dump curve CSV files under this directory")
    parser.add_argument("--tol-solver", type=float, default=None,
                        help="override the eigensolver tolerance")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help="seed of the inverse-iteration start vectors")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partners", help="sample W, W' and the partner potentials")
    p.add_argument("--config", required=True)

    p = sub.add_parser("spectrum", help="solve both partner spectra")
    p.add_argument("--config", required=True)
    p.add_argument("--levels", type=int, default=None)

    p = sub.add_parser("gozzi", help="degenerate pairing and node-count criterion")
    p.add_argument("--config", required=True)

    p = sub.add_parser("deform", help="isospectral deformation battery")
    p.add_argument("--config", required=True)
    p.add_argument("--lambda", dest="lambdas", default=None,
                   type=lambda s: [float(t) for t in s.split(",") if t],
                   help="comma-separated deformation parameters")

    p = sub.add_parser("winding", help="quantization winding integrals")
    p.add_argument("--n", type=int, default=8, help="highest state index")
    p.add_argument("--omega", type=float, default=2.0)

    p = sub.add_parser("scenario", help="run built-in or file scenarios")
    action = p.add_subparsers(dest="action", required=True)
    run = action.add_parser("run", help="run one scenario (built-in id or config file)")
    run.add_argument("target")
    action.add_parser("run-all", help="run every built-in scenario")

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args)
    handlers = {
        "partners": _cmd_partners,
        "spectrum": _cmd_spectrum,
        "gozzi": _cmd_gozzi,
        "deform": _cmd_deform,
        "winding": _cmd_winding,
        "scenario": _cmd_scenario,
    }
    with _make_client(args.server) as client:
        return handlers[args.command](client, args)


if __name__ == "__main__":
    sys.exit(main())
