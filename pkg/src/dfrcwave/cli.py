"""Command-line client for the waveform service.

All subcommands talk to the HTTP service; by default the app runs
in-process, and --server points the same client at a remote instance.

Exit codes: 0 success, 2 invalid configuration or input, 3 solver stall.
"""
from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx
import numpy as np

from . import matio, svgplot
from .experiments import ExperimentReport, emit_outputs

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_STALL = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_CONFIG):
        super().__init__(message)
        self.code = code


def _call(server: str | None, method: str, path: str, payload: dict | None = None) -> dict:
    if server:
        with httpx.Client(base_url=server.rstrip("/"), timeout=None) as client:
            response = client.request(method, path, json=payload)
    else:
        from .service import app

        async def dispatch():
            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://service", timeout=None
            ) as client:
                return await client.request(method, path, json=payload)

        response = asyncio.run(dispatch())
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise CliError(f"service error ({response.status_code}): {detail}")
    return response.json()


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read config: {exc}")
    except json.JSONDecodeError as exc:
        raise CliError(f"config is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise CliError("config root must be a JSON object")
    return data


def _merge_flags(config: dict, args: argparse.Namespace, keys: dict) -> dict:
    """CLI flags override file values; unset flags fall back to the file."""
    merged = dict(config)
    for flag, key in keys.items():
        value = getattr(args, flag, None)
        if value is not None:
            merged[key] = value
    return merged


def _read_matrix_arg(path: str, label: str):
    try:
        return matio.read_matrix(path)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read {label}: {exc}")


def _matrix_payload(m) -> dict:
    return {"re": m.real.tolist(), "im": m.imag.tolist()}


def cmd_solve(args) -> int:
    config = _load_config(args.config)
    merged = _merge_flags(
        config,
        args,
        {
            "design": "design",
            "seed": "seed",
            "start": "start",
            "rho1": "rho1",
            "rho2": "rho2",
            "rho3": "rho3",
            "max_lag": "max_lag",
            "total_power": "total_power",
        },
    )
    h = _read_matrix_arg(args.h, "channel matrix")
    s = _read_matrix_arg(args.s, "symbol matrix")
    payload = {"h": _matrix_payload(h), "s": _matrix_payload(s)}
    design = merged.get("design", "omni")
    if design not in ("omni", "directional"):
        payload["rd"] = _matrix_payload(_read_matrix_arg(design, "covariance file"))
    else:
        payload["design"] = design
    for key in ("seed", "start", "rho1", "rho2", "rho3", "max_lag", "total_power", "rcg"):
        if key in merged:
            payload[key] = merged[key]
    result = _call(args.server, "POST", "/solve", payload)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    x = _payload_matrix(result["x"])
    matio.write_matrix(out / "waveform.txt", x)
    matio.write_matrix(out / "closed_form.txt", _payload_matrix(result["x_closed_form"]))
    matio.write_csv(
        out / "trace.csv",
        ["iter", "objective", "grad_norm", "step", "feasibility", "lambda"],
        [
            (r["iter"], r["objective"], r["grad_norm"], r["step"], r["feasibility"], r["lam"])
            for r in result["trace"]
        ],
    )
    summary = {k: result[k] for k in (
        "iterations", "converged", "stalled",
        "mui_closed_form", "mui", "isl_closed_form", "isl",
    )}
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(
        f"solve: {result['iterations']} iterations, "
        f"converged={result['converged']}, stalled={result['stalled']}"
    )
    return EXIT_STALL if result["stalled"] else EXIT_OK


def _payload_matrix(data: dict) -> np.ndarray:
    return np.asarray(data["re"], dtype=float) + 1j * np.asarray(data["im"], dtype=float)


def cmd_experiment(args) -> int:
    config = _load_config(args.config)
    merged = _merge_flags(
        config,
        args,
        {
            "design": "design",
            "seed": "seed",
            "trials": "trials",
            "start": "start",
            "workers": "workers",
        },
    )
    result = _call(args.server, "POST", "/experiment", merged)
    report = ExperimentReport(**result)
    written = emit_outputs(report, args.out)
    print(f"experiment: {len(written)} files written to {args.out}")
    print(
        f"  mean sidelobe reduction {report.isl_reduction_db_mean:.1f} dB, "
        f"{report.stall_count} stalls, degraded={report.degraded}"
    )
    return EXIT_STALL if report.degraded else EXIT_OK


def cmd_beampattern(args) -> int:
    x = _read_matrix_arg(args.x, "waveform")
    payload = {
        "x": _matrix_payload(x),
        "angle_start_deg": args.start_deg,
        "angle_stop_deg": args.stop_deg,
        "angle_step_deg": args.step_deg,
    }
    result = _call(args.server, "POST", "/beampattern", payload)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    matio.write_csv(
        out / "beampattern.csv",
        ["angle_deg", "gain"],
        zip(result["angle_deg"], result["gain"]),
    )
    svgplot.line_plot(
        out / "beampattern.svg",
        [(result["angle_deg"], result["gain"], "waveform")],
        "Transmit beampattern",
        "angle (deg)",
        "gain",
    )
    print(f"beampattern: wrote {out / 'beampattern.csv'}")
    return EXIT_OK


def cmd_sidelobes(args) -> int:
    x = _read_matrix_arg(args.x, "waveform")
    result = _call(
        args.server, "POST", "/sidelobes", {"x": _matrix_payload(x), "max_lag": args.max_lag}
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    matio.write_csv(
        out / "sidelobes.csv",
        ["lag", "level_db"],
        zip(result["lag"], result["level_db"]),
    )
    svgplot.line_plot(
        out / "sidelobes.svg",
        [(result["lag"], result["level_db"], "waveform")],
        "Range sidelobe profile",
        "lag",
        "level (dB)",
    )
    print(f"sidelobes: wrote {out / 'sidelobes.csv'}")
    return EXIT_OK


def cmd_serve(args) -> int:
    try:
        import uvicorn
    except ImportError:
        raise CliError("the serve command requires uvicorn (pip install dfrcwave[server])")
    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfrcwave",
        description="Joint radar-communication waveform synthesis and analysis.",
    )
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one design instance from matrix files")
    p_solve.add_argument("--h", required=True, help="channel matrix file (K x N)")
    p_solve.add_argument("--s", required=True, help="symbol matrix file (K x L)")
    p_solve.add_argument("--design", help="omni, directional, or covariance file path")
    p_solve.add_argument("--out", required=True, help="output directory")
    p_solve.add_argument("--seed", type=int, help="seed for random starts")
    p_solve.add_argument("--start", choices=["warm", "random"])
    p_solve.add_argument("--config", help="JSON config file")
    p_solve.add_argument("--rho1", type=float)
    p_solve.add_argument("--rho2", type=float)
    p_solve.add_argument("--rho3", type=float)
    p_solve.add_argument("--max-lag", dest="max_lag", type=int)
    p_solve.add_argument("--total-power", dest="total_power", type=float)
    p_solve.set_defaults(func=cmd_solve)

    p_exp = sub.add_parser("experiment", help="Monte-Carlo comparison of both designs")
    p_exp.add_argument("--config", help="JSON config file")
    p_exp.add_argument("--design", help="omni, directional, or covariance file path")
    p_exp.add_argument("--seed", type=int)
    p_exp.add_argument("--trials", type=int)
    p_exp.add_argument("--start", choices=["warm", "random"])
    p_exp.add_argument("--workers", type=int)
    p_exp.add_argument("--out", required=True, help="output directory")
    p_exp.set_defaults(func=cmd_experiment)

    p_bp = sub.add_parser("beampattern", help="spatial power of a waveform file")
    p_bp.add_argument("--x", required=True, help="waveform matrix file (N x L)")
    p_bp.add_argument("--out", required=True)
    p_bp.add_argument("--start-deg", dest="start_deg", type=float, default=-90.0)
    p_bp.add_argument("--stop-deg", dest="stop_deg", type=float, default=90.0)
    p_bp.add_argument("--step-deg", dest="step_deg", type=float, default=1.0)
    p_bp.set_defaults(func=cmd_beampattern)

    p_sl = sub.add_parser("sidelobes", help="range sidelobe profile of a waveform file")
    p_sl.add_argument("--x", required=True, help="waveform matrix file (N x L)")
    p_sl.add_argument("--max-lag", dest="max_lag", type=int, required=True)
    p_sl.add_argument("--out", required=True)
    p_sl.set_defaults(func=cmd_sidelobes)

    p_srv = sub.add_parser("serve", help="run the HTTP service")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
