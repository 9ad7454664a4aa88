"""Command-line runner: reads a flat config, runs it, writes CSV/JSON artifacts.

Exit status: 0 when every declared assertion passes, 1 when one fails, 2 on
configuration errors.  The run goes through the same request path as the HTTP
service, in process by default or against ``--server``.
"""

from __future__ import annotations

import argparse
import os
import sys

from .configfile import ConfigError, load_config
from .schemas import KIND_HELP

OUT_ENV = "TROTTERBOUNDS_OUT"
EXIT_OK, EXIT_ASSERT, EXIT_CONFIG = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trotterbounds", description="Run a Trotter-error experiment.")
    ap.add_argument("--config", metavar="PATH", help="flat key = value experiment file")
    ap.add_argument("--out", metavar="DIR", help=f"output directory (else ${OUT_ENV}, the config, ./results)")
    ap.add_argument("--seed", type=int, help="override the config seed")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for independent items")
    ap.add_argument("--list-kinds", action="store_true", help="print the experiment kinds and exit")
    ap.add_argument("--server", metavar="URL", help="send the run to a running service instead")
    return ap


def _remote(url: str, payload: dict) -> dict:
    import httpx

    r = httpx.post(url.rstrip("/") + "/runs", json=payload, timeout=None)
    if r.status_code == 422:
        raise ConfigError(str(r.json().get("detail")))
    r.raise_for_status()
    return r.json()


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.list_kinds:
        for kind, text in KIND_HELP.items():
            print(f"{kind.value:22s} {text}")
        return EXIT_OK
    if not args.config:
        print("error: --config is required", file=sys.stderr)
        return EXIT_CONFIG
    if args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_CONFIG

    from .bessel_sim import ProjectionError
    from .experiments import write_files
    from .service import RunRequest, run_experiment

    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = cfg.model_copy(update={"seed": args.seed})
        out = args.out or os.environ.get(OUT_ENV) or cfg.out or "results"
        req = RunRequest(config=cfg, threads=args.threads)
        if args.server:
            resp = _remote(args.server, req.model_dump(mode="json"))
            green, summary, files = resp["green"], resp["summary"], resp["files"]
        else:
            resp = run_experiment(req)
            green, summary, files = resp.green, resp.summary, resp.files
    except (ConfigError, ProjectionError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    write_files(files, out)
    for a in summary["assertions"]:
        mark = "PASS" if a["passed"] else "FAIL"
        print(f"{mark} {a['metric']} = {a['value']} in [{a['lo']}, {a['hi']}]")
    print(f"{len(files)} files written to {out}")
    return EXIT_OK if green else EXIT_ASSERT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
