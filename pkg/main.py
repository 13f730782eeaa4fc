import argparse
import json
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from commands import (
    contrast_command,
    eq11_command,
    normal_order_command,
    parabose_command,
    tower_command,
)
from config import settings
from exceptions import EngineError, ResourceGuardError
from models import OutputFormat, RunConfig

# Configure logging
logging.basicConfig(level=getattr(logging, settings.log_level.upper(), logging.INFO))
logger = logging.getLogger(__name__)

COMMANDS = (normal_order_command, eq11_command, contrast_command, tower_command, parabose_command)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quantower",
        description=f"{settings.app_name} - symbolic and numeric checks of second and multiple quantization",
    )
    parser.add_argument("--version", action="version", version=f"{settings.app_name} {settings.app_version}")
    parser.add_argument("--seed", type=int, default=None, help=f"random seed (default {settings.default_seed})")
    parser.add_argument("--tolerance", type=float, default=None, help=f"pass tolerance (default {settings.tolerance:g})")
    parser.add_argument("--out", default=None, help="write the report to this file instead of stdout")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], default=None, help="report format")
    parser.add_argument("--config", default=None, help="JSON file with the same keys as the flags; flags win")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        command.register(subparsers)
    return parser


def load_run_config(args: argparse.Namespace) -> RunConfig:
    """Settings defaults < JSON config file < explicit flags"""
    merged = {
        "seed": settings.default_seed,
        "tolerance": settings.tolerance,
        "out": None,
        "format": OutputFormat.JSON.value,
    }
    params = {}

    path = args.config or settings.config_file
    if path:
        try:
            with open(path) as handle:
                loaded = json.load(handle)
        except (OSError, json.JSONDecodeError) as exc:
            raise EngineError(f"cannot read config file {path}: {exc}")
        for key, value in loaded.items():
            key = key.replace("-", "_")
            if key in merged:
                merged[key] = value
            else:
                params[key] = value

    for key, value in vars(args).items():
        if value is None or key in ("handler", "summarize", "command", "config"):
            continue
        if key in merged:
            merged[key] = value
        else:
            params[key] = value

    try:
        return RunConfig(**merged, params=params)
    except ValidationError as exc:
        raise EngineError(f"invalid run configuration: {exc}")


def render(report, summarize, run: RunConfig) -> str:
    if run.format == OutputFormat.PRETTY:
        return f"{summarize(report)}\nseed: {run.seed}"
    return report.model_dump_json(indent=2)


def emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as handle:
            handle.write(text + "\n")
        logger.info(f"Report written to {out}")
    else:
        print(text)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logger.debug(f"Starting {settings.app_name} v{settings.app_version}: {args.command}")
    try:
        run = load_run_config(args)
        report, code = args.handler(run)
        emit(render(report, args.summarize, run), run.out)
        if code:
            logger.warning(f"⚠️ {args.command} finished with failed checks")
        return code
    except ResourceGuardError as exc:
        logger.error(f"Resource guard: {exc.detail}")
        return exc.exit_code
    except EngineError as exc:
        logger.error(f"{type(exc).__name__}: {exc.detail}")
        return exc.exit_code
    except Exception as exc:
        # Global exception handler
        logger.error(f"Global exception: {str(exc)}")
        if settings.debug:
            logger.exception(f"{type(exc).__name__}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
