"""Entry point for the torusq command line."""

from __future__ import annotations

import asyncio
import logging
import sys
from typing import Awaitable, Callable, Optional, Sequence

from .commands.algebra import AlgebraCommands
from .commands.geometry import GeometryCommands
from .config import Config, ConfigError
from .errors import RefusedError, ValidationError
from .logging_conf import setup_logging
from .report import Report

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_VALIDATION = 2
EXIT_REFUSED = 3


def _handler(config: Config) -> Callable[[], Awaitable[Report]]:
    if config.command in {"koszul", "quantize"}:
        return getattr(AlgebraCommands(config), config.command)
    return getattr(GeometryCommands(config), config.command)


async def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    try:
        config = Config.load(argv)
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION
    except ValidationError as exc:
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION

    setup_logging(config.log_level)
    logger.info("Starting command", extra={"command": config.command})

    try:
        report = await _handler(config)()
    except ValidationError as exc:
        logger.info("Input rejected", extra={"command": config.command, "reason": str(exc)})
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION
    except RefusedError as exc:
        logger.warning("Command refused", extra={"command": config.command, "reason": str(exc)})
        print(exc, file=sys.stderr)
        return EXIT_REFUSED
    except Exception:  # noqa: BLE001 - report unexpected failures with exit code 1
        logger.exception("Command failed", extra={"command": config.command})
        print("計算中に予期しないエラーが発生しました。", file=sys.stderr)
        return EXIT_FAILURE

    sys.stdout.write(report.to_json() + "\n")
    logger.info("Command finished", extra={"command": config.command})
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        code = asyncio.run(run_cli(argv))
    except KeyboardInterrupt:
        logger.info("Interrupted by user. Exiting.")
        code = EXIT_FAILURE
    return code


if __name__ == "__main__":
    sys.exit(main())
