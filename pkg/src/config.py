"""Configuration loading for the torusq command line."""

from __future__ import annotations

import argparse
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .convex import DEFAULT_SUBSET_BUDGET
from .errors import ValidationError
from .report import JobSpec

# logging.getLevelNamesMapping is 3.11+; it returns a copy of _nameToLevel.
_level_names_mapping = getattr(
    logging, "getLevelNamesMapping", lambda: dict(logging._nameToLevel)
)

COMMANDS = (
    "normalize",
    "check",
    "admissible",
    "classify",
    "koszul",
    "quantize",
    "diagram",
    "strata",
    "selftest",
)
NEEDS_JOB = frozenset(COMMANDS) - {"strata", "selftest"}


class ConfigError(RuntimeError):
    """Raised when configuration is invalid."""


@dataclass(frozen=True)
class Config:
    """Validated configuration for one invocation."""

    command: str
    job: Optional[JobSpec]
    budget: int
    out: Optional[Path]
    seed: int
    enumerate: Optional[int]
    samples: int
    ell: int
    log_level: str

    @classmethod
    def load(cls, argv: Optional[Sequence[str]] = None) -> "Config":
        """Load configuration from command-line arguments."""

        args = _parser().parse_args(argv)

        log_level_raw = str(args.log_level).strip()
        if log_level_raw.isdigit():
            level_name = logging.getLevelName(int(log_level_raw))
            if not isinstance(level_name, str) or level_name not in _level_names_mapping():
                raise ConfigError("--log-level に不明な値が指定されています。")
            log_level = level_name
        else:
            log_level = log_level_raw.upper()
            if log_level not in _level_names_mapping():
                raise ConfigError("--log-level に不明な値が指定されています。")

        if args.budget < 1:
            raise ConfigError("--budget は 1 以上で指定してください。")
        for name in ("order", "maxdeg", "enumerate", "seed"):
            value = getattr(args, name)
            if value is not None and value < 0:
                raise ConfigError(f"--{name} は 0 以上で指定してください。")
        if args.samples < 1:
            raise ConfigError("--samples は 1 以上で指定してください。")
        if args.ell < 1:
            raise ConfigError("--ell は 1 以上で指定してください。")

        job = _load_job(args) if args.command in NEEDS_JOB else None
        if args.command == "diagram" and args.out is None:
            raise ConfigError("diagram コマンドには --out を指定してください。")

        return cls(
            command=args.command,
            job=job,
            budget=args.budget,
            out=Path(args.out) if args.out else None,
            seed=args.seed,
            enumerate=args.enumerate,
            samples=args.samples,
            ell=args.ell,
            log_level=log_level,
        )


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="torusq",
        description="線形ハミルトントーラス作用の量子化可能性を厳密計算で調べます。",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("job_path", nargs="?", help="ジョブ定義 JSON ファイル")
    parser.add_argument("--weights", help='重み行列（JSON 文字列、例 "[[1,-1]]"）')
    parser.add_argument("--mu", help='mu（カンマ区切り、例 "1/2,0"）')
    parser.add_argument("--order", type=int, help="nu の打ち切り次数 N")
    parser.add_argument("--maxdeg", type=int, help="Koszul ホモロジーの最大次数")
    parser.add_argument("--invariant", action="append", default=None, help="不変多項式（複数可）")
    parser.add_argument("--budget", type=int, default=DEFAULT_SUBSET_BUDGET)
    parser.add_argument("--out", help="SVG の出力先")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--enumerate", type=int, help="次数 D 以下の不変単項式を列挙")
    parser.add_argument("--samples", type=int, default=500)
    parser.add_argument("--ell", type=int, default=2)
    parser.add_argument("--log-level", default="INFO")
    return parser


def _load_job(args: argparse.Namespace) -> JobSpec:
    if args.job_path:
        try:
            document = json.loads(Path(args.job_path).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"ジョブ定義を読み込めません: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValidationError(f"ジョブ定義の JSON が不正です: {exc}") from exc
    elif args.weights:
        try:
            document = {"weights": json.loads(args.weights)}
        except json.JSONDecodeError as exc:
            raise ValidationError(f"--weights の JSON が不正です: {exc}") from exc
    else:
        raise ConfigError("ジョブ定義ファイルか --weights を指定してください。")

    if not isinstance(document, dict):
        raise ValidationError("ジョブ定義は JSON オブジェクトで指定してください。")
    document = dict(document)
    # Flags override the job document.
    if args.mu is not None:
        document["mu"] = [x.strip() for x in args.mu.split(",") if x.strip()]
    if args.order is not None:
        document["order"] = args.order
    if args.maxdeg is not None:
        document["maxdeg"] = args.maxdeg
    if args.invariant:
        document["invariants"] = list(args.invariant)
    return JobSpec.from_json(document)
