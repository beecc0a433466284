from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

from pydantic import ValidationError

from . import config, schemas
from .channels import ProtocolKind, parse_protocol
from .errors import KEY_RATE_ERRORS, DomainError, exit_code
from .services import tables

logger = logging.getLogger(__name__)


def _p_range(value: str) -> tuple[float, float, float]:
    try:
        start, stop, step = (float(part) for part in value.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"Expected start:stop:step, got {value!r}") from exc
    return start, stop, step


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (default: all cores)")
    parser.add_argument("--format", dest="output_format", choices=["json", "csv"], default="json")
    parser.add_argument("--output", type=Path, default=None, help="Write to this file instead of stdout")


def _add_blocks(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--m", type=int, default=None, help="Repetition block length")
    parser.add_argument("--m1", type=int, default=None, help="Inner block length")
    parser.add_argument("--m2", type=int, default=None, help="Outer block length")


def _add_noise(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--q", type=float, default=None, help="First-round flip probability")
    parser.add_argument("--Q", type=float, default=None, help="Second-round flip probability")
    parser.add_argument("--optimize-q", action="store_true", help="Maximize over the flip probabilities")


def _add_p(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=float, default=None, help="Bit-error or depolarizing probability")
    group.add_argument("--p-range", type=_p_range, default=None, help="start:stop:step")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="QKD key rates and depolarizing-channel capacity bounds")
    commands = parser.add_subparsers(dest="command", required=True)

    rate = commands.add_parser("rate", help="Key rate per p sample")
    rate.add_argument("--protocol", type=parse_protocol, default=ProtocolKind.BB84)
    rate.add_argument("--iterated", action="store_true", help="Two rounds of preprocessing (needs --m1, --m2)")
    _add_blocks(rate)
    _add_p(rate)
    _add_noise(rate)
    _add_common(rate)

    pmax = commands.add_parser("pmax", help="Threshold where the rate vanishes")
    pmax.add_argument("--protocol", type=parse_protocol, default=ProtocolKind.BB84)
    pmax.add_argument("--capacity", action="store_true", help="Concatenated-cat capacity threshold")
    _add_blocks(pmax)
    _add_noise(pmax)
    pmax.add_argument("--tol", type=float, default=1e-7)
    _add_common(pmax)

    capacity = commands.add_parser("capacity", help="Concatenated-cat rate of the depolarizing channel")
    capacity.add_argument("--m1", type=int, default=1)
    capacity.add_argument("--m2", type=int, default=1)
    _add_p(capacity)
    _add_common(capacity)

    schur = commands.add_parser("schur", help="Export a Schur basis as JSON")
    schur.add_argument("--n", type=int, required=True)
    schur.add_argument("--q", type=int, required=True)
    schur.add_argument("--emit", "--output", dest="output", type=Path, default=None, help="Write the basis to this file")
    return parser


def run_config(args: argparse.Namespace) -> schemas.RunConfig:
    return schemas.RunConfig(
        command=args.command,
        protocol=getattr(args, "protocol", None) if not getattr(args, "capacity", False) else None,
        m=getattr(args, "m", None),
        m1=getattr(args, "m1", None),
        m2=getattr(args, "m2", None),
        p=getattr(args, "p", None),
        p_range=getattr(args, "p_range", None),
        q=getattr(args, "q", None) if args.command != "schur" else None,
        Q=getattr(args, "Q", None),
        optimize_q=getattr(args, "optimize_q", False),
        tol=getattr(args, "tol", 1e-7),
        threads=getattr(args, "threads", None),
        output_format=getattr(args, "output_format", "json"),
    )


def cmd_rate(args: argparse.Namespace) -> list[schemas.RateRow]:
    if args.iterated and (args.m1 is None or args.m2 is None):
        raise DomainError("--iterated needs --m1 and --m2")
    request = schemas.RateRequest(
        protocol=args.protocol,
        m=args.m,
        m1=args.m1,
        m2=args.m2,
        p=args.p,
        p_range=args.p_range,
        q=args.q,
        Q=args.Q,
        optimize_q=args.optimize_q,
        threads=args.threads,
    )
    return tables.rate_rows(request)


def cmd_pmax(args: argparse.Namespace) -> list[schemas.PmaxRow]:
    request = schemas.PmaxRequest(
        protocol=None if args.capacity else args.protocol,
        capacity=args.capacity,
        m=args.m,
        m1=args.m1,
        m2=args.m2,
        q=args.q,
        Q=args.Q,
        optimize_q=args.optimize_q,
        tol=args.tol,
        threads=args.threads,
    )
    return [tables.pmax_row(request)]


def cmd_capacity(args: argparse.Namespace) -> list[schemas.CapacityRow]:
    request = schemas.CapacityRequest(m1=args.m1, m2=args.m2, p=args.p, p_range=args.p_range, threads=args.threads)
    return tables.capacity_rows(request)


def cmd_schur(args: argparse.Namespace) -> schemas.SchurBasisOut:
    return tables.schur_document(args.n, args.q)


COMMANDS = {"rate": cmd_rate, "pmax": cmd_pmax, "capacity": cmd_capacity, "schur": cmd_schur}


def render(args: argparse.Namespace, cfg: schemas.RunConfig, result) -> str:
    if args.command == "schur":
        return result.model_dump_json(indent=2) + "\n"
    if cfg.output_format == "csv":
        columns = tables.RATE_COLUMNS if args.command == "rate" else None
        return tables.rows_to_csv(result, columns)
    document = {"config": cfg.model_dump(mode="json"), "rows": [row.model_dump(mode="json") for row in result]}
    return json.dumps(document, indent=2) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=config.QKD_LOG_LEVEL.upper(), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = run_config(args)
        result = COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KEY_RATE_ERRORS as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return exit_code(exc)

    text = render(args, cfg, result)
    if args.output is not None:
        args.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
