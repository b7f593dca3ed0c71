"""Command-line front end: expand, predict, verify, scan.

Exit codes partition the error space: 0 success, 1 invalid usage/config,
2 degenerate radicand (perfect power), 3 precision ceiling reached.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

from . import __version__
from .bvp import (
    ScanReport,
    SkippedCell,
    algebraic_distance,
    leading_term,
    predict_next,
    scan,
    shifted_leading_term,
    verify_theorems,
)
from .engine import expand
from .exact import (
    DEFAULT_MAX_BITS,
    InvalidDegreeError,
    PerfectPowerError,
    PrecisionCeilingError,
    validate_spec,
)
from .report import (
    build_report,
    count_by_kind,
    emit,
    expand_payload,
    predict_payload,
    scan_payload,
    verify_payload,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PERFECT_POWER = 2
EXIT_PRECISION = 3

COMMANDS = ("expand", "predict", "verify", "scan")
FORMATS = ("json", "csv", "text")


class UsageError(ValueError):
    """Invalid command line or config values."""


@dataclass(frozen=True)
class RunConfig:
    """Validated run request: command, (k, m) ranges, sizes, output."""

    command: str
    k_range: tuple[int, int]
    m_range: tuple[int, int]
    terms: int
    precision_cap: int
    format: str
    out: str | None
    workers: int

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.k_range[0] > self.k_range[1]:
            raise UsageError(f"empty k range {self.k_range[0]}..{self.k_range[1]}")
        if self.m_range[0] > self.m_range[1]:
            raise UsageError(f"empty m range {self.m_range[0]}..{self.m_range[1]}")
        if self.k_range[0] < 1:
            raise UsageError("k must be positive")
        if self.m_range[0] < 2:
            raise UsageError("m must be >= 2")
        if self.terms < 1:
            raise UsageError("terms must be >= 1")
        if self.precision_cap < 64:
            raise UsageError("precision cap must be >= 64 bits")
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")
        if self.workers < 1:
            raise UsageError("workers must be >= 1")

    def config_echo(self) -> dict:
        return {
            "command": self.command,
            "k": list(self.k_range),
            "m": list(self.m_range),
            "terms": self.terms,
            "precision_cap": self.precision_cap,
            "format": self.format,
            "out": self.out,
            "workers": self.workers,
        }


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = text.split("..", 1)
        return int(lo), int(hi)
    except ValueError:
        raise UsageError(f"range must look like LO..HI, got {text!r}") from None


def parse_args(argv: list[str]) -> RunConfig:
    """Parse argv into a validated RunConfig; raises UsageError."""
    parser = _Parser(prog="rootcf", description=__doc__)
    parser.add_argument("--version", action="version", version=f"rootcf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("expand", "certified continued fraction expansion"),
        ("predict", "floor-formula prediction of partial quotients"),
        ("verify", "measure every stated bound for one or more radicands"),
        ("scan", "search a (k, m) grid for bound violations"),
    ):
        p = sub.add_parser(name, help=text)
        kg = p.add_mutually_exclusive_group(required=True)
        kg.add_argument("--k", type=int, help="radicand")
        kg.add_argument("--k-range", type=str, help="radicand range LO..HI (inclusive)")
        mg = p.add_mutually_exclusive_group(required=True)
        mg.add_argument("--m", type=int, help="root degree (>= 2)")
        mg.add_argument("--m-range", type=str, help="degree range LO..HI (inclusive)")
        p.add_argument("--terms", type=int, default=10, help="term count N (default 10)")
        p.add_argument("--precision-cap", type=int, default=DEFAULT_MAX_BITS,
                       help="hard cap on enclosure precision in bits")
        p.add_argument("--format", choices=FORMATS, default="text")
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
        if name == "scan":
            p.add_argument("--workers", type=int, default=1,
                           help="parallel worker processes for grid cells")
    ns = parser.parse_args(argv)
    k_range = (ns.k, ns.k) if ns.k is not None else _parse_range(ns.k_range)
    m_range = (ns.m, ns.m) if ns.m is not None else _parse_range(ns.m_range)
    return RunConfig(
        command=ns.command,
        k_range=k_range,
        m_range=m_range,
        terms=ns.terms,
        precision_cap=ns.precision_cap,
        format=ns.format,
        out=ns.out,
        workers=getattr(ns, "workers", 1),
    )


def _specs(config: RunConfig) -> tuple[list, list[SkippedCell]]:
    """Validated specs in (m, k) order; invalid cells recorded, not fatal.

    Raises if no cell in the requested ranges is a valid radicand.
    """
    specs, skipped = [], []
    last_error: Exception | None = None
    for m in range(config.m_range[0], config.m_range[1] + 1):
        for k in range(config.k_range[0], config.k_range[1] + 1):
            try:
                specs.append(validate_spec(k, m))
            except (PerfectPowerError, InvalidDegreeError, ValueError) as exc:
                skipped.append(SkippedCell(k=k, m=m, reason=str(exc)))
                last_error = exc
    if not specs:
        raise last_error if last_error is not None else UsageError("empty spec grid")
    return specs, skipped


def run(config: RunConfig) -> dict:
    """Execute a validated config and return the report structure."""
    cap = config.precision_cap
    results = []
    if config.command == "expand":
        specs, skipped = _specs(config)
        for spec in specs:
            results.append(expand_payload(expand(spec, config.terms, max_bits=cap)))
        summary = {
            "specs": len(specs),
            "skipped_specs": len(skipped),
            "terms_total": sum(len(r["partial_quotients"]) for r in results),
        }
    elif config.command == "predict":
        specs, skipped = _specs(config)
        held = 0
        total = 0
        for spec in specs:
            exp = expand(spec, config.terms, max_bits=cap)
            predictions = []
            for n in range(1, config.terms):
                conv, prev = exp.pair(n)
                outcome = predict_next(spec, conv, prev)
                predictions.append(
                    (
                        outcome,
                        conv,
                        algebraic_distance(spec, conv),
                        leading_term(spec, conv),
                        shifted_leading_term(spec, conv, prev),
                    )
                )
                held += outcome.formula_held
                total += 1
            results.append(predict_payload(exp, predictions))
        summary = {
            "specs": len(specs),
            "skipped_specs": len(skipped),
            "predictions": total,
            "formula_held": held,
            "formula_missed": total - held,
        }
    elif config.command == "verify":
        specs, skipped = _specs(config)
        violations = []
        for spec in specs:
            report = verify_theorems(spec, config.terms, keep_terms=True, max_bits=cap)
            payload = verify_payload(report)
            violations.extend(payload["violations"])
            results.append(payload)
        summary = {
            "specs": len(specs),
            "skipped_specs": len(skipped),
            "violations": len(violations),
            "violations_by_kind": count_by_kind(violations),
        }
    else:  # scan
        report: ScanReport = scan(
            range(config.k_range[0], config.k_range[1] + 1),
            range(config.m_range[0], config.m_range[1] + 1),
            config.terms,
            workers=config.workers,
            max_bits=cap,
        )
        payload = scan_payload(report)
        results.append(payload)
        summary = {
            "cells": len(report.cells),
            "skipped_cells": len(report.skipped),
            "violations": len(report.violations),
            "violations_by_kind": count_by_kind(payload["violations"]),
        }
    return build_report(__version__, config.config_echo(), results, summary)


def main(argv: list[str] | None = None) -> int:
    """CLI entry point; returns the process exit status."""
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"rootcf: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = run(config)
    except PerfectPowerError as exc:
        print(f"rootcf: degenerate radicand: {exc}", file=sys.stderr)
        return EXIT_PERFECT_POWER
    except PrecisionCeilingError as exc:
        print(f"rootcf: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (UsageError, InvalidDegreeError, ValueError) as exc:
        print(f"rootcf: invalid config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = emit(report, config.format)
    if config.out is None:
        sys.stdout.write(payload)
    else:
        with open(config.out, "w", newline="") as fh:
            fh.write(payload)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
