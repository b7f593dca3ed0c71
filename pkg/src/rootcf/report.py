"""Deterministic report rendering.

Reports never print an uncertified digit: every decimal shown for an
alpha-dependent quantity is the enclosure midpoint truncated to the digit
count its width justifies, with the width printed alongside.  Exact
rationals additionally appear verbatim as num/den.  Identical inputs
yield byte-identical output in every format.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction

from .bvp import ScanReport, TheoremReport, ViolationRecord
from .engine import Expansion
from .exact import RationalInterval

REPORT_SCHEMA = 1
CSV_SCHEMA_LINE = "#schema=rootcf.csv.v1"

CSV_COLUMNS = [
    "kind", "k", "m", "n", "side", "b", "p", "q", "d",
    "leading", "shifted_leading",
    "theta", "theta_width", "remainder", "remainder_width", "remainder_in_unit",
    "candidate", "epsilon", "predicted", "actual", "formula_held", "window_held",
    "quantity", "observed", "claimed",
    "remainder_stable_from", "window_stable_from", "reason",
]

THETA_INDEX_NOTE = (
    "complete quotients are indexed so that theta[n] = [b[n+1]; b[n+2], ...]; "
    "the same quantity is sometimes labeled theta[n+1] (1-based tail labeling), "
    "so both indices are listed per item"
)


def _decimal_exponent(x: Fraction) -> int:
    """e with 10**e <= x < 10**(e+1), for x > 0."""
    num, den = x.numerator, x.denominator
    e = math.floor((num.bit_length() - den.bit_length()) * math.log10(2))

    def at_least(exp: int) -> bool:
        return num >= den * 10 ** exp if exp >= 0 else num * 10 ** -exp >= den

    while not at_least(e):
        e -= 1
    while at_least(e + 1):
        e += 1
    return e


def decimal_string(x: Fraction, places: int) -> str:
    """Exact decimal truncation of x toward zero to `places` digits."""
    sign = "-" if x < 0 else ""
    scaled = abs(x.numerator) * 10 ** places // x.denominator
    if places == 0:
        return f"{sign}{scaled}"
    digits = str(scaled).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def sci_string(x: Fraction, sig: int = 2) -> str:
    """Exact truncated scientific notation, e.g. '4.6e-06'; '0' for zero."""
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    ax = abs(Fraction(x))
    e = _decimal_exponent(ax)
    mantissa = ax / Fraction(10) ** e
    digits = str(mantissa.numerator * 10 ** (sig - 1) // mantissa.denominator)
    return f"{sign}{digits[0]}.{digits[1:]}e{e:+03d}"


def justified_places(width: Fraction, cap: int = 40) -> int:
    """Largest d <= cap with width <= 10**-d: digits the width certifies."""
    if width < 0:
        raise ValueError("width must be non-negative")
    if width == 0:
        return cap
    if width > 1:
        return 0
    e = _decimal_exponent(width)
    d = -e if width == Fraction(10) ** e else -e - 1
    return max(0, min(cap, d))


def enclosure_json(iv: RationalInterval) -> dict:
    places = justified_places(iv.width)
    return {
        "decimal": decimal_string(iv.mid, places),
        "width": sci_string(iv.width),
        "lo": str(iv.lo),
        "hi": str(iv.hi),
    }


def exact_json(x: Fraction) -> dict:
    return {"rational": str(x), "decimal": decimal_string(x, 12), "width": "0"}


def _observed_json(observed):
    if isinstance(observed, RationalInterval):
        return enclosure_json(observed)
    return observed


def violation_json(v: ViolationRecord) -> dict:
    return {
        "k": v.k,
        "m": v.m,
        "n": v.n,
        "quantity": v.quantity,
        "p": str(v.p),
        "q": str(v.q),
        "b_next": v.b_next,
        "d": str(v.distance),
        "observed": _observed_json(v.observed),
        "claimed": v.claimed,
    }


def claim_json(stats) -> dict:
    return {
        "claim": stats.claim,
        "passed": stats.passed,
        "failed": stats.failed,
        "failures": [violation_json(f) for f in stats.failures],
    }


def expand_payload(exp: Expansion) -> dict:
    return {
        "k": exp.spec.k,
        "m": exp.spec.m,
        "precision_bits": exp.precision_bits,
        "partial_quotients": exp.partial_quotients,
        "convergents": [
            {"n": t.n, "b": t.b, "p": str(t.p), "q": str(t.q), "side": t.side.value}
            for t in exp.terms
        ],
    }


def prediction_json(outcome, conv, distance: int, leading: Fraction, shifted: Fraction) -> dict:
    return {
        "n": outcome.n,
        "side": outcome.side.value,
        "p": str(conv.p),
        "q": str(conv.q),
        "d": str(distance),
        "leading": exact_json(leading),
        "shifted_leading": exact_json(shifted),
        "candidate": outcome.candidate,
        "epsilon": outcome.epsilon,
        "predicted": outcome.predicted,
        "actual": outcome.actual,
        "formula_held": outcome.formula_held,
        "window_held": outcome.window_held,
    }


def predict_payload(exp: Expansion, predictions: list[tuple]) -> dict:
    return {
        "k": exp.spec.k,
        "m": exp.spec.m,
        "precision_bits": exp.precision_bits,
        "partial_quotients": exp.partial_quotients,
        "predictions": [prediction_json(o, c, d, h, a) for o, c, d, h, a in predictions],
    }


def verify_payload(report: TheoremReport) -> dict:
    items = []
    for t in report.terms:
        items.append(
            {
                "n": t.n,
                "theta_index_alt": t.n + 1,
                "side": t.side.value,
                "b_next": t.b_next,
                "p": str(t.p),
                "q": str(t.q),
                "d": str(t.distance),
                "q_at_least_2": t.q_at_least_2,
                "leading": exact_json(t.leading),
                "shifted_leading": exact_json(t.shifted_leading),
                "theta": enclosure_json(t.theta),
                "remainder": enclosure_json(t.remainder),
                "remainder_in_unit": t.remainder_in_unit,
                "candidate": t.prediction.candidate,
                "epsilon": t.prediction.epsilon,
                "predicted": t.prediction.predicted,
                "actual": t.prediction.actual,
                "formula_held": t.prediction.formula_held,
                "window_held": t.prediction.window_held,
                "window_above_ok": t.window_above_ok,
                "below_window_ok": t.below_window_ok,
                "above_epsilon_ok": t.above_epsilon_ok,
                "below_epsilon_ok": t.below_epsilon_ok,
                "general_window_ok": t.general_window_ok,
                "universal_identity_ok": t.universal_identity_ok,
                "cubic_sign_ok": t.cubic_sign_ok,
            }
        )
    return {
        "k": report.spec.k,
        "m": report.spec.m,
        "terms": report.n_max,
        "q_min": report.q_min,
        "precision_bits": report.expansion.precision_bits,
        "partial_quotients": report.expansion.partial_quotients,
        "note": THETA_INDEX_NOTE,
        "checked": list(report.checked),
        "skipped": list(report.skipped),
        "items": items,
        "violations": [violation_json(v) for v in report.violations],
        "claims": {
            "above_epsilon": claim_json(report.above_epsilon),
            "below_window": claim_json(report.below_window),
            "below_epsilon": claim_json(report.below_epsilon),
        },
        "remainder_stable_from": report.remainder_stable_from,
        "window_stable_from": report.window_stable_from,
    }


def scan_payload(report: ScanReport) -> dict:
    return {
        "cells": [
            {
                "k": c.k,
                "m": c.m,
                "terms": c.n_max,
                "violations": c.violations,
                "remainder_stable_from": c.remainder_stable_from,
                "window_stable_from": c.window_stable_from,
            }
            for c in report.cells
        ],
        "skipped": [{"k": s.k, "m": s.m, "reason": s.reason} for s in report.skipped],
        "violations": [violation_json(v) for v in report.violations],
    }


def count_by_kind(violations) -> dict:
    counts: dict[str, int] = {}
    for v in violations:
        key = v["quantity"] if isinstance(v, dict) else v.quantity
        counts[key] = counts.get(key, 0) + 1
    return dict(sorted(counts.items()))


def build_report(tool_version: str, config: dict, results: list[dict], summary: dict) -> dict:
    return {
        "tool": {"name": "rootcf", "version": tool_version, "report_schema": REPORT_SCHEMA},
        "config": config,
        "results": results,
        "summary": summary,
    }


# --- emitters ---------------------------------------------------------------


def _emit_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def _csv_escape(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    text = str(value)
    if any(c in text for c in ",\"\n"):
        text = '"' + text.replace('"', '""') + '"'
    return text


def _csv_row(values: dict) -> str:
    return ",".join(_csv_escape(values.get(col)) for col in CSV_COLUMNS)


def _violation_rows(violations):
    for v in violations:
        obs = v["observed"]
        if isinstance(obs, dict):
            observed, owidth = obs["decimal"], obs["width"]
            observed = f"{observed} (width {owidth})"
        else:
            observed = obs
        yield {
            "kind": "violation",
            "k": v["k"],
            "m": v["m"],
            "n": v["n"],
            "b": v["b_next"],
            "p": v["p"],
            "q": v["q"],
            "d": v["d"],
            "quantity": v["quantity"],
            "observed": observed,
            "claimed": v["claimed"],
        }


def _emit_csv(report: dict) -> str:
    command = report["config"]["command"]
    lines = [CSV_SCHEMA_LINE, ",".join(CSV_COLUMNS)]

    def add(values: dict):
        lines.append(_csv_row(values))

    for result in report["results"]:
        k, m = result.get("k"), result.get("m")
        if command == "expand":
            for t in result["convergents"]:
                add({"kind": "term", "k": k, "m": m, "n": t["n"], "side": t["side"],
                     "b": t["b"], "p": t["p"], "q": t["q"]})
        elif command == "predict":
            for pr in result["predictions"]:
                add({"kind": "prediction", "k": k, "m": m, "n": pr["n"], "side": pr["side"],
                     "p": pr["p"], "q": pr["q"], "d": pr["d"],
                     "leading": pr["leading"]["rational"],
                     "shifted_leading": pr["shifted_leading"]["rational"],
                     "candidate": pr["candidate"], "epsilon": pr["epsilon"],
                     "predicted": pr["predicted"], "actual": pr["actual"],
                     "formula_held": pr["formula_held"], "window_held": pr["window_held"]})
        elif command == "verify":
            for it in result["items"]:
                add({"kind": "check", "k": k, "m": m, "n": it["n"], "side": it["side"],
                     "b": it["b_next"], "p": it["p"], "q": it["q"], "d": it["d"],
                     "leading": it["leading"]["rational"],
                     "shifted_leading": it["shifted_leading"]["rational"],
                     "theta": it["theta"]["decimal"], "theta_width": it["theta"]["width"],
                     "remainder": it["remainder"]["decimal"],
                     "remainder_width": it["remainder"]["width"],
                     "remainder_in_unit": it["remainder_in_unit"],
                     "candidate": it["candidate"], "epsilon": it["epsilon"],
                     "predicted": it["predicted"], "actual": it["actual"],
                     "formula_held": it["formula_held"], "window_held": it["window_held"]})
            for row in _violation_rows(result["violations"]):
                add(row)
            for claim in result["claims"].values():
                for row in _violation_rows(claim["failures"]):
                    row["kind"] = "claim_failure"
                    add(row)
            add({"kind": "cell", "k": k, "m": m,
                 "remainder_stable_from": result["remainder_stable_from"],
                 "window_stable_from": result["window_stable_from"]})
        elif command == "scan":
            for row in _violation_rows(result["violations"]):
                add(row)
            for c in result["cells"]:
                add({"kind": "cell", "k": c["k"], "m": c["m"],
                     "remainder_stable_from": c["remainder_stable_from"],
                     "window_stable_from": c["window_stable_from"]})
            for s in result["skipped"]:
                add({"kind": "skipped", "k": s["k"], "m": s["m"], "reason": s["reason"]})
    return "\n".join(lines) + "\n"


def _fmt_value(entry: dict) -> str:
    if "rational" in entry:
        return f"{entry['rational']} ~ {entry['decimal']}"
    return f"{entry['decimal']} (width {entry['width']})"


def _emit_text(report: dict) -> str:
    command = report["config"]["command"]
    out = [f"rootcf {report['tool']['version']} -- {command}"]
    cfg = report["config"]
    out.append(
        f"config: k={cfg['k'][0]}..{cfg['k'][1]} m={cfg['m'][0]}..{cfg['m'][1]} "
        f"terms={cfg['terms']} precision_cap={cfg['precision_cap']}"
    )
    for result in report["results"]:
        if command == "expand":
            out.append(f"\nalpha = {result['k']}^(1/{result['m']})  "
                       f"[certified at {result['precision_bits']} bits]")
            out.append("  b = " + str(result["partial_quotients"]))
            for t in result["convergents"]:
                out.append(f"  n={t['n']:<3d} b={t['b']:<6d} side={t['side']:<5s} "
                           f"p/q = {t['p']}/{t['q']}")
        elif command == "predict":
            out.append(f"\nalpha = {result['k']}^(1/{result['m']})")
            out.append("  b = " + str(result["partial_quotients"]))
            for pr in result["predictions"]:
                out.append(
                    f"  n={pr['n']:<3d} side={pr['side']:<5s} "
                    f"H={_fmt_value(pr['leading'])}  A={_fmt_value(pr['shifted_leading'])}  "
                    f"floor(A)={pr['candidate']} eps={pr['epsilon']} "
                    f"predicted={pr['predicted']} actual={pr['actual']} "
                    f"formula_held={pr['formula_held']} window_held={pr['window_held']}"
                )
        elif command == "verify":
            out.append(f"\nalpha = {result['k']}^(1/{result['m']})  terms<= {result['terms']}")
            out.append("  b = " + str(result["partial_quotients"]))
            out.append(f"  note: {result['note']}")
            out.append(f"  skipped n (q < {result['q_min']} or n = 0): {result['skipped']}")
            for it in result["items"]:
                out.append(
                    f"  n={it['n']:<3d} (theta index {it['n']}/alt {it['theta_index_alt']}) "
                    f"side={it['side']:<5s} b_next={it['b_next']} d={it['d']}"
                )
                out.append(f"      H = {_fmt_value(it['leading'])}   A = {_fmt_value(it['shifted_leading'])}")
                out.append(f"      theta = {_fmt_value(it['theta'])}")
                out.append(f"      R = {_fmt_value(it['remainder'])}  |R|<1: {it['remainder_in_unit']}")
                out.append(
                    f"      predict: floor(A)={it['candidate']} eps={it['epsilon']} "
                    f"predicted={it['predicted']} actual={it['actual']} "
                    f"formula_held={it['formula_held']}"
                )
            if result["violations"]:
                out.append("  violations:")
                for v in result["violations"]:
                    obs = v["observed"]
                    shown = _fmt_value(obs) if isinstance(obs, dict) else obs
                    out.append(f"    n={v['n']} {v['quantity']}: observed {shown}; claimed: {v['claimed']}")
            else:
                out.append("  violations: none")
            for name, claim in result["claims"].items():
                out.append(
                    f"  measured claim [{name}]: '{claim['claim']}' "
                    f"passed={claim['passed']} failed={claim['failed']}"
                )
                for f in claim["failures"]:
                    obs = f["observed"]
                    shown = _fmt_value(obs) if isinstance(obs, dict) else obs
                    out.append(f"    n={f['n']}: observed {shown}")
            out.append(f"  remainder stable from n = {result['remainder_stable_from']}; "
                       f"window stable from n = {result['window_stable_from']}")
        elif command == "scan":
            for c in result["cells"]:
                out.append(
                    f"  k={c['k']:<5d} m={c['m']:<3d} violations={c['violations']} "
                    f"remainder_stable_from={c['remainder_stable_from']} "
                    f"window_stable_from={c['window_stable_from']}"
                )
            for s in result["skipped"]:
                out.append(f"  k={s['k']:<5d} m={s['m']:<3d} skipped: {s['reason']}")
            if result["violations"]:
                out.append("  violations:")
                for v in result["violations"]:
                    obs = v["observed"]
                    shown = _fmt_value(obs) if isinstance(obs, dict) else obs
                    out.append(
                        f"    k={v['k']} m={v['m']} n={v['n']} {v['quantity']}: "
                        f"observed {shown}; claimed: {v['claimed']}"
                    )
    out.append("\nsummary: " + json.dumps(report["summary"]))
    return "\n".join(out) + "\n"


def emit(report: dict, fmt: str) -> str:
    """Serialize a report deterministically as json, csv, or text."""
    if fmt == "json":
        return _emit_json(report)
    if fmt == "csv":
        return _emit_csv(report)
    if fmt == "text":
        return _emit_text(report)
    raise ValueError(f"unknown format: {fmt}")
