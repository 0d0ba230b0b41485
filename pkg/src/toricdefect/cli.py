"""Command-line surface.

Subcommands: ``check`` (validation only), ``invariants`` (Picard number and
per-ray defects), ``mmp`` (run and print one divisor's special MMP), and
``verify`` (the theorem suite).  Exit codes: 0 all pass or not applicable,
1 at least one claim failed (or, for ``check``, an invalid block), 2 input
or system error.  Set ``TORICDEFECT_LOG`` to ``debug``/``info``/``warning``
for log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .database import IngestError, ingest, run_suite
from .defect import lefschetz_defect
from .intersection import intersection_space
from .mmp import MmpError, classify_run, run_to_dict, special_mmp
from .report import emit_report, render_figures
from .verify import CLAIM_IDS

log = logging.getLogger("toricdefect")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_ERROR = 2


def _setup_logging() -> None:
    level = os.environ.get("TORICDEFECT_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING))


def _write_or_print(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_check(args) -> int:
    records = ingest(args.file)
    bad = 0
    lines = []
    for r in records:
        if r.ok:
            lines.append(f"{r.variety_id}: ok ({r.fan.n_rays} rays, dim {r.dim})")
        else:
            bad += 1
            lines.append(f"{r.variety_id}: QUARANTINED: {r.diagnostic}")
    lines.append(f"{len(records) - bad} valid, {bad} quarantined")
    _write_or_print("".join(line + "\n" for line in lines), args.out)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_invariants(args) -> int:
    records = ingest(args.file)
    rows = []
    for r in sorted(records, key=lambda r: r.variety_id):
        if not r.ok:
            log.warning("skipping %s: %s", r.variety_id, r.diagnostic)
            continue
        rep = lefschetz_defect(r.fan)
        rows.append(
            {
                "id": r.variety_id,
                "dim": r.fan.dim,
                "rho": intersection_space(r.fan).rho,
                "c": {
                    lab: c for lab, c in zip(r.fan.labels, rep.c_values)
                },
                "c_x": rep.c_x,
            }
        )
    if args.format == "text-summary":
        text = "".join(
            f"{row['id']}: dim {row['dim']}, rho {row['rho']}, c_X {row['c_x']}\n"
            for row in rows
        )
    else:
        text = "".join(json.dumps(row) + "\n" for row in rows)
    _write_or_print(text, args.out)
    if args.figures:
        from .verify import VerificationReport

        reports = [
            VerificationReport(row["id"], row["rho"], row["c_x"], ())
            for row in rows
        ]
        for p in render_figures(reports, args.figures):
            log.info("wrote %s", p)
    return EXIT_OK


def cmd_mmp(args) -> int:
    records = ingest(args.file)
    match = [r for r in records if r.variety_id == args.id]
    if not match or not match[0].ok:
        log.error("no valid record with id %s", args.id)
        return EXIT_ERROR
    fan = match[0].fan
    if not 1 <= args.divisor <= fan.n_rays:
        log.error("divisor ray must be in 1..%d", fan.n_rays)
        return EXIT_ERROR
    runs = special_mmp(
        fan, args.divisor - 1, strategy=args.strategy, step_bound=args.step_bound
    )
    payload = []
    for run in runs:
        try:
            cls = classify_run(run)
        except MmpError:
            cls = None
        payload.append(run_to_dict(run, cls))
    text = "".join(json.dumps(p) + "\n" for p in payload)
    _write_or_print(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    records = ingest(args.file)
    for r in records:
        if not r.ok:
            log.warning("skipping %s: %s", r.variety_id, r.diagnostic)
    claims = tuple(args.claims.split(",")) if args.claims else None
    reports = run_suite(
        records, claims=claims, workers=args.workers, step_bound=args.step_bound
    )
    text = emit_report(reports, format=args.format)
    _write_or_print(text, args.out)
    if args.figures:
        for p in render_figures(reports, args.figures):
            log.info("wrote %s", p)
    return EXIT_FAIL if any(r.failed for r in reports) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="toricdefect",
        description="defect and structure checks for smooth toric Fano varieties",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, figures=False):
        p.add_argument("file", help="variety database file")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument(
            "--format",
            choices=["json-lines", "text-summary"],
            default="json-lines",
        )
        if figures:
            p.add_argument(
                "--figures", metavar="DIR", help="also render summary figures"
            )

    p = sub.add_parser("check", help="validate a database file")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("invariants", help="Picard numbers and defects")
    common(p, figures=True)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("mmp", help="run a special MMP and print the trace")
    common(p)
    p.add_argument("--id", required=True, help="variety id")
    p.add_argument(
        "--divisor", required=True, type=int, help="1-based ray number of D"
    )
    p.add_argument("--strategy", choices=["first", "all"], default="first")
    p.add_argument("--step-bound", type=int, default=None)
    p.set_defaults(func=cmd_mmp)

    p = sub.add_parser("verify", help="run the theorem suite")
    common(p, figures=True)
    p.add_argument(
        "--claims",
        help=f"comma-separated claim ids (default: all of {', '.join(CLAIM_IDS)})",
    )
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--step-bound", type=int, default=None)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except IngestError as exc:
        log.error("%s", exc)
        return EXIT_ERROR
    except OSError as exc:
        log.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
