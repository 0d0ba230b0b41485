"""Ingestion of variety databases and batch orchestration.

Record format (text, hand-writable):

    # comment lines start with a hash
    id=<string> dim=<n> rays=<m> [mode=polytope|fan]
    <m lines of n integers>
    [cones                      -- fan mode only
     <one line per maximal cone: space-separated 1-based ray indices>]

Blocks are separated by blank lines; ``mode`` defaults to ``polytope``, in
which case the block lists the vertices of a smooth Fano polytope and the
face fan is built from them.  A malformed block, or one that is not a smooth
Fano fan, becomes a quarantined record carrying a line-anchored diagnostic;
duplicate ids reject the whole file.
"""

from __future__ import annotations

import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .fan import Fan, InvalidFan, fan_from_polytope, local_properties, make_fan
from .verify import (
    CLAIM_IDS,
    CheckResult,
    VerificationReport,
    verify_codim_theorem,
    verify_main_dichotomy,
    verify_small_dimension_facts,
    verify_toric_proposition,
)

__all__ = ["IngestError", "VarietyRecord", "ingest", "run_suite"]

_HEADER = re.compile(
    r"^id=(?P<id>\S+)\s+dim=(?P<dim>\d+)\s+rays=(?P<rays>\d+)"
    r"(?:\s+mode=(?P<mode>polytope|fan))?\s*$"
)


class IngestError(ValueError):
    """File-level problem: unreadable content or duplicate ids."""


@dataclass
class VarietyRecord:
    variety_id: str
    dim: int
    source: str
    line_span: tuple[int, int]
    fan: Fan | None = None
    diagnostic: str | None = None

    @property
    def ok(self) -> bool:
        return self.fan is not None


def _blocks(lines: list[str]):
    block: list[tuple[int, str]] = []
    for lineno, raw in enumerate(lines, start=1):
        stripped = raw.strip()
        if stripped.startswith("#"):
            continue
        if not stripped:
            if block:
                yield block
                block = []
            continue
        block.append((lineno, stripped))
    if block:
        yield block


def _parse_block(block: list[tuple[int, str]], source: str) -> VarietyRecord:
    first_line, header = block[0]
    last_line = block[-1][0]
    span = (first_line, last_line)
    m = _HEADER.match(header)
    if not m:
        return VarietyRecord(
            variety_id=f"{source}:{first_line}",
            dim=0,
            source=source,
            line_span=span,
            diagnostic=f"line {first_line}: malformed header {header!r}",
        )
    vid = m.group("id")
    dim = int(m.group("dim"))
    n_rays = int(m.group("rays"))
    mode = m.group("mode") or "polytope"

    def quarantine(msg: str) -> VarietyRecord:
        return VarietyRecord(
            variety_id=vid, dim=dim, source=source, line_span=span, diagnostic=msg
        )

    body = block[1:]
    if len(body) < n_rays:
        return quarantine(f"line {first_line}: expected {n_rays} ray lines")
    rays = []
    for lineno, text in body[:n_rays]:
        parts = text.split()
        if len(parts) != dim or not all(re.fullmatch(r"-?\d+", p) for p in parts):
            return quarantine(f"line {lineno}: expected {dim} integers, got {text!r}")
        rays.append(tuple(int(p) for p in parts))
    rest = body[n_rays:]

    try:
        if mode == "polytope":
            if rest:
                return quarantine(
                    f"line {rest[0][0]}: unexpected content after the vertices"
                )
            fan = fan_from_polytope(rays)
        else:
            if not rest or rest[0][1] != "cones":
                return quarantine(
                    f"line {span[1]}: fan mode requires a 'cones' section"
                )
            cones = []
            for lineno, text in rest[1:]:
                parts = text.split()
                if not all(p.isdigit() for p in parts):
                    return quarantine(f"line {lineno}: bad cone line {text!r}")
                cone = {int(p) - 1 for p in parts}
                if any(not 0 <= i < n_rays for i in cone):
                    return quarantine(f"line {lineno}: cone index out of range")
                cones.append(cone)
            fan = make_fan(rays, cones)
    except InvalidFan as exc:
        return quarantine(f"lines {span[0]}-{span[1]}: {exc}")

    props = local_properties(fan)
    if not (props.smooth and props.fano):
        return quarantine(
            f"lines {span[0]}-{span[1]}: fan is not smooth Fano "
            f"(smooth={props.smooth}, fano={props.fano})"
        )
    return VarietyRecord(
        variety_id=vid, dim=dim, source=source, line_span=span, fan=fan
    )


def ingest(path: str) -> list[VarietyRecord]:
    """Parse a database file into records; quarantine bad blocks.

    Raises :class:`IngestError` on duplicate ids (the file is rejected).
    """
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc
    records = [_parse_block(b, path) for b in _blocks(lines)]
    ids = [r.variety_id for r in records]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise IngestError(f"duplicate ids in {path}: {', '.join(dupes)}")
    return records


# ---------------------------------------------------------------------------
# suite orchestration


_CHECKERS = {
    "codim.bound": verify_codim_theorem,
    "codim.product": verify_codim_theorem,
    "codim.dp4": verify_codim_theorem,
    "main.dichotomy": verify_main_dichotomy,
    "toric.prop": verify_toric_proposition,
    "dim.smallfacts": verify_small_dimension_facts,
}


def _verify_one(
    record: VarietyRecord,
    claims: tuple[str, ...],
    runs_out: list | None,
    step_bound: int | None = None,
) -> VerificationReport:
    fan = record.fan
    started = time.monotonic()
    checks: list[CheckResult] = []
    rho = fan.n_rays - fan.dim
    c_x = None
    ran: set = set()
    for claim in claims:
        checker = _CHECKERS[claim]
        if checker in ran:
            continue
        ran.add(checker)
        try:
            if checker in (verify_main_dichotomy, verify_toric_proposition):
                rep = checker(
                    fan, record.variety_id, runs_out=runs_out, step_bound=step_bound
                )
            else:
                rep = checker(fan, record.variety_id)
            c_x = rep.c_x
            checks.extend(c for c in rep.checks if c.claim in claims)
        except Exception as exc:  # per-record isolation: a crash is a failure
            checks.append(
                CheckResult(
                    claim,
                    "fail",
                    f"checker raised {type(exc).__name__}: {exc}",
                )
            )
    if c_x is None:
        from .defect import lefschetz_defect

        c_x = lefschetz_defect(fan).c_x
    return VerificationReport(
        variety_id=record.variety_id,
        rho=rho,
        c_x=c_x,
        checks=tuple(checks),
        timing=time.monotonic() - started,
    )


def _worker(payload):
    record, claims, step_bound = payload
    return _verify_one(record, claims, None, step_bound)


def run_suite(
    records: list[VarietyRecord],
    claims: tuple[str, ...] | None = None,
    workers: int = 1,
    runs_out: list | None = None,
    step_bound: int | None = None,
) -> list[VerificationReport]:
    """Verify every valid record; deterministic order, per-record isolation.

    ``runs_out`` (a list collecting every executed MMP run) requires
    ``workers=1``; parallel sweeps return reports only.
    """
    claims = tuple(claims) if claims else CLAIM_IDS
    for c in claims:
        if c not in _CHECKERS:
            raise ValueError(f"unknown claim id {c!r}")
    valid = sorted((r for r in records if r.ok), key=lambda r: r.variety_id)
    if workers > 1:
        if runs_out is not None:
            raise ValueError("collecting runs requires workers=1")
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(
                pool.map(_worker, [(r, claims, step_bound) for r in valid])
            )
    else:
        reports = [_verify_one(r, claims, runs_out, step_bound) for r in valid]
    return sorted(reports, key=lambda r: r.variety_id)
