import os
import textwrap

import pytest

from toricdefect.database import IngestError, ingest, run_suite
from toricdefect.report import emit_report, report_to_dict

DATA = os.path.join(os.path.dirname(__file__), "..", "data")


def write(tmp_path, text):
    p = tmp_path / "db.txt"
    p.write_text(textwrap.dedent(text))
    return str(p)


def test_ingest_bundled_surfaces():
    records = ingest(os.path.join(DATA, "surfaces.txt"))
    assert len(records) == 5
    assert all(r.ok for r in records)
    assert {r.variety_id for r in records} == {
        "P2",
        "P1xP1",
        "Bl1P2",
        "Bl2P2",
        "Bl3P2",
    }


def test_ingest_polytope_block(tmp_path):
    path = write(
        tmp_path,
        """\
        # a comment
        id=p2 dim=2 rays=3
        1 0
        0 1
        -1 -1
        """,
    )
    (r,) = ingest(path)
    assert r.ok
    assert r.fan.n_rays == 3
    assert r.line_span == (2, 5)


def test_ingest_fan_mode(tmp_path):
    path = write(
        tmp_path,
        """\
        id=pentagon dim=2 rays=5 mode=fan
        1 0
        0 1
        -1 -1
        1 1
        -1 0
        cones
        1 4
        4 2
        2 5
        5 3
        3 1
        """,
    )
    (r,) = ingest(path)
    assert r.ok
    assert len(r.fan.cones) == 5


def test_ingest_quarantines_nonprimitive(tmp_path):
    path = write(
        tmp_path,
        """\
        id=bad dim=2 rays=3
        2 0
        0 1
        -1 -1
        """,
    )
    (r,) = ingest(path)
    assert not r.ok
    assert "primitive" in r.diagnostic


def test_ingest_quarantines_nonfano(tmp_path):
    # the Hirzebruch surface F_2 is smooth complete but not Fano
    path = write(
        tmp_path,
        """\
        id=f2 dim=2 rays=4 mode=fan
        1 0
        0 1
        -1 2
        0 -1
        cones
        1 2
        2 3
        3 4
        4 1
        """,
    )
    (r,) = ingest(path)
    assert not r.ok
    assert "fano=False" in r.diagnostic


def test_ingest_rejects_duplicate_ids(tmp_path):
    path = write(
        tmp_path,
        """\
        id=x dim=2 rays=3
        1 0
        0 1
        -1 -1

        id=x dim=2 rays=3
        1 0
        0 1
        -1 -1
        """,
    )
    with pytest.raises(IngestError, match="duplicate"):
        ingest(path)


def test_ingest_empty_file(tmp_path):
    path = write(tmp_path, "# nothing here\n")
    assert ingest(path) == []


def test_run_suite_surface_smallfacts():
    records = ingest(os.path.join(DATA, "surfaces.txt"))
    reports = run_suite(records, claims=("dim.smallfacts",))
    assert len(reports) == 5
    assert [r.variety_id for r in reports] == sorted(r.variety_id for r in reports)
    for r in reports:
        assert all(c.status == "pass" for c in r.checks)


def test_run_suite_deterministic_output():
    records = ingest(os.path.join(DATA, "surfaces.txt"))
    a = emit_report(run_suite(records), format="json-lines")
    b = emit_report(run_suite(records), format="json-lines")
    assert a == b


def test_run_suite_parallel_matches_serial():
    records = ingest(os.path.join(DATA, "surfaces.txt"))
    serial = emit_report(run_suite(records, workers=1), format="json-lines")
    parallel = emit_report(run_suite(records, workers=2), format="json-lines")
    assert serial == parallel


def test_report_shapes():
    records = ingest(os.path.join(DATA, "surfaces.txt"))
    reports = run_suite(records, claims=("main.dichotomy",))
    d = report_to_dict(reports[0])
    assert set(d) == {"id", "rho", "c_x", "checks", "witnesses"}
    summary = emit_report(reports, format="text-summary")
    assert "main.dichotomy:" in summary
    # Bl2P2 is the only surface here with defect exactly two
    by_id = {r.variety_id: r for r in reports}
    assert by_id["Bl2P2"].checks[0].status == "pass"
    assert by_id["P2"].checks[0].status == "na"


def test_emit_report_empty(tmp_path):
    out = tmp_path / "empty.jsonl"
    text = emit_report([], format="json-lines", out=str(out))
    assert text == ""
    assert out.read_text() == ""
