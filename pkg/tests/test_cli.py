import json
import os
import textwrap

from toricdefect.cli import main

DATA = os.path.join(os.path.dirname(__file__), "..", "data")
SURFACES = os.path.join(DATA, "surfaces.txt")


def test_check_ok(capsys):
    assert main(["check", SURFACES]) == 0
    out = capsys.readouterr().out
    assert "5 valid, 0 quarantined" in out


def test_check_quarantine_exit_code(tmp_path, capsys):
    p = tmp_path / "bad.txt"
    p.write_text(
        textwrap.dedent(
            """\
            id=bad dim=2 rays=3
            2 0
            0 1
            -1 -1
            """
        )
    )
    assert main(["check", str(p)]) == 1
    assert "QUARANTINED" in capsys.readouterr().out


def test_check_missing_file_exit_2():
    assert main(["check", "/nonexistent/path.txt"]) == 2


def test_invariants(capsys):
    assert main(["invariants", SURFACES]) == 0
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    by_id = {row["id"]: row for row in lines}
    assert by_id["Bl2P2"]["rho"] == 3
    assert by_id["Bl2P2"]["c_x"] == 2
    assert by_id["P2"]["c_x"] == 0
    assert all(v == 2 for v in by_id["Bl2P2"]["c"].values())


def test_mmp_trace(capsys):
    code = main(
        ["mmp", SURFACES, "--id", "Bl2P2", "--divisor", "1", "--strategy", "first"]
    )
    assert code == 0
    (line,) = capsys.readouterr().out.splitlines()
    trace = json.loads(line)
    assert trace["type"] == "b"
    assert trace["k"] == 2
    assert trace["terminal"]["k_pairing"] == 2


def test_verify_all_pass(tmp_path, capsys):
    out = tmp_path / "r.jsonl"
    code = main(["verify", SURFACES, "--out", str(out)])
    assert code == 0
    lines = [json.loads(l) for l in out.read_text().splitlines()]
    assert len(lines) == 5
    for row in lines:
        assert all(c["status"] in ("pass", "na") for c in row["checks"])


def test_verify_claim_filter_and_summary(capsys):
    code = main(
        ["verify", SURFACES, "--claims", "dim.smallfacts", "--format", "text-summary"]
    )
    assert code == 0
    out = capsys.readouterr().out
    assert "dim.smallfacts: 5 pass / 0 fail / 0 n.a." in out


def test_verify_figures(tmp_path):
    figdir = tmp_path / "figs"
    code = main(
        [
            "verify",
            SURFACES,
            "--claims",
            "dim.smallfacts",
            "--out",
            str(tmp_path / "r.jsonl"),
            "--figures",
            str(figdir),
        ]
    )
    assert code == 0
    names = sorted(os.listdir(figdir))
    assert names == ["claim_outcomes.png", "defect_vs_picard.png"]
    for n in names:
        assert (figdir / n).stat().st_size > 1000


def test_verify_byte_identical(tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    assert main(["verify", SURFACES, "--out", str(a)]) == 0
    assert main(["verify", SURFACES, "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_verify_unwritable_out_exit_2():
    assert main(["verify", SURFACES, "--out", "/nonexistent/dir/x.jsonl"]) == 2
