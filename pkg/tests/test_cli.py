import io
from pathlib import Path

from kolam.cli import build_parser, main

DATA = Path(__file__).parent / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_generate_1x1(tmp_path):
    code, _, _ = run("generate", "--grid", "1x1", "--out", str(tmp_path / "g.txt"))
    assert code == 0
    assert (tmp_path / "g.txt").read_text() == "kolam-gates 1 1\n\n"


def test_validate_all_closed_fails(tmp_path):
    (tmp_path / "c.txt").write_text("kolam-gates 3 3\n111111111111\n")
    code, out, _ = run("validate", str(tmp_path / "c.txt"))
    assert code == 1
    assert "rule-2 FAIL continuity loops=9" in out
    code, out, _ = run("validate", "--machine", str(tmp_path / "c.txt"))
    assert code == 1 and "loop_count=9\n" in out


def test_generate_then_validate(tmp_path):
    g = tmp_path / "g.txt"
    assert run("generate", "--grid", "4x4", "--symmetry", "h", "--seed", "2", "--out", str(g))[0] == 0
    code, out, _ = run("validate", str(g), "--require-symmetry", "h")
    assert code == 0, out


def test_catalog_twice_identical(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run("catalog", "--grid", "3x3", "--symmetry", "rot180", "--out", str(a))[0] == 0
    assert run("catalog", "--grid", "3x3", "--symmetry", "rot180", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_catalog_too_large(tmp_path):
    code, _, err = run("catalog", "--grid", "5x5", "--out", str(tmp_path / "c.txt"))
    assert code == 2 and "orbits" in err
    assert not (tmp_path / "c.txt").exists()


def test_search_exhausted_exit_code(tmp_path):
    code, _, err = run("generate", "--grid", "3x3", "--symmetry", "d4", "--max-restarts", "3",
                       "--out", str(tmp_path / "g.txt"))
    assert code == 4
    assert not (tmp_path / "g.txt").exists()


def test_render_inline_record(tmp_path):
    g = tmp_path / "g.txt"
    run("generate", "--grid", "3x3", "--symmetry", "rot180", "--out", str(g))
    out = tmp_path / "r.svg"
    code, _, _ = run("render", "--gates", str(g), "--spec", str(DATA / "lakshmi.kmap"),
                     "--record", "sleep_hours=5,energy=low,mood=positive,activity=strength",
                     "--out", str(out))
    assert code == 0
    assert 'data-fill="hatch_v"' in out.read_text()


def test_render_spec_error(tmp_path):
    g = tmp_path / "g.txt"
    g.write_text("kolam-gates 1 1\n\n")
    (tmp_path / "bad.kmap").write_text("kolam 3x3\nmap x -> sparkle { a: 1 }\n")
    code, _, err = run("render", "--gates", str(g), "--spec", str(tmp_path / "bad.kmap"),
                       "--out", str(tmp_path / "r.svg"))
    assert code == 2
    assert "2:10: error: unknown channel 'sparkle'" in err


def test_trace_preview(tmp_path):
    (tmp_path / "g.txt").write_text("kolam-gates 2 2\n0000\n")
    code, out, _ = run("trace", "--gates", str(tmp_path / "g.txt"))
    assert code == 0
    assert out.endswith("loops=2\n")
    assert out.count("\n") == 6


def test_journal_commands(tmp_path):
    j = tmp_path / "j.txt"
    assert run("journal", "add", str(j), "2024-03-11", "sleep_hours=8.5", "energy=moderate",
               "mood=calm", "activity=none")[0] == 0
    code, _, err = run("journal", "add", str(j), "2024-03-12", "mood:calm")
    assert code == 2 and "'mood:calm'" in err
    code, out, _ = run("journal", "render", str(j), "--spec", str(DATA / "lakshmi.kmap"),
                       "--out", str(tmp_path / "out"))
    assert code == 0
    assert out.splitlines()[-1].endswith("kolam-sheet.svg")


def test_io_error_exit_code(tmp_path):
    assert run("validate", str(tmp_path / "missing.txt"))[0] == 3
    assert run("trace", "--gates", str(tmp_path / "missing.txt"))[0] == 3


def test_parse_error_exit_code(tmp_path):
    (tmp_path / "g.txt").write_text("kolam-gates 2 2\n01x0\n")
    code, _, err = run("validate", str(tmp_path / "g.txt"))
    assert code == 2 and "line 2, column 3" in err


def test_unknown_flag_usage(capsys):
    assert main(["generate", "--grid", "3x3", "--frob", "--out", "x"]) == 2
    assert "usage:" in capsys.readouterr().err


def test_help_on_every_subcommand(capsys):
    for argv in (["--help"], ["generate", "--help"], ["validate", "--help"], ["catalog", "--help"],
                 ["render", "--help"], ["journal", "--help"], ["journal", "add", "--help"],
                 ["journal", "render", "--help"], ["trace", "--help"]):
        assert main(argv) == 0
        assert "usage:" in capsys.readouterr().out


def test_parser_builds():
    assert build_parser().prog == "kolam"
