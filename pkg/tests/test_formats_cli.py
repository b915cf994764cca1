import json
import shutil
import subprocess
import sys
from fractions import Fraction

import pytest

from _data import DCUBE, DCUBE_M, DCUBE_Q, KALEIDOSCOPE_M, SPINNER, SPINNER_M, SPINNER_Q, TWIN_PEAK
from usokit import OutMap
from usokit.cli import main, parse_matching, parse_set
from usokit.errors import FormatError
from usokit.formats import format_lcp, format_uso, parse_lcp, parse_uso, read_uso, write_lcp, write_uso


# formats

def test_uso_roundtrip():
    text = format_uso(SPINNER)
    assert text == "USO 1\n3\n0 5 3 2 6 1 4 7\n"
    assert parse_uso(text) == SPINNER


def test_uso_zero_dim():
    assert parse_uso("USO 1\n0\n0\n") == OutMap(0, [0])


@pytest.mark.parametrize("text, line", [
    ("USO 2\n1\n0 1\n", 1),
    ("USO 1\nx\n0 1\n", 2),
    ("USO 1\n2\n0 1 2\n", 3),
    ("USO 1\n1\n0 2\n", 3),
    ("USO 1\n1\n0 a\n", 3),
    ("USO 1\n1\n0 0\n", 3),
    ("", 1),
])
def test_uso_errors(text, line):
    with pytest.raises(FormatError) as err:
        parse_uso(text)
    assert err.value.line == line


def test_uso_no_validation():
    assert parse_uso("USO 1\n1\n0 0\n", validate=False).table == (0, 0)


def test_lcp_roundtrip():
    text = format_lcp(DCUBE_M, DCUBE_Q)
    assert text.splitlines()[:3] == ["LCP 1", "3", "5 -10 2"]
    assert parse_lcp(text) == (DCUBE_M, DCUBE_Q)
    m = [[Fraction(1, 3), Fraction(-2, 7)], [Fraction(0), Fraction(5)]]
    q = [Fraction(-1, 2), Fraction(3)]
    assert parse_lcp(format_lcp(m, q)) == (m, q)


@pytest.mark.parametrize("text, line", [
    ("LCP 1\n2\n1 0\n0 1\n1\n", 5),
    ("LCP 1\n2\n1 0\n0 x\n1 1\n", 4),
    ("LCP 1\n2\n1 0\n0 1/0\n1 1\n", 4),
    ("LCP 1\n2\n1 0\n0 1.5\n1 1\n", 4),
    ("LCP 1\n2\n1 0\n0 1\n", 4),
])
def test_lcp_errors(text, line):
    with pytest.raises(FormatError) as err:
        parse_lcp(text)
    assert err.value.line == line


def test_parse_helpers():
    assert parse_set("1,3") == 0b101
    assert parse_set("{}") == 0
    assert parse_set("-") == 0
    assert parse_set("{2}") == 0b10
    assert parse_matching("1:3, 2:1,4:2") == [(1, 3), (2, 1), (4, 2)]


# CLI

@pytest.fixture
def files(tmp_path):
    write_uso(tmp_path / "spinner.uso", SPINNER)
    write_uso(tmp_path / "dcube.uso", DCUBE)
    write_uso(tmp_path / "twin.uso", TWIN_PEAK)
    write_lcp(tmp_path / "spinner.lcp", SPINNER_M, SPINNER_Q)
    write_lcp(tmp_path / "dcube.lcp", DCUBE_M, DCUBE_Q)
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv] + ["--format", "json"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def verify(capsys, report_path):
    code, rep = run(capsys, "verify-report", report_path)
    return code, rep["verdict"]


@pytest.mark.parametrize("which, code", [
    ("uso", 0), ("property-l", 1), ("holt-klee", 0), ("locally-uniform", 1), ("pseudo", 1),
])
def test_check_spinner(files, capsys, which, code):
    rpt = files / "r.json"
    got, rep = run(capsys, "check", files / "spinner.uso", which, "--report", rpt)
    assert got == code
    assert rep["verdict"] == ("holds" if code == 0 else "fails")
    assert "timings" in rep
    assert verify(capsys, rpt) == (0, "valid")


def test_check_property_l_witness(files, capsys):
    _, rep = run(capsys, "check", files / "spinner.uso", "property-l")
    assert rep["witness"] == {"vertex": [], "cycle": [1, 3, 2]}


def test_check_twin_peak(files, capsys):
    rpt = files / "r.json"
    code, rep = run(capsys, "check", files / "twin.uso", "uso", "--report", rpt)
    assert code == 1
    assert rep["witness"]["pair"] == [[], [1, 2]]
    assert verify(capsys, rpt) == (0, "valid")
    code, rep = run(capsys, "check", files / "twin.uso", "pseudo")
    assert code == 0
    assert rep["witness"]["sinks"] == [[], [1, 2]]


def test_tampered_report_is_invalid(files, capsys):
    rpt = files / "r.json"
    run(capsys, "check", files / "spinner.uso", "property-l", "--report", rpt)
    rep = json.loads(rpt.read_text())
    rep["witness"]["cycle"] = [1, 2, 3]
    rpt.write_text(json.dumps(rep))
    assert verify(capsys, rpt) == (1, "invalid")


def test_build_pcube(files, capsys):
    rpt = files / "r.json"
    out = files / "out.uso"
    code, rep = run(capsys, "build", "pcube", files / "spinner.lcp", "-o", out, "--report", rpt)
    assert code == 0
    assert read_uso(out) == SPINNER
    assert rep["property_l"]["holds"] is False
    assert verify(capsys, rpt) == (0, "valid")


def test_build_dcube(files, capsys):
    out = files / "out.uso"
    assert run(capsys, "build", "dcube", files / "dcube.lcp", "-o", out)[0] == 0
    assert read_uso(out) == DCUBE
    assert run(capsys, "build", "dcube", files / "spinner.lcp", "-o", out)[0] == 2


def test_build_kaleidoscopes(files, capsys):
    rpt = files / "r.json"
    out = files / "k.uso"
    assert run(capsys, "build", "kaleidoscope-product", files / "spinner.uso", "-o", out, "--report", rpt)[0] == 0
    assert read_uso(out).n == 6
    assert verify(capsys, rpt) == (0, "valid")
    lcp_out = files / "k.lcp"
    code, _ = run(capsys, "build", "kaleidoscope-pmatrix", files / "spinner.lcp", "-o", out,
                  "--lcp-out", lcp_out, "--report", rpt)
    assert code == 0
    assert parse_lcp(lcp_out.read_text())[0] == KALEIDOSCOPE_M
    assert verify(capsys, rpt) == (0, "valid")


def test_build_generators(files, capsys):
    out = files / "g.uso"
    assert run(capsys, "build", "combed", "-o", out, "--n", 2, "--bits", "000")[0] == 0
    assert read_uso(out).table == (0, 1, 2, 3)
    assert run(capsys, "build", "uniform", "-o", out, "--n", 3)[0] == 0
    assert run(capsys, "build", "matching-reversal", "-o", out, "--n", 3, "--matching", "1:3,2:1,4:2")[0] == 0
    assert read_uso(out) == SPINNER
    assert run(capsys, "build", "matching-reversal", "-o", out, "--n", 3, "--matching", "0:1,1:2")[0] == 2
    assert run(capsys, "build", "combed", "-o", out, "--n", 2)[0] == 2


def test_build_degenerate_q(files, capsys):
    (files / "bad.lcp").write_text("LCP 1\n2\n1 0\n0 1\n0 1\n")
    code = main(["build", "pcube", str(files / "bad.lcp"), "-o", str(files / "x.uso")])
    err = capsys.readouterr().err
    assert code == 2
    assert "vertex []" in err and "index 1" in err
    assert not (files / "x.uso").exists()


@pytest.mark.parametrize("op, args, expected", [
    ("reverse", ["1,2,3"], OutMap(3, [7 ^ x for x in SPINNER.table])),
    ("mirror", ["{}"], SPINNER),
    ("permute", ["2,3,1"], SPINNER),
    ("automorph", ["1,2", "1,2,3"], DCUBE),
])
def test_transform(files, capsys, op, args, expected):
    rpt = files / "r.json"
    out = files / "t.uso"
    code, _ = run(capsys, "transform", files / "spinner.uso", op, *args, "-o", out, "--report", rpt)
    assert code == 0
    assert read_uso(out) == expected
    assert verify(capsys, rpt) == (0, "valid")


def test_transform_find_l_copy(files, capsys):
    rpt = files / "r.json"
    out = files / "t.uso"
    code, rep = run(capsys, "transform", files / "spinner.uso", "find-l-copy", "-o", out, "--report", rpt)
    assert code == 0
    assert rep["property_l_changed"] is True
    assert rep["witness"]["automorphism"] == {"flip": [1], "perm": [1, 2, 3]}
    assert verify(capsys, rpt) == (0, "valid")


def test_transform_bad_permutation(files, capsys):
    assert run(capsys, "transform", files / "spinner.uso", "permute", "1,1,2", "-o", files / "t.uso")[0] == 2


def test_iso(files, capsys):
    rpt = files / "r.json"
    code, rep = run(capsys, "iso", files / "dcube.uso", files / "spinner.uso", "--report", rpt)
    assert code == 0 and rep["verdict"] == "isomorphic"
    assert verify(capsys, rpt) == (0, "valid")
    write_uso(files / "eye.uso", OutMap(3, range(8)))
    code, rep = run(capsys, "iso", files / "eye.uso", files / "spinner.uso", "--report", rpt)
    assert code == 1
    assert verify(capsys, rpt) == (0, "valid")
    assert run(capsys, "iso", files / "twin.uso", files / "spinner.uso")[0] == 2


def test_census_cli(files, capsys):
    rpt = files / "r.json"
    out = files / "census3"
    code, rep = run(capsys, "census", 3, "--out", out, "--report", rpt)
    assert code == 0
    assert rep["classes"] == 19 and rep["classes_without_property_l"] == 0 and rep["total_usos"] == 744
    assert len(list(out.glob("class-*.uso"))) == 19
    assert verify(capsys, rpt) == (0, "valid")
    code, _ = run(capsys, "census", 3, "--out", out, "--resume")
    assert code == 0


def test_census_4_needs_heavy(files, capsys):
    assert run(capsys, "census", 4, "--out", files / "c4")[0] == 2


def test_input_errors(files, capsys):
    assert run(capsys, "check", files / "missing.uso", "uso")[0] == 2
    (files / "bad.uso").write_text("USO 1\n1\n0 0\n")
    assert run(capsys, "check", files / "bad.uso", "uso")[0] == 2
    assert run(capsys, "check", files / "twin.uso", "holt-klee")[0] == 2


def test_dimension_cap_env(files, capsys, monkeypatch):
    monkeypatch.setenv("USO_MAX_DIM", "2")
    assert run(capsys, "check", files / "spinner.uso", "uso")[0] == 2


def test_text_format(files, capsys):
    assert main(["check", str(files / "spinner.uso"), "uso"]) == 0
    out = capsys.readouterr().out
    assert "verdict: holds" in out


@pytest.mark.skipif(shutil.which("usokit") is None, reason="console script not installed")
def test_console_script(files):
    proc = subprocess.run(["usokit", "check", str(files / "spinner.uso"), "property-l"], capture_output=True, text=True)
    assert proc.returncode == 1
    assert "verdict: fails" in proc.stdout


def test_module_entry(files):
    proc = subprocess.run([sys.executable, "-m", "usokit.cli", "check", str(files / "spinner.uso"), "uso"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
