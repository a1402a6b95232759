import pytest

from rand_sts.cli import main


@pytest.fixture
def files(tmp_path):
    alt = tmp_path / "alt.txt"
    alt.write_text("01" * 50 + "\n")
    ones = tmp_path / "ones.txt"
    ones.write_text("1" * 100)
    return tmp_path, alt, ones


def write_config(path, m=10, tests="1,2,3", alpha=0.2):
    path.write_text(f"generator = pm\npm.seed = 5\nm = {m}\nalpha = {alpha}\ntests = {tests}\n")
    return path


def test_generate_bbs_ascii(tmp_path, capsys):
    out = tmp_path / "b.txt"
    rc = main(["generate", "--gen", "bbs", "--p", "7", "--q", "11", "--x0", "2", "--n", "3", "--format", "ascii", "-o", str(out)])
    assert rc == 0
    assert out.read_text() == "001"
    assert "3 bits" in capsys.readouterr().err


def test_generate_binary_one_byte(tmp_path):
    out = tmp_path / "b.bin"
    assert main(["generate", "--gen", "pm", "--n", "8", "--format", "binary", "-o", str(out)]) == 0
    assert out.stat().st_size == 1


def test_generate_usage_errors(tmp_path):
    out = str(tmp_path / "x")
    assert main(["generate", "--gen", "pm", "-o", out]) == 2
    assert main(["generate", "--gen", "bbs", "--p", "5", "--q", "11", "--n", "3", "-o", out]) == 2
    assert main(["generate", "--gen", "pm", "--n", "8", "--bogus", "-o", out]) == 2


def test_generate_io_error(tmp_path):
    assert main(["generate", "--gen", "pm", "--n", "8", "-o", str(tmp_path / "missing" / "x")]) == 3


def test_test_pass_line(files, capsys):
    _, alt, _ = files
    assert main(["test", str(alt), "--tests", "1"]) == 0
    assert capsys.readouterr().out.splitlines() == ["1  1.000000e+00  PASS"]


def test_test_failure_exit(files, capsys):
    _, _, ones = files
    assert main(["test", str(ones), "--tests", "1,3"]) == 1
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("1  ") and out[0].split()[2] == "FAIL"
    assert "N/A" in out[1] and "prerequisite" in out[1]


def test_test_too_short(files, capsys):
    _, alt, _ = files
    assert main(["test", str(alt), "--tests", "8"]) == 2
    assert "test 8" in capsys.readouterr().err


def test_test_binary_input_and_overrides(tmp_path, capsys):
    bits = tmp_path / "k.bin"
    assert main(["generate", "--gen", "knuth", "--n", "4000", "--format", "binary", "-o", str(bits)]) == 0
    rc = main(["test", str(bits), "--format", "binary", "--n", "4000", "--tests", "12,13", "--apen-m", "3"])
    lines = capsys.readouterr().out.splitlines()
    assert rc in (0, 1)
    assert [line.split()[0] for line in lines] == ["12", "13", "13"]
    assert lines[1].endswith("[forward]") and lines[2].endswith("[backward]")


def test_test_bad_input(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("0101x")
    assert main(["test", str(bad), "--tests", "1"]) == 2
    assert main(["test", str(tmp_path / "nope.txt")]) == 3
    assert main(["test", str(bad), "--tests", "99"]) == 2


def test_campaign_writes_report(tmp_path):
    cfg = write_config(tmp_path / "c.cfg")
    out, hist, js = tmp_path / "r.tsv", tmp_path / "h.csv", tmp_path / "r.json"
    argv = ["campaign", "--config", str(cfg), "-o", str(out), "--emit-hist", str(hist), "--json", str(js)]
    assert main(argv) == 0
    tables = out.read_text().rstrip("\n").split("\n\n")
    assert [row.split("\t")[0] for row in tables[0].splitlines()[1:]] == ["1", "2", "3"]
    first = out.read_bytes()
    assert main(argv + ["--jobs", "2"]) == 0
    assert out.read_bytes() == first
    assert hist.read_text().startswith("test,layout,lower,upper,count")

    rerendered = tmp_path / "again.tsv"
    assert main(["report", str(js), "-o", str(rerendered)]) == 0
    assert rerendered.read_bytes() == first


def test_campaign_config_errors(tmp_path):
    cfg = write_config(tmp_path / "c.cfg", m=50, alpha=0.01)
    assert main(["campaign", "--config", str(cfg), "-o", str(tmp_path / "r.tsv")]) == 2
    assert main(["campaign", "--config", str(tmp_path / "none.cfg"), "-o", str(tmp_path / "r.tsv")]) == 3


def test_jobs_env(tmp_path, monkeypatch):
    cfg = write_config(tmp_path / "c.cfg")
    monkeypatch.setenv("RAND_STS_JOBS", "many")
    assert main(["campaign", "--config", str(cfg), "-o", str(tmp_path / "r.tsv")]) == 2
    monkeypatch.setenv("RAND_STS_JOBS", "2")
    assert main(["campaign", "--config", str(cfg), "-o", str(tmp_path / "r.tsv")]) == 0


def test_help_lists_tests(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    assert "15  Random Excursions Variant Test" in out
