from pathlib import Path

import pytest
from PIL import Image

from sqpack import __version__
from sqpack.main import run
from sqpack.services.instance_service import gen_adversarial, parse_instance


@pytest.fixture
def adv3_file(write_instance):
    return write_instance(gen_adversarial(3), "adv3.smsbpp")


def test_gen_writes_instance(tmp_path):
    out = tmp_path / "adv.smsbpp"
    assert run(["gen", "--family", "adversarial", "--t", "4", "-o", str(out)]) == 0
    assert parse_instance(out.read_text()) == gen_adversarial(4)


def test_gen_random_is_seeded(tmp_path):
    paths = [tmp_path / "one.smsbpp", tmp_path / "two.smsbpp"]
    for path in paths:
        args = ["gen", "--family", "uniform", "--n", "20", "--lo", "1/10", "--hi", "1/2", "--seed", "3"]
        assert run(args + ["-o", str(path)]) == 0
    assert paths[0].read_text() == paths[1].read_text()


def test_gen_rejects_bad_parameters(tmp_path, capsys):
    assert run(["gen", "--family", "adversarial", "--t", "2", "-o", str(tmp_path / "x")]) == 1
    assert capsys.readouterr().err.startswith("error:")


@pytest.mark.parametrize("algo, extra, expected", [
    ("nfdh", [], "cost 38"),
    ("nfdh", ["--reorder"], "cost 22"),
    ("ffdh", [], "cost 21"),
    ("approx5322", [], "cost 18"),
])
def test_solve_prints_cost(adv3_file, capsys, algo, extra, expected):
    assert run(["solve", adv3_file, "--algo", algo] + extra) == 0
    assert capsys.readouterr().out.strip() == expected


def test_solve_validate_render_round_trip(adv3_file, tmp_path, capsys):
    packing = tmp_path / "adv3.pack"
    assert run(["solve", adv3_file, "--algo", "approx5322", "-o", str(packing)]) == 0
    capsys.readouterr()

    assert run(["validate", str(packing), "--instance", adv3_file]) == 0
    assert capsys.readouterr().out.strip() == "ok"

    svg = tmp_path / "adv3.svg"
    assert run(["render", str(packing), "--instance", adv3_file, "-o", str(svg)]) == 0
    assert 'id="bin-1"' in svg.read_text()

    png = tmp_path / "adv3.png"
    assert run(["render", str(packing), "--instance", adv3_file, "-o", str(png)]) == 0
    with Image.open(png) as image:
        assert image.format == "PNG"


def test_validate_rejects_tampered_packing(adv3_file, tmp_path, capsys):
    packing = tmp_path / "adv3.pack"
    assert run(["solve", adv3_file, "--algo", "nfdh", "-o", str(packing)]) == 0
    lines = packing.read_text().splitlines()
    lines = lines[:-1]
    packing.write_text("\n".join(lines) + "\n")
    capsys.readouterr()

    assert run(["validate", str(packing), "--instance", adv3_file]) == 1
    err = capsys.readouterr().err
    assert "missing" in err


def test_solve_report(adv3_file, tmp_path):
    report = tmp_path / "report.csv"
    assert run(["solve", adv3_file, "--algo", "approx5322", "--report", str(report)]) == 0
    header, row = report.read_text().splitlines()
    assert header.startswith("instance,algo,status,n,cost,lb1,lb2")
    assert row.startswith("adv3.smsbpp,approx5322,ok,12,18,14,15")


def test_relaxed_nfih_cannot_be_written(adv3_file, tmp_path):
    assert run(["solve", adv3_file, "--algo", "nfih", "-o", str(tmp_path / "p")]) == 1


def test_bounds_prints_key_value_lines(adv3_file, capsys):
    assert run(["bounds", adv3_file]) == 0
    lines = dict(line.split(" ", 1) for line in capsys.readouterr().out.splitlines())
    assert lines["lb1"] == "14"
    assert lines["lb2"] == "15"
    assert lines["analysis_case"] == "bounded_n"
    assert lines["refined_lb1_rhs"] == "77/8"


def test_bench_writes_csv(adv3_file, tmp_path):
    out = tmp_path / "bench.csv"
    corpus = str(Path(adv3_file).parent)
    assert run(["bench", "--corpus", corpus, "--algos", "nfdh,ffdh", "-o", str(out), "--threads", "2"]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    assert lines[1].startswith("adv3.smsbpp,nfdh,ok,12,38")


def test_bench_rejects_zero_threads(adv3_file, tmp_path):
    corpus = str(Path(adv3_file).parent)
    assert run(["bench", "--corpus", corpus, "--algos", "nfdh", "-o", str(tmp_path / "b.csv"), "--threads", "0"]) == 1


@pytest.mark.parametrize("argv", [
    ["solve"],
    ["solve", "x.smsbpp", "--algo", "best_fit"],
    ["bench", "--corpus", ".", "--algos", "nfdh,best_fit", "-o", "x.csv"],
    ["gen", "--family", "uniform", "--lo", "abc", "-o", "x"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(argv):
    assert run(argv) == 2


def test_missing_instance_file(tmp_path, capsys):
    assert run(["solve", str(tmp_path / "none.smsbpp"), "--algo", "nfdh"]) == 1
    assert "error:" in capsys.readouterr().err


def test_non_ascii_instance_file(tmp_path, capsys):
    path = tmp_path / "latin.smsbpp"
    path.write_bytes(b"2\n1/2\n\xff\xfe\n")
    assert run(["solve", str(path), "--algo", "nfdh"]) == 1
    assert "line 3" in capsys.readouterr().err


def test_eps_flag_only_checked_for_ptas_solvers(adv3_file, capsys):
    assert run(["solve", adv3_file, "--algo", "nfdh", "--eps", "1/3"]) == 0
    assert capsys.readouterr().out.strip() == "cost 38"
    assert run(["solve", adv3_file, "--algo", "ptas", "--eps", "1/3"]) == 1


def test_version(capsys):
    assert run(["--version"]) == 0
    assert __version__ in capsys.readouterr().out
