import numpy as np
import pytest

from impurity_clustering import io
from impurity_clustering.cli import Config, main
from impurity_clustering.graphs import complete_graph, exact_min_vertex_cover


@pytest.fixture
def files(tmp_path):
    (tmp_path / "pure.txt").write_text("3 3\n1 0 0\n1 0 0\n0 1 0\n")
    (tmp_path / "ch.txt").write_text("2 3\n0.5 0.5\n0.7 0.2 0.1\n0.1 0.3 0.6\n")
    (tmp_path / "k5.txt").write_text(io.format_graph(complete_graph(5)))
    return tmp_path


def test_config_defaults():
    cfg = Config.from_argv(["solve", "x.txt", "--k", "2"])
    assert cfg.inputs == ("x.txt",) and cfg.seed == 0 and cfg.tol == 1e-9 and cfg.method == "exact"


@pytest.mark.parametrize("argv", [
    ["solve", "x", "--k", "0"],
    ["solve", "x", "--k", "2", "--tol", "-1"],
    ["solve", "x", "--k", "2", "--restarts", "0"],
    ["gen-hard", "--n", "6", "--k", "2", "--epsilon", "0", "--out", "d"],
    ["frobnicate"],
])
def test_invalid_flags_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_solve_pure_instance(files, capsys):
    assert main(["solve", str(files / "pure.txt"), "--k", "2"]) == 0
    assert capsys.readouterr().out == "objective 0\nk 2\n0 0 1\n"


def test_solve_is_deterministic(files, capsys):
    argv = ["solve", str(files / "pure.txt"), "--k", "2", "--method", "multistart", "--seed", "4"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_impurity_round_trips_solve_output(files, capsys):
    out = files / "res.txt"
    main(["solve", str(files / "pure.txt"), "--k", "1", "--out", str(out)])
    assert main(["impurity", str(files / "pure.txt"), str(out)]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(io.parse_solve_result(out.read_text())[0])


def test_quantize_full_resolution_has_no_loss(files, capsys):
    assert main(["quantize", str(files / "ch.txt"), "--k", "3"]) == 0
    labels, stats = capsys.readouterr().out.splitlines()
    assert sorted(map(int, labels.split())) == [0, 1, 2]
    assert stats.endswith("delta=0")


def test_reduce_stages(files, capsys):
    for stage, header in (("r1", "15 20"), ("r2", "25 30"), ("r3", "25 30")):
        assert main(["reduce", str(files / "k5.txt"), "--stage", stage]) == 0
        assert capsys.readouterr().out.splitlines()[0] == header


def test_reduce_rejects_non_regular(tmp_path, capsys):
    (tmp_path / "p.txt").write_text("3 2\n0 1\n1 2\n")
    assert main(["reduce", str(tmp_path / "p.txt"), "--stage", "r1"]) == 2


def test_gen_hard_and_decompose(tmp_path, capsys):
    d = tmp_path / "bundle"
    assert main(["gen-hard", "--n", "6", "--k", "16", "--epsilon", "0.2", "--seed", "1", "--out", str(d)]) == 0
    g = io.read_graph(d / "graph_g.txt")
    (tmp_path / "cover.txt").write_text(io.format_labels(sorted(exact_min_vertex_cover(g))))
    assert main(["decompose", str(d), str(tmp_path / "cover.txt")]) == 0
    lines = capsys.readouterr().out.splitlines()
    k = int(lines[1].split()[1])
    assert float(lines[0].split()[1]) == pytest.approx(6 * k + 3 * (36 - 2 * k) * np.log2(3), abs=1e-8)


def test_parse_error_exit_2(tmp_path, capsys):
    (tmp_path / "bad.txt").write_text("3 3\n1 0\n")
    assert main(["solve", str(tmp_path / "bad.txt"), "--k", "2"]) == 2
    assert "bad.txt:2:" in capsys.readouterr().err


def test_budget_exit_3(files):
    assert main(["solve", str(files / "pure.txt"), "--k", "2", "--budget", "1"]) == 3


def test_verify_stars(capsys, tmp_path):
    assert main(["verify", "--suite", "stars", "--p-max", "5", "--out", str(tmp_path)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 4 and all(" PASS slack=" in line for line in lines)


def test_verify_failure_writes_counterexample(monkeypatch, tmp_path, capsys):
    from impurity_clustering import cli, verify

    def fake_suite(suite, p_max, seed):
        yield verify.VerificationReport("broken", "p=1", -1.0, counterexample={"edges": ((0, 1),)})

    monkeypatch.setattr(cli, "run_suite", fake_suite)
    assert main(["verify", "--out", str(tmp_path)]) == 1
    out = capsys.readouterr().out
    assert out.startswith("broken FAIL ") and (tmp_path / "broken.counterexample.txt").exists()
