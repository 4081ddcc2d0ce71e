import json

from pairorbit.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


PAIR_I_DIAG12 = json.dumps({
    "A": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
    "B": [[[1, 0], [0, 0]], [[0, 0], [2, 0]]]})


def test_dim_subcommand(capsys):
    code, out, _ = run(capsys, "dim", "--pair", PAIR_I_DIAG12)
    assert code == 0 and out.strip() == "9"


def test_classify_subcommand(capsys):
    code, out, _ = run(capsys, "classify", "--pair", PAIR_I_DIAG12)
    assert code == 0
    obj = json.loads(out)
    assert obj["class"]["a_family"] == "definite"
    assert obj["class"]["b_form"] == "a_lt_d"
    assert obj["residual"] < 1e-8


def test_path_subcommand(capsys):
    src = json.dumps({"a_family": "zero", "b_form": "zero"})
    dst = json.dumps({"a_family": "definite", "b_form": "a_lt_d",
                      "params": {"a": 1, "d": 2}})
    code, out, _ = run(capsys, "path", "--src", src, "--dst", dst)
    assert code == 0
    assert json.loads(out)["path"] == "true"


def test_maxf_subcommand(capsys):
    code, out, _ = run(capsys, "maxf", "--a", "0", "--b", "0", "--d", "2",
                       "--theta", "1.5707963")
    assert code == 0 and out.strip() == "2.000000"


def test_graph_deterministic(capsys):
    code1, out1, _ = run(capsys, "graph", "pair", "--format", "json")
    code2, out2, _ = run(capsys, "graph", "pair", "--format", "json")
    assert code1 == code2 == 0 and out1 == out2


def test_bounds_subcommand(capsys):
    src = json.dumps({"A": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
                      "B": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]})
    dst = json.dumps({"A": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
                      "B": [[[2, 0], [0, 0]], [[0, 0], [1, 0]]]})
    code, out, _ = run(capsys, "bounds", "--src", src, "--dst", dst, "--raw")
    assert code == 0
    obj = json.loads(out)
    assert abs(obj["p"] - 1.0) < 1e-12
    assert obj["certificate"]["rule"] == "DetRatioRule"


def test_jet_subcommand(capsys):
    jet = json.dumps({"A": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
                      "B": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
                      "C": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]})
    code, out, _ = run(capsys, "jet", "--jet", jet)
    assert code == 0
    assert json.loads(out)["quadratically_flat"] is True


def test_perturb_subcommand(capsys):
    cls = json.dumps({"a_family": "zero", "b_form": "zero"})
    code, out, _ = run(capsys, "perturb", "--class", cls, "--eps", "1e-3",
                       "--samples", "10")
    assert code == 0
    obj = json.loads(out)
    assert obj["samples"] == 10 and obj["violations"] == []


def test_malformed_json_exit_2(capsys):
    try:
        code = main(["dim", "--pair", "{not json"])
    except SystemExit as e:
        code = e.code
    assert code == 2
    err = capsys.readouterr().err
    assert "error" in err


def test_undecided_exit_3(capsys):
    # tau within tolerance of 1: ambiguous classification
    pair = json.dumps({"A": [[[0, 0], [1, 0]], [[0.999999999999, 0], [0, 0]]],
                       "B": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]})
    code, out, err = run(capsys, "classify", "--pair", pair)
    assert code == 3 and "undecided" in err
