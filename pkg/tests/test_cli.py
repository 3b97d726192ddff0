import json

import pytest

from qktree.cli import generate_graph, main
from qktree.core import is_connected, parse_edge_list


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_graph(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


@pytest.fixture
def gnp_file(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "--model", "gnp", "--n", "18",
                       "--seed", "3", "--prob", "0.2")
    assert code == 0
    return write_graph(tmp_path, "g.txt", out)


def test_generators_are_deterministic_and_well_formed(capsys):
    for model in ("gnp", "grid", "barbell", "path", "tree"):
        code1, out1, _ = run(capsys, "gen", "--model", model, "--n", "16", "--seed", "5")
        code2, out2, _ = run(capsys, "gen", "--model", model, "--n", "16", "--seed", "5")
        assert code1 == code2 == 0
        assert out1 == out2
        g = parse_edge_list(out1)
        assert g.n == 16
        if model != "gnp":
            assert is_connected(g)


def test_generate_graph_models():
    assert generate_graph("path", 5, 0).m == 4
    assert generate_graph("tree", 9, 4).m == 8
    barbell = generate_graph("barbell", 10, 0)
    assert barbell.m == 2 * 10 + 1  # two K5s plus the bridge
    with pytest.raises(ValueError):
        generate_graph("torus", 5, 0)


def test_decompose_determinism_and_verify(gnp_file, capsys):
    args = ("decompose", gnp_file, "--k", "1", "--seed", "7", "--verify")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["seed"] == 7 and payload["variant"] == "STANDARD"
    assert payload["nodes"][0]["parent"] is None


def test_decompose_depth_reduced_variant(gnp_file, capsys):
    code, out, _ = run(capsys, "decompose", gnp_file, "--k", "1",
                       "--variant", "depth-reduced", "--seed", "2", "--verify")
    assert code == 0
    assert json.loads(out)["variant"] == "DEPTH_REDUCED"


def test_decompose_missing_file_exits_one(capsys):
    code, _, err = run(capsys, "decompose", "/nonexistent/g.txt", "--k", "1")
    assert code == 1 and "error" in err


def test_decompose_malformed_input_exits_one(tmp_path, capsys):
    path = write_graph(tmp_path, "bad.txt", "not a graph\n")
    code, _, err = run(capsys, "decompose", path, "--k", "1")
    assert code == 1 and "error" in err


def test_verify_verb_accepts_and_rejects(gnp_file, tmp_path, capsys):
    code, deco_json, _ = run(capsys, "decompose", gnp_file, "--k", "1", "--seed", "1")
    assert code == 0
    good = write_graph(tmp_path, "deco.json", deco_json)
    code, out, _ = run(capsys, "verify", gnp_file, good, "--k", "1")
    assert code == 0 and out.strip() == "OK"

    payload = json.loads(deco_json)
    victim = payload["nodes"][0]["bag"]
    if victim:
        payload["nodes"][0]["bag"] = victim[:-1]
    bad = write_graph(tmp_path, "bad.json", json.dumps(payload))
    code, out, _ = run(capsys, "verify", gnp_file, bad, "--k", "1")
    assert code == 2 and "FAIL" in out


def test_pwaycut_with_oracle(gnp_file, capsys):
    args = ("pwaycut", gnp_file, "--p", "2", "--k", "3", "--seed", "4", "--oracle")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert set(payload) == {"p", "k", "feasible", "cost", "seed"}


def test_ssmc_determinism_and_preconditions(tmp_path, capsys):
    code, out, _ = run(capsys, "gen", "--model", "grid", "--n", "16", "--seed", "0")
    assert code == 0
    path = write_graph(tmp_path, "grid.txt", out)
    args = ("ssmc", path, "--source", "0", "--sinks", "5,10,15", "--k", "2",
            "--seed", "9")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["width"] == len(payload["collections"])

    code, _, err = run(capsys, "ssmc", path, "--source", "0", "--sinks", "1",
                       "--k", "2")
    assert code == 1 and "PRECONDITION" in err


def test_bench_schema_and_structural_determinism(capsys):
    args = ("bench", "--model", "path", "--sizes", "12,18,24", "--k", "1",
            "--seed", "5")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    lines = out1.strip().splitlines()
    assert lines[0] == "size,stage,millis"
    assert len(lines) == 1 + 3 * 4  # four stages per size
    stages = [ln.split(",")[1] for ln in lines[1:5]]
    assert stages == ["origin", "adhesion", "decomp", "dp"]
    # wall times vary between runs; everything else must not
    strip = lambda text: [ln.rsplit(",", 1)[0] for ln in text.splitlines()]
    assert strip(out1) == strip(out2)


def test_threads_flag_validation(gnp_file, capsys):
    code, _, err = run(capsys, "--threads", "0", "gen", "--model", "path",
                       "--n", "4")
    assert code == 1 and "threads" in err
    code, _, _ = run(capsys, "--threads", "1", "gen", "--model", "path", "--n", "4")
    assert code == 0
