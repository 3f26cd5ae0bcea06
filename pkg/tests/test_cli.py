import csv
import io
import json

import numpy as np
import pytest

from supracent import (build_layer_set, read_edge_list, solve, strong_limit, undirected_chain,
                       weak_limit)
from supracent.cli import main
from supracent.output import OUTPUTS, emit, format_float
from supracent.supracentrality import extract

# four nodes, six layers: a small toy temporal network
TOY = """layer,src,dst,weight
1,a,b,1
1,b,c,1
1,c,a,1
2,a,b,1
2,b,a,1
2,c,d,1
3,d,a,1
3,a,c,1
3,b,d,1
4,c,b,1
4,d,c,1
5,a,d,1
5,d,b,1
5,b,a,1
6,c,a,1
6,a,b,1
6,b,c,1
6,d,a,1
"""


@pytest.fixture
def toy(tmp_path):
    p = tmp_path / "toy.csv"
    p.write_text(TOY)
    return p


def _read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_emit_joint_rows():
    r = extract(np.array([0.1, 0.2, 0.3, 0.4]), 1.0, 2, 2)
    rows = list(csv.reader(io.StringIO(emit(r, "joint", "csv", ["a", "b"], [1, 2]).decode())))
    assert rows[0] == ["node", "layer", "value"]
    assert len(rows) == 5
    assert rows[1:] == [["a", "1", "0.10000000000000001"], ["a", "2", "0.29999999999999999"],
                        ["b", "1", "0.20000000000000001"], ["b", "2", "0.40000000000000002"]]


def test_emit_json_round_trip(rng):
    v = rng.random(12) + 0.1
    r = extract(v / v.sum(), 1.25, 3, 4, iterations=7, residual=1e-13)
    labels, keys = ["x", "y", "z"], [1990, 1991, 1992, 1993]
    for output in ("joint", "cond_node", "cond_layer"):
        data = json.loads(emit(r, output, "json", labels, keys))
        assert data["nodes"] == labels and data["layers"] == keys
        np.testing.assert_array_equal(np.array(data[output]), getattr(r, output))
    assert json.loads(emit(r, "mlc", "json", labels, keys))["mlc"] == r.mlc.tolist()
    assert json.loads(emit(r, "mnc", "json", labels, keys))["mnc"] == r.mnc.tolist()
    eig = json.loads(emit(r, "eigenvalue", "json", labels, keys))
    assert eig == {"lambda_max": 1.25, "iterations": 7, "residual": 1e-13}


def test_emit_csv_round_trips_floats(rng):
    v = rng.random(6)
    r = extract(v / v.sum(), 1.0, 2, 3)
    rows = list(csv.reader(io.StringIO(emit(r, "mlc", "csv", ["a", "b"], [1, 2, 3]).decode())))
    assert len(rows) == 4
    values = np.array([float(x) for _, x in rows[1:]])
    np.testing.assert_array_equal(values, r.mlc)
    assert abs(values.sum() - 1) <= 1e-12


def test_emit_node_filter_and_errors(rng):
    r = extract(np.full(6, 1 / 6), 1.0, 3, 2)
    rows = list(csv.reader(io.StringIO(
        emit(r, "mnc", "csv", ["a", "b", "c"], [1, 2], nodes=["c", "a"]).decode())))
    assert [row[0] for row in rows[1:]] == ["c", "a"]
    with pytest.raises(ValueError):
        emit(r, "mnc", "csv", ["a", "b", "c"], [1, 2], nodes=["q"])
    with pytest.raises(ValueError):
        emit(r, "bogus", "csv", ["a", "b", "c"], [1, 2])


def test_emit_limits(toy):
    net = read_edge_list(toy)
    ls = build_layer_set(net)
    wl = weak_limit(ls, undirected_chain(6))
    sl = strong_limit(ls, undirected_chain(6))
    eig = json.loads(emit(sl, "eigenvalue", "json", net.labels, net.layer_keys))
    assert eig["coupling_eigenvalue"] == sl.coupling_eigenvalue
    data = json.loads(emit(wl, "joint", "json", net.labels, net.layer_keys))
    np.testing.assert_array_equal(np.array(data["joint"]).T.reshape(-1), wl.limit_vector)


def test_format_float():
    assert format_float(0.1) == "0.10000000000000001"
    assert float(format_float(1 / 3)) == 1 / 3
    assert format_float(float("nan")) == "nan"


def test_run_matches_library(toy, tmp_path):
    out = tmp_path / "out"
    assert main([str(toy), "--omega", "1", "--out", str(out)]) == 0
    net = read_edge_list(toy)
    ref = solve(build_layer_set(net), undirected_chain(6), 1.0)
    rows = _read_csv(out / "joint_omega=1.csv")
    assert len(rows) == 1 + 4 * 6
    W = np.array([float(r[2]) for r in rows[1:]]).reshape(4, 6)
    np.testing.assert_array_equal(W, ref.joint)
    mlc = np.array([float(r[1]) for r in _read_csv(out / "mlc_omega=1.csv")[1:]])
    mnc = np.array([float(r[1]) for r in _read_csv(out / "mnc_omega=1.csv")[1:]])
    np.testing.assert_array_equal(mlc, ref.mlc)
    np.testing.assert_array_equal(mnc, ref.mnc)
    manifest = json.loads((out / "manifest.json").read_text())
    run = manifest["runs"][0]
    assert run["lambda_max"] == ref.eigenvalue
    assert run["residual"] <= 1e-12
    assert manifest["config"]["sigma"] == 0.85
    assert manifest["network"]["layer_keys"] == [1, 2, 3, 4, 5, 6]
    assert "wall_time_s" in manifest
    for output in OUTPUTS:
        assert (out / f"{output}_omega=1.csv").exists()


def test_run_is_byte_reproducible(toy, tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    args = [str(toy), "--omega", "1,10,100"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    for path in sorted(a.glob("*.csv")):
        assert path.read_bytes() == (b / path.name).read_bytes()


def test_asymptotic_strong_dispatch(toy, tmp_path):
    out = tmp_path / "out"
    assert main([str(toy), "--asymptotic", "strong", "--out", str(out), "--format", "json"]) == 0
    files = sorted(p.name for p in out.iterdir())
    assert "joint_strong.json" in files and not any("omega" in f for f in files)
    sl = strong_limit(build_layer_set(read_edge_list(toy)), undirected_chain(6))
    joint = np.array(json.loads((out / "joint_strong.json").read_text())["joint"])
    np.testing.assert_array_equal(joint, sl.joint / sl.joint.sum())
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["runs"][0]["asymptotic"] == "strong"


def test_asymptotic_weak_dispatch(toy, tmp_path):
    out = tmp_path / "out"
    assert main([str(toy), "--asymptotic", "weak", "--out", str(out),
                 "--outputs", "mlc,eigenvalue"]) == 0
    assert sorted(p.name for p in out.iterdir()) == ["eigenvalue_weak.csv", "manifest.json",
                                                     "mlc_weak.csv"]


def test_directed_and_custom_couplings(toy, tmp_path):
    for spec in ("directed-chain", "reversed-directed-chain"):
        assert main([str(toy), "--coupling", spec, "--gamma", "0.001", "--omega", "10",
                     "--out", str(tmp_path / spec)]) == 0
    cpath = tmp_path / "c.json"
    cpath.write_text(json.dumps(np.ones((6, 6)).tolist()))
    assert main([str(toy), "--coupling", f"custom:{cpath}", "--out", str(tmp_path / "c")]) == 0


def test_node_filter(toy, tmp_path):
    out = tmp_path / "out"
    assert main([str(toy), "--nodes", "b,d", "--outputs", "cond_node", "--out", str(out)]) == 0
    rows = _read_csv(out / "cond_node_omega=100.csv")
    assert {r[0] for r in rows[1:]} == {"b", "d"}
    assert main([str(toy), "--nodes", "zz", "--out", str(out)]) == 3


def test_other_centralities(toy, tmp_path):
    for kind in ("eigenvector", "hub", "authority"):
        code = main([str(toy), "--centrality", kind, "--omega", "1", "--out", str(tmp_path / kind)])
        assert code in (0, 1)
    assert main([str(toy), "--centrality", "eigenvector", "--omega", "1",
                 "--out", str(tmp_path / "ev")]) == 0


def test_exit_precondition(toy, tmp_path, capsys):
    assert main([str(toy), "--omega", "0", "--out", str(tmp_path / "o")]) == 1
    assert "precondition" in capsys.readouterr().err
    cpath = tmp_path / "c.csv"
    cpath.write_text("\n".join(",".join("1" if i == j else "0" for j in range(6)) for i in range(6)))
    assert main([str(toy), "--coupling", f"custom:{cpath}", "--out", str(tmp_path / "o")]) == 1


def test_exit_dangling_error_policy(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("layer,src,dst\n1,a,b\n2,b,a\n")
    assert main([str(p), "--dangling", "error", "--out", str(tmp_path / "o")]) == 3
    assert main([str(p), "--dangling", "self-loop", "--out", str(tmp_path / "o")]) == 0


def test_exit_non_convergence(toy, tmp_path):
    assert main([str(toy), "--method", "power", "--max-iter", "3", "--omega", "0.01",
                 "--out", str(tmp_path / "o")]) == 2


def test_exit_input_errors(tmp_path, toy):
    assert main([str(tmp_path / "missing.csv"), "--out", str(tmp_path / "o")]) == 3
    bad = tmp_path / "bad.csv"
    bad.write_text("layer,src,dst,weight\n1,a,b,oops\n")
    assert main([str(bad), "--out", str(tmp_path / "o")]) == 3
    assert main([str(toy), "--sigma", "1.5", "--out", str(tmp_path / "o")]) == 3
    assert main([str(toy), "--omega", "-1", "--out", str(tmp_path / "o")]) == 3
    with pytest.raises(SystemExit) as exc:
        main([str(toy), "--coupling-typo", "x"])
    assert exc.value.code == 3
