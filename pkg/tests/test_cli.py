import json

import numpy as np
import pytest

from framerand.circuit import Circuit, Gate, easy, load_circuit, save_circuit
from framerand.cli import main
from framerand.heatmap import landscape_image, pgm_bytes, read_pgm
from framerand.ising import load_model
from framerand.twirl import normalize


@pytest.fixture
def ring(tmp_path):
    path = tmp_path / "ring.json"
    assert main(["ring", "--nodes", "12", "--flip-edge", "11", "-o", str(path)]) == 0
    return path


def test_ring_model_file(ring):
    m = load_model(ring)
    assert m.n == 12 and m.couplings[(0, 11)] == -1.0 and len(m.couplings) == 12


def test_ring_default_flip(tmp_path):
    path = tmp_path / "r.json"
    assert main(["ring", "--nodes", "5", "-o", str(path)]) == 0
    assert load_model(path).couplings[(0, 4)] == -1.0


def test_ring_too_small(capsys):
    assert main(["ring", "--nodes", "2"]) == 2
    assert "at least 3" in capsys.readouterr().err


def _landscape(ring, out, *extra):
    return main(["landscape", "--model", str(ring), "--grid", "5", "--range", "0,1", "--jobs", "1",
                 "-o", str(out), *extra])


def test_landscape_outputs(ring, tmp_path):
    out = tmp_path / "run"
    assert _landscape(ring, out, "--backend", "exact", "--twirl", "none") == 0
    lines = (out / "landscape.csv").read_text().splitlines()
    assert lines[0] == "gamma,beta,energy,two_sigma,n_compilations,shots,backend"
    assert len(lines) == 26
    report = json.loads((out / "extremal.json").read_text())
    config = json.loads((out / "config.json").read_text())
    assert config["backend"] == "exact" and config["grid"] == 5 and config["seed"] == 0
    pix, comments = read_pgm((out / "landscape.pgm").read_bytes())
    assert pix.shape == (5, 5)
    assert any("energy range" in c for c in comments)
    # brightest pixel sits at the report's extremal (positive here)
    assert report["extremal_abs_energy"] == report["max_energy"]
    gi = int(round(report["gamma"] * 4))
    bi = int(round(report["beta"] * 4))
    assert pix[4 - bi, gi] == 255


def test_landscape_config_reruns_identically(ring, tmp_path):
    out = tmp_path / "a"
    assert _landscape(ring, out, "--backend", "sampled", "--shots", "300", "--seed", "4",
                      "--twirl", "pauli", "--compilations", "2", "--bootstrap", "50") == 0
    cfg = json.loads((out / "config.json").read_text())
    again = tmp_path / "b"
    assert main(["landscape", "--model", cfg["model_path"], "--grid", str(cfg["grid"]),
                 "--range", ",".join(map(str, cfg["range"])), "--backend", cfg["backend"],
                 "--shots", str(cfg["shots"]), "--seed", str(cfg["seed"]), "--twirl", cfg["twirl"],
                 "--compilations", str(cfg["compilations"]), "--bootstrap", str(cfg["bootstrap"]),
                 "--jobs", "2", "-o", str(again)]) == 0
    for name in ("landscape.csv", "extremal.json", "landscape.pgm", "config.json"):
        assert (out / name).read_bytes() == (again / name).read_bytes()


@pytest.mark.parametrize("args", [
    ["--backend", "noisy"],
    ["--backend", "exact", "--noise", "falcon-like"],
    ["--grid", "1"],
    ["--twirl", "pauli", "--compilations", "0"],
    ["--backend", "noisy", "--noise", "/nonexistent.json"],
])
def test_landscape_config_errors(ring, tmp_path, args):
    assert _landscape(ring, tmp_path / "x", *args) == 2


def test_landscape_bad_model(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3, "couplings": [[0, 0, 1.0]]}')
    assert main(["landscape", "--model", str(bad), "-o", str(tmp_path / "o")]) == 2


def test_landscape_runtime_error_exit_3(ring, tmp_path, capsys):
    rc = _landscape(ring, tmp_path / "x", "--backend", "noisy", "--noise", "falcon-like",
                    "--shots", "0", "--trajectories", "0")
    assert rc == 3
    assert "grid point" in capsys.readouterr().err


def test_noisy_landscape_runs(ring, tmp_path):
    out = tmp_path / "n"
    rc = main(["landscape", "--model", str(ring), "--grid", "2", "--range", "0.25,0.5", "--backend", "noisy",
               "--noise", "falcon-like", "--shots", "200", "--trajectories", "10", "--twirl", "pauli",
               "--compilations", "2", "--bootstrap", "100", "--jobs", "1", "-o", str(out)])
    assert rc == 0
    report = json.loads((out / "extremal.json").read_text())
    assert report["two_sigma"] > 0


@pytest.fixture
def circuit(ring, tmp_path):
    path = tmp_path / "c.json"
    assert main(["qaoa", "--model", str(ring), "--gamma", "0.3", "--beta", "0.2", "-o", str(path)]) == 0
    return path


def test_twirl_outputs(circuit, tmp_path):
    out = tmp_path / "tw"
    assert main(["twirl", "--circuit", str(circuit), "--mode", "pauli", "--compilations", "20",
                 "--seed", "1", "-o", str(out)]) == 0
    files = sorted(p.name for p in out.glob("rc_*.json"))
    assert len(files) == 20
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["mode"] == "pauli" and len(manifest["outputs"]) == 20
    for f in files[:3]:
        assert main(["verify", "--circuit", str(circuit), "--against", str(out / f)]) == 0


def test_twirl_none_is_normalized_input(circuit, tmp_path):
    out = tmp_path / "tw"
    assert main(["twirl", "--circuit", str(circuit), "--mode", "none", "-o", str(out)]) == 0
    assert sorted(p.name for p in out.glob("rc_*.json")) == ["rc_0.json"]
    assert load_circuit(out / "rc_0.json") == normalize(load_circuit(circuit))


def test_twirl_zero_compilations(circuit, tmp_path):
    assert main(["twirl", "--circuit", str(circuit), "--compilations", "0", "-o", str(tmp_path / "t")]) == 2


def test_twirl_deterministic(circuit, tmp_path):
    for d in ("a", "b"):
        assert main(["twirl", "--circuit", str(circuit), "--mode", "clifford", "--compilations", "4",
                     "--seed", "7", "-o", str(tmp_path / d)]) == 0
    for f in ("rc_0.json", "rc_3.json", "manifest.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_verify_decomposed_equivalent(ring, circuit, tmp_path):
    d = tmp_path / "d.json"
    assert main(["qaoa", "--model", str(ring), "--gamma", "0.3", "--beta", "0.2", "--decompose", "-o", str(d)]) == 0
    assert main(["verify", "--circuit", str(circuit), "--against", str(d)]) == 0


def test_verify_detects_extra_x(tmp_path, capsys):
    a = Circuit(3, (easy([Gate("H", (0,))]),))
    b = Circuit(3, (easy([Gate("H", (0,)), Gate("X", (1,))]),))
    save_circuit(a, tmp_path / "a.json")
    save_circuit(b, tmp_path / "b.json")
    assert main(["verify", "--circuit", str(tmp_path / "a.json"), "--against", str(tmp_path / "b.json")]) == 1
    deficit = float(capsys.readouterr().out.split()[2].rstrip(":"))
    assert deficit == pytest.approx(1.0, abs=1e-12)


def test_verify_large_circuit_uses_states(ring, tmp_path):
    # 12 qubits exceeds the unitary limit, so random input states are used
    c1 = tmp_path / "c1.json"
    c2 = tmp_path / "c2.json"
    main(["qaoa", "--model", str(ring), "--gamma", "0.3", "--beta", "0.2", "-o", str(c1)])
    main(["qaoa", "--model", str(ring), "--gamma", "0.3", "--beta", "0.25", "-o", str(c2)])
    assert main(["verify", "--circuit", str(c1), "--against", str(c1)]) == 0
    assert main(["verify", "--circuit", str(c1), "--against", str(c2)]) == 1


def test_verify_qubit_mismatch(tmp_path):
    save_circuit(Circuit(2, ()), tmp_path / "a.json")
    save_circuit(Circuit(3, ()), tmp_path / "b.json")
    assert main(["verify", "--circuit", str(tmp_path / "a.json"), "--against", str(tmp_path / "b.json")]) == 2


def test_bad_circuit_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"n_qubits": 1, "cycles": [{"class": "easy", "gates": [{"kind": "H", "qubits": [0], "angle": 1}]}]}')
    assert main(["twirl", "--circuit", str(p), "-o", str(tmp_path / "o")]) == 2
    assert "cycles[0].gates[0].angle" in capsys.readouterr().err


def _rows(values):
    return [{"gamma": g, "beta": b, "energy": values(g, b)} for g in (0.0, 0.5, 1.0) for b in (0.0, 0.5, 1.0)]


def test_heatmap_constant_is_mid_gray():
    img, lo, hi = landscape_image(_rows(lambda g, b: 2.5))
    assert (img == 128).all() and lo == hi == 2.5


def test_heatmap_orientation():
    img, lo, hi = landscape_image(_rows(lambda g, b: g + 10 * b))
    # bottom-left is (gamma=0, beta=0): minimum; top-right is the maximum
    assert img[-1, 0] == 0 and img[0, -1] == 255
    assert img[-1, 2] > img[-1, 0]  # gamma grows to the right
    assert img[0, 0] > img[-1, 0]  # beta grows upward


def test_heatmap_incomplete_grid():
    with pytest.raises(ValueError):
        landscape_image(_rows(lambda g, b: 1.0)[:-1])


def test_heatmap_cli_round_trip(ring, tmp_path):
    out = tmp_path / "run"
    assert _landscape(ring, out) == 0
    pgm = tmp_path / "h.pgm"
    assert main(["heatmap", "--landscape", str(out / "landscape.csv"), "-o", str(pgm)]) == 0
    assert pgm.read_bytes() == (out / "landscape.pgm").read_bytes()
    pix, comments = read_pgm(pgm.read_bytes())
    data = pgm_bytes(pix, *map(float, comments[0].split()[2:4]))
    assert data == pgm.read_bytes()


def test_missing_landscape_file(tmp_path):
    assert main(["heatmap", "--landscape", str(tmp_path / "none.csv"), "-o", str(tmp_path / "h.pgm")]) == 2
