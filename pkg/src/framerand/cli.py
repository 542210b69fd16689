"""Command-line entry point: ``framerand <subcommand> ...``.

Exit codes: 0 success, 1 verification failed, 2 configuration error,
3 runtime error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import kernels
from .circuit import load_circuit, save_circuit
from .heatmap import landscape_image, pgm_bytes
from .ising import frustrated_ring, load_model
from .landscape import (
    BACKENDS,
    GridSpec,
    LandscapeError,
    bayesian_bootstrap,
    landscape_csv,
    read_landscape_csv,
    report_json,
    run_landscape,
)
from .noise import PRESETS, load_noise
from .qaoa import QaoaParams, build_qaoa_circuit, decompose_rzz
from .statevector import StateVector, simulate
from .twirl import MODES, TwirlConfig, randomize_with_assignments
from .unitary import MAX_UNITARY_QUBITS, circuit_unitary, process_fidelity

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2, 3
VERIFY_TOL = 1e-8
MAX_VERIFY_QUBITS = 12


class ConfigError(ValueError):
    pass


def _write(path: Path, data: str | bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, bytes):
        path.write_bytes(data)
    else:
        path.write_text(data)


def _dump(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def _machine_parallelism() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a,b', got {text!r}")
    return lo, hi


# --- subcommands ----------------------------------------------------------------

def cmd_ring(args) -> int:
    model = frustrated_ring(args.nodes, args.flip_edge)
    text = model.to_json()
    if args.output:
        _write(Path(args.output), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_qaoa(args) -> int:
    model = load_model(args.model)
    circuit = build_qaoa_circuit(model, QaoaParams.single(args.gamma, args.beta))
    if args.decompose:
        circuit = decompose_rzz(circuit)
    if args.output:
        save_circuit(circuit, args.output)
    else:
        sys.stdout.write(circuit.to_json() + "\n")
    return EXIT_OK


def cmd_landscape(args) -> int:
    if args.backend == "noisy" and not args.noise:
        raise ConfigError("--backend noisy requires --noise")
    if args.backend != "noisy" and args.noise:
        raise ConfigError("--noise only applies to --backend noisy")
    if args.backend == "sampled" and args.shots < 1:
        raise ConfigError("--backend sampled requires --shots >= 1")
    if args.grid < 2:
        raise ConfigError("--grid must be at least 2")
    if args.jobs is not None and args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    model = load_model(args.model)
    grid = GridSpec(args.grid, args.grid, args.range, args.range)
    twirl = TwirlConfig(args.twirl, args.compilations, args.seed)
    noise = load_noise(args.noise) if args.noise else None
    jobs = args.jobs or _machine_parallelism()
    config = {
        "command": "landscape",
        "model": model.to_dict(),
        "model_path": str(args.model),
        "grid": args.grid,
        "range": list(args.range),
        "backend": args.backend,
        "shots": args.shots,
        "noise": args.noise,
        "noise_model": noise.to_dict() if noise else None,
        "twirl": args.twirl,
        "compilations": twirl.n_compilations,
        "trajectories": args.trajectories,
        "decompose": args.decompose,
        "seed": args.seed,
        "bootstrap": args.bootstrap,
    }
    try:
        result = run_landscape(model, grid, args.backend, args.shots, twirl, noise, args.seed,
                               args.trajectories, args.decompose, jobs)
        report = bayesian_bootstrap(result, args.bootstrap, args.seed)
    except LandscapeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    out = Path(args.output)
    csv_text = landscape_csv(result)
    _write(out / "landscape.csv", csv_text)
    _write(out / "extremal.json", report_json(report))
    _write(out / "config.json", _dump(config))
    img, lo, hi = landscape_image(read_landscape_csv(out / "landscape.csv"))
    _write(out / "landscape.pgm", pgm_bytes(img, lo, hi))
    print(f"extremal |E| = {report.extremal_abs_energy:.6f} at gamma={report.gamma}, "
          f"beta={report.beta} (2 sigma {report.two_sigma:.3g})")
    return EXIT_OK


def cmd_twirl(args) -> int:
    if args.compilations < 1:
        raise ConfigError("--compilations must be at least 1")
    circuit = load_circuit(args.circuit)
    cfg = TwirlConfig(args.mode, args.compilations, args.seed)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    entries = []
    for circ, frame in randomize_with_assignments(circuit, cfg):
        name = f"rc_{frame.compilation}.json"
        save_circuit(circ, out / name)
        entries.append({"file": name, "compilation": frame.compilation, "seed": list(frame.seed)})
    manifest = {
        "command": "twirl",
        "circuit": str(args.circuit),
        "mode": cfg.mode,
        "compilations": cfg.n_compilations,
        "seed": cfg.seed,
        "outputs": entries,
    }
    _write(out / "manifest.json", _dump(manifest))
    return EXIT_OK


def verify_deficit(a, b, n_states: int = 4, seed: int = 0) -> float:
    """1 - fidelity between two circuits (global phase ignored)."""
    if a.n_qubits != b.n_qubits:
        raise ConfigError(f"qubit counts differ: {a.n_qubits} vs {b.n_qubits}")
    a, b = a.without_measurement(), b.without_measurement()
    n = a.n_qubits
    if n <= MAX_UNITARY_QUBITS:
        return 1.0 - process_fidelity(circuit_unitary(a), circuit_unitary(b))
    if n > MAX_VERIFY_QUBITS:
        raise ConfigError(f"verification supports at most {MAX_VERIFY_QUBITS} qubits")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_states):
        v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        psi = StateVector(n, v / np.linalg.norm(v))
        worst = max(worst, 1.0 - simulate(a, psi).fidelity(simulate(b, psi)))
    return worst


def cmd_verify(args) -> int:
    deficit = verify_deficit(load_circuit(args.circuit), load_circuit(args.against), seed=args.seed)
    ok = deficit <= VERIFY_TOL
    print(f"fidelity deficit {deficit:.3e}: {'equivalent' if ok else 'NOT equivalent'}")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_heatmap(args) -> int:
    img, lo, hi = landscape_image(read_landscape_csv(args.landscape))
    _write(Path(args.output), pgm_bytes(img, lo, hi))
    return EXIT_OK


# --- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="framerand", description=__doc__.splitlines()[0])
    p.add_argument("--kernels", choices=kernels.available(), help="statevector kernel backend")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("ring", help="write a frustrated Ising ring model")
    r.add_argument("--nodes", type=int, default=12)
    r.add_argument("--flip-edge", type=int, default=None,
                   help="index k of the antiferromagnetic edge (k, k+1 mod n); default n-1")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_ring)

    q = sub.add_parser("qaoa", help="build the p=1 QAOA circuit for a model")
    q.add_argument("--model", required=True)
    q.add_argument("--gamma", type=float, required=True)
    q.add_argument("--beta", type=float, required=True)
    q.add_argument("--decompose", action="store_true", help="RZZ as CNOT-RZ-CNOT")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_qaoa)

    ls = sub.add_parser("landscape", help="sweep the (gamma, beta) grid")
    ls.add_argument("--model", required=True)
    ls.add_argument("--grid", type=int, default=17)
    ls.add_argument("--range", type=_range, default=(0.0, 1.0))
    ls.add_argument("--shots", type=int, default=5000)
    ls.add_argument("--backend", choices=BACKENDS, default="exact")
    ls.add_argument("--noise", help=f"preset ({', '.join(PRESETS)}) or noise JSON path")
    ls.add_argument("--twirl", choices=MODES, default="none")
    ls.add_argument("--compilations", type=int, default=20)
    ls.add_argument("--trajectories", type=int, default=200)
    ls.add_argument("--decompose", action="store_true")
    ls.add_argument("--bootstrap", type=int, default=1000)
    ls.add_argument("--seed", type=int, default=0)
    ls.add_argument("--jobs", type=int, default=None)
    ls.add_argument("-o", "--output", required=True)
    ls.set_defaults(func=cmd_landscape)

    t = sub.add_parser("twirl", help="write randomized compilations of a circuit")
    t.add_argument("--circuit", required=True)
    t.add_argument("--mode", choices=MODES, default="pauli")
    t.add_argument("--compilations", type=int, default=20)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("-o", "--output", required=True)
    t.set_defaults(func=cmd_twirl)

    v = sub.add_parser("verify", help="check two circuits implement the same unitary")
    v.add_argument("--circuit", required=True)
    v.add_argument("--against", required=True)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    h = sub.add_parser("heatmap", help="render a landscape CSV as a PGM image")
    h.add_argument("--landscape", required=True)
    h.add_argument("-o", "--output", required=True)
    h.set_defaults(func=cmd_heatmap)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.kernels:
        kernels.use_backend(args.kernels)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # anything else is a runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
