"""Time the statevector kernels under each available backend.

    python benchmarks/bench_kernels.py [--qubits 12] [--repeat 200]
"""
import argparse
import time

import numpy as np

from framerand import kernels
from framerand.ising import energy_table, frustrated_ring
from framerand.noise import load_noise
from framerand.qaoa import QaoaParams, build_qaoa_circuit
from framerand.statevector import simulate, trajectory_average
from framerand.unitary import rx


def _best(fn, repeat):
    times = []
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(repeat):
            fn()
        times.append((time.perf_counter() - t0) / repeat)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--qubits", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=200)
    args = ap.parse_args()
    n = args.qubits
    rng = np.random.default_rng(0)
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    psi /= np.linalg.norm(psi)
    mat = np.ascontiguousarray(rx(0.3))
    model = frustrated_ring(n)
    table = energy_table(model)
    circuit = build_qaoa_circuit(model, QaoaParams.single(0.375, 0.375))
    noise = load_noise("falcon-like")

    cases = {
        "apply_1q": lambda s: kernels.apply_1q(s, mat, n // 2),
        "apply_cnot": lambda s: kernels.apply_cnot(s, 1, n - 2),
        "apply_rzz": lambda s: kernels.apply_rzz(s, 0, n - 1, 0.7),
        "apply_pauli(Y)": lambda s: kernels.apply_pauli(s, "Y", 3),
        "probabilities": lambda s: kernels.probabilities(s),
    }
    results = {}
    for name in kernels.available():
        kernels.use_backend(name)
        row = {}
        for case, fn in cases.items():
            s = psi.copy()
            row[case] = _best(lambda: fn(s), args.repeat)
        row["qaoa circuit"] = _best(lambda: simulate(circuit), max(1, args.repeat // 10))
        row["200 trajectories"] = _best(lambda: trajectory_average(circuit, noise, table, 200, 1), 1)
        results[name] = row

    names = list(results)
    print(f"{n} qubits, seconds per call (best of 5)")
    print(f"{'case':<20}" + "".join(f"{b:>14}" for b in names) + ("     speedup" if len(names) > 1 else ""))
    for case in results[names[0]]:
        line = f"{case:<20}" + "".join(f"{results[b][case]:>14.3e}" for b in names)
        if "cython" in results and "python" in results:
            line += f"{results['python'][case] / results['cython'][case]:>12.1f}x"
        print(line)


if __name__ == "__main__":
    main()
