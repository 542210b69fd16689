"""(gamma, beta) landscape sweeps, extremal extraction and Bayesian bootstrap."""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels
from .ising import IsingModel, energy_table
from .noise import NoiseModel
from .qaoa import QaoaParams, build_qaoa_circuit, decompose_rzz
from .statevector import ShotCounts, sample_probabilities, simulate, trajectory_average
from .twirl import TwirlConfig, randomize

BACKENDS = ("exact", "sampled", "noisy")
CSV_HEADER = ("gamma", "beta", "energy", "two_sigma", "n_compilations", "shots", "backend")


class LandscapeError(RuntimeError):
    pass


@dataclass(frozen=True)
class GridSpec:
    n_gamma: int = 17
    n_beta: int = 17
    gamma_range: tuple[float, float] = (0.0, 1.0)
    beta_range: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        if self.n_gamma < 2 or self.n_beta < 2:
            raise ValueError("grid needs at least 2 values per axis")
        for name, (lo, hi) in (("gamma", self.gamma_range), ("beta", self.beta_range)):
            if not hi > lo:
                raise ValueError(f"{name} range [{lo}, {hi}] is degenerate")

    @property
    def gammas(self) -> np.ndarray:
        return np.linspace(*self.gamma_range, self.n_gamma)

    @property
    def betas(self) -> np.ndarray:
        return np.linspace(*self.beta_range, self.n_beta)

    def points(self) -> list[tuple[float, float]]:
        """gamma-major order, endpoints included."""
        return [(float(g), float(b)) for g in self.gammas for b in self.betas]


@dataclass
class LandscapePoint:
    gamma: float
    beta: float
    energy: float
    per_compilation_energies: list[float]
    counts: list[ShotCounts] | None = None
    stderr: float = 0.0
    two_sigma: float = 0.0

    def pooled_counts(self) -> dict[str, int]:
        pooled: dict[str, int] = {}
        for c in self.counts or ():
            for k, v in c.counts.items():
                pooled[k] = pooled.get(k, 0) + v
        return pooled


@dataclass
class LandscapeGrid:
    points: list[LandscapePoint]
    model: IsingModel
    backend: str = "exact"
    shots: int = 0
    n_compilations: int = 1
    meta: dict = field(default_factory=dict)

    def energies(self) -> np.ndarray:
        return np.array([p.energy for p in self.points])

    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        gammas = np.array(sorted({p.gamma for p in self.points}))
        betas = np.array(sorted({p.beta for p in self.points}))
        return gammas, betas

    def matrix(self) -> np.ndarray:
        """Energies shaped (n_gamma, n_beta)."""
        gammas, betas = self.axes()
        out = np.full((len(gammas), len(betas)), np.nan)
        gi = {g: i for i, g in enumerate(gammas)}
        bi = {b: i for i, b in enumerate(betas)}
        for p in self.points:
            out[gi[p.gamma], bi[p.beta]] = p.energy
        return out


@dataclass(frozen=True)
class ExtremalReport:
    extremal_abs_energy: float
    gamma: float
    beta: float
    two_sigma: float = 0.0
    n_bootstrap: int = 0
    max_energy: float = 0.0
    min_energy: float = 0.0

    @property
    def location(self) -> tuple[float, float]:
        return self.gamma, self.beta

    def to_dict(self) -> dict:
        return {
            "extremal_abs_energy": self.extremal_abs_energy,
            "gamma": self.gamma,
            "beta": self.beta,
            "two_sigma": self.two_sigma,
            "n_bootstrap": self.n_bootstrap,
            "max_energy": self.max_energy,
            "min_energy": self.min_energy,
        }


def _seed(master: int, *key: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=master, spawn_key=tuple(key))


@dataclass(frozen=True)
class _Task:
    index: int
    gamma: float
    beta: float
    model: IsingModel
    backend: str
    shots: int
    twirl: TwirlConfig
    noise: NoiseModel | None
    trajectories: int
    seed: int
    decompose: bool
    kernel_backend: str


def _evaluate(task: _Task) -> LandscapePoint:
    if kernels.BACKEND != task.kernel_backend:
        kernels.use_backend(task.kernel_backend)
    model = task.model
    table = energy_table(model)
    n = model.n
    circuit = build_qaoa_circuit(model, QaoaParams.single(task.gamma, task.beta))
    if task.decompose:
        circuit = decompose_rzz(circuit)
    twirl_seed = int(_seed(task.seed, task.index).generate_state(1)[0])
    cfg = TwirlConfig(task.twirl.mode, task.twirl.n_compilations, twirl_seed)
    variants = randomize(circuit, cfg)
    energies, counts, within = [], [], []
    for ci, variant in enumerate(variants):
        if task.backend == "noisy":
            traj = trajectory_average(variant, task.noise, table, task.trajectories,
                                      _seed(task.seed, task.index, ci, 2))
            probs = traj.probabilities
            flip = task.noise.readout_flip
            within.append(float(traj.energies.std(ddof=1) / np.sqrt(len(traj.energies)))
                          if len(traj.energies) > 1 else 0.0)
        else:
            probs = kernels.probabilities(simulate(variant).amplitudes)
            flip = 0.0
        if task.backend == "exact" or (task.backend == "noisy" and task.shots == 0):
            e = float(traj.energies.mean()) if task.backend == "noisy" else float(probs @ table)
        else:
            sc = sample_probabilities(probs, n, task.shots, _seed(task.seed, task.index, ci, 1), flip)
            counts.append(sc)
            e = sc.mean_energy(table)
            idx, cnt = sc.indices()
            var = float(cnt @ (table[idx] - e) ** 2 / sc.shots)
            within.append(np.sqrt(var / sc.shots))
        energies.append(e)
    mean = float(np.mean(energies))
    if len(energies) > 1:
        stderr = float(np.std(energies, ddof=1) / np.sqrt(len(energies)))
    else:
        stderr = float(within[0]) if within else 0.0
    return LandscapePoint(task.gamma, task.beta, mean, energies, counts or None, stderr)


def run_landscape(
    model: IsingModel,
    grid: GridSpec,
    backend: str = "exact",
    shots: int = 5000,
    twirl: TwirlConfig | None = None,
    noise: NoiseModel | None = None,
    seed: int = 0,
    trajectories: int = 200,
    decompose: bool = False,
    jobs: int = 1,
) -> LandscapeGrid:
    """Evaluate the QAOA energy at every grid point.

    ``exact`` uses the statevector expectation; ``sampled`` averages
    ``shots`` measurement outcomes; ``noisy`` averages ``trajectories``
    Pauli trajectories per compilation and, when ``shots > 0``, samples
    shots from the trajectory mixture.
    """
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}")
    if backend == "noisy" and noise is None:
        raise ValueError("noisy backend requires a noise model")
    if backend == "sampled" and shots < 1:
        raise ValueError("sampled backend requires shots >= 1")
    twirl = twirl or TwirlConfig("none", 1, 0)
    tasks = [
        _Task(i, g, b, model, backend, shots, twirl, noise, trajectories, seed, decompose, kernels.BACKEND)
        for i, (g, b) in enumerate(grid.points())
    ]
    points: list[LandscapePoint] = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_evaluate, t) for t in tasks]
            for t, fut in zip(tasks, futures):
                try:
                    points.append(fut.result())
                except Exception as exc:
                    raise LandscapeError(f"grid point {t.index} (gamma={t.gamma}, beta={t.beta}): {exc}") from exc
    else:
        for t in tasks:
            try:
                points.append(_evaluate(t))
            except Exception as exc:
                raise LandscapeError(f"grid point {t.index} (gamma={t.gamma}, beta={t.beta}): {exc}") from exc
    used_shots = shots if backend == "sampled" or (backend == "noisy" and shots > 0) else 0
    return LandscapeGrid(points, model, backend, used_shots, twirl.n_compilations,
                         {"trajectories": trajectories if backend == "noisy" else 0})


# --- extremal analysis ----------------------------------------------------------

def extremal(grid: LandscapeGrid) -> ExtremalReport:
    """Largest |energy| on the grid; ties go to the smallest (gamma, beta)."""
    if not grid.points:
        raise ValueError("empty landscape")
    best = None
    for p in sorted(grid.points, key=lambda p: (p.gamma, p.beta)):
        if best is None or abs(p.energy) > abs(best.energy):
            best = p
    e = grid.energies()
    return ExtremalReport(abs(best.energy), best.gamma, best.beta,
                          max_energy=float(e.max()), min_energy=float(e.min()))


def _point_outcomes(point: LandscapePoint, table: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    pooled = point.pooled_counts()
    keys = sorted(pooled)
    energies = np.array([table[int(k[::-1], 2)] for k in keys])
    return energies, np.array([pooled[k] for k in keys], dtype=float)


def dirichlet_means(energies: np.ndarray, counts: np.ndarray, n_resamples: int, rng: np.random.Generator) -> np.ndarray:
    """Bayesian-bootstrap draws of a shot mean.

    Dirichlet(1, ..., 1) weights over individual shots aggregate, per distinct
    outcome, to Dirichlet(counts); those are drawn as normalized gammas.
    """
    w = rng.standard_gamma(counts[None, :], size=(n_resamples, counts.size))
    w /= w.sum(axis=1, keepdims=True)
    return w @ energies


def bootstrap_point_std(counts: ShotCounts, table: np.ndarray, n_resamples: int = 1000, seed=0) -> float:
    """Bayesian-bootstrap standard deviation of one point's mean energy."""
    idx, cnt = counts.indices()
    rng = np.random.default_rng(seed)
    return float(dirichlet_means(table[idx], cnt.astype(float), n_resamples, rng).std(ddof=1))


def bayesian_bootstrap(grid: LandscapeGrid, n_resamples: int = 1000, seed: int = 0) -> ExtremalReport:
    """Extremal report with a 2-sigma band from whole-grid Bayesian bootstrap.

    Every resample reweights every point's pooled shots and re-extracts the
    grid extremal, so argmax jitter is part of the spread. Per-point 2-sigma
    values are stored on the points as a side effect.
    """
    base = extremal(grid)
    if grid.backend == "exact" or (grid.backend == "noisy" and grid.shots == 0):
        for p in grid.points:
            p.two_sigma = 0.0
        return ExtremalReport(base.extremal_abs_energy, base.gamma, base.beta, 0.0, n_resamples,
                              base.max_energy, base.min_energy)
    if any(not p.counts for p in grid.points):
        raise ValueError("bootstrap needs per-compilation shot counts at every point")
    if n_resamples < 2:
        raise ValueError("need at least 2 resamples")
    table = energy_table(grid.model)
    rng = np.random.default_rng(_seed(seed, 0xB007))
    best = np.zeros(n_resamples)
    for p in grid.points:
        energies, counts = _point_outcomes(p, table)
        means = dirichlet_means(energies, counts, n_resamples, rng)
        p.two_sigma = float(2 * means.std(ddof=1))
        np.maximum(best, np.abs(means), out=best)
    return ExtremalReport(base.extremal_abs_energy, base.gamma, base.beta,
                          float(2 * best.std(ddof=1)), n_resamples, base.max_energy, base.min_energy)


@dataclass(frozen=True)
class RunComparison:
    deltas: np.ndarray  # b - a per point, gamma-major
    a: ExtremalReport
    b: ExtremalReport

    @property
    def extremal_delta(self) -> float:
        return self.b.extremal_abs_energy - self.a.extremal_abs_energy


def compare_runs(a: LandscapeGrid, b: LandscapeGrid) -> RunComparison:
    ka = [(p.gamma, p.beta) for p in a.points]
    kb = [(p.gamma, p.beta) for p in b.points]
    if ka != kb:
        raise ValueError("landscapes are on different grids")
    return RunComparison(b.energies() - a.energies(), extremal(a), extremal(b))


# --- file formats -----------------------------------------------------------------

def landscape_csv(grid: LandscapeGrid) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in sorted(grid.points, key=lambda p: (p.gamma, p.beta)):
        w.writerow([repr(p.gamma), repr(p.beta), repr(p.energy), repr(p.two_sigma),
                    grid.n_compilations, grid.shots, grid.backend])
    return buf.getvalue()


def read_landscape_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        rows = []
        for r in reader:
            rows.append({
                "gamma": float(r["gamma"]),
                "beta": float(r["beta"]),
                "energy": float(r["energy"]),
                "two_sigma": float(r["two_sigma"]),
                "n_compilations": int(r["n_compilations"]),
                "shots": int(r["shots"]),
                "backend": r["backend"],
            })
    return rows


def report_json(report: ExtremalReport) -> str:
    return json.dumps(report.to_dict(), indent=1, sort_keys=False) + "\n"


def synthetic_point(gamma: float, beta: float, counts: Sequence[ShotCounts], table: np.ndarray) -> LandscapePoint:
    """Point built directly from shot counts (bootstrap calibration, tests)."""
    energies = [c.mean_energy(table) for c in counts]
    return LandscapePoint(gamma, beta, float(np.mean(energies)), energies, list(counts))

