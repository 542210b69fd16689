"""Frame randomization for QAOA on a frustrated Ising ring, with a statevector
simulator, synthetic noise and landscape sweeps."""
from . import kernels
from .circuit import Circuit, CircuitError, Cycle, Gate, easy, hard, load_circuit, save_circuit
from .ising import IsingModel, ModelError, energy, energy_table, frustrated_ring, ground_states, load_model
from .landscape import (
    ExtremalReport,
    GridSpec,
    LandscapeError,
    LandscapeGrid,
    LandscapePoint,
    bayesian_bootstrap,
    compare_runs,
    extremal,
    run_landscape,
)
from .noise import NoiseModel, load_noise
from .pauli import (
    CLIFFORDS,
    PauliString,
    SingleQubitClifford,
    conjugate_clifford_through_cycle,
    conjugate_pauli_through_cycle,
    conjugate_pauli_through_gate,
)
from .qaoa import QaoaParams, build_qaoa_circuit, decompose_rzz, edge_coloring
from .statevector import ShotCounts, StateVector, expectation_energy, sample, simulate, trajectory_average
from .twirl import TwirlConfig, randomize, twirl_average_channel
from .unitary import circuit_unitary

__version__ = "0.1.0"
