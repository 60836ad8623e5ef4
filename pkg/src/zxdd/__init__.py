"""Strong simulation of Clifford+T circuits by ZX rewriting and stabilizer decompositions."""
from .circuits import Circuit, Gate, parse, serialize
from .decomp import STRATEGIES, DecompMatch, Strategy, greedy_select
from .diagram import Diagram, from_circuit, plug_basis, t_count
from .engine import SimResult, oracle_amplitude, simulate_amplitude
from .rewrite import clifford_eval, full_simp
from .scalar import Scalar

__all__ = [
    "Circuit", "Gate", "parse", "serialize",
    "STRATEGIES", "DecompMatch", "Strategy", "greedy_select",
    "Diagram", "from_circuit", "plug_basis", "t_count",
    "SimResult", "oracle_amplitude", "simulate_amplitude",
    "clifford_eval", "full_simp", "Scalar",
]
