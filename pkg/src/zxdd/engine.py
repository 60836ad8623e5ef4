"""Amplitude evaluation by decomposition trees, plus a dense statevector oracle."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, cswap_gates
from .decomp import DYNAMIC_KINDS, apply_match, get_strategy, greedy_select, Strategy
from .diagram import Diagram, from_circuit, is_pauli, is_t_like, plug_basis, t_count, parse_bits
from .rewrite import Interrupted, _hz, clifford_eval, full_simp
from .scalar import Scalar


@dataclass
class BetaResult:
    p: int
    n_nongadget_t: int
    beta: float
    beta_log: float


@dataclass
class SimResult:
    amplitude: Scalar | None
    probability: float | None
    terms: int
    t_initial: int
    alpha_eff: float
    elapsed: float
    status: str
    n_nongadget_t: int = 0

    @property
    def beta(self) -> BetaResult:
        return beta_eff(self)


class _Deadline:
    def __init__(self, timeout: float | None):
        self.end = None if timeout is None else time.perf_counter() + timeout

    def __call__(self) -> None:
        if self.end is not None and time.perf_counter() > self.end:
            raise Interrupted


def alpha_eff(terms: int, t_initial: int) -> float:
    """log2(terms) / t_initial, or 0 when there is nothing to decompose."""
    if t_initial <= 0 or terms <= 1:
        return 0.0
    return math.log2(terms) / t_initial


def nongadget_t_count(d: Diagram) -> int:
    """T-like spiders that are not the leaf of a phase gadget."""
    adj, phase = d.adj, d.phase
    n = 0
    for v in d.kind:
        if not is_t_like(phase[v]):
            continue
        if len(adj[v]) == 1:
            (h,) = adj[v]
            if is_pauli(phase[h]) and len(adj[h]) >= 2 and _hz(d, h):
                continue
        n += 1
    return n


def beta_eff(run: SimResult | tuple[int, int]) -> BetaResult:
    """beta = p / n with p terms and n non-gadget T-spiders; log2(p)/n alongside."""
    if isinstance(run, SimResult):
        p, n = run.terms, run.n_nongadget_t
    else:
        p, n = run
    if n <= 0:
        return BetaResult(p, n, 0.0 if p <= 1 else math.inf, 0.0 if p <= 1 else math.inf)
    return BetaResult(p, n, p / n, math.log2(p) / n if p >= 1 else 0.0)


def prepare(c: Circuit, out_bits, in_bits=None) -> Diagram:
    """Closed, fully simplified diagram for <out|C|in>."""
    if in_bits is None:
        in_bits = [0] * c.qubits
    d = plug_basis(from_circuit(c), in_bits, out_bits)
    return full_simp(d)


def evaluate(d: Diagram, strategy: str | Strategy = "single_paired",
             timeout: float | None = None, order: str = "first",
             check=None) -> tuple[Scalar | None, int, str]:
    """Sum the Clifford leaves of the decomposition tree of a simplified diagram.

    Depth-first with an explicit stack. ``order`` chooses whether the first
    or last term of each decomposition is explored first. Branches whose
    scalar simplifies to zero are dropped without counting as terms.
    """
    strategy = get_strategy(strategy)
    if check is None:
        check = _Deadline(timeout)
    if d.scalar.is_zero or t_count(d) == 0:
        # a Clifford root is one term, even when it evaluates to zero
        amp = d.scalar if d.num_vertices() == 0 else clifford_eval(d)
        return amp, 1, "ok"
    total = Scalar.zero()
    terms = 0
    stack = [d]
    try:
        while stack:
            check()
            g = stack.pop()
            if g.scalar.is_zero:
                continue
            if t_count(g) == 0:
                total = total + (g.scalar if g.num_vertices() == 0 else clifford_eval(g))
                terms += 1
                continue
            m = greedy_select(g, strategy)
            children = apply_match(g, m, check)
            if m.kind not in DYNAMIC_KINDS:
                for ch in children:
                    full_simp(ch, check)
            if order == "first":
                children.reverse()
            stack.extend(children)
    except Interrupted:
        return None, terms, "timeout"
    return total, terms, "ok"


def simulate_amplitude(c: Circuit, out_bits, strategy: str | Strategy = "single_paired",
                       timeout: float | None = 90.0, order: str = "first",
                       in_bits=None) -> SimResult:
    start = time.perf_counter()
    check = _Deadline(timeout)
    if in_bits is None:
        in_bits = [0] * c.qubits
    t0, n_ng = 0, 0
    try:
        d = plug_basis(from_circuit(c), in_bits, out_bits)
        full_simp(d, check)
        t0 = t_count(d)
        n_ng = nongadget_t_count(d)
    except Interrupted:
        return SimResult(None, None, 0, t0, 0.0, time.perf_counter() - start, "timeout", n_ng)
    amp, terms, status = evaluate(d, strategy, order=order, check=check)
    elapsed = time.perf_counter() - start
    prob = abs(amp.as_complex()) ** 2 if amp is not None else None
    return SimResult(amp, prob, terms, t0, alpha_eff(terms, t0), elapsed, status, n_ng)


# ---------------------------------------------------------------------------
# statevector oracle
# ---------------------------------------------------------------------------

ORACLE_MAX_QUBITS = 12

_ONE_QUBIT = {
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "S": np.diag([1, 1j]),
    "Sdg": np.diag([1, -1j]),
    "T": np.diag([1, np.exp(1j * math.pi / 4)]),
    "Tdg": np.diag([1, np.exp(-1j * math.pi / 4)]),
}


def oracle_statevector(c: Circuit, in_bits=None) -> np.ndarray:
    """Dense U|in>, qubit 0 as the most significant index bit."""
    n = c.qubits
    if n > ORACLE_MAX_QUBITS:
        raise ValueError(f"oracle limited to {ORACLE_MAX_QUBITS} qubits, got {n}")
    idx = np.arange(2**n)
    bit = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
    psi = np.zeros(2**n, dtype=complex)
    start = 0
    for q, b in enumerate(parse_bits(in_bits) if in_bits is not None else [0] * n):
        start |= b << (n - 1 - q)
    psi[start] = 1.0

    def one(q, m):
        v = psi.reshape(2**q, 2, 2 ** (n - q - 1))
        return np.einsum("ab,ibj->iaj", m, v).reshape(-1)

    gates = []
    for g in c.gates:
        gates.extend(cswap_gates(*g.targets) if g.name == "CSWAP" else [g])
    for g in gates:
        t = g.targets
        if g.name in _ONE_QUBIT:
            psi = one(t[0], _ONE_QUBIT[g.name])
        elif g.name == "ZPhase":
            psi = one(t[0], np.diag([1, np.exp(1j * math.pi * g.k / 4)]))
        elif g.name == "CNOT":
            psi = psi[idx ^ (bit[t[0]] << (n - 1 - t[1]))]
        elif g.name == "CZ":
            psi = psi * (1 - 2 * (bit[t[0]] & bit[t[1]]))
        elif g.name == "CZPhase":
            psi = psi * (1j ** (g.k * (bit[t[0]] & bit[t[1]])))
        elif g.name == "CCZ":
            psi = psi * (1 - 2 * (bit[t[0]] & bit[t[1]] & bit[t[2]]))
        else:  # pragma: no cover
            raise ValueError(f"oracle cannot apply {g}")
    return psi


def oracle_amplitude(c: Circuit, out_bits, in_bits=None) -> complex:
    """<out| U |in> by dense statevector evolution (in defaults to |0...0>)."""
    out = parse_bits(out_bits)
    if len(out) != c.qubits:
        raise ValueError("output bitstring length does not match qubit count")
    psi = oracle_statevector(c, in_bits)
    index = int("".join(map(str, out)), 2) if out else 0
    return complex(psi[index])
