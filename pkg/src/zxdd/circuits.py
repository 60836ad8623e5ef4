"""Clifford+T circuits: gate alphabet, text format and benchmark generators."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

# name -> (number of qubit targets, takes an integer parameter)
GATE_ARITY: dict[str, tuple[int, bool]] = {
    "H": (1, False),
    "S": (1, False),
    "Sdg": (1, False),
    "T": (1, False),
    "Tdg": (1, False),
    "Z": (1, False),
    "X": (1, False),
    "CNOT": (2, False),
    "CZ": (2, False),
    "CCZ": (3, False),
    "CSWAP": (3, False),
    "ZPhase": (1, True),  # k * pi/4, k in Z_8
    "CZPhase": (2, True),  # controlled phase k * pi/2, k in Z_4
}

# T-like phase content of each gate once expanded into spiders
_T_SPIDERS = {"T": 1, "Tdg": 1, "CCZ": 7, "CSWAP": 7}


class CircuitError(ValueError):
    """Malformed gate or circuit text."""


@dataclass(frozen=True)
class Gate:
    name: str
    targets: tuple[int, ...]
    k: int | None = None

    def __post_init__(self):
        if self.name not in GATE_ARITY:
            raise CircuitError(f"unsupported gate {self.name!r}")
        arity, has_k = GATE_ARITY[self.name]
        if len(self.targets) != arity:
            raise CircuitError(f"{self.name} takes {arity} qubits, got {len(self.targets)}")
        if len(set(self.targets)) != arity:
            raise CircuitError(f"{self.name} targets must be distinct: {self.targets}")
        if has_k and self.k is None:
            raise CircuitError(f"{self.name} needs an integer parameter")
        if not has_k and self.k is not None:
            raise CircuitError(f"{self.name} takes no parameter")
        if self.name == "ZPhase":
            object.__setattr__(self, "k", self.k % 8)
        elif self.name == "CZPhase":
            object.__setattr__(self, "k", self.k % 4)

    def t_spiders(self) -> int:
        """Number of T-like spiders this gate contributes before simplification."""
        if self.name == "ZPhase":
            return self.k % 2
        if self.name == "CZPhase":
            return 3 * (self.k % 2)
        return _T_SPIDERS.get(self.name, 0)


@dataclass
class Circuit:
    qubits: int
    gates: list[Gate] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate) -> None:
        if any(q < 0 or q >= self.qubits for q in g.targets):
            raise CircuitError(f"{g} out of range for {self.qubits} qubits")

    def add(self, name: str, *targets: int, k: int | None = None) -> "Circuit":
        g = Gate(name, tuple(targets), k)
        self._check(g)
        self.gates.append(g)
        return self

    def t_spiders(self) -> int:
        return sum(g.t_spiders() for g in self.gates)

    def count(self, name: str) -> int:
        return sum(1 for g in self.gates if g.name == name)


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

def serialize(c: Circuit) -> str:
    lines = [f"qubits {c.qubits}"]
    for g in c.gates:
        parts = [g.name, *map(str, g.targets)]
        if g.k is not None:
            parts.append(str(g.k))
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse(text: str) -> Circuit:
    """Parse the line-oriented circuit format.

    First non-blank line is ``qubits N``; every other line is
    ``NAME q0 [q1 [q2]] [k]``. Blank lines and ``#`` comments are ignored.
    """
    circuit = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if circuit is None:
            if len(parts) != 2 or parts[0] != "qubits":
                raise CircuitError(f"line {lineno}: expected 'qubits N', got {raw!r}")
            try:
                circuit = Circuit(int(parts[1]))
            except ValueError:
                raise CircuitError(f"line {lineno}: bad qubit count {parts[1]!r}") from None
            continue
        name, args = parts[0], parts[1:]
        if name not in GATE_ARITY:
            raise CircuitError(f"line {lineno}: unknown gate {name!r}")
        arity, has_k = GATE_ARITY[name]
        if len(args) != arity + has_k:
            raise CircuitError(f"line {lineno}: {name} expects {arity + has_k} arguments")
        try:
            nums = [int(a) for a in args]
        except ValueError:
            raise CircuitError(f"line {lineno}: non-integer argument in {raw!r}") from None
        targets, k = (nums[:-1], nums[-1]) if has_k else (nums, None)
        try:
            circuit.add(name, *targets, k=k)
        except CircuitError as e:
            raise CircuitError(f"line {lineno}: {e}") from None
    if circuit is None:
        raise CircuitError("empty circuit file")
    return circuit


_QASM_GATES = {
    "h": "H", "s": "S", "sdg": "Sdg", "t": "T", "tdg": "Tdg", "z": "Z", "x": "X",
    "cx": "CNOT", "cz": "CZ", "ccz": "CCZ", "cswap": "CSWAP",
}


def from_qasm(text: str) -> Circuit:
    """Read the QASM 2.0 subset matching the gate alphabet (one register)."""
    import re

    circuit = None
    reg = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        for stmt in filter(None, (s.strip() for s in line.split(";"))):
            if stmt.startswith("OPENQASM") or stmt.startswith("include"):
                continue
            m = re.fullmatch(r"qreg\s+(\w+)\[(\d+)\]", stmt)
            if m:
                if circuit is not None:
                    raise CircuitError(f"line {lineno}: only one qreg is supported")
                reg, circuit = m.group(1), Circuit(int(m.group(2)))
                continue
            m = re.fullmatch(r"(\w+)\s+(.+)", stmt)
            if not m or m.group(1) not in _QASM_GATES or circuit is None:
                raise CircuitError(f"line {lineno}: unsupported statement {stmt!r}")
            qs = []
            for arg in m.group(2).split(","):
                am = re.fullmatch(r"\s*(\w+)\[(\d+)\]\s*", arg)
                if not am or am.group(1) != reg:
                    raise CircuitError(f"line {lineno}: bad operand {arg!r}")
                qs.append(int(am.group(2)))
            try:
                circuit.add(_QASM_GATES[m.group(1)], *qs)
            except CircuitError as e:
                raise CircuitError(f"line {lineno}: {e}") from None
    if circuit is None:
        raise CircuitError("no qreg declared")
    return circuit


# ---------------------------------------------------------------------------
# gadget expansions
# ---------------------------------------------------------------------------

def cswap_gates(c: int, a: int, b: int) -> list[Gate]:
    """Fredkin gate as CNOT-conjugated Toffoli, the Toffoli as H-conjugated CCZ."""
    return [
        Gate("CNOT", (b, a)),
        Gate("H", (b,)),
        Gate("CCZ", (c, a, b)),
        Gate("H", (b,)),
        Gate("CNOT", (b, a)),
    ]


def expand_cswap(circ: Circuit) -> Circuit:
    gates = []
    for g in circ.gates:
        gates.extend(cswap_gates(*g.targets) if g.name == "CSWAP" else [g])
    return Circuit(circ.qubits, gates, dict(circ.metadata))


def expand_ccz(circ: Circuit) -> Circuit:
    """Rewrite every CCZ into its 7 T-like phase rotations (CNOT/T form).

    Uses 4xyz = x + y + z - (x^y) - (x^z) - (y^z) + (x^y^z); each parity
    term becomes a CNOT-conjugated T or T-dagger. The result is a plain
    Clifford+T circuit with the same unitary.
    """
    out = []
    for g in expand_cswap(circ).gates:
        if g.name != "CCZ":
            out.append(g)
            continue
        x, y, z = g.targets
        out += [Gate("T", (x,)), Gate("T", (y,)), Gate("T", (z,))]
        for a, b in ((x, y), (x, z), (y, z)):
            out += [Gate("CNOT", (a, b)), Gate("Tdg", (b,)), Gate("CNOT", (a, b))]
        out += [
            Gate("CNOT", (x, z)), Gate("CNOT", (y, z)), Gate("T", (z,)),
            Gate("CNOT", (y, z)), Gate("CNOT", (x, z)),
        ]
    return Circuit(circ.qubits, out, dict(circ.metadata))


# ---------------------------------------------------------------------------
# benchmark generators
# ---------------------------------------------------------------------------

def gen_ccz_class(q: int, n_gates: int, seed: int) -> Circuit:
    """Random Clifford+T+CCZ circuit: P(T) = P(CCZ) = 0.05, rest uniform Clifford."""
    if q < 3:
        raise ValueError("CCZ circuits need at least 3 qubits")
    rng = random.Random(seed)
    c = Circuit(q, metadata={"class": "ccz", "seed": seed, "qubits": q, "gates": n_gates})
    clifford = ("CNOT", "CZ", "H", "S")
    for _ in range(n_gates):
        r = rng.random()
        if r < 0.05:
            c.add("T", rng.randrange(q))
        elif r < 0.10:
            c.add("CCZ", *rng.sample(range(q), 3))
        else:
            name = rng.choice(clifford)
            arity = GATE_ARITY[name][0]
            c.add(name, *rng.sample(range(q), arity))
    return c


def _parity_ladder(legs: list[int]) -> list[tuple[int, int]]:
    return [(legs[i], legs[i + 1]) for i in range(len(legs) - 1)]


def gen_pauli_exp(q: int, n_gadgets: int, seed: int, max_weight: int = 6) -> Circuit:
    """Product of exp(-i pi/8 P) for random Z/X Pauli strings P of weight <= 6."""
    if q < 2:
        raise ValueError("Pauli exponential circuits need at least 2 qubits")
    rng = random.Random(seed)
    c = Circuit(q, metadata={"class": "pauli", "seed": seed, "qubits": q,
                             "gadgets": n_gadgets, "max_weight": max_weight})
    wmax = min(q, max_weight)
    for _ in range(n_gadgets):
        weight = rng.randint(1, wmax)
        legs = rng.sample(range(q), weight)
        xs = [leg for leg in legs if rng.random() < 0.5]
        for leg in xs:
            c.add("H", leg)
        ladder = _parity_ladder(legs)
        for a, b in ladder:
            c.add("CNOT", a, b)
        c.add("T", legs[-1])
        for a, b in reversed(ladder):
            c.add("CNOT", a, b)
        for leg in xs:
            c.add("H", leg)
    return c


def _random_permutation_gates(rng: random.Random, reg: list[int], n_cswap: int) -> list[Gate]:
    """Reversible circuit on ``reg`` built from CSWAPs interleaved with CNOTs."""
    gates = []
    for _ in range(n_cswap):
        a, b = rng.sample(reg, 2)
        gates.append(Gate("CNOT", (a, b)))
        gates.append(Gate("CSWAP", tuple(rng.sample(reg, 3))))
    return gates


def _random_quadratic_gates(rng: random.Random, reg: list[int]) -> list[Gate]:
    gates = [Gate("Z", (q,)) for q in reg if rng.random() < 0.5]
    for i in range(len(reg)):
        for j in range(i + 1, len(reg)):
            if rng.random() < 0.5:
                gates.append(Gate("CZ", (reg[i], reg[j])))
    return gates


def gen_hidden_shift_modified(q_half: int, n_cswap: int, seed: int) -> Circuit:
    """Hidden shift circuit for a Maiorana-McFarland bent function.

    f(x, y) = x . pi(y) + g(y) on 2*q_half qubits, with the permutation pi
    built from ``n_cswap`` CSWAP gates (plus CNOTs) and g quadratic. The
    circuit maps |0...0> to |s> for the hidden shift s stored in metadata.
    pi and its inverse appear twice each, so the circuit holds 4 * n_cswap
    CSWAP gates in total.
    """
    if q_half < 2:
        raise ValueError("q_half must be at least 2")
    if n_cswap > 0 and q_half < 3:
        raise ValueError("CSWAP permutations need q_half >= 3")
    rng = random.Random(seed)
    n = 2 * q_half
    xs, ys = list(range(q_half)), list(range(q_half, n))
    shift = [rng.randrange(2) for _ in range(n)]
    pi_y = _random_permutation_gates(rng, ys, n_cswap)
    g_y = _random_quadratic_gates(rng, ys)
    # the same permutation and quadratic form transported onto the x register
    to_x = {y: x for x, y in zip(xs, ys)}
    pi_x = [Gate(g.name, tuple(to_x[t] for t in g.targets), g.k) for g in pi_y]
    g_x = [Gate(g.name, tuple(to_x[t] for t in g.targets), g.k) for g in g_y]

    c = Circuit(n, metadata={"class": "hidden_shift", "seed": seed, "q_half": q_half,
                             "n_cswap": n_cswap, "shift": "".join(map(str, shift))})
    gates: list[Gate] = [Gate("H", (q,)) for q in range(n)]
    # oracle for f(z + s)
    gates += [Gate("X", (q,)) for q in range(n) if shift[q]]
    gates += g_y + pi_y
    gates += [Gate("CZ", (x, y)) for x, y in zip(xs, ys)]
    gates += list(reversed(pi_y))
    gates += [Gate("X", (q,)) for q in range(n) if shift[q]]
    gates += [Gate("H", (q,)) for q in range(n)]
    # oracle for the dual function pi^{-1}(a) . b + g(pi^{-1}(a))
    gates += list(reversed(pi_x))
    gates += [Gate("CZ", (x, y)) for x, y in zip(xs, ys)]
    gates += g_x + pi_x
    gates += [Gate("H", (q,)) for q in range(n)]
    c.gates = gates
    return c


def gen_iqp(n: int, edge_prob: float, seed: int) -> Circuit:
    """H layer, random diagonal layer of ZPhase(x pi/4) and CZPhase(y pi/2), H layer."""
    if n < 2:
        raise ValueError("IQP circuits need at least 2 qubits")
    rng = random.Random(seed)
    c = Circuit(n, metadata={"class": "iqp", "seed": seed, "qubits": n, "edge_prob": edge_prob,
                             "x_dist": "uniform Z8", "y_dist": "uniform Z4"})
    for q in range(n):
        c.add("H", q)
    for q in range(n):
        c.add("ZPhase", q, k=rng.randrange(8))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_prob:
                c.add("CZPhase", i, j, k=rng.randrange(4))
    for q in range(n):
        c.add("H", q)
    return c


GENERATORS = {
    "ccz": gen_ccz_class,
    "pauli": gen_pauli_exp,
    "hidden_shift": gen_hidden_shift_modified,
    "iqp": gen_iqp,
}
