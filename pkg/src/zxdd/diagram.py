"""ZX-diagrams as open graphs with pi/4-multiple phases and an exact scalar.

Semantics used throughout (all spiders Z after colour change):

    Z(k) with legs x_1..x_n   -> [x_1 = ... = x_n] * w^(k x)
    Hadamard edge (u, w)      -> (1/sqrt2) (-1)^(x_u x_w)

so a closed graph-like diagram is sum_x w^(sum k_v x_v) 2^(-|E|/2) (-1)^(x^T A x).
Every primitive below is a bookkeeping identity of that sum.
"""
from __future__ import annotations

from enum import IntEnum
from typing import Iterable

from .circuits import Circuit, Gate, cswap_gates
from .scalar import Scalar


class VertexKind(IntEnum):
    BOUNDARY = 0
    Z = 1
    X = 2


class EdgeType(IntEnum):
    SIMPLE = 1
    HADAMARD = 2


B, Z, X = VertexKind.BOUNDARY, VertexKind.Z, VertexKind.X
SIMPLE, HADAMARD = EdgeType.SIMPLE, EdgeType.HADAMARD


class DiagramError(ValueError):
    pass


# phase predicates on k in Z_8 ------------------------------------------------

def is_pauli(k: int) -> bool:
    return k % 4 == 0


def is_proper_clifford(k: int) -> bool:
    return k % 4 == 2


def is_clifford(k: int) -> bool:
    return k % 2 == 0


def is_t_like(k: int) -> bool:
    return k % 2 == 1


class Diagram:
    """Mutable open graph. Vertex handles are ints and are never reused.

    ``adj[v]`` maps each neighbour of ``v`` to the edge type. Parallel edges
    and self-loops never survive ``add_edge``: they are resolved on insertion
    and the phase/scalar corrections are applied there.
    """

    __slots__ = ("kind", "phase", "adj", "inputs", "outputs", "_scalar", "_s2", "_om",
                 "_next", "version")

    def __init__(self):
        self.kind: dict[int, VertexKind] = {}
        self.phase: dict[int, int] = {}
        self.adj: dict[int, dict[int, EdgeType]] = {}
        self.inputs: list[int] = []
        self.outputs: list[int] = []
        self._scalar = Scalar.one()
        # pending sqrt2 power and w power, folded into _scalar lazily
        self._s2 = 0
        self._om = 0
        self._next = 0
        self.version = 0

    # scalar ------------------------------------------------------------------
    @property
    def scalar(self) -> Scalar:
        if self._s2 or self._om:
            self._scalar = self._scalar.mul_sqrt2(self._s2).mul_omega(self._om)
            self._s2 = self._om = 0
        return self._scalar

    @scalar.setter
    def scalar(self, s: Scalar) -> None:
        self._scalar, self._s2, self._om = s, 0, 0

    def mul_sqrt2(self, n: int) -> None:
        self._s2 += n

    def mul_omega(self, k: int) -> None:
        self._om = (self._om + k) % 8

    def mul_scalar(self, s: Scalar) -> None:
        self._scalar = self._scalar * s

    # construction ------------------------------------------------------------
    def copy(self) -> "Diagram":
        d = Diagram.__new__(Diagram)
        d.kind = dict(self.kind)
        d.phase = dict(self.phase)
        d.adj = {v: dict(nb) for v, nb in self.adj.items()}
        d.inputs = list(self.inputs)
        d.outputs = list(self.outputs)
        d._scalar, d._s2, d._om = self._scalar, self._s2, self._om
        d._next = self._next
        d.version = self.version
        return d

    def add_vertex(self, kind: VertexKind, phase: int = 0) -> int:
        v = self._next
        self._next += 1
        self.kind[v] = VertexKind(kind)
        self.phase[v] = phase % 8
        self.adj[v] = {}
        self.version += 1
        return v

    def remove_vertex(self, v: int) -> None:
        for w in self.adj.pop(v):
            del self.adj[w][v]
        del self.kind[v]
        del self.phase[v]
        self.version += 1

    def add_edge(self, u: int, v: int, et: EdgeType = SIMPLE) -> None:
        """Insert an edge, resolving self-loops and parallel edges eagerly."""
        self.version += 1
        if u == v:
            if self.kind[u] == B:
                raise DiagramError("self-loop on a boundary vertex")
            if et == HADAMARD:
                self.phase[u] = (self.phase[u] + 4) % 8
                self._s2 -= 1
            return
        old = self.adj[u].get(v)
        if old is None:
            self.adj[u][v] = et
            self.adj[v][u] = et
            return
        ku, kv = self.kind[u], self.kind[v]
        if ku == B or kv == B:
            raise DiagramError("parallel edge at a boundary vertex")
        fusing = SIMPLE if ku == kv else HADAMARD
        if old == fusing and et == fusing:
            return
        if old != fusing and et != fusing:
            # Hopf: two non-fusing edges cancel up to 1/2
            del self.adj[u][v]
            del self.adj[v][u]
            self._s2 -= 2
            return
        # one of each: keep the fusing edge, the other acts as a pi phase
        self.adj[u][v] = fusing
        self.adj[v][u] = fusing
        self.phase[u] = (self.phase[u] + 4) % 8
        self._s2 -= 1

    def remove_edge(self, u: int, v: int) -> None:
        del self.adj[u][v]
        del self.adj[v][u]
        self.version += 1

    def set_edge_type(self, u: int, v: int, et: EdgeType) -> None:
        self.adj[u][v] = et
        self.adj[v][u] = et
        self.version += 1

    def add_phase(self, v: int, k: int) -> None:
        self.phase[v] = (self.phase[v] + k) % 8
        self.version += 1

    def set_phase(self, v: int, k: int) -> None:
        self.phase[v] = k % 8
        self.version += 1

    # queries -----------------------------------------------------------------
    def vertices(self) -> Iterable[int]:
        return self.kind.keys()

    def num_vertices(self) -> int:
        return len(self.kind)

    def num_edges(self) -> int:
        return sum(len(nb) for nb in self.adj.values()) // 2

    def edges(self):
        for u, nb in self.adj.items():
            for v, et in nb.items():
                if u < v:
                    yield u, v, et

    def neighbors(self, v: int):
        return self.adj[v].keys()

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edge_type(self, u: int, v: int):
        return self.adj[u].get(v)

    def is_boundary(self, v: int) -> bool:
        return self.kind[v] == B

    def spiders(self) -> list[int]:
        return [v for v, k in self.kind.items() if k != B]

    def is_interior(self, v: int) -> bool:
        """Spider with no boundary neighbour."""
        kind = self.kind
        return kind[v] != B and all(kind[w] != B for w in self.adj[v])

    def is_closed(self) -> bool:
        return not self.inputs and not self.outputs

    def t_count(self) -> int:
        return t_count(self)

    # semantic primitives on graph-like Z spiders -----------------------------
    def _require_h_z(self, v: int) -> None:
        if self.kind[v] != Z:
            raise DiagramError(f"vertex {v} is not a Z spider")
        kind = self.kind
        for w, et in self.adj[v].items():
            if et != HADAMARD or kind[w] != Z:
                raise DiagramError(f"vertex {v} has a non-Hadamard or non-Z neighbour {w}")

    def toggle(self, u: int, w: int) -> None:
        """Multiply the diagram's sum by (-1)^(x_u x_w)."""
        self.add_edge(u, w, HADAMARD)
        self._s2 += 1

    def project(self, v: int, b: int) -> None:
        """Restrict the sum to x_v = b and delete v."""
        self._require_h_z(v)
        nb = list(self.adj[v])
        if b:
            self._om = (self._om + self.phase[v]) % 8
            for w in nb:
                self.phase[w] = (self.phase[w] + 4) % 8
        self._s2 -= len(nb)
        self.remove_vertex(v)

    def flip(self, v: int) -> None:
        """Substitute x_v -> 1 - x_v; the sum is unchanged."""
        self._require_h_z(v)
        k = self.phase[v]
        self._om = (self._om + k) % 8
        self.phase[v] = (-k) % 8
        for w in self.adj[v]:
            self.phase[w] = (self.phase[w] + 4) % 8
        self.version += 1

    def add_gadget(self, targets: Iterable[int], k: int) -> tuple[int, int]:
        """Attach a phase gadget w^(k * parity(targets)); returns (hub, leaf)."""
        targets = list(targets)
        hub = self.add_vertex(Z, 0)
        leaf = self.add_vertex(Z, k)
        self.add_edge(hub, leaf, HADAMARD)
        for t in targets:
            self.add_edge(hub, t, HADAMARD)
        self._s2 += len(targets) - 1
        return hub, leaf

    def __repr__(self) -> str:
        return (f"Diagram(vertices={self.num_vertices()}, edges={self.num_edges()}, "
                f"inputs={len(self.inputs)}, outputs={len(self.outputs)}, t={t_count(self)})")


def t_count(d: Diagram) -> int:
    kind, phase = d.kind, d.phase
    return sum(1 for v, k in phase.items() if k & 1 and kind[v] != B)


# ---------------------------------------------------------------------------
# circuits
# ---------------------------------------------------------------------------

_Z_PHASE = {"S": 2, "Sdg": 6, "T": 1, "Tdg": 7, "Z": 4}


class _Wires:
    def __init__(self, d: Diagram, n: int):
        self.d = d
        self.last = [d.add_vertex(B) for _ in range(n)]
        d.inputs = list(self.last)
        self.et = [SIMPLE] * n

    def push(self, q: int, kind: VertexKind, k: int = 0) -> int:
        v = self.d.add_vertex(kind, k)
        self.d.add_edge(self.last[q], v, self.et[q])
        self.last[q] = v
        self.et[q] = SIMPLE
        return v

    def hadamard(self, q: int) -> None:
        self.et[q] = SIMPLE if self.et[q] == HADAMARD else HADAMARD

    def close(self) -> None:
        outs = []
        for q, v in enumerate(self.last):
            o = self.d.add_vertex(B)
            self.d.add_edge(v, o, self.et[q])
            outs.append(o)
        self.d.outputs = outs


def _apply_gate(w: _Wires, g: Gate) -> None:
    d = w.d
    name, t = g.name, g.targets
    if name in _Z_PHASE:
        w.push(t[0], Z, _Z_PHASE[name])
    elif name == "ZPhase":
        w.push(t[0], Z, g.k)
    elif name == "H":
        w.hadamard(t[0])
    elif name == "X":
        w.push(t[0], X, 4)
    elif name == "CNOT":
        c = w.push(t[0], Z)
        x = w.push(t[1], X)
        d.add_edge(c, x, SIMPLE)
        d.mul_sqrt2(1)
    elif name == "CZ":
        a = w.push(t[0], Z)
        b = w.push(t[1], Z)
        d.add_edge(a, b, HADAMARD)
        d.mul_sqrt2(1)
    elif name == "CZPhase":
        # w^(2k ab) = w^(k a) w^(k b) w^(-k (a xor b))
        a = w.push(t[0], Z, g.k)
        b = w.push(t[1], Z, g.k)
        d.add_gadget((a, b), -g.k)
    elif name == "CCZ":
        # 4abc = a + b + c - (a^b) - (a^c) - (b^c) + (a^b^c)
        vs = [w.push(q, Z, 1) for q in t]
        a, b, c = vs
        for pair in ((a, b), (a, c), (b, c)):
            d.add_gadget(pair, 7)
        d.add_gadget(vs, 1)
    elif name == "CSWAP":
        for sub in cswap_gates(*t):
            _apply_gate(w, sub)
    else:  # pragma: no cover - Gate validates names
        raise DiagramError(f"unsupported gate {g}")


def from_circuit(c: Circuit) -> Diagram:
    """Diagram whose tensor equals the unitary of ``c`` exactly."""
    d = Diagram()
    w = _Wires(d, c.qubits)
    for g in c.gates:
        _apply_gate(w, g)
    w.close()
    return d


def plug_basis(d: Diagram, in_bits, out_bits) -> Diagram:
    """Close every boundary with a computational basis state or effect.

    Each boundary becomes an X spider of phase j*pi, normalised by 1/sqrt2,
    so the closed diagram evaluates to <out|D|in>.
    """
    in_bits, out_bits = parse_bits(in_bits), parse_bits(out_bits)
    if len(in_bits) != len(d.inputs) or len(out_bits) != len(d.outputs):
        raise DiagramError(
            f"expected {len(d.inputs)} input and {len(d.outputs)} output bits, "
            f"got {len(in_bits)} and {len(out_bits)}")
    d = d.copy()
    for v, b in zip(d.inputs + d.outputs, in_bits + out_bits):
        d.kind[v] = X
        d.phase[v] = 4 * b
        d.mul_sqrt2(-1)
    d.inputs, d.outputs = [], []
    d.version += 1
    return d


def parse_bits(bits) -> list[int]:
    if isinstance(bits, str):
        if set(bits) - {"0", "1"}:
            raise DiagramError(f"bad bitstring {bits!r}")
        return [int(ch) for ch in bits]
    out = [int(b) for b in bits]
    if any(b not in (0, 1) for b in out):
        raise DiagramError(f"bad bit sequence {bits!r}")
    return out
