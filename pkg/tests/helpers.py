"""Random diagram builders and tensor comparisons shared by the tests."""
from __future__ import annotations

import random

import numpy as np

from zxdd.circuits import Circuit
from zxdd.diagram import B, HADAMARD, SIMPLE, X, Z, Diagram
from zxdd.tensor import to_tensor

BIG = 10**6


def value(d: Diagram) -> np.ndarray:
    return to_tensor(d, max_endpoints=12, max_vertices=BIG).entries


def assert_close(a, b, tol=1e-10):
    a, b = np.asarray(a), np.asarray(b)
    assert a.shape == b.shape
    err = float(np.max(np.abs(a - b))) if a.size else 0.0
    assert err <= tol, f"max |diff| = {err:.3e}"


def sum_values(ds) -> np.ndarray:
    return sum(value(d) for d in ds)


def random_graph_like(rng: random.Random, n: int, n_open: int = 0, p: float = 0.4,
                      phases=range(8)) -> Diagram:
    """Z spiders joined by Hadamard edges, boundaries attached by simple edges."""
    d = Diagram()
    vs = [d.add_vertex(Z, rng.choice(list(phases))) for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                d.add_edge(vs[i], vs[j], HADAMARD)
    for _ in range(n_open):
        b = d.add_vertex(B)
        d.add_edge(b, rng.choice(vs), SIMPLE)
        (d.inputs if rng.random() < 0.5 else d.outputs).append(b)
    return d


def random_zx(rng: random.Random, n: int, n_open: int = 0, p: float = 0.35) -> Diagram:
    """Mixed Z/X spiders with simple and Hadamard edges (not graph-like)."""
    d = Diagram()
    vs = [d.add_vertex(rng.choice((Z, X)), rng.randrange(8)) for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                d.add_edge(vs[i], vs[j], rng.choice((SIMPLE, HADAMARD)))
    for _ in range(n_open):
        b = d.add_vertex(B)
        d.add_edge(b, rng.choice(vs), rng.choice((SIMPLE, HADAMARD)))
        (d.inputs if rng.random() < 0.5 else d.outputs).append(b)
    return d


def interior(d: Diagram) -> list[int]:
    return [v for v in sorted(d.kind) if d.is_interior(v)]


def random_circuit(rng: random.Random, q: int, n: int, names=None) -> Circuit:
    names = names or ["H", "S", "Sdg", "T", "Tdg", "Z", "X", "CNOT", "CZ", "CCZ",
                      "CSWAP", "ZPhase", "CZPhase"]
    c = Circuit(q)
    from zxdd.circuits import GATE_ARITY

    for _ in range(n):
        name = rng.choice([x for x in names if GATE_ARITY[x][0] <= q])
        arity, has_k = GATE_ARITY[name]
        c.add(name, *rng.sample(range(q), arity), k=rng.randrange(8) if has_k else None)
    return c


def with_rule_match(rng: random.Random, name: str) -> Diagram:
    """Random graph-like diagram edited so ``name`` has at least one match."""
    d = random_graph_like(rng, rng.randint(3, 9), rng.randint(0, 4), p=0.45)
    inner = interior(d)
    if name == "lcomp" and inner:
        d.phase[rng.choice(inner)] = rng.choice((2, 6))
    elif name == "pivot":
        pairs = [(u, v) for u, v, _ in d.edges() if u in inner and v in inner]
        if pairs:
            u, v = rng.choice(pairs)
            d.phase[u], d.phase[v] = rng.choice((0, 4)), rng.choice((0, 4))
    elif name == "pivot_gadget":
        pairs = [(u, v) for u, v, _ in d.edges() if u in inner and v in inner]
        if pairs:
            u, w = rng.choice(pairs)
            d.phase[u], d.phase[w] = rng.choice((0, 4)), rng.choice((1, 2, 3, 5, 6, 7))
            x = d.add_vertex(Z, rng.randrange(8))
            d.add_edge(w, x, HADAMARD)
            d.add_edge(x, rng.choice(list(d.kind)[:3]) if rng.random() < 0.5 else x, HADAMARD)
    elif name == "remove_id" and len(inner) >= 2:
        a, b = rng.sample(inner, 2)
        v = d.add_vertex(Z, rng.choice((0, 4)))
        d.add_edge(v, a, HADAMARD)
        d.add_edge(v, b, HADAMARD)
    elif name == "copy" and inner:
        v = d.add_vertex(Z, rng.choice((0, 4)))
        d.add_edge(v, rng.choice(inner), HADAMARD)
    elif name == "gadget_fuse" and len(inner) >= 1:
        targets = rng.sample(inner, rng.randint(1, min(3, len(inner))))
        for _ in range(2):
            d.add_gadget(targets, rng.choice((1, 3, 5, 7)))
    return d


def _odd(rng):
    return rng.choice((1, 3, 5, 7))


def dynamic_instance(kind: str, n: int, rng: random.Random, context: int = 3):
    """Closed reduced-form diagram with a dynamic pattern of scale n at vertex v.

    Cat3 hubs are 2-target phase gadgets on {v, b}; lone phases are T-like
    leaves on v. A few extra T-like spiders give the pattern a context.
    """
    if kind == "lone_phase":
        leaves, cats = n - 1, 0
    elif kind == "multi_cat3":
        leaves, cats = 0, n
    elif kind == "pair":
        leaves, cats = 1, n
    elif kind == "pair_phase":
        leaves, cats = n - 1, 1
    else:
        raise ValueError(kind)
    d = Diagram()
    v = d.add_vertex(Z, _odd(rng))
    ctx = [d.add_vertex(Z, _odd(rng)) for _ in range(context)]
    for c in ctx:
        d.add_edge(v, c, HADAMARD)
    for i in range(len(ctx)):
        for j in range(i + 1, len(ctx)):
            if rng.random() < 0.5:
                d.add_edge(ctx[i], ctx[j], HADAMARD)
    for _ in range(leaves):
        leaf = d.add_vertex(Z, _odd(rng))
        d.add_edge(v, leaf, HADAMARD)
    for _ in range(cats):
        hub = d.add_vertex(Z, rng.choice((0, 4)))
        a = d.add_vertex(Z, _odd(rng))
        b = d.add_vertex(Z, _odd(rng))
        d.add_edge(hub, v, HADAMARD)
        d.add_edge(hub, a, HADAMARD)
        d.add_edge(hub, b, HADAMARD)
        if ctx and rng.random() < 0.7:
            d.add_edge(b, rng.choice(ctx), HADAMARD)
    return d, v


def cat_instance(k: int, rng: random.Random, hub_phase: int = 0, context: int = 2):
    """Pauli hub with k T-like neighbours inside a small random context."""
    d = Diagram()
    hub = d.add_vertex(Z, hub_phase)
    legs = [d.add_vertex(Z, _odd(rng)) for _ in range(k)]
    for u in legs:
        d.add_edge(hub, u, HADAMARD)
    ctx = [d.add_vertex(Z, rng.randrange(8)) for _ in range(context)]
    for u in legs + ctx:
        for w in legs + ctx:
            if u < w and rng.random() < 0.3:
                d.add_edge(u, w, HADAMARD)
    return d, hub
