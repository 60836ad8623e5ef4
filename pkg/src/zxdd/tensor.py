"""Dense tensor semantics for small diagrams. Ground truth for the tests."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagram import B, HADAMARD, X, Diagram, DiagramError

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_OMEGA = np.exp(1j * np.pi / 4)


@dataclass
class TensorValue:
    """Axes ordered outputs first, then inputs; one axis of size 2 per endpoint."""

    entries: np.ndarray
    n_outputs: int
    n_inputs: int

    @property
    def shape(self) -> tuple[int, ...]:
        return self.entries.shape

    def matrix(self) -> np.ndarray:
        return self.entries.reshape(2**self.n_outputs, 2**self.n_inputs)

    def scalar(self) -> complex:
        if self.entries.ndim:
            raise DiagramError("diagram is not closed")
        return complex(self.entries)


def _spider_tensor(kind, k: int, deg: int) -> np.ndarray:
    t = np.zeros((2,) * deg, dtype=complex)
    t[(0,) * deg] += 1
    t[(1,) * deg] += _OMEGA**k
    if kind == X:
        for axis in range(deg):
            t = np.moveaxis(np.tensordot(_H, t, axes=([1], [axis])), 0, axis)
    return t


def _contract(a, la, b, lb, keep):
    """Contract two labelled tensors, summing shared labels not in ``keep``."""
    labels = {lab: i for i, lab in enumerate(dict.fromkeys(la + lb))}
    out = [lab for lab in dict.fromkeys(la + lb) if lab in keep or (lab in la) != (lab in lb)]
    res = np.einsum(a, [labels[x] for x in la], b, [labels[x] for x in lb],
                    [labels[x] for x in out])
    return res, out


def to_tensor(d: Diagram, max_endpoints: int = 12, max_vertices: int = 24) -> TensorValue:
    n_open = len(d.inputs) + len(d.outputs)
    if n_open > max_endpoints:
        raise DiagramError(f"{n_open} open endpoints exceeds bound {max_endpoints}")
    if d.num_vertices() > max_vertices:
        raise DiagramError(f"{d.num_vertices()} vertices exceeds bound {max_vertices}")
    if any(d.kind[v] == B for v in d.vertices()) and n_open != sum(
            1 for v in d.vertices() if d.kind[v] == B):
        raise DiagramError("boundary vertex not listed as input or output")

    if d.scalar.is_zero:
        n = len(d.outputs) + len(d.inputs)
        return TensorValue(np.zeros((2,) * n, dtype=complex), len(d.outputs), len(d.inputs))

    # one label per edge; a boundary vertex exposes its edge label as open.
    edge_label = {}
    for i, (u, v, _) in enumerate(d.edges()):
        edge_label[(u, v)] = edge_label[(v, u)] = i
    open_label = {}
    tensors: list[tuple[np.ndarray, list]] = []
    for idx, bv in enumerate(d.outputs + d.inputs):
        if d.degree(bv) != 1:
            raise DiagramError(f"boundary {bv} has degree {d.degree(bv)}")
        open_label[bv] = ("open", idx)
    for u, v, et in d.edges():
        lab = edge_label[(u, v)]
        ub, vb = d.kind[u] == B, d.kind[v] == B
        if ub and vb:
            m = _H if et == HADAMARD else np.eye(2, dtype=complex)
            tensors.append((m, [open_label[u], open_label[v]]))
        elif ub or vb:
            bnd = u if ub else v
            m = _H if et == HADAMARD else np.eye(2, dtype=complex)
            tensors.append((m, [open_label[bnd], lab]))
        elif et == HADAMARD:
            tensors.append((_H, [lab, ("h", lab)]))
    for v in d.vertices():
        if d.kind[v] == B:
            continue
        labs = []
        for w in d.adj[v]:
            lab = edge_label[(v, w)]
            # the far side of a Hadamard edge is taken by the larger handle
            if d.adj[v][w] == HADAMARD and d.kind[w] != B and v > w:
                lab = ("h", lab)
            labs.append(lab)
        tensors.append((_spider_tensor(d.kind[v], d.phase[v], len(labs)), labs))

    keep = {open_label[bv] for bv in d.outputs + d.inputs}
    result, labels = _greedy(tensors, keep)
    order = [open_label[bv] for bv in d.outputs + d.inputs]
    if order:
        result = np.transpose(result, [labels.index(x) for x in order])
    result = result * complex(d.scalar)
    return TensorValue(np.asarray(result), len(d.outputs), len(d.inputs))


def _greedy(tensors, keep):
    if not tensors:
        return np.array(1, dtype=complex), []
    pool = list(tensors)
    cur, cl = pool.pop(0)
    while pool:
        # absorb the tensor sharing labels that keeps the result smallest
        best, best_rank = 0, None
        cs = set(cl)
        for i, (_, lb) in enumerate(pool):
            shared = cs.intersection(lb)
            rank = len(cs) + len(lb) - 2 * len(shared - keep)
            score = (not shared, rank)
            if best_rank is None or score < best_rank:
                best, best_rank = i, score
        t, lb = pool.pop(best)
        cur, cl = _contract(cur, cl, t, lb, keep)
    return cur, cl
