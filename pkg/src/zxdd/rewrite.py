"""Clifford simplification down to reduced gadget form.

Every rule is an exact identity including the scalar. The derivations all use
the phase-polynomial reading of a graph-like diagram (see ``diagram``); e.g.
local complementation is 1 + i(-1)^s = sqrt2 w i^(-s) (-1)^(sum_{a<b} x_a x_b)
and the pivot is sum_{x_u, x_v} (-1)^(x_u x_v + x_u S_u + x_v S_v) = 2 (-1)^(S_u S_v).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .diagram import (
    HADAMARD, SIMPLE, B, Diagram, DiagramError, X, Z, is_pauli, is_proper_clifford, t_count,
)
from .scalar import Scalar


class Interrupted(Exception):
    """Raised by a cooperative ``check`` callback to abandon simplification."""


@dataclass(frozen=True)
class RewriteRule:
    name: str
    matcher: Callable[[Diagram], list]
    applier: Callable[[Diagram, tuple], None]


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _hz(d: Diagram, v: int) -> bool:
    """v is a Z spider whose edges are all Hadamard edges to Z spiders."""
    kind = d.kind
    if kind[v] != Z:
        return False
    for w, et in d.adj[v].items():
        if et != HADAMARD or kind[w] != Z:
            return False
    return True


def _merge(d: Diagram, a: int, b: int) -> None:
    """Identify Z spiders a and b (x_a = x_b); b is deleted."""
    et = d.edge_type(a, b)
    if et is not None:
        d.remove_edge(a, b)
        d.add_edge(a, a, et)  # becomes a self-loop
    d.phase[a] = (d.phase[a] + d.phase[b]) % 8
    for w, et in list(d.adj[b].items()):
        d.add_edge(a, w, et)
    d.remove_vertex(b)


def _clear(d: Diagram) -> None:
    # boundaries stay so an open diagram keeps its shape; they become disconnected
    for v in list(d.kind):
        if d.kind[v] != B:
            d.remove_vertex(v)
    d.scalar = Scalar.zero()


# ---------------------------------------------------------------------------
# graph-like form
# ---------------------------------------------------------------------------

def fuse_spiders(d: Diagram, v1: int, v2: int) -> Diagram:
    if v1 == v2 or d.kind[v1] == B or d.kind[v1] != d.kind[v2]:
        raise DiagramError(f"cannot fuse {v1} and {v2}: colours differ or not spiders")
    if d.edge_type(v1, v2) != SIMPLE:
        raise DiagramError(f"cannot fuse {v1} and {v2}: no simple edge")
    _merge(d, v1, v2)
    return d


def match_fuse(d: Diagram) -> list[tuple[int, int]]:
    kind = d.kind
    return [(u, v) for u, v, et in d.edges()
            if et == SIMPLE and kind[u] != B and kind[u] == kind[v]]


def to_graph_like(d: Diagram) -> Diagram:
    """Colour-change X spiders, fuse simple Z-Z edges, normalise boundary edges."""
    kind, adj = d.kind, d.adj
    for v in [v for v, k in kind.items() if k == X]:
        kind[v] = Z
        for w, et in adj[v].items():
            new = SIMPLE if et == HADAMARD else HADAMARD
            adj[v][w] = new
            adj[w][v] = new
        d.version += 1
    stack = [v for v, k in kind.items() if k == Z]
    while stack:
        v = stack.pop()
        if v not in kind:
            continue
        for w, et in adj[v].items():
            if et == SIMPLE and kind[w] == Z:
                _merge(d, v, w)
                stack.append(v)
                break
    for bv in [v for v, k in kind.items() if k == B]:
        (s, et), = adj[bv].items()
        if et == HADAMARD and kind[s] == Z:
            z = d.add_vertex(Z, 0)
            d.remove_edge(bv, s)
            d.add_edge(bv, z, SIMPLE)
            d.add_edge(z, s, HADAMARD)
    return d


def is_graph_like(d: Diagram) -> bool:
    kind = d.kind
    if any(k == X for k in kind.values()):
        return False
    for u, v, et in d.edges():
        if kind[u] == Z and kind[v] == Z and et != HADAMARD:
            return False
        if (kind[u] == B) != (kind[v] == B) and et != SIMPLE:
            return False
    return True


# ---------------------------------------------------------------------------
# local complementation and pivoting
# ---------------------------------------------------------------------------

def match_lcomp(d: Diagram) -> list[int]:
    return [v for v in sorted(d.kind) if is_proper_clifford(d.phase[v]) and _hz(d, v)]


def local_complement(d: Diagram, v: int) -> Diagram:
    k = d.phase[v]
    if not (is_proper_clifford(k) and _hz(d, v)):
        raise DiagramError(f"local complementation does not apply at {v}")
    nb = sorted(d.adj[v])
    n = len(nb)
    d.remove_vertex(v)
    d.mul_sqrt2(1 - n)
    d.mul_omega(1 if k == 2 else -1)
    phase = d.phase
    for w in nb:
        phase[w] = (phase[w] - k) % 8
    for i in range(n):
        for j in range(i + 1, n):
            d.toggle(nb[i], nb[j])
    return d


def _pivot_ok(d: Diagram, u: int, v: int) -> bool:
    return (u != v and is_pauli(d.phase[u]) and is_pauli(d.phase[v])
            and d.edge_type(u, v) == HADAMARD and _hz(d, u) and _hz(d, v))


def match_pivot(d: Diagram) -> list[tuple[int, int]]:
    return [(u, v) for u, v, _ in sorted(d.edges()) if _pivot_ok(d, u, v)]


def pivot(d: Diagram, u: int, v: int) -> Diagram:
    if not _pivot_ok(d, u, v):
        raise DiagramError(f"pivot does not apply at ({u}, {v})")
    nu = set(d.adj[u]) - {v}
    nv = set(d.adj[v]) - {u}
    a_set = sorted(nu - nv)
    b_set = sorted(nv - nu)
    c_set = sorted(nu & nv)
    pu, pv = d.phase[u], d.phase[v]
    d.mul_sqrt2(2 - (len(d.adj[u]) + len(d.adj[v]) - 1))
    if pu and pv:
        d.mul_omega(4)
    d.remove_vertex(u)
    d.remove_vertex(v)
    phase = d.phase
    for w in c_set:
        phase[w] = (phase[w] + 4 + pu + pv) % 8
    for w in b_set:
        phase[w] = (phase[w] + pu) % 8
    for w in a_set:
        phase[w] = (phase[w] + pv) % 8
    for x in a_set:
        for y in b_set:
            d.toggle(x, y)
        for y in c_set:
            d.toggle(x, y)
    for x in b_set:
        for y in c_set:
            d.toggle(x, y)
    return d


def _is_hub_like(d: Diagram, u: int) -> bool:
    adj = d.adj
    return any(len(adj[w]) == 1 for w in adj[u])


def _pivot_gadget_ok(d: Diagram, u: int, w: int) -> bool:
    return (is_pauli(d.phase[u]) and not is_pauli(d.phase[w]) and len(d.adj[w]) > 1
            and d.edge_type(u, w) == HADAMARD and _hz(d, u) and _hz(d, w)
            and not _is_hub_like(d, u))


def match_pivot_gadget(d: Diagram) -> list[tuple[int, int]]:
    out = []
    for u in sorted(d.kind):
        if d.kind[u] != Z or not is_pauli(d.phase[u]):
            continue
        for w in sorted(d.adj[u]):
            if _pivot_gadget_ok(d, u, w):
                out.append((u, w))
                break
    return out


def pivot_gadget(d: Diagram, u: int, w: int) -> Diagram:
    """Move w's phase onto a fresh gadget, then pivot the now-Pauli pair."""
    if not _pivot_gadget_ok(d, u, w):
        raise DiagramError(f"gadget pivot does not apply at ({u}, {w})")
    hub = d.add_vertex(Z, 0)
    leaf = d.add_vertex(Z, d.phase[w])
    d.set_phase(w, 0)
    d.add_edge(w, hub, HADAMARD)
    d.add_edge(hub, leaf, HADAMARD)
    return pivot(d, u, w)


# ---------------------------------------------------------------------------
# identity / copy removal
# ---------------------------------------------------------------------------

def remove_scalar_spider(d: Diagram, v: int) -> Diagram:
    if d.kind[v] != Z or d.adj[v]:
        raise DiagramError(f"{v} is not an isolated Z spider")
    d.mul_scalar(Scalar.one_plus_omega(d.phase[v]))
    d.remove_vertex(v)
    return d


def _remove_id_ok(d: Diagram, v: int) -> bool:
    if not (is_pauli(d.phase[v]) and len(d.adj[v]) == 2 and _hz(d, v)):
        return False
    if d.phase[v] == 0:
        return True
    return any(_hz(d, w) for w in d.adj[v])


def remove_id(d: Diagram, v: int) -> Diagram:
    """Degree-2 Pauli spider between Z spiders a, b forces x_a = x_b (+ phase/pi)."""
    if not _remove_id_ok(d, v):
        raise DiagramError(f"identity removal does not apply at {v}")
    a, b = sorted(d.adj[v])
    if d.phase[v]:
        if _hz(d, b):
            d.flip(b)
        else:
            d.flip(a)
            a, b = b, a
    d.remove_vertex(v)
    _merge(d, a, b)
    return d


def _copy_ok(d: Diagram, v: int) -> bool:
    if not (is_pauli(d.phase[v]) and len(d.adj[v]) == 1 and _hz(d, v)):
        return False
    (a,) = d.adj[v]
    return _hz(d, a)


def remove_copy(d: Diagram, v: int) -> Diagram:
    """Degree-1 Pauli spider fixes its neighbour to a basis value."""
    if not _copy_ok(d, v):
        raise DiagramError(f"copy removal does not apply at {v}")
    (a,) = d.adj[v]
    bit = d.phase[v] // 4
    d.remove_vertex(v)
    d.mul_sqrt2(1)
    d.project(a, bit)
    return d


def match_remove_id(d: Diagram) -> list[int]:
    return [v for v in sorted(d.kind) if d.kind[v] == Z and _remove_id_ok(d, v)]


def match_copy(d: Diagram) -> list[int]:
    return [v for v in sorted(d.kind) if d.kind[v] == Z and _copy_ok(d, v)]


def _basic(d: Diagram, check=None) -> bool:
    """Isolated spiders, Pauli copies and Pauli identities, to fixpoint."""
    kind, adj, phase = d.kind, d.adj, d.phase
    changed = False
    stack = sorted(kind, reverse=True)
    steps = 0
    while stack:
        v = stack.pop()
        if v not in kind or kind[v] != Z:
            continue
        deg = len(adj[v])
        if deg == 0:
            remove_scalar_spider(d, v)
            changed = True
            if d._scalar.is_zero:
                _clear(d)
                return True
            continue
        if phase[v] % 4 or deg > 2:
            continue
        if deg == 1 and _copy_ok(d, v):
            (a,) = adj[v]
            touched = [w for w in adj[a] if w != v]
            remove_copy(d, v)
            stack.extend(touched)
            changed = True
        elif deg == 2 and _remove_id_ok(d, v):
            a, b = adj[v]
            remove_id(d, v)
            keep = a if a in kind else b
            stack.append(keep)
            stack.extend(adj[keep])
            changed = True
        else:
            continue
        steps += 1
        if check is not None and steps % 64 == 0:
            check()
    return changed


# ---------------------------------------------------------------------------
# phase gadgets
# ---------------------------------------------------------------------------

def find_gadgets(d: Diagram) -> dict[int, tuple[int, frozenset]]:
    """hub -> (leaf, targets) for every phase gadget in graph-like form.

    A leaf is a degree-1 non-Pauli spider whose single neighbour (the hub)
    is a Pauli spider with Z/Hadamard edges only. Hubs with several
    leaves report the lowest-handle one.
    """
    adj, phase, kind = d.adj, d.phase, d.kind
    out = {}
    for leaf in sorted(kind):
        if kind[leaf] != Z or len(adj[leaf]) != 1 or is_pauli(phase[leaf]):
            continue
        (hub,) = adj[leaf]
        if hub in out or not is_pauli(phase[hub]) or len(adj[hub]) < 2:
            continue
        if not (_hz(d, hub) and _hz(d, leaf)):
            continue
        out[hub] = (leaf, frozenset(adj[hub]) - {leaf})
    return out


def match_gadget_fuse(d: Diagram) -> list[tuple[int, ...]]:
    groups: dict[frozenset, list[int]] = {}
    for hub, (_, targets) in find_gadgets(d).items():
        groups.setdefault(targets, []).append(hub)
    return [tuple(sorted(h)) for h in groups.values() if len(h) > 1]


def gadget_fuse(d: Diagram) -> Diagram:
    _gadget_fuse(d)
    return d


def _gadget_fuse(d: Diagram) -> bool:
    gadgets = find_gadgets(d)
    changed = False
    groups: dict[frozenset, list[int]] = {}
    for hub, (leaf, targets) in gadgets.items():
        if d.phase[hub]:
            # x_leaf -> 1 - x_leaf moves the pi from the hub onto the scalar
            d.flip(leaf)
            changed = True
        groups.setdefault(targets, []).append(hub)
    for targets, hubs in groups.items():
        n = len(targets)
        keep = hubs[0]
        kleaf = gadgets[keep][0]
        for hub in hubs[1:]:
            leaf = gadgets[hub][0]
            d.phase[kleaf] = (d.phase[kleaf] + d.phase[leaf]) % 8
            d.remove_vertex(leaf)
            d.remove_vertex(hub)
            d.mul_sqrt2(1 - n)
            changed = True
        if d.phase[kleaf] == 0:
            d.remove_vertex(kleaf)
            d.remove_vertex(keep)
            d.mul_sqrt2(1 - n)
            changed = True
    if changed:
        d.version += 1
    return changed


# ---------------------------------------------------------------------------
# passes and the full pipeline
# ---------------------------------------------------------------------------

def _lcomp_pass(d: Diagram, check=None) -> bool:
    changed = False
    for v in match_lcomp(d):
        if v in d.kind and is_proper_clifford(d.phase[v]) and _hz(d, v):
            local_complement(d, v)
            changed = True
            if check is not None:
                check()
    return changed


def _pivot_pass(d: Diagram, check=None) -> bool:
    changed = False
    kind = d.kind
    for u in sorted(kind):
        if u not in kind or kind[u] != Z or not is_pauli(d.phase[u]) or not _hz(d, u):
            continue
        for v in sorted(d.adj[u]):
            if _pivot_ok(d, u, v):
                pivot(d, u, v)
                changed = True
                if check is not None:
                    check()
                break
    return changed


def _pivot_gadget_pass(d: Diagram, check=None) -> bool:
    changed = False
    kind = d.kind
    for u in sorted(kind):
        if u not in kind or kind[u] != Z or not is_pauli(d.phase[u]):
            continue
        for w in sorted(d.adj[u]):
            if _pivot_gadget_ok(d, u, w):
                pivot_gadget(d, u, w)
                changed = True
                if check is not None:
                    check()
                break
    return changed


def full_simp(d: Diagram, check: Callable[[], None] | None = None) -> Diagram:
    """Simplify ``d`` in place to reduced gadget form and return it.

    ``check`` is called between rule applications and may raise to cancel.
    """
    to_graph_like(d)
    while True:
        if d._scalar.is_zero:
            _clear(d)
            return d
        if check is not None:
            check()
        changed = _basic(d, check)
        changed |= _lcomp_pass(d, check)
        changed |= _pivot_pass(d, check)
        if changed:
            continue
        if not (_pivot_gadget_pass(d, check) | _gadget_fuse(d)):
            break
    if d._scalar.is_zero:
        _clear(d)
    return d


def remaining_matches(d: Diagram) -> dict[str, list]:
    """Every rule match still present; empty lists at a full_simp fixpoint."""
    return {
        "fuse": match_fuse(d),
        "copy": match_copy(d),
        "remove_id": match_remove_id(d),
        "isolated": [v for v in d.kind if d.kind[v] == Z and not d.adj[v]],
        "lcomp": match_lcomp(d),
        "pivot": match_pivot(d),
        "pivot_gadget": match_pivot_gadget(d),
        "gadget_fuse": match_gadget_fuse(d),
    }


RULES = {
    "fuse": RewriteRule("fuse", match_fuse, lambda d, m: fuse_spiders(d, *m)),
    "copy": RewriteRule("copy", match_copy, remove_copy),
    "remove_id": RewriteRule("remove_id", match_remove_id, remove_id),
    "lcomp": RewriteRule("lcomp", match_lcomp, local_complement),
    "pivot": RewriteRule("pivot", match_pivot, lambda d, m: pivot(d, *m)),
    "pivot_gadget": RewriteRule("pivot_gadget", match_pivot_gadget,
                                lambda d, m: pivot_gadget(d, *m)),
    "gadget_fuse": RewriteRule("gadget_fuse", match_gadget_fuse, lambda d, m: gadget_fuse(d)),
}


# ---------------------------------------------------------------------------
# evaluation of closed Clifford diagrams
# ---------------------------------------------------------------------------

BRUTE_FORCE_LIMIT = 22


def brute_force_scalar(d: Diagram) -> Scalar:
    """Exact value of a closed diagram by summing its phase polynomial."""
    if not d.is_closed():
        raise DiagramError("diagram has open boundaries")
    g = d.copy()
    to_graph_like(g)
    verts = sorted(g.kind)
    n = len(verts)
    if n > BRUTE_FORCE_LIMIT:
        raise DiagramError(f"{n} spiders is too many to sum directly")
    index = {v: i for i, v in enumerate(verts)}
    if n == 0:
        return g.scalar
    xs = ((np.arange(2**n)[:, None] >> np.arange(n)[None, :]) & 1).astype(np.int64)
    expo = xs @ np.array([g.phase[v] for v in verts], dtype=np.int64)
    edges = list(g.edges())
    for u, v, _ in edges:
        expo += 4 * (xs[:, index[u]] & xs[:, index[v]])
    counts = np.bincount(expo % 8, minlength=8)
    coeffs = tuple(int(counts[r] - counts[r + 4]) for r in range(4))
    return (g.scalar * Scalar(0, coeffs)).mul_sqrt2(-len(edges))


def clifford_eval(d: Diagram) -> Scalar:
    """Exact value of a closed diagram with no T-like spiders."""
    if not d.is_closed():
        raise DiagramError("clifford_eval needs a closed diagram")
    if t_count(d):
        raise DiagramError(f"clifford_eval needs T-count 0, got {t_count(d)}")
    g = full_simp(d.copy())
    if g.num_vertices() == 0:
        return g.scalar
    return brute_force_scalar(g)
