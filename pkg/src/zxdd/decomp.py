"""Stabilizer decompositions and the greedy selection strategy.

A decomposition replaces a closed diagram by a short sum of diagrams with
fewer T-like spiders. Cats and magic-5 rewrite a phase function directly;
the dynamic kinds are single vertex cuts whose neighbourhood guarantees a
large T-count drop once both terms are simplified.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .diagram import (
    HADAMARD, SIMPLE, B, Diagram, DiagramError, X, Z, is_pauli, is_t_like, t_count,
)
from .rewrite import _hz, _merge, full_simp


class StaleMatchError(DiagramError):
    """The diagram changed after the match was found."""


KINDS = ("cut", "cat3", "cat4", "cat5", "cat6", "magic5",
         "lone_phase", "multi_cat3", "pair", "pair_phase")
DYNAMIC_KINDS = ("lone_phase", "multi_cat3", "pair", "pair_phase")

# constants of the greedy algorithm
ALPHA_CAT = {4: 0.25, 6: 0.264, 5: 0.317, 3: 0.333}
ALPHA_MAGIC5 = 0.396
MAX_DYNAMIC_N = 32


def t_reduction(kind: str, n: int = 0) -> int:
    if kind == "cut":
        return 1
    if kind.startswith("cat"):
        return int(kind[3:])
    return {
        "magic5": 4,
        "lone_phase": n,
        "multi_cat3": 2 * n + 1,
        "pair": 2 * n + 2,
        "pair_phase": n + 2,
    }[kind]


def n_terms(kind: str) -> int:
    return 3 if kind in ("cat5", "cat6", "magic5") else 2


@dataclass(frozen=True)
class DecompMatch:
    kind: str
    vertices: tuple[int, ...]
    n: int = 0
    version: int = field(default=-1, compare=False)

    @property
    def terms(self) -> int:
        return n_terms(self.kind)

    @property
    def t_reduction(self) -> int:
        return t_reduction(self.kind, self.n)

    @property
    def alpha(self) -> float:
        return math.log2(self.terms) / self.t_reduction

    @property
    def cut_vertex(self) -> int:
        return self.vertices[0]


@dataclass(frozen=True)
class Strategy:
    name: str
    kinds: frozenset

    def allows(self, kind: str) -> bool:
        return kind in self.kinds


_CATS = frozenset({"cut", "cat3", "cat4", "cat5", "cat6", "magic5"})
STRATEGIES = {
    "cut_only": Strategy("cut_only", frozenset({"cut"})),
    "cats": Strategy("cats", _CATS),
    "single": Strategy("single", _CATS | {"lone_phase", "multi_cat3"}),
    "single_paired": Strategy("single_paired",
                              _CATS | {"lone_phase", "multi_cat3", "pair", "pair_phase"}),
}


def get_strategy(name: str | Strategy) -> Strategy:
    if isinstance(name, Strategy):
        return name
    key = name.replace("+", "_").replace("-", "_")
    if key not in STRATEGIES:
        raise ValueError(f"unknown strategy {name!r}; choose from {sorted(STRATEGIES)}")
    return STRATEGIES[key]


def _check_fresh(d: Diagram, m: DecompMatch) -> None:
    if m.version != d.version or any(v not in d.kind for v in m.vertices):
        raise StaleMatchError(f"{m.kind} match on {m.vertices} is stale")


# ---------------------------------------------------------------------------
# vertex cut
# ---------------------------------------------------------------------------

def apply_vertex_cut(d: Diagram, v: int) -> list[Diagram]:
    """Split on the value of spider v: two diagrams without v summing to d."""
    if v not in d.kind:
        raise DiagramError(f"no vertex {v}")
    if d.is_boundary(v):
        raise DiagramError(f"cannot cut boundary vertex {v}")
    if _hz(d, v):
        terms = []
        for j in (0, 1):
            t = d.copy()
            t.project(v, j)
            terms.append(t)
        return terms
    return _generic_cut(d, v)


def _generic_cut(d: Diagram, v: int) -> list[Diagram]:
    # Z(k) = sum_j w^(jk) |j..j>, and |j> = X(j pi) / sqrt2 on every leg;
    # an X spider is a Z spider with every leg's edge type flipped
    kind = d.kind[v]
    legs = list(d.adj[v].items())
    terms = []
    for j in (0, 1):
        t = d.copy()
        k = t.phase[v]
        t.remove_vertex(v)
        for w, et in legs:
            if kind == X:
                et = SIMPLE if et == HADAMARD else HADAMARD
            s = t.add_vertex(X, 4 * j)
            t.add_edge(s, w, et)
        t.mul_sqrt2(-len(legs))
        t.mul_omega(k * j)
        terms.append(t)
    return terms


# ---------------------------------------------------------------------------
# cat_k
# ---------------------------------------------------------------------------

# (family, sqrt2 power, w power) for psi_k(x) = [|x| even] w^|x|
_CAT_TERMS = {
    3: (("even", -1, 1), ("even_cg", -1, 7)),
    4: (("even", 0, 2), ("ghz", 1, 7)),
    5: (("even", -1, 3), ("even_cg", -1, 5), ("zero", 2, 0)),
    6: (("even", -1, 3), ("even_cg", -1, 5), ("ghz", 2, 0)),
}


def find_cats(d: Diagram) -> list[DecompMatch]:
    """Pauli hubs whose 3..6 neighbours are all T-like."""
    out = []
    adj, phase = d.adj, d.phase
    for h in sorted(d.kind):
        if not is_pauli(phase[h]) or not 3 <= len(adj[h]) <= 6 or not _hz(d, h):
            continue
        nb = sorted(adj[h])
        if all(is_t_like(phase[u]) and _hz(d, u) for u in nb):
            out.append(DecompMatch(f"cat{len(nb)}", (h, *nb), version=d.version))
    return out


def _cat_family(t: Diagram, legs: list[int], family: str) -> None:
    k = len(legs)
    if family in ("even", "even_cg"):
        e = t.add_vertex(Z, 0)
        for u in legs:
            t.add_edge(e, u, HADAMARD)
        t.mul_sqrt2(k - 2)
        if family == "even_cg":
            for i in range(k):
                for j in range(i + 1, k):
                    t.toggle(legs[i], legs[j])
    elif family == "ghz":
        a = legs[0]
        for b in legs[1:]:
            _merge(t, a, b)
        t.phase[a] = (t.phase[a] + 6) % 8
    elif family == "zero":
        for u in legs:
            t.project(u, 0)
    else:  # pragma: no cover
        raise ValueError(family)


def _expand_cat(base: Diagram, legs: list[int]) -> list[Diagram]:
    """Replace the factor psi_k(x_legs) of ``base`` by its stabilizer terms."""
    out = []
    for family, s2, om in _CAT_TERMS[len(legs)]:
        t = base.copy()
        _cat_family(t, legs, family)
        t.mul_sqrt2(s2)
        t.mul_omega(om)
        t.version += 1
        out.append(t)
    return out


def apply_cat(d: Diagram, m: DecompMatch) -> list[Diagram]:
    _check_fresh(d, m)
    hub, legs = m.vertices[0], list(m.vertices[1:])
    if len(legs) not in _CAT_TERMS or not is_pauli(d.phase[hub]):
        raise DiagramError(f"not a cat match: {m}")
    base = d.copy()
    if base.phase[hub]:
        base.flip(legs[0])
    # hub sums to 2 (1/sqrt2)^k [|x| even]; one w per leg completes psi_k
    base.remove_vertex(hub)
    base.mul_sqrt2(2 - len(legs))
    for u in legs:
        base.phase[u] = (base.phase[u] - 1) % 8
    return _expand_cat(base, legs)


# ---------------------------------------------------------------------------
# magic-5
# ---------------------------------------------------------------------------

def _t_spiders(d: Diagram) -> list[int]:
    return [v for v in sorted(d.kind) if is_t_like(d.phase[v]) and _hz(d, v)]


def find_magic5(d: Diagram) -> DecompMatch | None:
    ts = _t_spiders(d)
    if len(ts) < 5:
        return None
    ts.sort(key=lambda v: (-len(d.adj[v]), v))
    return DecompMatch("magic5", tuple(sorted(ts[:5])), version=d.version)


def apply_magic5(d: Diagram, m: DecompMatch | list[int]) -> list[Diagram]:
    """w^|x| on five spiders = sum_y w^-y psi_6(x, y), then the cat6 terms."""
    if not isinstance(m, DecompMatch):
        m = DecompMatch("magic5", tuple(m), version=d.version)
    _check_fresh(d, m)
    legs = list(m.vertices)
    if len(legs) != 5 or len(set(legs)) != 5:
        raise DiagramError("magic5 needs five distinct T-like spiders")
    if not all(is_t_like(d.phase[u]) and _hz(d, u) for u in legs):
        raise DiagramError("magic5 legs must be T-like spiders in graph-like form")
    base = d.copy()
    for u in legs:
        base.phase[u] = (base.phase[u] - 1) % 8
    y = base.add_vertex(Z, 7)
    return _expand_cat(base, legs + [y])


# ---------------------------------------------------------------------------
# dynamic decompositions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Gain:
    v: int
    t_v: int
    lone: tuple[int, ...]
    cat3: tuple[int, ...]


def _gain(d: Diagram, v: int, cap: int) -> _Gain:
    """Guaranteed T-drop pieces when spider v is cut.

    lone: T-like degree-1 neighbours (isolated, hence evaluated, after the cut).
    cat3: Pauli degree-3 neighbours whose other two neighbours are T-like;
    after the cut each becomes an identity that fuses two T-like spiders.
    Their T-like partners are kept disjoint so every pair counts fully.
    """
    adj, phase = d.adj, d.phase
    nb = sorted(adj[v])
    lone = tuple(w for w in nb if len(adj[w]) == 1 and is_t_like(phase[w]))[:cap]
    used = {v, *lone}
    cats = []
    for c in nb:
        if len(cats) >= cap:
            break
        if len(adj[c]) != 3 or not is_pauli(phase[c]) or not _hz(d, c):
            continue
        a, b = sorted(w for w in adj[c] if w != v)
        if a in used or b in used:
            continue
        if not (is_t_like(phase[a]) and is_t_like(phase[b]) and _hz(d, a) and _hz(d, b)):
            continue
        used.update((a, b))
        cats.append(c)
    return _Gain(v, int(is_t_like(phase[v])), lone, tuple(cats))


def _dynamic_from_gain(g: _Gain, kind: str, version: int) -> DecompMatch | None:
    L, C, tv = len(g.lone), len(g.cat3), g.t_v
    if kind == "lone_phase":
        n = tv + L
        ok = n >= 1
    elif kind == "multi_cat3":
        n = C
        ok = tv and C >= 1
    elif kind == "pair":
        n = C
        ok = tv and C >= 1 and L >= 1
    elif kind == "pair_phase":
        n = tv + L
        ok = C >= 1 and n >= 1
    else:
        raise ValueError(f"unknown dynamic kind {kind!r}")
    if not ok:
        return None
    return DecompMatch(kind, (g.v, *g.lone, *g.cat3), n=n, version=version)


def find_dynamic(d: Diagram, kind: str, cap: int = MAX_DYNAMIC_N) -> list[DecompMatch]:
    out = []
    for v in sorted(d.kind):
        if not _hz(d, v):
            continue
        m = _dynamic_from_gain(_gain(d, v, cap), kind, d.version)
        if m is not None:
            out.append(m)
    return out


def apply_dynamic(d: Diagram, m: DecompMatch, check=None) -> list[Diagram]:
    """Cut the matched vertex and simplify both terms.

    Raises AssertionError if a term keeps more T-like spiders than the
    match promised, which would mean the matcher is wrong.
    """
    _check_fresh(d, m)
    if m.kind not in DYNAMIC_KINDS:
        raise DiagramError(f"{m.kind} is not a dynamic decomposition")
    t0 = t_count(d)
    terms = apply_vertex_cut(d, m.cut_vertex)
    for t in terms:
        full_simp(t, check)
        assert t_count(t) <= t0 - m.t_reduction, (
            f"{m.kind}(n={m.n}) at {m.cut_vertex}: T-count {t0} -> {t_count(t)}, "
            f"promised reduction {m.t_reduction}")
    return terms


# ---------------------------------------------------------------------------
# strategy
# ---------------------------------------------------------------------------

def _fallback_cut(d: Diagram) -> DecompMatch:
    ts = [v for v in d.kind if is_t_like(d.phase[v]) and d.kind[v] != B]
    if not ts:
        raise DiagramError("no T-like spider left to cut")
    v = min(ts, key=lambda u: (-len(d.adj[u]), u))
    return DecompMatch("cut", (v,), version=d.version)


def greedy_select(d: Diagram, strategy: str | Strategy = "single_paired",
                  cap: int = MAX_DYNAMIC_N) -> DecompMatch:
    """Pick the next decomposition for a diagram in reduced gadget form."""
    strategy = get_strategy(strategy)
    if t_count(d) < 1:
        raise DiagramError("nothing to decompose: T-count is 0")
    if strategy.kinds == {"cut"}:
        return _fallback_cut(d)

    best_cat = None
    for m in find_cats(d):
        if not strategy.allows(m.kind):
            continue
        if best_cat is None or ALPHA_CAT[len(m.vertices) - 1] < ALPHA_CAT[len(best_cat.vertices) - 1]:
            best_cat = m
    magic = find_magic5(d) if strategy.allows("magic5") else None
    if best_cat is not None:
        alpha_best = ALPHA_CAT[len(best_cat.vertices) - 1]
    elif magic is not None:
        alpha_best = ALPHA_MAGIC5
    else:
        alpha_best = 1.0

    dyn_kinds = [k for k in DYNAMIC_KINDS if strategy.allows(k)]
    best_dyn, best_key = None, None
    if dyn_kinds:
        for v in sorted(d.kind):
            if not _hz(d, v):
                continue
            g = _gain(d, v, cap)
            for kind in dyn_kinds:
                m = _dynamic_from_gain(g, kind, d.version)
                if m is None:
                    continue
                key = (m.alpha, v)
                if best_key is None or key < best_key:
                    best_dyn, best_key = m, key
    if best_dyn is not None and best_dyn.alpha < alpha_best:
        return best_dyn
    if best_cat is not None:
        return best_cat
    if magic is not None:
        return magic
    return _fallback_cut(d)


def apply_match(d: Diagram, m: DecompMatch, check=None) -> list[Diagram]:
    """Terms of any match; dynamic terms come back already simplified."""
    if m.kind == "cut":
        _check_fresh(d, m)
        return apply_vertex_cut(d, m.cut_vertex)
    if m.kind.startswith("cat"):
        return apply_cat(d, m)
    if m.kind == "magic5":
        return apply_magic5(d, m)
    return apply_dynamic(d, m, check)
