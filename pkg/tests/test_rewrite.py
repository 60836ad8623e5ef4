import random

import pytest

from helpers import (
    assert_close, random_circuit, random_graph_like, random_zx, value, with_rule_match,
)
from zxdd.circuits import Circuit, gen_ccz_class
from zxdd.diagram import HADAMARD, SIMPLE, X, Z, Diagram, DiagramError, from_circuit, plug_basis, t_count
from zxdd.engine import oracle_amplitude
from zxdd.rewrite import (
    RULES, brute_force_scalar, clifford_eval, find_gadgets, full_simp, fuse_spiders,
    gadget_fuse, is_graph_like, local_complement, match_lcomp, match_pivot, pivot,
    remaining_matches, to_graph_like,
)
from zxdd.scalar import Scalar

SEEDS = range(40)


# -- graph-like form ---------------------------------------------------------

def test_x_chain_colour_change():
    d = Diagram()
    a, b, c = (d.add_vertex(X, k) for k in (1, 2, 3))
    d.add_edge(a, b)
    d.add_edge(b, c, HADAMARD)
    before = value(d)
    to_graph_like(d)
    assert is_graph_like(d)
    assert all(d.kind[v] == Z for v in d.vertices())
    assert_close(value(d), before)


def test_double_hadamard_edge_resolves():
    d = Diagram()
    a, b = d.add_vertex(Z, 1), d.add_vertex(Z, 2)
    ref = value(d) * 0.5  # two H-edges between Z spiders cancel to 1/2
    d.add_edge(a, b, HADAMARD)
    d.add_edge(a, b, HADAMARD)
    assert d.edge_type(a, b) is None
    assert_close(value(d), ref)


def test_graph_like_is_idempotent():
    rng = random.Random(0)
    d = to_graph_like(random_zx(rng, 8, 3))
    snapshot = (dict(d.phase), {v: dict(n) for v, n in d.adj.items()}, d.scalar)
    to_graph_like(d)
    assert snapshot == (dict(d.phase), {v: dict(n) for v, n in d.adj.items()}, d.scalar)


@pytest.mark.parametrize("seed", SEEDS)
def test_to_graph_like_preserves_tensor(seed):
    rng = random.Random(seed)
    d = random_zx(rng, rng.randint(2, 8), rng.randint(0, 4))
    before = value(d)
    to_graph_like(d)
    assert is_graph_like(d)
    assert_close(value(d), before)


# -- fusion ------------------------------------------------------------------

def test_fuse_phases_add():
    d = Diagram()
    a, b = d.add_vertex(Z, 1), d.add_vertex(Z, 1)
    d.add_edge(a, b)
    fuse_spiders(d, a, b)
    assert d.phase[a] == 2 and b not in d.kind
    e = Diagram()
    a, b = e.add_vertex(Z, 5), e.add_vertex(Z, 0)
    e.add_edge(a, b)
    assert fuse_spiders(e, a, b).phase[a] == 5


def test_fuse_rejects_bad_pairs():
    d = Diagram()
    a, b = d.add_vertex(Z), d.add_vertex(X)
    d.add_edge(a, b)
    with pytest.raises(DiagramError):
        fuse_spiders(d, a, b)


@pytest.mark.parametrize("seed", SEEDS)
def test_fuse_preserves_tensor(seed):
    rng = random.Random(seed)
    d = random_zx(rng, 8, rng.randint(0, 3))
    ms = RULES["fuse"].matcher(d)
    if not ms:
        pytest.skip("no fusion")
    before = value(d)
    n = d.num_vertices()
    fuse_spiders(d, *rng.choice(ms))
    assert d.num_vertices() == n - 1
    assert_close(value(d), before)


# -- local complementation and pivots ---------------------------------------

def test_lcomp_two_neighbours():
    d = Diagram()
    v = d.add_vertex(Z, 2)
    a, b = d.add_vertex(Z, 1), d.add_vertex(Z, 3)
    d.add_edge(v, a, HADAMARD)
    d.add_edge(v, b, HADAMARD)
    before = value(d)
    local_complement(d, v)
    assert v not in d.kind and d.edge_type(a, b) == HADAMARD
    assert (d.phase[a], d.phase[b]) == (7, 1)
    assert_close(value(d), before)


def test_lcomp_no_match_without_proper_clifford():
    d = random_graph_like(random.Random(1), 8, phases=[0, 1, 3, 4, 5, 7])
    assert match_lcomp(d) == []


def test_repeated_lcomp_terminates():
    d = random_graph_like(random.Random(2), 10, phases=[2, 6])
    n = d.num_vertices()
    while match_lcomp(d):
        local_complement(d, match_lcomp(d)[0])
        assert d.num_vertices() < n
        n = d.num_vertices()


def test_pivot_no_match_on_t_only():
    d = random_graph_like(random.Random(3), 8, phases=[1, 3, 5, 7])
    assert match_pivot(d) == []


def test_pivot_on_cz_diagram():
    c = Circuit(2).add("H", 0).add("CZ", 0, 1).add("H", 1).add("CZ", 0, 1).add("Z", 1)
    d = to_graph_like(from_circuit(c))
    before = value(d)
    for v in d.vertices():
        if d.kind[v] == Z and d.is_interior(v):
            d.phase[v] = 0
    d2 = to_graph_like(from_circuit(c))
    ms = match_pivot(d2)
    if ms:
        pivot(d2, *ms[0])
    assert_close(value(d2), before)


@pytest.mark.parametrize("name", ["lcomp", "pivot", "pivot_gadget", "remove_id", "copy",
                                  "gadget_fuse"])
@pytest.mark.parametrize("seed", SEEDS)
def test_rule_preserves_tensor(name, seed):
    rng = random.Random(f"{name}:{seed}")
    d = with_rule_match(rng, name)
    ms = RULES[name].matcher(d)
    if not ms:
        pytest.skip("no match generated")
    before = value(d)
    RULES[name].applier(d, rng.choice(ms))
    assert_close(value(d), before)


# -- gadgets -----------------------------------------------------------------

def _targets(n=2):
    d = Diagram()
    ts = [d.add_vertex(Z, 0) for _ in range(n)]
    return d, ts


def test_two_t_gadgets_fuse_to_s_gadget():
    d, ts = _targets()
    d.add_gadget(ts, 1)
    d.add_gadget(ts, 1)
    before = value(d)
    gadget_fuse(d)
    gs = find_gadgets(d)
    assert len(gs) == 1
    ((leaf, targets),) = gs.values()
    assert d.phase[leaf] == 2 and targets == frozenset(ts)
    assert_close(value(d), before)


def test_cancelling_gadgets_vanish():
    d, ts = _targets(3)
    d.add_gadget(ts, 3)
    d.add_gadget(ts, 5)
    before = value(d)
    gadget_fuse(d)
    assert d.num_vertices() == 3
    assert_close(value(d), before)


@pytest.mark.parametrize("seed", range(20))
def test_three_random_gadgets(seed):
    rng = random.Random(seed)
    d, ts = _targets(4)
    for _ in range(3):
        d.add_gadget(rng.sample(ts, rng.randint(1, 3)) if rng.random() < 0.5 else ts[:2],
                     rng.randrange(1, 8))
    hub = next(iter(find_gadgets(d)))
    d.phase[hub] = 4  # pi hubs are normalised first
    before = value(d)
    gadget_fuse(d)
    assert_close(value(d), before)


# -- full_simp ---------------------------------------------------------------

@pytest.mark.parametrize("seed", SEEDS)
def test_full_simp_preserves_and_reaches_fixpoint(seed):
    rng = random.Random(seed)
    d = random_zx(rng, rng.randint(2, 9), rng.randint(0, 4))
    before = value(d)
    t0 = t_count(d)
    full_simp(d)
    assert t_count(d) <= t0
    assert not any(remaining_matches(d).values())
    assert_close(value(d), before)


@pytest.mark.parametrize("seed", range(10))
def test_closed_clifford_reduces_to_scalar(seed):
    rng = random.Random(seed)
    d = random_graph_like(rng, 12, phases=[0, 2, 4, 6])
    ref = value(d)
    full_simp(d)
    assert d.num_vertices() == 0
    assert_close(complex(d.scalar), ref)


def test_reduced_form_is_a_fixpoint():
    rng = random.Random(4)
    d = full_simp(random_graph_like(rng, 14, phases=[1, 3, 5, 7, 0]))
    snapshot = (dict(d.phase), {v: dict(n) for v, n in d.adj.items()}, d.scalar)
    full_simp(d)
    assert snapshot == (dict(d.phase), {v: dict(n) for v, n in d.adj.items()}, d.scalar)


@pytest.mark.parametrize("seed", range(5))
def test_ccz_circuit_simplification_keeps_amplitude(seed):
    rng = random.Random(seed)
    c = gen_ccz_class(6, 40, seed)
    out = [rng.randrange(2) for _ in range(6)]
    d = plug_basis(from_circuit(c), [0] * 6, out)
    t0 = t_count(d)
    full_simp(d)
    assert t_count(d) <= t0
    assert abs(complex(brute_force_scalar(d)) - oracle_amplitude(c, out)) <= 1e-9


@pytest.mark.parametrize("seed", range(3))
def test_full_simp_terminates_on_large_diagrams(seed):
    rng = random.Random(seed)
    d = random_graph_like(rng, 200, p=0.03)
    n0 = d.num_vertices()
    full_simp(d)
    assert d.num_vertices() <= n0
    assert not any(remaining_matches(d).values())


# -- Clifford evaluation -----------------------------------------------------

def test_clifford_eval_empty_is_one():
    assert clifford_eval(Diagram()) == Scalar.one()


def test_clifford_eval_single_spider():
    d = Diagram()
    d.add_vertex(Z, 0)
    assert clifford_eval(d) == Scalar.from_int(2)
    assert abs(complex(clifford_eval(d)) - value(d)) < 1e-12


def test_clifford_eval_errors():
    d = Diagram()
    d.add_vertex(Z, 1)
    with pytest.raises(DiagramError):
        clifford_eval(d)
    with pytest.raises(DiagramError):
        clifford_eval(from_circuit(Circuit(1)))


@pytest.mark.parametrize("seed", range(10))
def test_clifford_eval_on_plugged_clifford_circuit(seed):
    rng = random.Random(seed)
    c = random_circuit(rng, 4, 30, names=["H", "S", "Sdg", "Z", "X", "CNOT", "CZ"])
    out = [rng.randrange(2) for _ in range(4)]
    s = clifford_eval(plug_basis(from_circuit(c), [0] * 4, out))
    assert abs(complex(s) - oracle_amplitude(c, out)) <= 1e-10


def test_edges_are_simple_only_at_boundaries():
    d = full_simp(from_circuit(Circuit(2).add("CNOT", 0, 1).add("T", 1)))
    for u, v, et in d.edges():
        if d.kind[u] == Z and d.kind[v] == Z:
            assert et == HADAMARD
        else:
            assert et == SIMPLE
