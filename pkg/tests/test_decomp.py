import math
import random

import pytest

from helpers import assert_close, cat_instance, dynamic_instance, random_graph_like, sum_values, value
from zxdd.circuits import gen_ccz_class
from zxdd.decomp import (
    ALPHA_CAT, DYNAMIC_KINDS, STRATEGIES, DecompMatch, StaleMatchError, apply_cat,
    apply_dynamic, apply_magic5, apply_match, apply_vertex_cut, find_cats, find_dynamic,
    find_magic5, get_strategy, greedy_select, t_reduction,
)
from zxdd.diagram import HADAMARD, X, Z, Diagram, DiagramError, t_count
from zxdd.engine import evaluate, oracle_amplitude, prepare
from zxdd.rewrite import brute_force_scalar, full_simp
from zxdd.scalar import Scalar


def closed_t_diagram(seed, n=9, p=0.4):
    rng = random.Random(seed)
    return random_graph_like(rng, n, p=p, phases=[0, 1, 2, 3, 4, 5, 6, 7, 1, 7])


# -- match bookkeeping -------------------------------------------------------

@pytest.mark.parametrize("kind,n,alpha", [
    ("lone_phase", 4, 1 / 4), ("multi_cat3", 3, 1 / 7), ("pair", 2, 1 / 6),
    ("pair_phase", 4, 1 / 6), ("cut", 0, 1.0), ("magic5", 0, math.log2(3) / 4),
])
def test_alpha_formulas(kind, n, alpha):
    assert DecompMatch(kind, (0,), n=n).alpha == pytest.approx(alpha, abs=1e-15)


def test_cat_alphas_and_terms():
    for k in range(3, 7):
        m = DecompMatch(f"cat{k}", tuple(range(k + 1)))
        assert m.terms == (3 if k >= 5 else 2)
        assert m.t_reduction == k
    assert DecompMatch("cat4", ()).alpha == 0.25
    assert DecompMatch("cat6", ()).alpha == pytest.approx(0.264, abs=5e-4)
    assert t_reduction("pair_phase", 3) == 5


def test_strategies_nest():
    cats, single, paired = (STRATEGIES[k].kinds for k in ("cats", "single", "single_paired"))
    assert single == cats | {"lone_phase", "multi_cat3"}
    assert paired == single | {"pair", "pair_phase"}
    assert get_strategy("single+paired").name == "single_paired"
    with pytest.raises(ValueError):
        get_strategy("bogus")


# -- vertex cut --------------------------------------------------------------

def test_cut_lone_t_state():
    d = Diagram()
    v = d.add_vertex(Z, 1)
    terms = apply_vertex_cut(d, v)
    assert len(terms) == 2
    total = sum((t.scalar for t in terms), Scalar.zero())
    assert total == Scalar.one_plus_omega(1)


def test_cut_boundary_rejected():
    from zxdd.circuits import Circuit
    from zxdd.diagram import from_circuit

    d = from_circuit(Circuit(1))
    with pytest.raises(DiagramError):
        apply_vertex_cut(d, d.inputs[0])


@pytest.mark.parametrize("seed", range(30))
def test_cut_sums_to_original(seed):
    rng = random.Random(seed)
    d = closed_t_diagram(seed, n=rng.randint(2, 10))
    if rng.random() < 0.3:  # non graph-like vertices go through the generic cut
        x = d.add_vertex(X, rng.randrange(8))
        d.add_edge(x, rng.choice(list(d.kind)[:-1]))
    v = rng.choice(sorted(d.kind))
    terms = apply_vertex_cut(d, v)
    assert all(v not in t.kind for t in terms)
    assert_close(sum_values(terms), value(d))


def test_cutting_every_t_spider_gives_2_to_the_t():
    d = closed_t_diagram(7, n=10)
    t = t_count(d)
    terms = [d]
    for v in [u for u in sorted(d.kind) if d.phase[u] % 2]:
        terms = [s for term in terms for s in apply_vertex_cut(term, v)]
    assert len(terms) == 2**t
    assert all(t_count(s) == 0 for s in terms)
    assert abs(sum(complex(brute_force_scalar(s)) for s in terms)
               - complex(brute_force_scalar(d))) < 1e-9


# -- cats --------------------------------------------------------------------

@pytest.mark.parametrize("k", [3, 4, 5, 6])
@pytest.mark.parametrize("hub_phase", [0, 4])
@pytest.mark.parametrize("seed", range(6))
def test_cat_terms_sum_to_original(k, hub_phase, seed):
    d, hub = cat_instance(k, random.Random(seed), hub_phase)
    (m,) = [m for m in find_cats(d) if m.vertices[0] == hub]
    assert m.kind == f"cat{k}"
    terms = apply_cat(d, m)
    assert len(terms) == m.terms
    assert_close(sum_values(terms), value(d))
    for t in terms:
        assert all(not (t.phase[u] % 2) for u in m.vertices[1:] if u in t.kind)


def test_cat_matcher_requires_all_t_neighbours():
    d, hub = cat_instance(4, random.Random(0), context=0)
    d.phase[sorted(d.adj[hub])[0]] = 2
    assert find_cats(d) == []


def test_stale_match_raises():
    d, hub = cat_instance(4, random.Random(1))
    (m,) = find_cats(d)
    d.add_phase(hub, 4)
    with pytest.raises(StaleMatchError):
        apply_cat(d, m)


# -- magic5 ------------------------------------------------------------------

def test_magic5_on_five_t_states():
    d = Diagram()
    for _ in range(5):
        d.add_vertex(Z, 1)
    m = find_magic5(d)
    terms = apply_magic5(d, m)
    assert len(terms) == 3
    total = sum(complex(brute_force_scalar(full_simp(t))) for t in terms)
    assert abs(total - complex(Scalar.one_plus_omega(1)) ** 5) < 1e-12


def test_magic5_needs_five_spiders():
    d = Diagram()
    vs = [d.add_vertex(Z, 1) for _ in range(4)]
    assert find_magic5(d) is None
    with pytest.raises(DiagramError):
        apply_magic5(d, vs)


@pytest.mark.parametrize("seed", range(10))
def test_magic5_embedded_reduces_t_by_four(seed):
    d = closed_t_diagram(seed, n=10, p=0.3)
    d.phase.update({v: 1 for v in sorted(d.kind)[:5]})
    t0 = t_count(d)
    m = find_magic5(d)
    terms = apply_magic5(d, m)
    assert_close(sum_values(terms), value(d))
    for t in terms:
        assert t_count(full_simp(t)) <= t0 - 4


def test_repeated_magic5_term_bound():
    rng = random.Random(3)
    d = full_simp(random_graph_like(rng, 20, p=0.3, phases=[1, 3, 5, 7]))
    ref = complex(brute_force_scalar(d.copy()))
    t0 = t_count(d)
    stack, leaves, total = [d], 0, 0j
    while stack:
        g = stack.pop()
        if g.scalar.is_zero:
            continue
        if t_count(g) == 0:
            total += complex(brute_force_scalar(g))
            leaves += 1
            continue
        m = find_magic5(g)
        if m is not None:
            children = apply_magic5(g, m)
        else:
            v = next(u for u in sorted(g.kind) if g.phase[u] % 2)
            children = apply_vertex_cut(g, v)
        stack.extend(full_simp(c) for c in children)
    assert leaves <= 3 ** (t0 // 4) * 2 ** 4
    assert abs(total - ref) < 1e-9 * max(1.0, abs(ref))


# -- dynamic -----------------------------------------------------------------

@pytest.mark.parametrize("kind", DYNAMIC_KINDS)
@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_dynamic_instances(kind, n):
    rng = random.Random(f"{kind}{n}")
    d, v = dynamic_instance(kind, n, rng)
    ms = [m for m in find_dynamic(d, kind) if m.cut_vertex == v]
    # context spiders that happen to be leaves may enlarge the pattern
    assert ms and ms[0].n >= n
    t0 = t_count(d)
    terms = apply_dynamic(d, ms[0])
    assert len(terms) == 2
    for t in terms:
        assert t_count(t) <= t0 - ms[0].t_reduction
    assert_close(sum_values(terms), value(d))


def test_lone_phase_n5_drops_five():
    d, v = dynamic_instance("lone_phase", 5, random.Random(0))
    (m,) = [m for m in find_dynamic(d, "lone_phase") if m.cut_vertex == v]
    assert all(t_count(t) <= t_count(d) - 5 for t in apply_dynamic(d, m))


def test_multi_cat3_n2_drops_five():
    d, v = dynamic_instance("multi_cat3", 2, random.Random(0))
    (m,) = [m for m in find_dynamic(d, "multi_cat3") if m.cut_vertex == v]
    assert all(t_count(t) <= t_count(d) - 5 for t in apply_dynamic(d, m))


def test_dynamic_rejects_static_kind():
    d, v = dynamic_instance("lone_phase", 2, random.Random(0))
    with pytest.raises(DiagramError):
        apply_dynamic(d, DecompMatch("cut", (v,), version=d.version))


def test_dynamic_scale_is_capped():
    d, v = dynamic_instance("lone_phase", 12, random.Random(0))
    (m,) = [m for m in find_dynamic(d, "lone_phase", cap=4) if m.cut_vertex == v]
    assert m.n == 5  # v itself plus four capped leaves


# -- greedy selection --------------------------------------------------------

def _lone(d, n):
    v = d.add_vertex(Z, 1)
    anchor = d.add_vertex(Z, 2)
    d.add_edge(v, anchor, HADAMARD)
    for _ in range(n - 1):
        d.add_edge(v, d.add_vertex(Z, 3), HADAMARD)
    return v


def _cat(d, k):
    # legs form a path so that none of them is a leaf of the hub
    hub = d.add_vertex(Z, 0)
    legs = [d.add_vertex(Z, 1) for _ in range(k)]
    for i, u in enumerate(legs):
        d.add_edge(hub, u, HADAMARD)
        if i:
            d.add_edge(legs[i - 1], u, HADAMARD)
    return hub


def test_cat6_beats_lone_three():
    d = Diagram()
    _lone(d, 3)
    hub = _cat(d, 6)
    m = greedy_select(d, "single_paired")
    assert m.kind == "cat6" and m.vertices[0] == hub


def test_tie_goes_to_cat4():
    d = Diagram()
    _lone(d, 4)
    _cat(d, 4)
    assert greedy_select(d, "single_paired").kind == "cat4"


def test_dynamic_wins_when_strictly_better():
    d = Diagram()
    v = _lone(d, 5)
    _cat(d, 4)
    m = greedy_select(d, "single")
    assert m.kind == "lone_phase" and m.cut_vertex == v
    assert greedy_select(d, "cats").kind == "cat4"


def test_fallback_cut_on_three_t_spiders():
    d = Diagram()
    a, b, c = (d.add_vertex(Z, k) for k in (1, 3, 5))
    d.add_edge(a, b, HADAMARD)
    d.add_edge(b, c, HADAMARD)
    d.add_edge(a, c, HADAMARD)
    m = greedy_select(d, "single_paired")
    assert m.kind == "cut" and m.cut_vertex == a


def test_greedy_requires_t():
    d = Diagram()
    d.add_vertex(Z, 2)
    with pytest.raises(DiagramError):
        greedy_select(d)


def test_greedy_is_deterministic():
    d = prepare(gen_ccz_class(10, 200, 1), [0] * 10)
    assert greedy_select(d) == greedy_select(d.copy())


@pytest.mark.parametrize("strategy", sorted(STRATEGIES))
@pytest.mark.parametrize("seed", range(12))
def test_selected_match_meets_its_t_reduction(strategy, seed):
    d = full_simp(closed_t_diagram(seed, n=11))
    if t_count(d) == 0:
        pytest.skip("simplified away")
    t0 = t_count(d)
    m = greedy_select(d, strategy)
    terms = apply_match(d, m)
    assert len(terms) == m.terms
    for t in terms:
        assert t_count(full_simp(t)) <= t0 - m.t_reduction
    assert abs(sum(complex(brute_force_scalar(t)) for t in terms)
               - complex(brute_force_scalar(d))) < 1e-9


def test_cut_only_tree_has_at_most_2_to_the_t_leaves():
    c = gen_ccz_class(6, 30, 2)
    d = prepare(c, [1, 0, 1, 0, 0, 1])
    amp, terms, status = evaluate(d.copy(), "cut_only")
    assert status == "ok" and terms <= 2 ** t_count(d)
    assert abs(complex(amp) - oracle_amplitude(c, [1, 0, 1, 0, 0, 1])) < 1e-9
