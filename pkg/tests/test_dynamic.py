import networkx as nx
import pytest

from mobigossip.dynamic import UNBOUNDED, make_dynamic, parse_tau
from mobigossip.errors import InvalidParams, StabilityViolation
from mobigossip.generators import gen_badgraph, gen_family, gen_gstar
from mobigossip.metrics import conductance, vertex_expansion


def as_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def test_static_unbounded(k4):
    dg = make_dynamic(k4, UNBOUNDED, "static")
    assert all(dg.frame(r) is k4 for r in range(1, 20))
    assert dg.check_stability(20)


def test_permute_intervals():
    base = gen_badgraph(64)
    dg = make_dynamic(base, 2, "permute", seed=7)
    f = [dg.frame(r) for r in range(1, 5)]
    assert f[0] == f[1] and f[2] == f[3]
    assert f[0] != f[2]
    for g in f:
        assert nx.is_isomorphic(as_nx(g), as_nx(base))
    assert dg.check_stability(12)


def test_permute_is_reproducible():
    base = gen_gstar(2, 6)
    a = make_dynamic(base, 1, "permute", seed=5)
    b = make_dynamic(base, 1, "permute", seed=5)
    assert [a.frame(r) for r in range(1, 6)] == [b.frame(r) for r in range(1, 6)]


def test_permute_preserves_metrics():
    base = gen_gstar(2, 5)
    dg = make_dynamic(base, 1, "permute", seed=11)
    a, p = vertex_expansion(base).value, conductance(base).value
    for r in range(1, 8):
        g = dg.frame(r)
        assert (g.Delta, g.delta) == (base.Delta, base.delta)
        assert vertex_expansion(g).value == a
        assert conductance(g).value == p


def test_explicit_change_inside_interval():
    k4, c4 = gen_family("complete", 4), gen_family("cycle", 4)
    with pytest.raises(StabilityViolation):
        make_dynamic(None, 2, "explicit", frames=[k4, c4])


def test_explicit_valid_and_tail_repeats():
    k4, c4 = gen_family("complete", 4), gen_family("cycle", 4)
    dg = make_dynamic(None, 2, "explicit", frames=[k4, k4, c4, c4])
    assert [dg.frame(r) for r in (1, 2, 3, 4, 9)] == [k4, k4, c4, c4, c4]
    assert dg.check_stability(10)


def test_explicit_unbounded_needs_constant_frames():
    k4, c4 = gen_family("complete", 4), gen_family("cycle", 4)
    with pytest.raises(StabilityViolation):
        make_dynamic(None, UNBOUNDED, "explicit", frames=[k4, k4, k4, c4])


def test_explicit_size_mismatch():
    with pytest.raises(InvalidParams):
        make_dynamic(None, 1, "explicit", frames=[gen_family("complete", 4), gen_family("complete", 5)])


@pytest.mark.parametrize("bad", [0, -1, "x", 1.5, True, None])
def test_bad_tau(bad):
    with pytest.raises(InvalidParams):
        parse_tau(bad)


def test_tau_parsing():
    assert parse_tau("inf") is UNBOUNDED
    assert parse_tau(3) == 3 and parse_tau("3") == 3
