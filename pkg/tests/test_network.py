import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discourse_sim.model import ConfigError
from discourse_sim.network import build_ws_graph, neighbors
from discourse_sim.rng import stream


def ring_lattice_edges(n, k):
    return {tuple(sorted((i, (i + d) % n))) for i in range(n) for d in range(1, k // 2 + 1)}


def check_simple(g):
    seen = set()
    for i in range(g.n):
        nbrs = g.neighbors(i)
        assert i not in nbrs
        assert len(nbrs) == len(set(nbrs))
        assert nbrs == sorted(nbrs)
        for j in nbrs:
            assert i in g.neighbors(j)
            seen.add(tuple(sorted((i, j))))
    return seen


def test_p0_is_ring_lattice():
    g = build_ws_graph(100, 6, 0.0, stream(42, 3))
    assert set(g.edges()) == ring_lattice_edges(100, 6)
    assert all(len(g.neighbors(i)) == 6 for i in range(100))
    assert g.n_edges == 300
    assert neighbors(g, 0) == [1, 2, 3, 97, 98, 99]


def test_four_cycle():
    g = build_ws_graph(4, 2, 0.0, stream(0, 3))
    assert set(g.edges()) == {(0, 1), (1, 2), (2, 3), (0, 3)}


def test_default_graph_edge_count():
    g = build_ws_graph(100, 6, 0.3, stream(42, 3))
    assert len(check_simple(g)) == 300
    assert g.n_edges == 300
    assert set(g.edges()) != ring_lattice_edges(100, 6)


def test_p1_destroys_lattice_keeps_degree_sum():
    g = build_ws_graph(100, 6, 1.0, stream(1, 3))
    assert sum(len(g.neighbors(i)) for i in range(100)) == 600
    assert len(set(g.edges()) & ring_lattice_edges(100, 6)) < 100


def test_connected_default():
    g = build_ws_graph(100, 6, 0.3, stream(42, 3))
    seen, frontier = {0}, [0]
    while frontier:
        i = frontier.pop()
        for j in g.neighbors(i):
            if j not in seen:
                seen.add(j)
                frontier.append(j)
    assert len(seen) == 100


def test_same_seed_same_graph():
    assert build_ws_graph(60, 4, 0.5, stream(9, 3)) == build_ws_graph(60, 4, 0.5, stream(9, 3))


@pytest.mark.parametrize("n,k,p", [(10, 3, 0.1), (6, 6, 0.1), (6, 8, 0.1), (10, 4, -0.1), (10, 4, 1.5), (10, 0, 0.1)])
def test_bad_parameters(n, k, p):
    with pytest.raises(ConfigError):
        build_ws_graph(n, k, p, stream(0, 3))


def test_out_of_range_neighbor_query():
    g = build_ws_graph(10, 2, 0.0, stream(0, 3))
    with pytest.raises(IndexError):
        g.neighbors(10)


def test_edgelist_export(tmp_path):
    g = build_ws_graph(20, 4, 0.3, stream(2, 3))
    path = tmp_path / "g.edgelist"
    g.write_edgelist(path)
    lines = path.read_text().splitlines()
    assert len(lines) == 40
    assert {tuple(map(int, l.split())) for l in lines} == set(g.edges())


@settings(max_examples=60, deadline=None)
@given(
    st.integers(3, 40).flatmap(
        lambda half_n: st.tuples(
            st.just(2 * half_n + 1),
            st.integers(1, half_n).map(lambda h: 2 * h),
            st.floats(0, 1),
            st.integers(0, 10**6),
        )
    )
)
def test_edge_count_conserved(args):
    n, k, p, seed = args
    if k >= n:
        return
    g = build_ws_graph(n, k, p, stream(seed, 3))
    assert len(check_simple(g)) == n * k // 2
