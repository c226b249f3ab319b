import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from popnet import _kernels
from popnet.errors import ArgumentError, ParseError, PopnetError
from popnet.graph import (
    Graph,
    IndexMap,
    induce_by_popularity,
    largest_connected_component,
    load_edge_list,
    remove_popularity_band,
    snowball_sample,
    subgraph,
    write_edge_list,
)
from conftest import complete_graph, er_graph, meta_for, path_graph, star_graph


def load(text):
    return load_edge_list(io.StringIO(text))


class TestLoadEdgeList:
    def test_dedup_and_self_loops(self):
        g = load("a\tb\nb\ta\na\ta\n")
        assert g.node_count == 2
        assert g.edge_count == 1

    def test_triangle_degrees(self):
        g = load("a\tb\nb\tc\nc\ta\n")
        assert list(g.degrees()) == [2, 2, 2]

    def test_first_appearance_indexing(self):
        g = load("x\ty\nz\tx\n")
        assert g.ids == ("x", "y", "z")

    def test_comments_and_blank_lines_skipped(self):
        g = load("# header\na\tb\n\nb\tc\n")
        assert g.node_count == 3
        assert g.edge_count == 2

    def test_malformed_line_reports_number(self):
        with pytest.raises(ParseError, match="line 2"):
            load("a\tb\nbogus line\n")

    def test_empty_input_errors(self):
        with pytest.raises(PopnetError, match="empty"):
            load("# nothing here\n")

    def test_self_loop_only_node_is_kept_isolated(self):
        g = load("a\tb\nz\tz\n")
        assert g.node_count == 3
        assert g.degrees()[2] == 0

    def test_round_trip(self):
        g = er_graph(20, 0.2, seed=5)
        buf = io.StringIO()
        write_edge_list(g, buf)
        g2 = load(buf.getvalue())
        assert g2.edge_count == g.edge_count
        assert g2.node_count == g.node_count


class TestGraphStructure:
    def test_invariants_on_random_graphs(self):
        for seed in range(5):
            g = er_graph(30, 0.2, seed=seed)
            g.check_invariants()

    def test_edge_count_is_half_entry_count(self):
        g = er_graph(25, 0.3, seed=2)
        assert g.indices.shape[0] == 2 * g.edge_count

    def test_from_edges_rejects_out_of_range(self):
        with pytest.raises(ArgumentError):
            Graph.from_edges([(0, 5)], 3)


class TestInduceByPopularity:
    def test_zero_threshold_is_identity(self):
        g = er_graph(15, 0.3, seed=1)
        meta = meta_for(g, np.linspace(0, 100, 15))
        sub, imap = induce_by_popularity(g, meta, 0)
        assert sub.node_count == g.node_count
        assert sub.edge_count == g.edge_count
        assert np.array_equal(imap.new_to_old, np.arange(15))

    def test_above_max_gives_empty(self):
        g = path_graph(4)
        meta = meta_for(g, [10, 20, 30, 40])
        sub, _ = induce_by_popularity(g, meta, 41)
        assert sub.node_count == 0

    def test_p3_example(self):
        g = path_graph(3)
        meta = meta_for(g, [10, 80, 90])
        sub, imap = induce_by_popularity(g, meta, 50)
        assert (sub.node_count, sub.edge_count) == (2, 1)
        assert list(imap.new_to_old) == [1, 2]

    def test_threshold_is_inclusive(self):
        g = path_graph(2)
        meta = meta_for(g, [60.0, 59.9])
        sub, _ = induce_by_popularity(g, meta, 60)
        assert sub.node_count == 1

    def test_composition(self):
        g = er_graph(30, 0.25, seed=4)
        pops = np.linspace(0, 100, 30)
        meta = meta_for(g, pops)
        sub1, map1 = induce_by_popularity(g, meta, 20)
        meta1 = meta_for(sub1, pops[map1.new_to_old])
        sub2, map2 = induce_by_popularity(sub1, meta1, 60)
        direct, dmap = induce_by_popularity(g, meta, 60)
        assert np.array_equal(map1.compose(map2).new_to_old, dmap.new_to_old)
        assert direct.edge_count == sub2.edge_count


class TestRemoveBand:
    def test_inclusive_boundaries(self):
        g = Graph.from_edges([(0, 1), (1, 2), (2, 3)], 4)
        meta = meta_for(g, [39, 40, 50, 51])
        sub, imap = remove_popularity_band(g, meta, 40, 50)
        assert list(imap.new_to_old) == [0, 3]

    def test_full_band_empties(self):
        g = path_graph(3)
        sub, _ = remove_popularity_band(g, meta_for(g, [1, 2, 3]), 0, 100)
        assert sub.node_count == 0

    def test_out_of_range_band_is_identity(self):
        g = path_graph(3)
        meta = meta_for(g, [1, 2, 3])
        sub, _ = remove_popularity_band(g, meta, 200, 300)
        assert sub.node_count == 3
        assert sub.edge_count == 2

    def test_reversed_band_errors(self):
        g = path_graph(3)
        with pytest.raises(ArgumentError):
            remove_popularity_band(g, meta_for(g, [1, 2, 3]), 50, 40)


class TestLargestConnectedComponent:
    def test_tie_broken_by_smallest_index(self):
        # two triangles plus an isolated K2; triangle containing node 0 wins
        g = Graph.from_edges(
            [(3, 4), (4, 5), (5, 3), (0, 1), (1, 2), (2, 0), (6, 7)], 8)
        lcc, imap = largest_connected_component(g)
        assert lcc.node_count == 3
        assert set(imap.new_to_old) == {0, 1, 2}

    def test_connected_graph_is_itself(self):
        g = complete_graph(4)
        lcc, _ = largest_connected_component(g)
        assert lcc.node_count == 4
        assert lcc.edge_count == 6

    def test_edgeless_graph_gives_single_node(self):
        g = Graph.from_edges(np.empty((0, 2)), 5)
        lcc, imap = largest_connected_component(g)
        assert lcc.node_count == 1
        assert list(imap.new_to_old) == [0]

    def test_empty_graph(self):
        g = Graph.from_edges(np.empty((0, 2)), 0)
        lcc, _ = largest_connected_component(g)
        assert lcc.node_count == 0


class TestSnowball:
    def test_unlimited_gives_component(self):
        g = complete_graph(5)
        sub, _ = snowball_sample(g, 2, None)
        assert sub.node_count == 5

    def test_zero_rounds_single_node(self):
        g = complete_graph(4)
        sub, imap = snowball_sample(g, 3, 0)
        assert sub.node_count == 1
        assert imap.new_to_old[0] == 3

    def test_star_from_leaf_one_round(self):
        g = star_graph(4)
        sub, _ = snowball_sample(g, 1, 1)
        assert (sub.node_count, sub.edge_count) == (2, 1)

    def test_invalid_seed(self):
        with pytest.raises(ArgumentError):
            snowball_sample(path_graph(3), 9, None)

    def test_unlimited_equals_component_of_seed(self):
        g = Graph.from_edges([(0, 1), (2, 3), (3, 4)], 5)
        sub, imap = snowball_sample(g, 3, None)
        assert set(imap.new_to_old) == {2, 3, 4}


class TestIndexMap:
    def test_inverse_contract(self):
        imap = IndexMap(np.array([2, 5, 7]), 9)
        for new, old in enumerate([2, 5, 7]):
            assert imap.old_of(new) == old
            assert imap.new_of(old) == new
        assert imap.new_of(0) is None


@given(
    edges=st.lists(
        st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=40),
)
@settings(max_examples=60, deadline=None)
def test_from_edges_always_simple_and_symmetric(edges):
    g = Graph.from_edges(np.array(edges, dtype=np.int64).reshape(-1, 2), 10)
    g.check_invariants()
    # snowball with unlimited rounds returns the seed's whole component
    sub, imap = snowball_sample(g, 0, None)
    labels, _ = _kernels.components(g.indptr, g.indices)
    assert set(imap.new_to_old) == set(np.flatnonzero(labels == labels[0]))


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_subgraph_keeps_internal_edges_exactly(data):
    g = er_graph(12, 0.3, seed=data.draw(st.integers(0, 1000)))
    keep = np.array(data.draw(
        st.lists(st.booleans(), min_size=12, max_size=12)))
    sub, imap = subgraph(g, keep)
    sub.check_invariants()
    expected = sum(
        1 for i in range(12) if keep[i]
        for j in g.neighbors(i) if j > i and keep[j])
    assert sub.edge_count == expected
