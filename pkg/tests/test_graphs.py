import pytest

from graphbraids.graphs import (Graph, GraphError, build_graph, subdivide,
                                betti1, segments, is_suitably_subdivided,
                                graph_to_json)


def test_builtin_counts():
    g = build_graph("K33")
    assert len(g.vertices) == 6 and len(g.edges) == 9
    th = build_graph("Theta4")
    assert len(th.vertices) == 2 and len(th.edges) == 4
    assert build_graph("K(3,3)").vertices == g.vertices
    assert len(build_graph("K(5)").edges) == 10


def test_multigraph_allowed_loops_rejected():
    g = build_graph([("a", "b"), ("a", "b")])
    assert len(g.edges) == 2
    with pytest.raises(GraphError, match="loop"):
        build_graph([("a", "a")])
    with pytest.raises(GraphError):
        Graph(["a", "b", "c"], [("e", "a", "b")])  # disconnected
    with pytest.raises(GraphError, match="duplicate"):
        Graph(["a", "b"], [("e", "a", "b"), ("e", "b", "a")])


def test_json_and_edge_list_inputs():
    g = build_graph({"vertices": ["u", "v", "w"],
                     "edges": [["e1", "u", "v"], ["e2", "v", "w"], ["e3", "w", "u"]]})
    assert betti1(g) == 1
    g2 = build_graph("u v\nv w\nw u")
    assert betti1(g2) == 1
    assert graph_to_json(g)["vertices"] == ["u", "v", "w"]


def test_betti1():
    assert betti1(build_graph("K33")) == 4
    assert betti1(build_graph("K5")) == 6
    assert betti1(build_graph([("a", "b"), ("b", "c")])) == 0  # tree


def test_subdivide_examples():
    g = build_graph("K33")
    out, rec = subdivide(g, 2, "none")
    assert len(out.vertices) == 6 and rec.trivial()

    k5, _ = subdivide(build_graph("K5"), 4, "auto")
    assert len(k5.vertices) == 25 and len(k5.edges) == 30

    path = build_graph([("a", "b")])
    out, _ = subdivide(path, 3, "auto")
    assert len(out.edges) >= 2


def test_subdivide_policies_and_errors():
    tri = build_graph("u v\nv w\nw u")
    assert is_suitably_subdivided(tri, 2)  # 3-cycle is fine for two strands
    with pytest.raises(GraphError):
        subdivide(tri, 3, "none")  # but too short for three
    out, _ = subdivide(tri, 3, "auto")
    assert is_suitably_subdivided(out, 3)
    uni, _ = subdivide(tri, 2, "uniform")
    assert len(uni.edges) == 9
    k, _ = subdivide(tri, 2, 4)
    assert len(k.edges) == 12


def test_subdivide_idempotent_and_invariants():
    for name, n in [("K33", 2), ("K5", 3), ("Theta4", 2), ("Dumbbell", 3)]:
        g = build_graph(name)
        once, _ = subdivide(g, n, "auto")
        twice, rec = subdivide(once, n, "auto")
        assert rec.trivial()
        assert len(twice.vertices) == len(once.vertices)
        assert betti1(once) == betti1(g)
        assert sum(once.valency(v) for v in once.vertices) == 2 * len(once.edges)
        for v in rec.inserted.values():
            assert all(once.valency(x) == 2 for x in v)


def test_segments_circle_and_wedge():
    circle = build_graph("a b\nb c\nc a")
    segs = segments(circle)
    assert len(segs) == 1 and segs[0].u == segs[0].v and len(segs[0]) == 3
    fig = build_graph("FigB3n3")
    segs = segments(fig)
    assert {s.u for s in segs} <= set(fig.essential_vertices())


def test_unknown_name():
    with pytest.raises(GraphError):
        build_graph("NoSuchGraph")
