import pytest

from graphbraids.graphs import build_graph, subdivide
from graphbraids.trees import (OrderedTree, TreeError, choose_tree_and_order,
                               verify_conditions, meet, branch, separates)
from graphbraids.fixtures import (k33_pinned_tree, k5_pinned_tree,
                                  theta4_pinned_tree, fig_b3n3_tree, pinned_tree)


def test_k33_navigation_examples():
    t = k33_pinned_tree()
    assert t.meet(3, 5) == 2
    assert t.meet(0, 4) == 0 and t.meet(4, 4) == 4
    assert t.branch(2, 3) == 1 and t.branch(2, 5) == 2
    assert all(t.branch(v, 0) == 0 for v in range(1, 6))
    assert t.separates((0, 4), 2) is True
    assert t.separates((0, 3), 5) is False
    # tree edges are never separated
    assert all(not t.separates((t.parent[v], v), w)
               for v in range(1, 6) for w in range(6))
    with pytest.raises(TreeError):
        t.branch(3, 3)


def test_branch_rule_quoted():
    t = k5_pinned_tree()
    for v in range(1, t.nv):
        for w in range(t.nv):
            if v == w:
                continue
            g = t.branch(v, w)
            if t.meet(w, v) == v:
                assert g >= 1
            else:
                assert g == 0


def test_pinned_tree_conditions():
    rep = verify_conditions(k33_pinned_tree())
    assert (rep.t1, rep.t2) == (False, False)  # the warm-up tree ignores T1-T3
    assert rep.witnesses["t1"] and rep.witnesses["t2"]

    rep5 = verify_conditions(k5_pinned_tree())
    assert rep5.ok()
    rept = verify_conditions(theta4_pinned_tree())
    assert rept.ok()
    repb = verify_conditions(fig_b3n3_tree())
    assert (repb.t1, repb.t2, repb.t3) == (True, False, True)


def test_k5_fixture_structure():
    t = k5_pinned_tree()
    assert [t.ids[i] for i in range(25)] == [str(i) for i in range(25)]
    assert t.deleted == [(0, 8), (0, 15), (0, 24), (3, 13), (3, 22), (6, 20)]
    assert t.essential_letter == {6: "A", 11: "B", 18: "C"}
    assert t.stem_length() == 6


def test_deleted_count_is_betti1():
    for fx in (k33_pinned_tree(), k5_pinned_tree(), theta4_pinned_tree()):
        from graphbraids.graphs import betti1
        assert len(fx.deleted) == betti1(fx.graph)


def test_order_increases_along_root_paths():
    t = k5_pinned_tree()
    for v in range(1, t.nv):
        assert t.parent[v] < v


def test_generic_construction_self_validates():
    for name, n in [("K33", 2), ("K5", 2), ("K5", 3), ("Theta4", 2),
                    ("Dumbbell", 2), ("FigB3n3", 3), ("K4", 3)]:
        g = build_graph(name)
        gs, _ = subdivide(g, n, "strict" if n == 2 else "auto")
        t = choose_tree_and_order(gs, n)
        rep = verify_conditions(t)
        assert rep.ok(), (name, n, rep.witnesses)
        assert t.stem_length() >= n - 1
        assert t.tree_valency(0) == 1


def test_planar_construction_t4():
    for name, n in [("K4", 3), ("K4", 2), ("Theta3", 2), ("Theta4", 2),
                    ("Dumbbell", 2), ("FigB3n3", 2)]:
        g = build_graph(name)
        gs, _ = subdivide(g, n, "strict" if n == 2 else "auto")
        t = choose_tree_and_order(gs, n, "planar")
        rep = verify_conditions(t, planar=True)
        assert rep.ok(planar=True), (name, rep.witnesses)
    k4 = choose_tree_and_order(subdivide(build_graph("K4"), 3, "auto")[0], 3,
                               "planar")
    assert len(k4.deleted) == 3


def test_planar_mode_rejects_nonplanar():
    gs, _ = subdivide(build_graph("K5"), 2, "strict")
    with pytest.raises(TreeError):
        choose_tree_and_order(gs, 2, "planar")


def test_t4_implies_planar_agreement():
    # if T1-T4 verify true, the planarity test must agree (quoted equivalence)
    from graphbraids.decompose import is_planar
    for name in ("K4", "Theta4", "Dumbbell"):
        gs, _ = subdivide(build_graph(name), 2, "strict")
        t = choose_tree_and_order(gs, 2, "planar")
        assert verify_conditions(t, planar=True).ok(planar=True)
        assert is_planar(gs)


def test_transposed_branches_break_t3():
    # move a branch carrying separated deleted edges ahead of one that
    # does not; brute-force verification must flag T3 with a witness
    t = fig_b3n3_tree()
    g = t.graph
    children = {t.ids[v]: [t.ids[c] for c in t.children[v]] for v in range(t.nv)}
    a = t.ids[2]
    children[a] = [children[a][2]] + [children[a][0], children[a][1], children[a][3]]
    bad = OrderedTree(g, "0", children, 3, "generic")
    rep = verify_conditions(bad)
    assert rep.t3 is False and rep.witnesses["t3"][0] == bad.order[a]


def test_unsuitable_input_rejected():
    g = build_graph("K33")
    with pytest.raises(TreeError):
        choose_tree_and_order(g, 2)  # needs the strict two-edge rule


def test_debug_dump_format():
    t = theta4_pinned_tree()
    lines = t.debug_dump().splitlines()
    assert lines[0] == "0 0 -1 [1]"
    assert lines[-1] == "d_3: 0 5"


def test_pinned_registry():
    assert pinned_tree("K5", 4) is not None
    assert pinned_tree("K5", 3) is None
    k4 = pinned_tree("K4", 3)
    assert k4 is not None
    assert verify_conditions(k4, planar=True).ok(planar=True)
    assert k4.deleted == [(0, 8), (0, 9), (2, 7)]
