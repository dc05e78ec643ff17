import pytest

from graphbraids.cells import parse_cell, format_cell, phi, vertex
from graphbraids.fixtures import (k33_pinned_tree, k5_pinned_tree,
                                  theta4_pinned_tree, fig_b3n3_tree)
from graphbraids.graphs import build_graph, subdivide
from graphbraids.trees import choose_tree_and_order
from graphbraids.morse import (Reducer, morse_boundary, build_morse_complex,
                               fast_morse_boundary, name_critical_cell,
                               materialize_name, format_name, bare_fill,
                               MorseError, cell_sort_key)


def chain_by_name(mc, chain):
    return {mc.name_of(c): v for c, v in chain.items()}


def chain_by_cell(chain, ordered=False):
    return {format_cell(c, ordered): v for c, v in chain.items()}


# ---------------------------------------------------------------------------
# the warm-up reductions on K33

def test_reduce_examples_k33():
    t = k33_pinned_tree()
    red = Reducer(t)
    c = parse_cell("{1-5,3}")[0]
    assert chain_by_cell(red.reduce_cell(c)) == {"{1-5,2}": 1}
    c = parse_cell("{0-3,5}")[0]
    assert chain_by_cell(red.reduce_cell(c)) == {"{2-4,3}": 1, "{0-3,1}": 1}
    crit = parse_cell("{2-4,3}")[0]
    assert red.reduce_cell(crit) == {crit: 1}


def test_reduce_shortcut_equals_naive():
    t = k33_pinned_tree()
    cells2 = [parse_cell(s)[0] for s in
              ("{0-3,1-5}", "{0-4,1-5}", "{0-4,3-5}")]
    for c in cells2:
        a = morse_boundary(Reducer(t, use_shortcut=True), c)
        b = morse_boundary(Reducer(t, use_shortcut=False), c)
        assert a == b


def test_morse_boundary_k33():
    t = k33_pinned_tree()
    red = Reducer(t)
    c = parse_cell("{0-3,1-5}")[0]
    assert chain_by_cell(morse_boundary(red, c)) == \
        {"{1-5,2}": -1, "{1-5,0}": 1, "{2-4,3}": 1}


def test_morse_boundary_ordered_k33():
    t = k33_pinned_tree()
    red = Reducer(t, ordered=True)
    c = parse_cell("(0-3,1-5)")[0]
    assert chain_by_cell(morse_boundary(red, c), True) == \
        {"(2,1-5)": -1, "(0,1-5)": 1, "(3,2-4)": 1}
    # subscript rule: the sigma-copy is the id-copy with subscripts flipped
    c_sigma = parse_cell("(1-5,0-3)")[0]
    out = chain_by_cell(morse_boundary(red, c_sigma), True)
    assert out == {"(1-5,2)": -1, "(1-5,0)": 1, "(2-4,3)": 1}
    # R((1,3)_sigma) = (0,1)_sigma
    assert chain_by_cell(red.reduce_cell(((3, -1), (1, -1))), True) == \
        {"(1,0)": 1}


def test_critical_counts():
    cases = [
        (k33_pinned_tree(), 2, "unordered", {0: 1, 1: 7, 2: 3}),
        (k33_pinned_tree(), 2, "ordered", {0: 2, 1: 14, 2: 6}),
        (theta4_pinned_tree(), 3, "unordered", {0: 1, 1: 8, 2: 3}),
    ]
    for t, n, flavor, want in cases:
        mc = build_morse_complex(t, n, flavor)
        got = {d: len(v) for d, v in mc.critical.items() if v}
        assert got == want
        mc.validate_chain_complex()


def test_k33_critical_cells_known_values():
    t = k33_pinned_tree()
    mc = build_morse_complex(t, 2, "unordered")
    ones = {format_cell(c) for c in mc.critical[1]}
    assert ones == {"{0-3,1}", "{0-4,1}", "{0-4,5}", "{1-5,0}", "{1-5,2}",
                    "{2-4,3}", "{3-5,0}"}
    twos = {format_cell(c) for c in mc.critical[2]}
    assert twos == {"{0-3,1-5}", "{0-4,1-5}", "{0-4,3-5}"}


def test_euler_characteristic_preserved():
    for t, n, flavor in [(k33_pinned_tree(), 2, "unordered"),
                         (k33_pinned_tree(), 2, "ordered"),
                         (theta4_pinned_tree(), 3, "unordered"),
                         (theta4_pinned_tree(), 3, "ordered"),
                         (fig_b3n3_tree(), 3, "unordered")]:
        mc = build_morse_complex(t, n, flavor)
        assert mc.euler_characteristic() == mc.full_euler_characteristic()


def test_theta4_counts_and_chi():
    t = theta4_pinned_tree()
    mc = build_morse_complex(t, 3, "unordered", path="both")
    assert [len(mc.critical[d]) for d in (0, 1, 2)] == [1, 8, 3]
    assert mc.euler_characteristic() == -4
    mco = build_morse_complex(t, 3, "ordered")
    assert mco.euler_characteristic() == -24


# ---------------------------------------------------------------------------
# the closed formulas on the K5 tree (worked examples)

def test_fast_boundary_worked_example_tree_edge():
    # boundary of B_3(1,0,1) u d_2 = B_3(1,0,1) - B_3(1,1,1) + B_3(0,1,1)
    t = k5_pinned_tree()
    cell = tuple(sorted([(11, 16), (0, 15), vertex(12), vertex(17)]))
    nm = name_critical_cell(t, cell)
    assert format_name(t, nm) == "B_3(1,0,1) ∪ d_2"
    out = fast_morse_boundary(t, cell)
    mc_names = {}
    for c, v in out.items():
        mc_names[format_name(t, name_critical_cell(t, c), c)] = v
    assert mc_names == {"B_3(1,0,1)": 1, "B_3(1,1,1)": -1, "B_3(0,1,1)": 1}
    assert out == morse_boundary(Reducer(t), cell)


def test_fast_boundary_worked_example_two_deleted():
    # boundary of d_6(0,1) u d_4 = d_6(0,1) - d_6(0,2) + wedge(d_6, d_4)
    t = k5_pinned_tree()
    cell = tuple(sorted([(6, 20), (3, 13), vertex(9), vertex(0)]))
    nm = name_critical_cell(t, cell)
    assert format_name(t, nm) == "d_6(0,1) ∪ d_4"
    out = fast_morse_boundary(t, cell)
    names = {format_name(t, name_critical_cell(t, c), c): v
             for c, v in out.items()}
    assert names == {"d_6(0,1)": 1, "d_6(0,2)": -1, "B_3(1,0,0)": 1}
    assert out == morse_boundary(Reducer(t), cell)


def test_fast_zero_cases():
    t = k5_pinned_tree()
    # two tree edges always die
    cell = tuple(sorted([(6, 9), (11, 16), vertex(7), vertex(12)]))
    assert fast_morse_boundary(t, cell) == {}
    # a deleted edge not separated by the tree edge's vertex dies too
    cell = tuple(sorted([(18, 23), (0, 8), vertex(19), vertex(21)]))
    assert fast_morse_boundary(t, cell) == {}
    assert morse_boundary(Reducer(t), cell) == {}


def test_fast_matches_generic_everywhere_k5():
    t = k5_pinned_tree()
    build_morse_complex(t, 4, "unordered", path="both")


def test_fast_requires_conditions():
    t = k33_pinned_tree()  # T1/T2 fail here
    with pytest.raises(MorseError):
        build_morse_complex(t, 2, "unordered", path="fast")
    with pytest.raises(MorseError):
        build_morse_complex(theta4_pinned_tree(), 3, "ordered", path="fast")


def test_fast_ordered_n2():
    gs, _ = subdivide(build_graph("K33"), 2, "strict")
    t = choose_tree_and_order(gs, 2)
    build_morse_complex(t, 2, "ordered", path="both")
    gs5, _ = subdivide(build_graph("K5"), 2, "strict")
    t5 = choose_tree_and_order(gs5, 2)
    build_morse_complex(t5, 2, "ordered", path="both")


def test_dependence_on_lower_vector():
    # boundary of A_k(a) u d'(b) is independent of b
    t = k5_pinned_tree()
    red = Reducer(t)
    with_b = tuple(sorted([(6, 20), (3, 13), vertex(9), vertex(4)]))
    without = tuple(sorted([(6, 20), (3, 13), vertex(9), vertex(0)]))
    nm = name_critical_cell(t, with_b)
    assert nm.terms[1].vec != nm.terms[0].vec or True
    a = morse_boundary(red, with_b)
    b = morse_boundary(red, without)
    assert a == b


def test_leading_coefficient():
    # when the boundary is nonzero its largest summand is the size-(s+1)
    # cell over the same edge with coefficient -1
    for t, n in [(k5_pinned_tree(), 4), (theta4_pinned_tree(), 3)]:
        mc = build_morse_complex(t, n, "unordered")
        for row, c2 in zip(mc.boundaries[2], mc.critical[2]):
            nz = [j for j, x in enumerate(row) if x]
            if not nz:
                continue
            lead = min(nz)
            assert row[lead] == -1
            name2 = name_critical_cell(t, c2)
            name1 = name_critical_cell(t, mc.critical[1][lead])
            hi = name2.terms[0]
            assert name1.terms[0].edge == hi.edge
            assert sum(name1.terms[0].vec) == sum(hi.vec) + 1


def test_staircase_sum_tail_property():
    # the staircase reduction only depends on the vector entries above the
    # target branch: bold_A(a, l) = bold_A(b, l) whenever a_m = b_m for m > l
    from graphbraids.morse import bold_A
    from itertools import product
    t = k5_pinned_tree()
    n = 4
    for a_vertex in (11, 18):
        mu = t.branch_count(a_vertex)
        vecs = [v for v in product(range(3), repeat=mu) if 1 <= sum(v) <= n - 2]
        for ell in range(1, mu + 1):
            for a in vecs:
                for b in vecs:
                    if a[ell:] == b[ell:]:
                        assert bold_A(t, a_vertex, a, ell, n) == \
                            bold_A(t, a_vertex, b, ell, n), (a, b, ell)


def test_name_roundtrip():
    for t, n in [(k5_pinned_tree(), 4), (theta4_pinned_tree(), 3),
                 (fig_b3n3_tree(), 3)]:
        mc = build_morse_complex(t, n, "unordered")
        for d in (1, 2):
            for c in mc.critical.get(d, ()):
                nm = name_critical_cell(t, c)
                if nm is not None and nm.canonical:
                    assert materialize_name(t, nm) == c


def test_bare_fill_skips_closures():
    t = k5_pinned_tree()
    cell = bare_fill(t, [(0, 15), (6, 20)], 2)
    assert cell == tuple(sorted([(0, 15), (6, 20), vertex(1), vertex(2)]))


def test_reversed_order_is_descending():
    t = k5_pinned_tree()
    mc = build_morse_complex(t, 4, "unordered")
    keys = [cell_sort_key(t, c) for c in mc.critical[1]]
    assert keys == sorted(keys, reverse=True)
