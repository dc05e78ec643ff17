"""Cubical cells of discrete configuration spaces.

A cell is a tuple of items; an item is ``(v, -1)`` for the vertex v or
``(tau, iota)`` for an edge.  Unordered cells are kept sorted (this matches
comparison by vertex number / terminal vertex); ordered cells keep tuple
positions.  Closures of distinct items in a cell are disjoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .trees import OrderedTree


class CellError(ValueError):
    pass


def is_vertex(item) -> bool:
    return item[1] == -1


def vertex(v: int):
    return (v, -1)


def cell_dim(cell) -> int:
    return sum(1 for it in cell if it[1] != -1)


def closure_vertices(item):
    return (item[0],) if item[1] == -1 else item


def cell_vertices(cell):
    return [it[0] for it in cell if it[1] == -1]


def cell_edges(cell):
    return [it for it in cell if it[1] != -1]


# ---------------------------------------------------------------------------
# enumeration

def estimate_cell_count(t: OrderedTree, n: int) -> int:
    from math import comb
    nv, ne = t.nv, len(t.all_edge_pairs())
    return sum(comb(ne, i) * comb(nv, n - i) for i in range(min(n, ne) + 1)
               if n - i <= nv)


def enumerate_cells(t: OrderedTree, n: int, flavor: str = "unordered",
                    cap: int = 10_000_000):
    """All cells of UD_n (or D_n) grouped by dimension, deterministically
    ordered.  Refuses when the crude size estimate exceeds the cap."""
    if flavor not in ("unordered", "ordered"):
        raise CellError(f"unknown flavor {flavor!r}")
    est = estimate_cell_count(t, n)
    if flavor == "ordered":
        import math
        est *= math.factorial(n)
    if est > cap:
        raise CellError(f"estimated cell count {est} exceeds cap {cap}")
    items = [vertex(v) for v in range(t.nv)] + t.all_edge_pairs()
    items.sort()
    closures = [closure_vertices(it) for it in items]
    by_dim: dict[int, list] = {}
    chosen: list = []
    used: set[int] = set()

    def rec(start: int, remaining: int):
        if remaining == 0:
            c = tuple(chosen)
            by_dim.setdefault(cell_dim(c), []).append(c)
            return
        for i in range(start, len(items) - remaining + 1):
            cl = closures[i]
            if any(x in used for x in cl):
                continue
            chosen.append(items[i])
            used.update(cl)
            rec(i + 1, remaining - 1)
            chosen.pop()
            used.difference_update(cl)

    rec(0, n)
    for d in by_dim:
        by_dim[d].sort()
    if flavor == "ordered":
        ordered: dict[int, list] = {}
        for d, cells in by_dim.items():
            out = []
            for c in cells:
                out.extend(sorted(set(permutations(c))))
            ordered[d] = out
        by_dim = ordered
    return by_dim


# ---------------------------------------------------------------------------
# classification and the Morse matching

@dataclass
class Classification:
    kind: str  # critical | redundant | collapsible
    witness: object = None


def unblocked_vertices(t: OrderedTree, cell):
    vs = cell_vertices(cell)
    vset = set(vs)
    for e in cell_edges(cell):
        vset.add(e[0])
        vset.add(e[1])
    return [v for v in vs if v != 0 and t.parent[v] not in vset]


def order_respecting_edges(t: OrderedTree, cell):
    vs = cell_vertices(cell)
    out = []
    for e in cell_edges(cell):
        if e in t.deleted_set:
            continue
        tau, iota = e
        if not any(t.parent[u] == tau and u < iota for u in vs):
            out.append(e)
    return out


def classify(t: OrderedTree, cell) -> Classification:
    """Critical / redundant / collapsible per the matching on UD_n; ordered
    cells classify exactly like their unordered projections."""
    unb = unblocked_vertices(t, cell)
    orr = order_respecting_edges(t, cell)
    if not unb and not orr:
        return Classification("critical")
    if unb and (not orr or min(unb) < min(e[1] for e in orr)):
        return Classification("redundant", witness=min(unb))
    return Classification("collapsible", witness=min(orr, key=lambda e: e[1]))


def matching(t: OrderedTree, cell, ordered: bool = False):
    """W: a redundant cell maps to the collapsible cell one dimension up that
    replaces its smallest unblocked vertex by the tree edge below it;
    critical and collapsible cells map to None (void)."""
    cls = classify(t, cell)
    if cls.kind != "redundant":
        return None
    v = cls.witness
    e = (t.parent[v], v)
    out = [e if it == (v, -1) else it for it in cell]
    if not ordered:
        out.sort()
    return tuple(out)


def boundary(cell, ordered: bool = False):
    """Signed cubical boundary: faces of the k-th edge in terminal-vertex
    order enter with sign (-1)^k (initial face) and -(-1)^k (terminal)."""
    edges = [(i, it) for i, it in enumerate(cell) if it[1] != -1]
    edges.sort(key=lambda p: p[1][0])
    out = []
    for k, (pos, e) in enumerate(edges, start=1):
        sign = -1 if k % 2 else 1
        tau, iota = e
        for repl, coeff in ((vertex(iota), sign), (vertex(tau), -sign)):
            face = list(cell)
            face[pos] = repl
            if not ordered:
                face.sort()
            out.append((tuple(face), coeff))
    return out


def phi(cell):
    """Bijection D_n -> UD_n x S_n: the unordered projection together with
    the permutation sigma with c_{sigma(1)} < ... < c_{sigma(n)}."""
    idx = sorted(range(len(cell)), key=lambda i: cell[i])
    sigma = tuple(i + 1 for i in idx)
    return tuple(sorted(cell)), sigma


def phi_inverse(sorted_cell, sigma):
    out = [None] * len(sorted_cell)
    for rank, pos in enumerate(sigma):
        out[pos - 1] = sorted_cell[rank]
    return tuple(out)


def perm_compose(a, b):
    """(a then read through b): the permutation sending i to a[b[i]-1]."""
    return tuple(a[b[i] - 1] for i in range(len(a)))


def perm_cycles(sigma) -> str:
    n = len(sigma)
    seen = [False] * n
    parts = []
    for i in range(n):
        if seen[i]:
            continue
        cyc = [i]
        seen[i] = True
        j = sigma[i] - 1
        while j != i:
            cyc.append(j)
            seen[j] = True
            j = sigma[j] - 1
        if len(cyc) > 1:
            parts.append("(" + ",".join(str(x + 1) for x in cyc) + ")")
    return "".join(parts) if parts else "id"


# ---------------------------------------------------------------------------
# text syntax: {0-3,1-5} and (4,3-5)

def format_item(item) -> str:
    return str(item[0]) if item[1] == -1 else f"{item[0]}-{item[1]}"


def format_cell(cell, ordered: bool = False) -> str:
    if ordered:
        return "(" + ",".join(format_item(it) for it in cell) + ")"
    # display convention: edges first, then vertices
    items = sorted(cell, key=lambda it: (it[1] == -1, it))
    return "{" + ",".join(format_item(it) for it in items) + "}"


def parse_cell(text: str):
    """Parse "{0-3,1-5}" (unordered) or "(4,3-5)" (ordered tuple)."""
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        ordered = False
    elif text.startswith("(") and text.endswith(")"):
        ordered = True
    else:
        raise CellError(f"bad cell syntax {text!r}")
    items = []
    body = text[1:-1].strip()
    if body:
        for part in body.split(","):
            part = part.strip()
            if "-" in part:
                a, b = part.split("-")
                items.append((int(a), int(b)))
            else:
                items.append(vertex(int(part)))
    if not ordered:
        items.sort()
    return tuple(items), ordered
