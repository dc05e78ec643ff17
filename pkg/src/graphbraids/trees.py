"""Maximal trees, planar-style vertex orders, and the T1-T4 conditions.

An OrderedTree numbers the vertices 0..|V|-1 by a clockwise traversal of a
regular neighborhood of an embedded spanning tree.  Every edge is oriented
with tau(e) < iota(e) under that order, and all navigation (meet, branch
numbers, separation) is answered from subtree intervals.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .graphs import Graph, GraphError, is_suitably_subdivided

try:
    import networkx as nx
except ImportError:  # planarity-dependent features degrade
    nx = None


class TreeError(ValueError):
    pass


@dataclass
class ConditionReport:
    t1: bool
    t2: bool
    t3: bool
    t4: bool | None = None
    witnesses: dict = None

    def ok(self, planar: bool = False) -> bool:
        base = self.t1 and self.t2 and self.t3
        return base and self.t4 if planar else base


class OrderedTree:
    """A spanning tree with rotation data and the induced vertex order.

    Vertices are referred to by their order numbers; ``ids`` maps numbers
    back to graph vertex ids.  ``children[v]`` lists tree children in branch
    order (branch 1, 2, ...); branch 0 of a vertex points toward the base.
    """

    def __init__(self, graph: Graph, base_id: str, children_ids: dict, n: int,
                 mode: str = "generic"):
        self.graph = graph
        self.n = n
        self.mode = mode
        nv = len(graph.vertices)
        # clockwise DFS numbering
        order: dict[str, int] = {}
        ids: list[str] = []
        stack = [base_id]
        while stack:
            v = stack.pop()
            order[v] = len(ids)
            ids.append(v)
            for c in reversed(children_ids.get(v, ())):
                stack.append(c)
        if len(ids) != nv:
            raise TreeError("children map does not span the graph")
        self.ids = ids
        self.order = order
        self.parent = [-1] * nv
        self.children = [[] for _ in range(nv)]
        for v, cs in children_ids.items():
            vn = order[v]
            self.children[vn] = [order[c] for c in cs]
            for c in cs:
                self.parent[order[c]] = vn
        # subtree sizes; DFS numbering makes subtrees contiguous intervals
        self.size = [1] * nv
        for v in range(nv - 1, 0, -1):
            self.size[self.parent[v]] += self.size[v]
        self._branch_of_child = {}
        for v in range(nv):
            for k, c in enumerate(self.children[v], start=1):
                self._branch_of_child[c] = k
        tree_pairs = set()
        for v in range(1, nv):
            tree_pairs.add((self.parent[v], v))
        self.tree_pairs = tree_pairs
        deleted = []
        self._edge_id_of_pair = {}
        for e in graph.edges:
            a, b = order[e.u], order[e.v]
            pair = (a, b) if a < b else (b, a)
            if pair in self._edge_id_of_pair:
                raise TreeError("ordered trees require a simple graph; subdivide first")
            self._edge_id_of_pair[pair] = e.id
            if pair not in tree_pairs:
                deleted.append(pair)
        if len(deleted) != len(graph.edges) - (nv - 1):
            raise TreeError("children map is not a spanning tree of the graph")
        self.deleted = sorted(deleted)
        self.deleted_set = frozenset(deleted)
        self.deleted_index = {d: i + 1 for i, d in enumerate(self.deleted)}
        ess = [v for v in range(nv) if len(self.children[v]) >= 2]
        self.essential_letter = {}
        for i, v in enumerate(ess):
            self.essential_letter[v] = (chr(ord("A") + i) if i < 26 else f"V{v}")
        self._sep_classes_cache = None

    # -- basic structure ---------------------------------------------------

    @property
    def nv(self) -> int:
        return len(self.ids)

    def is_ancestor(self, a: int, b: int) -> bool:
        """True iff a is an ancestor of b (or equal) in the tree."""
        return a <= b < a + self.size[a]

    def meet(self, v: int, w: int) -> int:
        """First intersection of the tree paths from v and w to the base."""
        while not self.is_ancestor(v, w):
            v = self.parent[v]
        return v

    def branch(self, v: int, w: int) -> int:
        """g(v, w): branch of v along the tree path toward w; 0 means toward base."""
        if v == w:
            raise TreeError("branch(v, v) is undefined")
        if not self.is_ancestor(v, w):
            return 0
        for k, c in enumerate(self.children[v], start=1):
            if self.is_ancestor(c, w):
                return k
        raise AssertionError("unreachable")

    def separates(self, edge: tuple, v: int) -> bool:
        """True iff the endpoints of edge lie in distinct components of T - v."""
        a, b = edge
        if v == a or v == b:
            return False
        m = self.meet(a, b)
        return self.is_ancestor(m, v) and (
            self.is_ancestor(v, a) or self.is_ancestor(v, b))

    def tree_valency(self, v: int) -> int:
        return len(self.children[v]) + (0 if v == 0 else 1)

    def branch_count(self, v: int) -> int:
        return len(self.children[v])

    def graph_valency(self, v: int) -> int:
        return self.graph.valency(self.ids[v])

    def is_tree_pair(self, pair: tuple) -> bool:
        return pair in self.tree_pairs

    def edge_id(self, pair: tuple) -> str:
        return self._edge_id_of_pair[pair]

    def all_edge_pairs(self):
        return sorted(self._edge_id_of_pair)

    def stem_length(self) -> int:
        """Edges from the base to the nearest tree vertex of valency >= 3."""
        v, dist = 0, 0
        while len(self.children[v]) == 1:
            v = self.children[v][0]
            dist += 1
            if self.tree_valency(v) >= 3:
                return dist
        return dist if len(self.children[v]) > 1 else self.nv

    def separated_classes(self, v: int) -> dict:
        """Branches of v that carry separated deleted edges: k -> sorted edges."""
        out: dict[int, list] = {}
        for d in self.deleted:
            if self.separates(d, v):
                k = self.branch(v, d[1])
                out.setdefault(k, []).append(d)
        return out

    def sep_classes(self) -> dict:
        if self._sep_classes_cache is None:
            self._sep_classes_cache = {
                v: self.separated_classes(v) for v in range(self.nv)
                if self.branch_count(v) >= 1}
        return self._sep_classes_cache

    def debug_dump(self) -> str:
        lines = []
        for v in range(self.nv):
            branches = " ".join(str(c) for c in self.children[v])
            lines.append(f"{v} {self.ids[v]} {self.parent[v]} [{branches}]")
        for i, d in enumerate(self.deleted, start=1):
            lines.append(f"d_{i}: {d[0]} {d[1]}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# condition verification

def verify_conditions(t: OrderedTree, planar: bool | None = None) -> ConditionReport:
    """Exhaustively check T1-T3 (and T4 when the tree was built in planar mode)."""
    if planar is None:
        planar = t.mode == "planar"
    witnesses: dict[str, object] = {}
    t1 = True
    for d in t.deleted:
        if t.graph_valency(d[1]) != 2:
            t1, witnesses["t1"] = False, d
            break
    t2 = True
    for d in t.deleted:
        for v in range(t.nv):
            if v < d[0] and t.separates(d, v):
                t2, witnesses["t2"] = False, (d, v)
                break
        if not t2:
            break
    t3 = True
    for v in range(t.nv):
        mu = t.branch_count(v)
        if mu < 2:
            continue
        classes = t.separated_classes(v)
        has_prop = [k in classes for k in range(1, mu + 1)]
        for k in range(mu):
            for j in range(k + 1, mu):
                if has_prop[k] and not has_prop[j]:
                    t3, witnesses["t3"] = False, (v, j + 1, k + 1)
                    break
            if not t3:
                break
        if not t3:
            break
    t4: bool | None = None
    if planar:
        t4 = True
        for d in t.deleted:
            for dp in t.deleted:
                if dp[0] < d[0]:
                    gd = t.branch(d[0], d[1])
                    if d[0] in (dp[0], dp[1]):
                        continue
                    gp = t.branch(d[0], dp[1]) if dp[1] != d[0] else -1
                    if gd == gp and not d[1] < dp[1]:
                        t4, witnesses["t4"] = False, (d, dp)
                        break
            if not t4:
                break
    return ConditionReport(t1, t2, t3, t4, witnesses)


# ---------------------------------------------------------------------------
# construction

def _bfs_distances(g: Graph, source: str) -> dict:
    dist = {source: 0}
    q = deque([source])
    while q:
        v = q.popleft()
        for eid in g.adjacency[v]:
            w = g.edge(eid).other(v)
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def _bridges(vertices, adj_pairs):
    """Bridge edge ids via the standard low-link DFS."""
    disc, low = {}, {}
    bridges = set()
    timer = [0]
    for root in vertices:
        if root in disc:
            continue
        stack = [(root, None, iter(adj_pairs[root]))]
        disc[root] = low[root] = timer[0]
        timer[0] += 1
        while stack:
            v, in_eid, it = stack[-1]
            advanced = False
            for eid, w in it:
                if eid == in_eid:
                    continue
                if w not in disc:
                    disc[w] = low[w] = timer[0]
                    timer[0] += 1
                    stack.append((w, eid, iter(adj_pairs[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] > disc[u]:
                        bridges.add(in_eid)
        # single pass covers the connected graph
    return bridges


def _is_cut_vertex(g: Graph, v: str) -> bool:
    rest = [w for w in g.vertices if w != v]
    if not rest:
        return False
    seen = {rest[0]}
    stack = [rest[0]]
    while stack:
        u = stack.pop()
        for eid in g.adjacency[u]:
            w = g.edge(eid).other(u)
            if w != v and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) != len(rest)


def _base_candidates(g: Graph):
    tips = sorted(v for v in g.vertices if g.valency(v) == 1)
    if tips:
        return tips
    ess = sorted(v for v in g.essential_vertices() if not _is_cut_vertex(g, v))
    others = sorted(v for v in g.vertices
                    if g.valency(v) == 2 and not _is_cut_vertex(g, v))
    return ess + others


def _greedy_deletions(g: Graph, base: str):
    """Step II: repeatedly delete an edge nearest the base on a circuit
    nearest the base.  Ties prefer an interior far endpoint, then ids."""
    alive = {e.id for e in g.edges}
    deleted = []
    while True:
        adj_pairs = {v: [(eid, g.edge(eid).other(v))
                         for eid in g.adjacency[v] if eid in alive]
                     for v in g.vertices}
        if len(alive) == len(g.vertices) - 1:
            break
        bridges = _bridges(g.vertices, adj_pairs)
        dist = {base: 0}
        q = deque([base])
        while q:
            v = q.popleft()
            for eid, w in adj_pairs[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    q.append(w)
        best = None
        for eid in alive:
            if eid in bridges:
                continue
            e = g.edge(eid)
            du, dv = dist[e.u], dist[e.v]
            near, far = (e.u, e.v) if du <= dv else (e.v, e.u)
            key = (min(du, dv), 0 if g.valency(far) == 2 else 1,
                   min(e.u, e.v), max(e.u, e.v), eid)
            if best is None or key < best[0]:
                best = (key, eid)
        if best is None:
            raise TreeError("no deletable edge although cycles remain")
        deleted.append(best[1])
        alive.discard(best[1])
    return deleted


def _dfs_tree_deletions(g: Graph, base: str):
    """Fallback Step II: take a DFS tree; all non-tree edges are back edges,
    which forces T2 and (on strictly subdivided graphs) T1."""
    visited = {base}
    tree = set()
    stack = [(base, iter(sorted(g.adjacency[base])))]
    while stack:
        v, it = stack[-1]
        for eid in it:
            w = g.edge(eid).other(v)
            if w not in visited:
                visited.add(w)
                tree.add(eid)
                stack.append((w, iter(sorted(g.adjacency[w]))))
                break
        else:
            stack.pop()
    return [e.id for e in g.edges if e.id not in tree]


def _rooted_children(g: Graph, base: str, deleted_ids, order_hint=None):
    """Orient the surviving tree away from the base; children sorted by the
    hint (rotation) or by id."""
    removed = set(deleted_ids)
    children: dict[str, list[str]] = {v: [] for v in g.vertices}
    parent = {base: None}
    q = deque([base])
    while q:
        v = q.popleft()
        nbrs = []
        for eid in g.adjacency[v]:
            if eid in removed:
                continue
            w = g.edge(eid).other(v)
            if w not in parent:
                parent[w] = v
                nbrs.append(w)
        if order_hint is not None:
            nbrs.sort(key=lambda w: order_hint(v, w))
        else:
            nbrs.sort()
        children[v] = nbrs
        q.extend(nbrs)
    if len(parent) != len(g.vertices):
        raise TreeError("deletions disconnected the graph")
    return children


def _apply_t3(g: Graph, base: str, children: dict, n: int, mode: str) -> OrderedTree:
    """Step III: stable-partition each vertex's branches so that branches
    carrying separated deleted edges come last, then renumber."""
    t = OrderedTree(g, base, children, n, mode)
    moved = False
    new_children = {}
    for v in range(t.nv):
        cs = t.children[v]
        if len(cs) < 2:
            new_children[t.ids[v]] = [t.ids[c] for c in cs]
            continue
        classes = t.separated_classes(v)
        plain = [c for k, c in enumerate(cs, start=1) if k not in classes]
        marked = [c for k, c in enumerate(cs, start=1) if k in classes]
        if marked and plain and cs != plain + marked:
            moved = True
        new_children[t.ids[v]] = [t.ids[c] for c in plain + marked]
    if moved:
        t = OrderedTree(g, base, new_children, n, mode)
    return t


def choose_tree_and_order(g: Graph, n: int, mode: str = "generic") -> OrderedTree:
    """Choose a maximal tree, embedding, and vertex order satisfying T1-T3
    (mode generic) or T1-T4 (mode planar, planar graphs only)."""
    strict = n == 2
    if not is_suitably_subdivided(g, n, strict=strict):
        raise TreeError(
            "graph is not suitably subdivided for braid index "
            f"{n}{' (n=2 needs the two-edge rule)' if strict else ''}")
    if mode == "planar":
        return _choose_planar(g, n)
    if mode != "generic":
        raise TreeError(f"unknown mode {mode!r}")
    last_error = None
    for base in _base_candidates(g):
        for strategy in (_greedy_deletions, _dfs_tree_deletions):
            deleted = strategy(g, base)
            children = _rooted_children(g, base, deleted)
            t = _apply_t3(g, base, children, n, "generic")
            report = verify_conditions(t)
            if report.ok() and t.stem_length() >= n - 1:
                return t
            last_error = report
    raise TreeError(f"could not satisfy T1-T3 on this graph: {last_error}")


# ---------------------------------------------------------------------------
# planar mode

def _planar_rotations(g: Graph):
    if nx is None:
        raise TreeError("planar mode requires networkx")
    ng = nx.Graph()
    ng.add_nodes_from(g.vertices)
    for e in g.edges:
        ng.add_edge(e.u, e.v)
    ok, emb = nx.check_planarity(ng)
    if not ok:
        raise TreeError("graph is not planar")
    return {v: list(emb.neighbors_cw_order(v)) for v in g.vertices}


def _trace_face(rot: dict, start, reverse: bool):
    """Half-edges of the face containing the half-edge `start`."""
    face = []
    he = start
    while True:
        face.append(he)
        u, v = he
        nbrs = rot[v]
        i = nbrs.index(u)
        w = nbrs[(i - 1) % len(nbrs)] if not reverse else nbrs[(i + 1) % len(nbrs)]
        he = (v, w)
        if he == start:
            return face


def _choose_planar(g: Graph, n: int) -> OrderedTree:
    for reverse in (False, True):
        for number_reverse in (not reverse, reverse):
            for base in _base_candidates(g):
                try:
                    t = _build_planar(g, n, base, reverse, number_reverse)
                except TreeError:
                    continue
                report = verify_conditions(t, planar=True)
                if report.ok(planar=True) and t.stem_length() >= n - 1:
                    return t
    raise TreeError("could not satisfy T1-T4; is the graph planar and subdivided?")


def _build_planar(g: Graph, n: int, base: str, reverse: bool,
                  number_reverse: bool | None = None) -> OrderedTree:
    rot = {v: list(ns) for v, ns in _planar_rotations(g).items()}
    # outer face: a deterministic face through the base
    outer = None
    for w in rot[base]:
        face = _trace_face(rot, (base, w), reverse)
        if outer is None or (len(face), face) > (len(outer), outer):
            outer = face
    outer_set = set(outer)
    alive = {(min(e.u, e.v), max(e.u, e.v)): e.id for e in g.edges}
    key = lambda u, v: (min(u, v), max(u, v))
    deleted_ids = []
    while len(alive) > len(g.vertices) - 1:
        adj_pairs = {v: [(eid, g.edge(eid).other(v))
                         for eid in g.adjacency[v]
                         if key(v, g.edge(eid).other(v)) in alive
                         and alive[key(v, g.edge(eid).other(v))] == eid]
                     for v in g.vertices}
        bridges = _bridges(g.vertices, adj_pairs)
        start = next(he for he in outer if he in outer_set and he[0] == base)
        walk = _trace_face(rot, start, reverse)
        hit = None
        for he in walk:
            eid = alive.get(key(*he))
            if eid is not None and eid not in bridges:
                hit = he
                break
        if hit is None:
            raise TreeError("outer walk found no circuit edge but cycles remain")
        a, b = hit
        inner = _trace_face(rot, (b, a), reverse)
        outer_set.discard((a, b))
        outer_set.update(he for he in inner if he != (b, a))
        deleted_ids.append(alive.pop(key(a, b)))
        rot[a].remove(b)
        rot[b].remove(a)
        outer = [he for he in _trace_face(rot, next(h for h in rot_half_edges(rot, base) if h in outer_set), reverse)]
        outer_set = set(outer)
    # rotation-respecting children order: start after the parent, cyclically
    if number_reverse is None:
        number_reverse = not reverse

    def order_hint_factory():
        parent_of = {}

        def hint(v, w):
            nbrs = rot[v]
            if v == base:
                return nbrs.index(w)
            p = parent_of.get(v)
            i = nbrs.index(p)
            j = nbrs.index(w)
            return (j - i) % len(nbrs) if not number_reverse else (i - j) % len(nbrs)

        return parent_of, hint

    parent_of, hint = order_hint_factory()
    removed = set(deleted_ids)
    children: dict[str, list[str]] = {v: [] for v in g.vertices}
    seen = {base: None}
    stack = [base]
    orderq = deque([base])
    while orderq:
        v = orderq.popleft()
        nbrs = []
        for eid in g.adjacency[v]:
            if eid in removed:
                continue
            w = g.edge(eid).other(v)
            if w not in seen:
                seen[w] = v
                parent_of[w] = v
                nbrs.append(w)
        nbrs.sort(key=lambda w: hint(v, w))
        children[v] = nbrs
        orderq.extend(nbrs)
    t = _apply_t3(g, base, children, n, "planar")
    return t


def rot_half_edges(rot, v):
    return [(v, w) for w in rot[v]]


def meet(t: OrderedTree, v, w):
    """Public meet on vertex ids or numbers."""
    v = t.order[v] if isinstance(v, str) else v
    w = t.order[w] if isinstance(w, str) else w
    return t.meet(v, w)


def branch(t: OrderedTree, v, w):
    v = t.order[v] if isinstance(v, str) else v
    w = t.order[w] if isinstance(w, str) else w
    return t.branch(v, w)


def separates(t: OrderedTree, edge, v):
    v = t.order[v] if isinstance(v, str) else v
    return t.separates(edge, v)
