"""The closed-form route: graph decompositions and the homology formulas.

A connected graph splits at cut vertices into biconnected pieces; each
biconnected piece splits along 2-cuts (adding virtual edges) into pieces
that are topologically triconnected or circles.  The first homology of the
braid group then reads off the decomposition census.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .graphs import Graph, GraphError, betti1, subdivide, segments
from .homology import AbelianGroup

try:
    import networkx as nx
except ImportError:
    nx = None


def is_planar(g: Graph) -> bool:
    """Planarity of the underlying simple graph (parallel edges are harmless)."""
    if nx is None:
        raise GraphError("planarity test requires networkx")
    ng = nx.Graph()
    ng.add_nodes_from(g.vertices)
    ng.add_edges_from((e.u, e.v) for e in g.edges)
    return nx.check_planarity(ng)[0]


# ---------------------------------------------------------------------------
# connectivity helpers (brute force is fine at desk scale)

def _components_without(g: Graph, banned: set) -> int:
    remaining = [v for v in g.vertices if v not in banned]
    if not remaining:
        return 0
    seen: set[str] = set()
    count = 0
    for start in remaining:
        if start in seen:
            continue
        count += 1
        stack = [start]
        seen.add(start)
        while stack:
            v = stack.pop()
            for eid in g.adjacency[v]:
                w = g.edge(eid).other(v)
                if w not in banned and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


def cut_vertices(g: Graph):
    """All 1-cuts with their component count mu(x)."""
    out = {}
    for v in g.vertices:
        if len(g.vertices) == 1:
            break
        mu = _components_without(g, {v})
        if mu >= 2:
            out[v] = mu
    return out


def biconnected_components(g: Graph):
    """Edge sets of the blocks (maximal biconnected subgraphs / bridges)."""
    index = {}
    low = {}
    stack_edges = []
    blocks = []
    timer = [0]

    def dfs(root):
        stack = [(root, None, iter(g.adjacency[root]))]
        index[root] = low[root] = timer[0]
        timer[0] += 1
        while stack:
            v, in_eid, it = stack[-1]
            advanced = False
            for eid in it:
                if eid == in_eid:
                    continue
                w = g.edge(eid).other(v)
                if w not in index:
                    stack_edges.append(eid)
                    index[w] = low[w] = timer[0]
                    timer[0] += 1
                    stack.append((w, eid, iter(g.adjacency[w])))
                    advanced = True
                    break
                elif index[w] < index[v]:
                    stack_edges.append(eid)
                    low[v] = min(low[v], index[w])
            if not advanced:
                stack.pop()
                if stack:
                    u = stack[-1][0]
                    low[u] = min(low[u], low[v])
                    if low[v] >= index[u]:
                        block = []
                        while stack_edges:
                            eid = stack_edges.pop()
                            block.append(eid)
                            if eid == in_eid:
                                break
                        blocks.append(block)

    dfs(g.vertices[0])
    return blocks


def _subgraph(g: Graph, edge_ids) -> Graph:
    vs = []
    seen = set()
    for eid in edge_ids:
        e = g.edge(eid)
        for v in (e.u, e.v):
            if v not in seen:
                seen.add(v)
                vs.append(v)
    return Graph(vs, [g.edge(eid) for eid in edge_ids])


def biconnected_decomposition(g: Graph):
    """Blocks as graphs plus the cut vertices with their mu counts."""
    work = _workable(g)
    blocks = [_subgraph(work, b) for b in biconnected_components(work)]
    return blocks, cut_vertices(work)


def _workable(g: Graph) -> Graph:
    """A copy where every topological edge has length >= 2, so vertex
    components agree with topological components and the graph is simple."""
    if all(len(s) >= 2 for s in segments(g)) and len(g.vertices) > 1:
        return g
    out, _ = subdivide(g, 1, policy=2)
    return out


# ---------------------------------------------------------------------------
# marked decomposition of a biconnected piece

@dataclass
class MarkedComponent:
    kind: str                 # "circle" | "triconnected"
    planar: bool | None
    vertices: list
    virtual_edges: int = 0


@dataclass
class BlockDecomposition:
    two_cuts: list = field(default_factory=list)   # ({x, y}, mu)
    leaves: list = field(default_factory=list)     # MarkedComponent


@dataclass
class DecompositionTree:
    graph: Graph
    cut_vertices: dict
    blocks: list                                    # per-block BlockDecomposition
    segment_blocks: int = 0

    def n3(self) -> int:
        return sum(1 for b in self.blocks for l in b.leaves
                   if l.kind == "triconnected" and l.planar)

    def n3prime(self) -> int:
        return sum(1 for b in self.blocks for l in b.leaves
                   if l.kind == "triconnected" and not l.planar)

    def n2(self) -> int:
        return sum((mu - 1) * (mu - 2) // 2
                   for b in self.blocks for _, mu in b.two_cuts)

    def to_json(self):
        return {
            "cut_vertices": {v: mu for v, mu in sorted(self.cut_vertices.items())},
            "segment_blocks": self.segment_blocks,
            "blocks": [{
                "two_cuts": [{"cut": sorted(c), "mu": mu} for c, mu in b.two_cuts],
                "leaves": [{"kind": l.kind, "planar": l.planar,
                            "essential_vertices": l.vertices} for l in b.leaves],
            } for b in self.blocks],
        }


def _is_circle(g: Graph) -> bool:
    return all(g.valency(v) == 2 for v in g.vertices)


def marked_decomposition(block: Graph) -> BlockDecomposition:
    """Iterative 2-cut splitting with virtual-edge marking until every piece
    is topologically triconnected or a circle."""
    out = BlockDecomposition()
    fresh = [0]

    def _sides(piece: Graph, x, y):
        banned = {x, y}
        seen: set[str] = set()
        comps = []
        for start in piece.vertices:
            if start in banned or start in seen:
                continue
            comp = {start}
            stack = [start]
            seen.add(start)
            while stack:
                v = stack.pop()
                for eid in piece.adjacency[v]:
                    w = piece.edge(eid).other(v)
                    if w not in banned and w not in seen:
                        seen.add(w)
                        comp.add(w)
                        stack.append(w)
            comps.append(comp)
        return comps

    def rec(piece: Graph):
        if _is_circle(piece):
            out.leaves.append(MarkedComponent("circle", True, []))
            return
        ess = sorted(v for v in piece.vertices if piece.valency(v) >= 3)
        cut = None
        for i in range(len(ess)):
            for j in range(i + 1, len(ess)):
                comps = _sides(piece, ess[i], ess[j])
                mu = len(comps)
                if mu >= 3 or (mu == 2 and all(
                        any(piece.valency(v) >= 3 for v in comp)
                        for comp in comps)):
                    # a two-sided cut must split essential structure on both
                    # sides; peeling a bare arc off makes no progress and
                    # contributes nothing to N2
                    cut = (ess[i], ess[j], mu, comps)
                    break
            if cut:
                break
        if cut is None:
            out.leaves.append(MarkedComponent(
                "triconnected", is_planar(piece), ess))
            return
        x, y, mu, comps = cut
        out.two_cuts.append(((x, y), mu))
        for comp in comps:
            keep = comp | {x, y}
            edge_ids = [e.id for e in piece.edges
                        if e.u in keep and e.v in keep
                        and (e.u in comp or e.v in comp)]
            sub = _subgraph(piece, edge_ids)
            fresh[0] += 1
            mid = f"__virt{fresh[0]}"
            marked = Graph(list(sub.vertices) + [mid],
                           list(sub.edges) + [(f"__ve{fresh[0]}a", x, mid),
                                              (f"__ve{fresh[0]}b", mid, y)])
            rec(marked)

    rec(block)
    return out


def decomposition_tree(g: Graph) -> DecompositionTree:
    work = _workable(g)
    cuts = cut_vertices(work)
    blocks, segments_count = [], 0
    for edge_ids in biconnected_components(work):
        sub = _subgraph(work, edge_ids)
        if len(sub.edges) == 1:
            segments_count += 1
            continue
        blocks.append(marked_decomposition(sub))
    return DecompositionTree(work, cuts, blocks, segments_count)


# ---------------------------------------------------------------------------
# the formulas

def N_cut(n: int, mu: int, nu: int) -> int:
    """Free 1-cells lost when splitting at a cut vertex with mu components
    and valency nu."""
    if mu < 1 or nu < mu:
        raise GraphError("need mu >= 1 and nu >= mu")
    return comb(n + mu - 2, n - 1) * (nu - 2) - comb(n + mu - 2, n) - (nu - mu - 1)


@dataclass
class InvariantBundle:
    beta1: int
    n1: int
    n2: int
    n3: int
    n3prime: int
    n: int

    def to_json(self):
        return {"beta1": self.beta1, "N1": self.n1, "N2": self.n2,
                "N3": self.n3, "N3prime": self.n3prime, "n": self.n}


def invariant_bundle(g: Graph, n: int,
                     tree: DecompositionTree | None = None) -> InvariantBundle:
    if n < 2:
        raise GraphError("the decomposition invariants need braid index >= 2")
    tree = tree or decomposition_tree(g)
    work = tree.graph
    n1 = sum(N_cut(n, mu, work.valency(x)) for x, mu in tree.cut_vertices.items())
    return InvariantBundle(betti1(g), n1, tree.n2(), tree.n3(), tree.n3prime(), n)


def h1_formula(g: Graph, n: int, flavor: str = "B",
               bundle: InvariantBundle | None = None) -> AbelianGroup:
    """H1(B_n) or H1(P_2) from the decomposition census."""
    if n == 1:
        return AbelianGroup(betti1(g))
    if flavor == "P2" and n != 2:
        raise GraphError("the pure-braid formula is for n = 2 only")
    b = bundle or invariant_bundle(g, n)
    if flavor == "B":
        return AbelianGroup(b.n1 + b.n2 + b.n3 + b.beta1, (2,) * b.n3prime)
    if flavor == "P2":
        if b.beta1 == 0 and all(g.valency(v) <= 2 for v in g.vertices):
            # a topological segment: the ordered 2-point space falls into
            # two contractible pieces and the count below does not apply
            return AbelianGroup(0)
        return AbelianGroup(2 * b.n1 + 2 * b.n2 + 2 * b.n3 + 2 * b.beta1
                            + b.n3prime - 1)
    raise GraphError(f"unknown flavor {flavor!r}")


def _valency_sum(g: Graph) -> int:
    return sum((g.valency(v) - 1) * (g.valency(v) - 2) for v in g.vertices)


def beta2_formula(g: Graph, flavor: str = "B2") -> int:
    """Second Betti numbers of the 2-strand configuration spaces.

    The B2 value follows the Euler-characteristic derivation
    beta2 = beta1(B_2) - beta1 - (1/2) sum (nu-1)(nu-2) + (1/2) beta1 (beta1-1);
    the printed closed form carries a stray "+2" that contradicts both the
    derivation and the direct computations, so it is not used.
    """
    b = invariant_bundle(g, 2)
    vsum = _valency_sum(g)
    if flavor == "B2":
        return (b.n1 + b.n2 + b.n3 - vsum // 2
                + b.beta1 * (b.beta1 - 1) // 2)
    if flavor == "P2":
        return (2 * b.n1 + 2 * b.n2 + 2 * b.n3 + b.n3prime
                + b.beta1 * (b.beta1 - 1) - vsum)
    raise GraphError(f"unknown flavor {flavor!r}")


def topologically_simple_triconnected(g: Graph) -> bool:
    b = invariant_bundle(g, 2)
    return b.n1 == 0 and b.n2 == 0 and (b.n3 + b.n3prime) == 1


def classify_beta1_characterizations(g: Graph) -> dict:
    """The planar/non-planar characterizations of beta1(P2) = 2 beta1 (+1)."""
    b = invariant_bundle(g, 2)
    planar = is_planar(g)
    beta1_p2 = h1_formula(g, 2, "P2", bundle=b).rank
    plus_one = beta1_p2 == 2 * b.beta1 + 1
    equal = beta1_p2 == 2 * b.beta1
    case = None
    if b.n3prime == 0 and b.n1 + b.n2 + b.n3 == 1:
        case = (b.n1, b.n2, b.n3)
    return {
        "planar": planar,
        "beta1": b.beta1,
        "beta1_P2": beta1_p2,
        "plus_one_holds": plus_one,
        "equality_holds": equal,
        "case": case,
        "planar_characterization_applies": planar and plus_one,
        "nonplanar_simple_triconnected":
            (not planar) and b.n1 == 0 and b.n2 == 0 and b.n3 == 0
            and b.n3prime == 1,
    }
