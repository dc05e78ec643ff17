"""The Morse engine: matching, chain reduction, Morse boundaries, critical
cell names, and the closed boundary formulas.

Reduction follows the matching W cellwise with memoization; the one-step
special-reduction move is taken whenever its hypotheses hold (unordered
flavor only: the ordered analogue fails for n >= 3, so ordered cells are
always expanded through the full square).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import cells as C
from .trees import OrderedTree, verify_conditions


class MorseError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# reduction

class Reducer:
    """Memoized stabilized reduction onto critical cells of one flavor."""

    def __init__(self, tree: OrderedTree, ordered: bool = False,
                 use_shortcut: bool = True):
        self.t = tree
        self.ordered = ordered
        self.use_shortcut = use_shortcut and not ordered
        self.memo: dict = {}

    # one-step plan for a redundant cell: list of (cell, coeff) to recurse on
    def _plan(self, cell):
        t = self.t
        cls = C.classify(t, cell)
        if cls.kind == "critical":
            return "critical", None
        if cls.kind == "collapsible":
            return "collapsible", None
        if self.use_shortcut:
            move = self._shortcut_move(cell)
            if move is not None:
                return "redundant", [(move, 1)]
        w = C.matching(t, cell, ordered=self.ordered)
        faces = C.boundary(w, ordered=self.ordered)
        self_coeff = 0
        for f, s in faces:
            if f == cell:
                self_coeff += s
        assert self_coeff in (1, -1), "matched face must appear once"
        eps = -self_coeff
        deps = {}
        for f, s in faces:
            if f == cell:
                continue
            deps[f] = deps.get(f, 0) + eps * s
        return "redundant", [(f, c) for f, c in deps.items() if c]

    def _shortcut_move(self, cell):
        """One V-move c -> V_e(c) when the special-reduction hypotheses hold."""
        t = self.t
        occupied = set(C.cell_vertices(cell))
        ends = set()
        edges = C.cell_edges(cell)
        for a, b in edges:
            ends.add(a)
            ends.add(b)
        for v in sorted(C.unblocked_vertices(t, cell)):
            lo = t.parent[v]
            blockers = [w for w in (occupied | ends) if lo < w < v]
            if not blockers:
                return self._apply_move(cell, v, lo)
            if len(edges) == 1 and C.cell_dim(cell) == 1:
                # strengthened 1-cell form: blocked vertices in the gap are
                # fine, and an end of the edge in the gap is fine when the
                # edge is not separated by the move's target
                p = edges[0]
                vs_in_gap = [w for w in occupied if lo < w < v]
                if any(w in C.unblocked_vertices(t, cell) for w in vs_in_gap):
                    continue
                ends_in_gap = [w for w in p if lo < w < v]
                if ends_in_gap and t.separates(p, lo):
                    continue
                return self._apply_move(cell, v, lo)
        return None

    def _apply_move(self, cell, v, target):
        rep = C.vertex(target)
        if self.ordered:
            return tuple(rep if it == (v, -1) else it for it in cell)
        out = [rep if it == (v, -1) else it for it in cell]
        out.sort()
        return tuple(out)

    def reduce_cell(self, cell0):
        memo = self.memo
        if cell0 in memo:
            return memo[cell0]
        plans: dict = {}
        stack = [(cell0, False)]
        in_progress = set()
        steps = 0
        while stack:
            steps += 1
            if steps > 5_000_000:
                raise MorseError("reduction iteration cap exceeded (bug)")
            cell, ready = stack.pop()
            if cell in memo:
                continue
            plan = plans.get(cell)
            if plan is None:
                plan = self._plan(cell)
                plans[cell] = plan
            kind, deps = plan
            if kind == "critical":
                memo[cell] = {cell: 1}
                continue
            if kind == "collapsible":
                memo[cell] = {}
                continue
            if not ready:
                if cell in in_progress:
                    raise MorseError("cyclic reduction dependency (bug)")
                in_progress.add(cell)
                stack.append((cell, True))
                for f, _ in deps:
                    if f not in memo:
                        stack.append((f, False))
            else:
                acc: dict = {}
                for f, coeff in deps:
                    for cc, x in memo[f].items():
                        acc[cc] = acc.get(cc, 0) + coeff * x
                memo[cell] = {k: v for k, v in acc.items() if v}
                in_progress.discard(cell)
        return memo[cell0]

    def reduce_chain(self, chain: dict) -> dict:
        acc: dict = {}
        for cell, coeff in chain.items():
            if not coeff:
                continue
            for cc, x in self.reduce_cell(cell).items():
                acc[cc] = acc.get(cc, 0) + coeff * x
        return {k: v for k, v in acc.items() if v}


def reduce_chain(t: OrderedTree, chain: dict, ordered: bool = False,
                 use_shortcut: bool = True) -> dict:
    return Reducer(t, ordered, use_shortcut).reduce_chain(chain)


def morse_boundary(t_or_reducer, cell, ordered: bool = False) -> dict:
    """The Morse boundary: reduce the cubical boundary onto critical cells."""
    red = (t_or_reducer if isinstance(t_or_reducer, Reducer)
           else Reducer(t_or_reducer, ordered))
    chain = {}
    for f, s in C.boundary(cell, ordered=red.ordered):
        chain[f] = chain.get(f, 0) + s
    return red.reduce_chain(chain)


# ---------------------------------------------------------------------------
# names of critical cells

@dataclass(frozen=True)
class Term:
    kind: str        # "tree" | "deleted"
    edge: tuple      # (tau, iota)
    vec: tuple       # blocked-vertex counts over branches of tau(edge)

    @property
    def tau(self):
        return self.edge[0]


@dataclass(frozen=True)
class CriticalName:
    terms: tuple     # Terms sorted by descending tau
    s0: int          # length of the 0_s prefix
    sigma: tuple | None = None
    canonical: bool = True


def _prefix_length(t: OrderedTree, vset) -> int:
    s = 0
    while s in vset and (s == 0 or t.parent[s] == s - 1):
        s += 1
    return s


def name_critical_cell(t: OrderedTree, cell, sigma=None):
    """Structured name of a critical cell, or None when the cell does not fit
    the standard forms (possible on trees violating T1/T2)."""
    verts = set(C.cell_vertices(cell))
    edges = C.cell_edges(cell)
    s0 = _prefix_length(t, verts)
    rest = sorted(verts - set(range(s0)))
    end_owner = {}
    for e in edges:
        end_owner[e[0]] = e
        end_owner[e[1]] = e
    assign: dict[tuple, list[int]] = {e: [] for e in edges}
    for v in rest:
        r = v
        while t.parent[r] in verts:
            r = t.parent[r]
        p = t.parent[r]
        e = end_owner.get(p)
        if e is None:
            return None
        k = t.branch(e[0], v) if t.is_ancestor(e[0], v) and e[0] != v else 0
        if k == 0:
            return None
        assign[e].append(k)
    terms = []
    for e in edges:
        mu = t.branch_count(e[0])
        vec = [0] * mu
        for k in assign[e]:
            if k > mu:
                return None
            vec[k - 1] += 1
        kind = "deleted" if e in t.deleted_set else "tree"
        terms.append(Term(kind, e, tuple(vec)))
    terms.sort(key=lambda tm: -tm.tau)
    name = CriticalName(tuple(terms), s0, sigma)
    back = materialize_name(t, name)
    if back is None or back != tuple(sorted(cell)):
        name = CriticalName(tuple(terms), s0, sigma, canonical=False)
    return name


def _branch_chain(t: OrderedTree, a: int, k: int, skip_first: bool, count: int):
    """The first `count` blocked-vertex slots along branch k of a, optionally
    skipping the branch's first vertex (occupied by an edge end)."""
    out = []
    cur = t.children[a][k - 1]
    if skip_first:
        if len(t.children[cur]) != 1:
            return None
        cur = t.children[cur][0]
    for i in range(count):
        out.append(cur)
        if i + 1 < count:
            if len(t.children[cur]) != 1:
                return None
            cur = t.children[cur][0]
    return out


def materialize_name(t: OrderedTree, name: CriticalName):
    """Inverse of naming: build the sorted cell a CriticalName denotes."""
    items = []
    for tm in name.terms:
        items.append(tm.edge)
        a = tm.tau
        own_branch = t.branch(a, tm.edge[1]) if t.is_ancestor(a, tm.edge[1]) and a != tm.edge[1] else 0
        for i, cnt in enumerate(tm.vec, start=1):
            if not cnt:
                continue
            skip = tm.kind == "tree" and i == own_branch
            chain = _branch_chain(t, a, i, skip, cnt)
            if chain is None:
                return None
            items.extend(C.vertex(v) for v in chain)
    items.extend(C.vertex(v) for v in range(name.s0))
    cell = tuple(sorted(items))
    used = [x for it in cell for x in C.closure_vertices(it)]
    if len(set(used)) != len(used) or len(set(cell)) != len(cell):
        return None
    return cell


def format_name(t: OrderedTree, name: CriticalName | None, cell=None,
                ordered: bool = False) -> str:
    if name is None or not name.canonical:
        return C.format_cell(cell, ordered=ordered) if cell is not None else "?"
    parts = []
    for tm in name.terms:
        if tm.kind == "deleted":
            head = f"d_{t.deleted_index[tm.edge]}"
        else:
            a = tm.tau
            letter = t.essential_letter.get(a, f"V{a}")
            head = f"{letter}_{t.branch(a, tm.edge[1])}"
        if any(tm.vec):
            head += "(" + ",".join(str(x) for x in tm.vec) + ")"
        parts.append(head)
    if not parts:
        parts.append(f"0_{name.s0}")
    body = " ∪ ".join(parts)
    if name.sigma is not None:
        body += "_" + C.perm_cycles(name.sigma)
    return body


# ---------------------------------------------------------------------------
# basis orders (reversed in the Morse complex)

def edge_sort_key(t: OrderedTree, e):
    return (1 if e in t.deleted_set else 0, e[0], e[1])


def _vec_profile(t: OrderedTree, tau: int, vlist):
    mu = t.branch_count(tau)
    vec = [0] * (mu + 1)
    for v in vlist:
        k = t.branch(tau, v) if t.is_ancestor(tau, v) and tau != v else 0
        vec[k] += 1
    return (vec[0],) + tuple(vec[1:])


def cell_sort_key(t: OrderedTree, cell, sigma=None):
    """Basis order: 1-cells by (size, edge, vector) and 2-cells by the
    6-tuple; vertex tuples and the permutation break remaining ties."""
    verts = set(C.cell_vertices(cell))
    s0 = _prefix_length(t, verts)
    rest = sorted(verts - set(range(s0)))
    edges = sorted(C.cell_edges(cell), key=lambda e: e[0], reverse=True)
    sig = tuple(-x for x in sigma) if sigma is not None else ()
    dim = len(edges)
    if dim == 0:
        return (0, (), (), (), 0, (), (), tuple(rest), sig)
    owner = _owner_map(t, cell)
    if dim == 1:
        e = edges[0]
        mine = [v for v in rest if owner.get(v) == e]
        prof = _vec_profile(t, e[0], mine)
        return (len(rest), edge_sort_key(t, e), prof, (), 0, (), (),
                tuple(rest), sig)
    e, ep = edges[0], edges[1]
    mine = [v for v in rest if owner.get(v) == e]
    other = [v for v in rest if owner.get(v) == ep]
    g = t.branch(e[0], ep[1]) if t.is_ancestor(e[0], ep[1]) and e[0] != ep[1] else 0
    prof = list(_vec_profile(t, e[0], mine))
    prof[g if g <= t.branch_count(e[0]) else 0] += 1
    if dim > 2:
        return (len(mine), tuple(edge_sort_key(t, x) for x in edges),
                tuple(prof), (), 0, (), (), tuple(rest), sig)
    return (len(mine), edge_sort_key(t, e), tuple(prof), (g,),
            0, edge_sort_key(t, ep), _vec_profile(t, ep[0], other),
            tuple(rest), sig)


def _owner_map(t: OrderedTree, cell):
    """Which edge of the cell blocks each non-prefix vertex."""
    verts = set(C.cell_vertices(cell))
    end_owner = {}
    for e in C.cell_edges(cell):
        end_owner[e[0]] = e
        end_owner[e[1]] = e
    owner = {}
    s0 = _prefix_length(t, verts)
    for v in verts:
        if v < s0:
            continue
        r = v
        while t.parent[r] in verts and t.parent[r] >= s0:
            r = t.parent[r]
        owner[v] = end_owner.get(t.parent[r])
    return owner


# ---------------------------------------------------------------------------
# closed-form boundary formulas

def _p(vec):
    for i, a in enumerate(vec, start=1):
        if a:
            return i
    return 0


def _vec_minus_alpha(vec, alpha):
    out = list(vec)
    for _ in range(alpha):
        i = _p(out)
        if not i:
            return None
        out[i - 1] -= 1
    return tuple(out)


def _delta(mu, k):
    out = [0] * mu
    out[k - 1] += 1
    return tuple(out)


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def bold_A(t: OrderedTree, a_vertex: int, vec, ell: int, n: int):
    """The reduction of the staircase sum: surviving critical 1-cells of
    A_{p(vec-alpha)}((vec-alpha) - delta_p + delta_ell), alpha = 0..|vec|;
    a term survives exactly when ell < p(vec-alpha)."""
    out: dict = {}
    cur = tuple(vec)
    while True:
        p = _p(cur)
        if p == 0:
            break
        if ell < p:
            v = list(cur)
            v[p - 1] -= 1
            v[ell - 1] += 1
            edge = (a_vertex, t.children[a_vertex][p - 1])
            s0 = n - 1 - sum(v)
            name = CriticalName((Term("tree", edge, tuple(v)),), s0)
            cell = materialize_name(t, name)
            if cell is None:
                raise MorseError("bold-A term failed to materialize")
            out[cell] = out.get(cell, 0) + 1
        cur = _vec_minus_alpha(cur, 1)
    return out


def wedge_cell(t: OrderedTree, d, dp, s0: int, strict: bool = True):
    """The critical 1-cell at the meet of the initial vertices of two
    deleted edges: C_max(delta_min).  Degenerate configurations (possible
    only when T2 fails) return None unless strict."""
    c = t.meet(d[1], dp[1])
    if c in (d[1], dp[1]):
        if strict:
            raise MorseError("wedge undefined: one initial vertex is an "
                             "ancestor of the other")
        return None
    ga, gb = t.branch(c, d[1]), t.branch(c, dp[1])
    ell, k = min(ga, gb), max(ga, gb)
    edge = (c, t.children[c][k - 1])
    name = CriticalName((Term("tree", edge, _delta(t.branch_count(c), ell)),), s0)
    cell = materialize_name(t, name)
    if cell is None:
        if strict:
            raise MorseError("wedge cell failed to materialize")
        return None
    return cell


def bare_fill(t: OrderedTree, items, count: int):
    """Complete items with `count` blocked vertices packed as low as the
    closures allow (the 0_s prefix, shifted past any occupied endpoint)."""
    used = set()
    for it in items:
        used.update(C.closure_vertices(it))
    verts = set(C.cell_vertices(items))
    ends = used - verts
    out = list(items)
    v = 0
    while count > 0 and v < t.nv:
        if v not in used and (v == 0 or t.parent[v] in verts or t.parent[v] in ends):
            out.append(C.vertex(v))
            verts.add(v)
            used.add(v)
            count -= 1
        v += 1
    if count:
        raise MorseError("could not complete cell with blocked vertices")
    return tuple(sorted(out))


def fast_morse_boundary(t: OrderedTree, cell) -> dict:
    """Closed-form Morse boundary of an unordered critical 2-cell on a tree
    satisfying T1-T3.  Raises for shapes outside the three standard forms.

    Both formulas share one skeleton over the edge e carrying the blocked
    vector: e(a) - e(a + delta_ell) - boldA(a, ell) + boldA(a + delta_k, ell)
    with k the branch of e itself and ell the branch toward the other edge,
    plus a wedge term when both edges are deleted and k = ell, signed -1
    exactly when e has the smaller initial vertex.
    """
    n = len(cell)
    name = name_critical_cell(t, cell)
    if name is None or not name.canonical or len(name.terms) != 2:
        raise MorseError(f"unsupported 2-cell shape {C.format_cell(cell)}")
    hi, lo = name.terms
    kinds = (hi.kind, lo.kind)
    if kinds == ("tree", "tree"):
        return {}
    if kinds == ("deleted", "tree"):
        # the tree edge's vertex sits above tau of the deleted edge; under
        # T2 the deleted edge is not separated there, so the image vanishes
        own, other = lo, hi
    elif kinds == ("tree", "deleted"):
        own, other = hi, lo
    else:
        own, other = hi, lo
    a = own.tau
    if not t.separates(other.edge, a):
        return {}
    mu = t.branch_count(a)
    k = t.branch(a, own.edge[1])
    ell = t.branch(a, other.edge[1])
    avec = own.vec

    def one_cell(vec):
        s0 = n - 1 - sum(vec)
        nm = CriticalName((Term(own.kind, own.edge, tuple(vec)),), s0)
        cc = materialize_name(t, nm)
        if cc is None:
            raise MorseError("boundary term failed to materialize")
        return cc

    out: dict = {}

    def add(cellv, coeff):
        if coeff:
            out[cellv] = out.get(cellv, 0) + coeff
            if not out[cellv]:
                del out[cellv]

    add(one_cell(avec), 1)
    add(one_cell(_vec_add(avec, _delta(mu, ell))), -1)
    for cc, x in bold_A(t, a, avec, ell, n).items():
        add(cc, -x)
    for cc, x in bold_A(t, a, _vec_add(avec, _delta(mu, k)), ell, n).items():
        add(cc, x)
    if own.kind == "deleted" and k == ell:
        eps = -1 if own.edge[1] < other.edge[1] else 1
        add(wedge_cell(t, own.edge, other.edge, n - 2), eps)
    return out


def fast_morse_boundary_ordered(t: OrderedTree, cell_tuple) -> dict:
    """Closed-form Morse boundary of an ordered critical 2-cell, n = 2 only."""
    if len(cell_tuple) != 2:
        raise MorseError("ordered closed forms exist only for n = 2")
    sc, sigma = C.phi(cell_tuple)
    dp, d = sc  # sorted: tau(dp) < tau(d)
    if d not in t.deleted_set or dp not in t.deleted_set:
        raise MorseError("ordered critical 2-cells must be pairs of deleted edges")
    a = d[0]
    out: dict = {}
    if not t.separates(dp, a):
        return out
    k = t.branch(a, d[1])
    ell = t.branch(a, dp[1])
    rho = (2, 1)
    ident = (1, 2)

    def emit(sorted_cell, tau, coeff):
        sub = tau if sigma == ident else (rho if tau == ident else ident)
        tup = C.phi_inverse(sorted_cell, sub)
        out[tup] = out.get(tup, 0) + coeff
        if not out[tup]:
            del out[tup]

    bare = materialize_name(t, CriticalName((Term("deleted", d, (0,) * t.branch_count(a)),), 1))
    dvec = materialize_name(t, CriticalName((Term("deleted", d, _delta(t.branch_count(a), ell)),), 0))
    if bare is None or dvec is None:
        raise MorseError("ordered boundary term failed to materialize")
    emit(bare, ident, 1)
    emit(dvec, rho, -1)
    if d[1] < dp[1]:
        if k == ell:
            emit(wedge_cell(t, d, dp, 0), ident, -1)
    else:
        emit(wedge_cell(t, d, dp, 0), rho, 1)
    return out


# ---------------------------------------------------------------------------
# the Morse complex

@dataclass
class MorseComplex:
    tree: OrderedTree
    n: int
    flavor: str
    critical: dict          # dim -> list of cells, largest basis key first
    index: dict             # dim -> {cell: row index}
    boundaries: dict        # dim -> matrix rows=dim cells, cols=(dim-1) cells
    cell_counts: dict       # dim -> size of the full complex
    names: dict             # cell -> CriticalName
    provenance: str = "generic"

    @property
    def ordered(self) -> bool:
        return self.flavor == "ordered"

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(cs) for d, cs in self.critical.items())

    def full_euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in self.cell_counts.items())

    def validate_chain_complex(self):
        from .intlinalg import mat_mul
        dims = sorted(self.boundaries)
        for d in dims:
            if d - 1 in self.boundaries:
                prod = mat_mul(self.boundaries[d], self.boundaries[d - 1])
                assert all(all(x == 0 for x in row) for row in prod), \
                    f"d o d != 0 in degree {d}"

    def name_of(self, cell) -> str:
        nm = self.names.get(cell)
        if self.ordered:
            sc, sg = C.phi(cell)
            return format_name(self.tree, nm, cell, ordered=True)
        return format_name(self.tree, nm, cell)


def tree_satisfies_t123(t: OrderedTree) -> bool:
    if not hasattr(t, "_t123"):
        t._t123 = verify_conditions(t).ok()
    return t._t123


def build_morse_complex(t: OrderedTree, n: int, flavor: str = "unordered",
                        path: str = "generic", cap: int = 10_000_000) -> MorseComplex:
    """Enumerate, classify, and reduce to the Morse complex with boundary
    matrices over the reversed bases.

    path "fast" evaluates the closed formulas for the degree-2 boundary,
    "generic" iterates the reduction, "both" runs the two and insists they
    agree cellwise.
    """
    if flavor not in ("unordered", "ordered"):
        raise MorseError(f"unknown flavor {flavor!r}")
    ordered = flavor == "ordered"
    if path in ("fast", "both"):
        if ordered and n >= 3:
            raise MorseError("no closed boundary formulas for ordered n >= 3")
        if not ordered and not tree_satisfies_t123(t):
            raise MorseError("fast path needs a tree satisfying T1-T3")
    by_dim = C.enumerate_cells(t, n, flavor, cap=cap)
    counts = {d: len(cs) for d, cs in by_dim.items()}
    critical: dict[int, list] = {}
    names: dict = {}
    for d, cs in sorted(by_dim.items()):
        crit = [c for c in cs if C.classify(t, c).kind == "critical"]
        if ordered:
            def key(cell):
                sc, sg = C.phi(cell)
                return cell_sort_key(t, sc, sg)
        else:
            def key(cell):
                return cell_sort_key(t, cell)
        crit.sort(key=key, reverse=True)
        critical[d] = crit
        for c in crit:
            if ordered:
                sc, sg = C.phi(c)
                names[c] = name_critical_cell(t, sc, sg)
            else:
                names[c] = name_critical_cell(t, c)
    index = {d: {c: i for i, c in enumerate(cs)} for d, cs in critical.items()}
    red = Reducer(t, ordered)
    boundaries: dict[int, list] = {}
    for d in sorted(critical):
        if d == 0 or not critical[d]:
            continue
        rows = []
        lower = index.get(d - 1, {})
        for cell in critical[d]:
            if d == 2 and path == "fast":
                chain = _fast_for(t, cell, ordered)
            else:
                chain = morse_boundary(red, cell)
                if d == 2 and path == "both":
                    fast = _fast_for(t, cell, ordered)
                    if fast != chain:
                        raise MorseError(
                            f"fast/generic disagree on {C.format_cell(cell, ordered)}: "
                            f"{fast} vs {chain}")
            row = [0] * len(lower)
            for cc, x in chain.items():
                row[lower[cc]] = x
            rows.append(row)
        boundaries[d] = rows
    return MorseComplex(t, n, flavor, critical, index, boundaries, counts,
                        names, provenance=path)


def _fast_for(t: OrderedTree, cell, ordered: bool) -> dict:
    if ordered:
        return fast_morse_boundary_ordered(t, cell)
    return fast_morse_boundary(t, cell)
