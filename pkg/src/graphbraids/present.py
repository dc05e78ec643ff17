"""Group presentations of graph braid groups from the Morse complex.

Generators are critical 1-cells; relators are boundary words of critical
2-cells pushed through the rewriting homomorphism onto critical 1-cells.
Tietze elimination then removes pivotal generators in decreasing order and
contracts separating generators along the labeled graph of their relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import cells as C
from .morse import MorseComplex, MorseError, cell_sort_key
from .homology import AbelianGroup, classify_1cells


# ---------------------------------------------------------------------------
# words in a free group; letters are (generator, +-1)

Word = tuple


def free_reduce(w) -> Word:
    out = []
    for g, e in w:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def wmul(*ws) -> Word:
    out = []
    for w in ws:
        for g, e in w:
            if out and out[-1][0] == g and out[-1][1] == -e:
                out.pop()
            else:
                out.append((g, e))
    return tuple(out)


def winv(w) -> Word:
    return tuple((g, -e) for g, e in reversed(w))


def cyclic_reduce(w) -> Word:
    w = free_reduce(w)
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return w


def exponent_sums(w) -> dict:
    out: dict = {}
    for g, e in w:
        out[g] = out.get(g, 0) + e
        if not out[g]:
            del out[g]
    return out


def substitute(w, gen, repl) -> Word:
    out = []
    for g, e in w:
        if g == gen:
            out.extend(repl if e == 1 else winv(repl))
        else:
            out.append((g, e))
    return free_reduce(tuple(out))


# ---------------------------------------------------------------------------
# boundary words and the rewriting homomorphism

def boundary_word(cell, ordered: bool = False) -> Word:
    """Read the square boundary of a 2-cell: with e the edge of larger
    terminal vertex and e' the other, the word is
    [e'->iota][e->tau][e'->tau]^-1[e->iota]^-1."""
    positions = [(i, it) for i, it in enumerate(cell) if it[1] != -1]
    if len(positions) != 2:
        raise MorseError("boundary words are defined for 2-cells")
    positions.sort(key=lambda p: p[1][0])
    (pos_lo, e_lo), (pos_hi, e_hi) = positions

    def face(pos, repl):
        out = list(cell)
        out[pos] = C.vertex(repl)
        if not ordered:
            out.sort()
        return tuple(out)

    return ((face(pos_lo, e_lo[1]), 1), (face(pos_hi, e_hi[0]), 1),
            (face(pos_lo, e_lo[0]), -1), (face(pos_hi, e_hi[1]), -1))


class Rewriter:
    """Memoized rewriting of 1-cells into words over critical 1-cells."""

    def __init__(self, tree, ordered: bool = False):
        self.t = tree
        self.ordered = ordered
        self.memo: dict = {}

    def _plan(self, cell):
        t = self.t
        cls = C.classify(t, cell)
        if cls.kind == "critical":
            return "critical", None
        if cls.kind == "collapsible":
            return "collapsible", None
        if not self.ordered:
            move = self._shortcut(cell)
            if move is not None:
                return "redundant", [(move, 1)]
        v = cls.witness
        w = C.matching(t, cell, ordered=self.ordered)
        e = next(it for it in cell if it[1] != -1)
        pos_e = list(w).index(e)
        pos_t = list(w).index((t.parent[v], v))

        def face(pos, repl):
            out = list(w)
            out[pos] = C.vertex(repl)
            if not self.ordered:
                out.sort()
            return tuple(out)

        return "redundant", [(face(pos_e, e[1]), 1),
                             (face(pos_t, t.parent[v]), 1),
                             (face(pos_e, e[0]), -1)]

    def _shortcut(self, cell):
        t = self.t
        occupied = set(C.cell_vertices(cell))
        ends = set()
        for a, b in C.cell_edges(cell):
            ends.add(a)
            ends.add(b)
        for v in sorted(C.unblocked_vertices(t, cell)):
            lo = t.parent[v]
            if not any(lo < w < v for w in (occupied | ends)):
                out = [C.vertex(lo) if it == (v, -1) else it for it in cell]
                out.sort()
                return tuple(out)
        return None

    def rewrite_cell(self, cell0) -> Word:
        memo = self.memo
        if cell0 in memo:
            return memo[cell0]
        plans: dict = {}
        stack = [(cell0, False)]
        guard = 0
        while stack:
            guard += 1
            if guard > 2_000_000:
                raise MorseError("rewriting iteration cap exceeded (bug)")
            cell, ready = stack.pop()
            if cell in memo:
                continue
            plan = plans.get(cell)
            if plan is None:
                plan = self._plan(cell)
                plans[cell] = plan
            kind, deps = plan
            if kind == "critical":
                memo[cell] = ((cell, 1),)
                continue
            if kind == "collapsible":
                memo[cell] = ()
                continue
            if not ready:
                stack.append((cell, True))
                for f, _ in deps:
                    if f not in memo:
                        stack.append((f, False))
            else:
                memo[cell] = wmul(*[memo[f] if e == 1 else winv(memo[f])
                                    for f, e in deps])
        return memo[cell0]

    def rewrite_word(self, w) -> Word:
        return wmul(*[self.rewrite_cell(g) if e == 1 else winv(self.rewrite_cell(g))
                      for g, e in w])


def rewrite(t, w, ordered: bool = False) -> Word:
    return Rewriter(t, ordered).rewrite_word(w)


# ---------------------------------------------------------------------------
# presentations

@dataclass
class Presentation:
    generators: list
    relators: list
    names: dict = field(default_factory=dict)
    history: list = field(default_factory=list)
    killed: object = None

    def abelianization(self) -> AbelianGroup:
        index = {g: i for i, g in enumerate(self.generators)}
        rows = []
        for r in self.relators:
            row = [0] * len(self.generators)
            for g, e in r:
                row[index[g]] += e
            rows.append(row)
        return AbelianGroup.from_presentation(len(self.generators), rows)

    def display(self):
        return {
            "generators": [self.names.get(g, str(g)) for g in self.generators],
            "relators": [format_word(r, self.names) for r in self.relators],
            "history": list(self.history),
        }


def format_word(w, names: dict) -> str:
    if not w:
        return "1"
    com = commutator_form(w)
    if com:
        u, v = com
        return f"[{format_word(u, names)},{format_word(v, names)}]"
    parts = []
    for g, e in w:
        s = names.get(g, str(g))
        parts.append(s if e == 1 else s + "^-1")
    return "*".join(parts)


def raw_presentation(mc: MorseComplex) -> Presentation:
    """Generators = critical 1-cells; relators = rewritten boundary words of
    critical 2-cells.  Ordered flavor (n = 2): the fundamental group of the
    Morse complex with its critical 0-cells identified is P_2 * Z, so one
    generator joining the two 0-cells is killed."""
    t = mc.tree
    rw = Rewriter(t, mc.ordered)
    gens = list(mc.critical.get(1, ()))
    relators = []
    for c2 in mc.critical.get(2, ()):
        relators.append(rw.rewrite_word(boundary_word(c2, mc.ordered)))
    names = {c: mc.name_of(c) for c in gens}
    pres = Presentation(gens, relators, names)
    if mc.ordered:
        if mc.n != 2:
            raise MorseError("presentations of pure braid groups need n = 2")
        join = None
        rows = mc.boundaries.get(1, [])
        for cell, row in zip(reversed(mc.critical[1]), reversed(rows)):
            if any(row):
                join = cell
                break
        if join is None:
            raise MorseError("no critical 1-cell joins the two 0-cells")
        pres.generators.remove(join)
        pres.relators = [free_reduce(tuple((g, e) for g, e in r if g != join))
                         for r in pres.relators]
        pres.killed = join
        pres.history.append(f"kill joining generator {names[join]}")
    return pres


def _leading_pairs(mc: MorseComplex):
    """(pivotal 2-cell, pivotal 1-cell) pairs: group boundary rows by their
    largest summand; the smallest 2-cell of each group is pivotal."""
    rows = mc.boundaries.get(2, [])
    cells2 = mc.critical.get(2, ())
    groups: dict[int, int] = {}
    for i, row in enumerate(rows):
        lead = next((j for j, x in enumerate(row) if x), None)
        if lead is None:
            continue
        groups[lead] = i  # rows are in decreasing order; the last wins
    return {mc.critical[1][lead]: cells2[i] for lead, i in groups.items()}


def _modified_pivotal_key(mc: MorseComplex, cell):
    """Order used only when eliminating pivotal generators: deleted edges
    outrank tree edges at equal terminal vertex."""
    t = mc.tree
    sc = C.phi(cell)[0] if mc.ordered else cell
    edges = C.cell_edges(sc)
    e = edges[0]
    base = cell_sort_key(t, sc, C.phi(cell)[1] if mc.ordered else None)
    mod_edge = (e[0], 1 if e in t.deleted_set else 0, e[1])
    return (base[0], mod_edge) + tuple(base[2:])


def simplify(pres: Presentation, mc: MorseComplex, audit=None) -> Presentation:
    """Tietze-minimize: eliminate pivotal generators in decreasing modified
    order, then contract separating generators along their relators.

    `audit`, when given, is called with the presentation after every Tietze
    move (used by tests to confirm the abelianization never changes)."""
    pres = Presentation(list(pres.generators), list(pres.relators),
                        dict(pres.names), list(pres.history), pres.killed)
    tags = classify_1cells(mc)
    pairs = _leading_pairs(mc)
    # relators tracked by their originating 2-cell while any remain unused
    cell2_for_relator = list(mc.critical.get(2, ()))

    def eliminate(gen, rel_idx, why):
        rel = pres.relators[rel_idx]
        hits = [i for i, (g, _) in enumerate(rel) if g == gen]
        if len(hits) != 1:
            return False
        i = hits[0]
        u, e, v = rel[:i], rel[i][1], rel[i + 1:]
        repl = wmul(winv(u), winv(v))
        if e == -1:
            repl = winv(repl)
        pres.relators = [substitute(r, gen, repl)
                         for j, r in enumerate(pres.relators) if j != rel_idx]
        del cell2_for_relator[rel_idx]
        pres.generators.remove(gen)
        pres.history.append(f"eliminate {pres.names.get(gen, gen)} ({why})")
        if audit is not None:
            audit(pres)
        return True

    pivotal = [g for g in pres.generators
               if tags.get(g) == "pivotal" and g in pairs]
    pivotal.sort(key=lambda g: _modified_pivotal_key(mc, g), reverse=True)
    for g in pivotal:
        c2 = pairs[g]
        try:
            rel_idx = cell2_for_relator.index(c2)
        except ValueError:
            continue
        eliminate(g, rel_idx, "pivotal")

    # separating contraction: repeatedly remove the smallest separating
    # generator that some relator uses exactly once
    def sep_gens():
        return [g for g in pres.generators if tags.get(g) == "separating"]

    progress = True
    while progress:
        progress = False
        for g in sorted(sep_gens(), key=lambda g: cell_sort_key(
                mc.tree, C.phi(g)[0] if mc.ordered else g,
                C.phi(g)[1] if mc.ordered else None)):
            candidates = [i for i, r in enumerate(pres.relators)
                          if sum(1 for x, _ in r if x == g) == 1]
            if not candidates:
                continue
            rel_idx = min(candidates, key=lambda i: len(pres.relators[i]))
            if eliminate(g, rel_idx, "separating merge"):
                progress = True
                break

    pres.relators = [r for r in pres.relators if r]
    cell2_for_relator = None
    return pres


# ---------------------------------------------------------------------------
# commutator detection

def commutator_form(w):
    """(u, v) with w ~ u v u^-1 v^-1 as a cyclic word, else None."""
    w = cyclic_reduce(w)
    L = len(w)
    if L == 0 or L % 2:
        return None
    for rot in range(L):
        r = w[rot:] + w[:rot]
        for i in range(1, L - 2):
            for j in range(i + 1, L - 1):
                u, v = r[:i], r[i:j]
                if free_reduce(r[j:]) == wmul(winv(u), winv(v)):
                    return free_reduce(u), free_reduce(v)
    return None


def quadratic_genus(w):
    """Genus of the closed orientable surface built from a single polygon
    with identification word w; requires each generator to appear exactly
    twice with opposite exponents.  Returns None if w is not such a word."""
    w = cyclic_reduce(w)
    if not w:
        return 0
    sums = exponent_sums(w)
    counts: dict = {}
    for g, _ in w:
        counts[g] = counts.get(g, 0) + 1
    if sums or any(c != 2 for c in counts.values()):
        return None
    L = len(w)
    # corners 0..L-1 sit between letters i-1 and i; glue via matching letters
    parent = list(range(L))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    pos: dict = {}
    for i, (g, e) in enumerate(w):
        if g in pos:
            j, f = pos[g]
            # letter i runs corner i -> i+1; the matching inverse letter j
            # runs j -> j+1 traversing the same edge backwards
            union(i, (j + 1) % L)
            union((i + 1) % L, j)
        else:
            pos[g] = (i, e)
    vertices = len({find(i) for i in range(L)})
    chi = vertices - L // 2 + 1
    if (2 - chi) % 2:
        return None
    return (2 - chi) // 2
