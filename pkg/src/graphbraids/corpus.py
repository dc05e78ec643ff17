"""Seeded random graphs for the cross-validation property suite."""

from __future__ import annotations

import random

from .graphs import Graph


def random_topological_graph(rng: random.Random, max_vertices: int = 5,
                             max_extra: int = 4) -> Graph:
    """A random connected multigraph with at most max_extra independent
    cycles; loops are realized as attached triangles so construction never
    sees a literal loop edge."""
    nv = rng.randint(2, max_vertices)
    vs = [f"v{i}" for i in range(nv)]
    edges = []
    for i in range(1, nv):
        edges.append((f"t{i}", vs[rng.randrange(i)], vs[i]))
    extra = rng.randint(0, max_extra)
    for k in range(extra):
        a, b = rng.choice(vs), rng.choice(vs)
        if a == b:
            m1, m2 = f"l{k}a", f"l{k}b"
            vs += [m1, m2]
            edges += [(f"l{k}x", a, m1), (f"l{k}y", m1, m2), (f"l{k}z", m2, a)]
        else:
            edges.append((f"x{k}", a, b))
    return Graph(vs, edges)


def corpus(seed: int, count: int, max_vertices: int = 5, max_extra: int = 4):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        out.append(random_topological_graph(rng, max_vertices, max_extra))
    return out
