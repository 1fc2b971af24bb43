"""Interval collections and the letter-cycle presentations they define.

A finite collection of integer intervals has an intersection graph
(vertices = intervals, edges = intersecting pairs).  Its *complement* — the
disjointness graph — governs a family of diagram groups: give every point
``i`` of the ground set a letter ``x_i`` and every interval ``I`` a cycle of
letters ``a_I = b_I = c_I = a_I`` glued to the base by ``x_I = a_I``, where
``x_I`` is the factor of ``x_1 … x_n`` spanned by ``I``.  Each interval then
contributes a five-cell spherical loop at the base word, two loops commute
exactly when the intervals are disjoint, and together they generate the
whole group: the group of the base word is the right-angled Artin group of
the disjointness graph.

This module builds the collections, their graphs, the presentations, and
the generator loops, plus two decision helpers at desk scale:

* recognizing when a given graph is the complement of an interval graph
  (no induced pair of independent edges, and a transitive orientation
  exists — both checked exhaustively, with certificates), and
* corroborating the isomorphism on concrete instances by comparing the
  commutation pattern, the relator images, and ball growth on both sides.

The recognizers are brute force on purpose: the graphs of interest have a
handful of vertices and what matters is the certificate, not asymptotics.
"""

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .diagrams import (
    Diagram,
    canonical_key,
    compose,
    eps,
    inverse,
    reduce_diagram,
)
from .raag import RaagGraph, RaagWord, raag_graph, raag_normal_form
from .rewriting import (
    Move,
    Presentation,
    Relation,
    SearchCaps,
    Word,
)

# a simple graph is exactly what the Artin-group machinery already uses:
# vertex tuple plus sorted-pair edge set
SimpleGraph = RaagGraph

Span = Tuple[int, int]

_BAD_NAME_CHARS = set("#=:|")


# ---------------------------------------------------------------------------
# collections of intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntervalCollection:
    """Named closed integer intervals on the ground set ``{1, …, ground}``."""

    ground: int
    intervals: Tuple[Tuple[str, int, int], ...]

    def __post_init__(self) -> None:
        if self.ground < 1:
            raise ValueError("ground set must contain at least one point")
        seen = set()
        for name, lo, hi in self.intervals:
            if not name or any(c in _BAD_NAME_CHARS or c.isspace() for c in name):
                raise ValueError(f"illegal interval name {name!r}")
            if name in seen:
                raise ValueError(f"duplicate interval name {name!r}")
            seen.add(name)
            if not (1 <= lo <= hi <= self.ground):
                raise ValueError(
                    f"interval {name}: [{lo}, {hi}] is not inside [1, {self.ground}]"
                )

    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _, _ in self.intervals)

    def span(self, name: str) -> Span:
        for n, lo, hi in self.intervals:
            if n == name:
                return (lo, hi)
        raise KeyError(f"no interval named {name!r}")

    def __len__(self) -> int:
        return len(self.intervals)


def intersects(a: Span, b: Span) -> bool:
    return max(a[0], b[0]) <= min(a[1], b[1])


def parse_intervals(text: str) -> IntervalCollection:
    """Parse ``n=7 / I1: 1 3 / I2: 2 5``; newlines and ``/`` both separate."""
    chunks = [
        c.strip() for line in text.splitlines() for c in line.split("/")
    ]
    chunks = [c for c in chunks if c]
    if not chunks or "=" not in chunks[0]:
        raise ValueError("interval text must start with n=<ground size>")
    key, _, val = chunks[0].partition("=")
    if key.strip() != "n":
        raise ValueError(f"expected n=<ground size>, got {chunks[0]!r}")
    ground = int(val)
    intervals: List[Tuple[str, int, int]] = []
    for chunk in chunks[1:]:
        name, sep, rest = chunk.partition(":")
        if not sep:
            raise ValueError(f"expected 'name: lo hi', got {chunk!r}")
        parts = rest.split()
        if len(parts) != 2:
            raise ValueError(f"expected two endpoints in {chunk!r}")
        intervals.append((name.strip(), int(parts[0]), int(parts[1])))
    return IntervalCollection(ground, tuple(intervals))


def collection_to_json(coll: IntervalCollection) -> Dict[str, object]:
    return {
        "n": coll.ground,
        "intervals": [[name, lo, hi] for name, lo, hi in coll.intervals],
    }


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


def interval_graph(coll: IntervalCollection) -> SimpleGraph:
    """Vertices are the interval names; edges join intersecting intervals."""
    edges = [
        (n1, n2)
        for (n1, l1, h1), (n2, l2, h2) in combinations(coll.intervals, 2)
        if intersects((l1, h1), (l2, h2))
    ]
    return raag_graph(coll.names(), edges)


def complement(g: SimpleGraph) -> SimpleGraph:
    edges = [
        (u, v) for u, v in combinations(g.vertices, 2) if not g.adjacent(u, v)
    ]
    return raag_graph(g.vertices, edges)


def disjointness_graph(coll: IntervalCollection) -> SimpleGraph:
    """The commutation graph of the interval loops: edges join disjoint
    intervals (the complement of the intersection graph)."""
    return complement(interval_graph(coll))


def induced_subgraph(g: SimpleGraph, verts: Sequence[str]) -> SimpleGraph:
    keep = set(verts)
    assert keep <= set(g.vertices)
    return raag_graph(
        tuple(verts), [e for e in sorted(g.edges) if set(e) <= keep]
    )


def path_graph(length: int, prefix: str = "v") -> SimpleGraph:
    """The path with ``length`` edges (so ``length + 1`` vertices)."""
    verts = [f"{prefix}{i}" for i in range(length + 1)]
    return raag_graph(verts, [(verts[i], verts[i + 1]) for i in range(length)])


def cycle_graph(n: int, prefix: str = "v") -> SimpleGraph:
    assert n >= 3
    verts = [f"{prefix}{i}" for i in range(n)]
    return raag_graph(
        verts, [(verts[i], verts[(i + 1) % n]) for i in range(n)]
    )


def complete_graph(n: int, prefix: str = "v") -> SimpleGraph:
    verts = [f"{prefix}{i}" for i in range(n)]
    return raag_graph(verts, list(combinations(verts, 2)))


def edgeless_graph(n: int, prefix: str = "v") -> SimpleGraph:
    return raag_graph([f"{prefix}{i}" for i in range(n)], [])


# ---------------------------------------------------------------------------
# recognizing complements of interval graphs
# ---------------------------------------------------------------------------


def independent_edge_pair(
    g: SimpleGraph,
) -> Optional[Tuple[str, str, str, str]]:
    """An induced pair of independent edges (a, b, c, d), if one exists.

    Two vertex-disjoint edges with none of the four cross connections form
    the complement of a four-cycle; a graph containing one can never be the
    complement of an interval graph.
    """
    for (a, b), (c, d) in combinations(sorted(g.edges), 2):
        if len({a, b, c, d}) < 4:
            continue
        if not (
            g.adjacent(a, c)
            or g.adjacent(a, d)
            or g.adjacent(b, c)
            or g.adjacent(b, d)
        ):
            return (a, b, c, d)
    return None


def _pair(u: str, v: str) -> Tuple[str, str]:
    return (u, v) if u < v else (v, u)


def _consistent(
    g: SimpleGraph,
    assigned: Dict[Tuple[str, str], Tuple[str, str]],
    arc: Tuple[str, str],
) -> bool:
    """Can ``arc`` join ``assigned`` without an immediate transitivity
    violation?  Checks every chain the new arc participates in as a leg and
    every already-assigned chain it would have to close."""
    t, h = arc
    for t2, h2 in assigned.values():
        if h == t2 and t != h2:  # t -> h -> h2
            if not g.adjacent(t, h2):
                return False
            closer = assigned.get(_pair(t, h2))
            if closer is not None and closer != (t, h2):
                return False
        if h2 == t and t2 != h:  # t2 -> t -> h
            if not g.adjacent(t2, h):
                return False
            closer = assigned.get(_pair(t2, h))
            if closer is not None and closer != (t2, h):
                return False
        if t2 == h:  # h -> h2 -> t would force h -> t, contradicting arc
            if assigned.get(_pair(h2, t)) == (h2, t):
                return False
    return True


def transitive_orientation(
    g: SimpleGraph,
) -> Optional[Tuple[Tuple[str, str], ...]]:
    """A direction for every edge such that u→v→w always has the shortcut
    u→w, found by plain backtracking; None when every assignment dies."""
    edges = sorted(g.edges)
    assigned: Dict[Tuple[str, str], Tuple[str, str]] = {}

    def solve(i: int) -> bool:
        if i == len(edges):
            return True
        u, v = edges[i]
        for arc in ((u, v), (v, u)):
            if _consistent(g, assigned, arc):
                assigned[edges[i]] = arc
                if solve(i + 1):
                    return True
                del assigned[edges[i]]
        return False

    if not solve(0):
        return None
    return tuple(assigned[e] for e in edges)


def orientation_is_transitive(
    g: SimpleGraph, arcs: Sequence[Tuple[str, str]]
) -> bool:
    """Independent validation of an orientation certificate."""
    arcset = set(arcs)
    if {_pair(*a) for a in arcs} != set(g.edges):
        return False
    for t1, h1 in arcs:
        for t2, h2 in arcs:
            if h1 == t2 and t1 != h2 and (t1, h2) not in arcset:
                return False
    return True


def maximal_cliques(g: SimpleGraph) -> Tuple[Tuple[str, ...], ...]:
    """All maximal cliques (plain Bron–Kerbosch; fine below ~20 vertices)."""
    idx = {v: i for i, v in enumerate(g.vertices)}
    out: List[Tuple[str, ...]] = []

    def extend(r: Set[str], p: Set[str], x: Set[str]) -> None:
        if not p and not x:
            out.append(tuple(sorted(r, key=idx.__getitem__)))
            return
        for v in sorted(p, key=idx.__getitem__):
            extend(
                r | {v},
                {u for u in p if g.adjacent(u, v)},
                {u for u in x if g.adjacent(u, v)},
            )
            p = p - {v}
            x = x | {v}

    extend(set(), set(g.vertices), set())
    return tuple(sorted(out, key=lambda c: tuple(idx[v] for v in c)))


def realize_interval_graph(
    g: SimpleGraph, max_cliques: int = 8
) -> Optional[IntervalCollection]:
    """A concrete interval realization of ``g``, or None if none exists.

    A graph is an interval graph exactly when its maximal cliques can be
    ordered so that the cliques containing any fixed vertex sit
    consecutively; each vertex then maps to its range of clique positions.
    The search over orderings is exhaustive, so None is a proof at this
    scale, not a timeout.
    """
    if not g.vertices:
        return IntervalCollection(1, ())
    cliques = maximal_cliques(g)
    if len(cliques) > max_cliques:
        raise ValueError(
            f"{len(cliques)} maximal cliques exceed the search bound {max_cliques}"
        )
    member: Dict[str, List[int]] = {v: [] for v in g.vertices}
    for ci, clique in enumerate(cliques):
        for v in clique:
            member[v].append(ci)
    for order in permutations(range(len(cliques))):
        pos = {ci: p for p, ci in enumerate(order)}
        ok = True
        for v in g.vertices:
            ps = sorted(pos[ci] for ci in member[v])
            if ps[-1] - ps[0] + 1 != len(ps):
                ok = False
                break
        if ok:
            intervals = tuple(
                (
                    v,
                    min(pos[ci] for ci in member[v]) + 1,
                    max(pos[ci] for ci in member[v]) + 1,
                )
                for v in g.vertices
            )
            return IntervalCollection(len(cliques), intervals)
    return None


@dataclass(frozen=True)
class IntervalRecognition:
    """Outcome of the complement-of-interval-graph test, with certificates.

    On yes: ``orientation`` is a transitive orientation of the graph and
    ``realization`` satisfies ``interval_graph(realization) =
    complement(graph)``.  On no: ``obstruction`` names the reason.
    """

    graph: SimpleGraph
    verdict: bool
    orientation: Optional[Tuple[Tuple[str, str], ...]] = None
    obstruction: Optional[str] = None
    realization: Optional[IntervalCollection] = None


def is_complement_of_interval(
    g: SimpleGraph, max_vertices: int = 12
) -> IntervalRecognition:
    """Decide whether ``g`` is the complement of an interval graph.

    The two obstructions are exhaustive: a graph is a complement of an
    interval graph if and only if it has no induced pair of independent
    edges and admits a transitive orientation.
    """
    if len(g.vertices) > max_vertices:
        raise ValueError(
            f"{len(g.vertices)} vertices exceed the brute-force bound {max_vertices}"
        )
    bad = independent_edge_pair(g)
    if bad is not None:
        a, b, c, d = bad
        return IntervalRecognition(
            g,
            False,
            obstruction=f"induced independent edges {a}-{b} and {c}-{d}",
        )
    arcs = transitive_orientation(g)
    if arcs is None:
        return IntervalRecognition(
            g, False, obstruction="no transitive orientation exists"
        )
    realization = realize_interval_graph(complement(g))
    assert realization is not None, "orientation found but realization failed"
    return IntervalRecognition(g, True, orientation=arcs, realization=realization)


def recognition_to_json(rec: IntervalRecognition) -> Dict[str, object]:
    out: Dict[str, object] = {
        "vertices": list(rec.graph.vertices),
        "edges": [list(e) for e in sorted(rec.graph.edges)],
        "verdict": rec.verdict,
    }
    if rec.orientation is not None:
        out["orientation"] = [list(a) for a in rec.orientation]
    if rec.obstruction is not None:
        out["obstruction"] = rec.obstruction
    if rec.realization is not None:
        out["realization"] = collection_to_json(rec.realization)
    return out


# ---------------------------------------------------------------------------
# the presentation of a collection and its generator loops
# ---------------------------------------------------------------------------


def base_word(coll: IntervalCollection) -> Word:
    return tuple(f"x{i}" for i in range(1, coll.ground + 1))


def _x_factor(lo: int, hi: int) -> Word:
    return tuple(f"x{i}" for i in range(lo, hi + 1))


def presentation_for(coll: IntervalCollection) -> Presentation:
    """One point letter ``x_i`` per ground point and, per interval, a cycle
    ``x_I = a_I, a_I = b_I, b_I = c_I, c_I = a_I`` where ``x_I`` is the
    factor of the base word spanned by the interval."""
    letters = [f"x{i}" for i in range(1, coll.ground + 1)]
    relations: List[Relation] = []
    for name, lo, hi in coll.intervals:
        a, b, c = f"a{name}", f"b{name}", f"c{name}"
        letters += [a, b, c]
        relations += [
            Relation(_x_factor(lo, hi), (a,)),
            Relation((a,), (b,)),
            Relation((b,), (c,)),
            Relation((c,), (a,)),
        ]
    return Presentation(tuple(letters), tuple(relations))


def delta_diagram(name: str, coll: IntervalCollection) -> Diagram:
    """The five-cell spherical loop of one interval at the base word:
    collapse ``x_I`` to ``a_I``, run the letter cycle ``a → b → c → a``,
    then reopen ``a_I`` back to ``x_I``.  Reduced, because no two
    consecutive cells use the same relation in opposite directions."""
    pres = presentation_for(coll)
    k = coll.names().index(name)
    lo, _ = coll.span(name)
    off = lo - 1
    moves = (
        Move(off, 4 * k, True),
        Move(off, 4 * k + 1, True),
        Move(off, 4 * k + 2, True),
        Move(off, 4 * k + 3, True),
        Move(off, 4 * k, False),
    )
    return Diagram(pres, base_word(coll), moves)


def evaluate_raag_word(w: RaagWord, coll: IntervalCollection) -> Diagram:
    """Image of an abstract word in the interval generators: compose the
    named loops (or their inverses) and reduce."""
    pres = presentation_for(coll)
    deltas = {name: delta_diagram(name, coll) for name in coll.names()}
    d = eps(pres, base_word(coll))
    for gen, exp in w.syllables:
        step = deltas[gen] if exp == 1 else inverse(deltas[gen])
        d = compose(d, step)
    return reduce_diagram(d)


# ---------------------------------------------------------------------------
# corroborating the Artin-group isomorphism
# ---------------------------------------------------------------------------


def raag_ball_sizes(graph: SimpleGraph, length: int) -> Tuple[int, ...]:
    """Ball sizes |B(0)|, …, |B(length)| in the right-angled Artin group of
    ``graph``, counted by breadth-first search over normal forms."""
    start = RaagWord(())
    seen = {start.syllables}
    frontier = [start]
    sizes = [1]
    for _ in range(length):
        grown: List[RaagWord] = []
        for w in frontier:
            for gen in graph.vertices:
                for exp in (1, -1):
                    nf = raag_normal_form(
                        RaagWord(w.syllables + ((gen, exp),)), graph
                    )
                    if nf.syllables not in seen:
                        seen.add(nf.syllables)
                        grown.append(nf)
        frontier = grown
        sizes.append(len(seen))
    return tuple(sizes)


def diagram_ball_sizes(
    coll: IntervalCollection, length: int, max_elements: int = 100_000
) -> Tuple[int, ...]:
    """The same count on the concrete side: breadth-first search over
    reduced spherical diagrams, multiplying by the interval loops and their
    inverses and keying by canonical form."""
    pres = presentation_for(coll)
    gens: List[Diagram] = []
    for name in coll.names():
        d = delta_diagram(name, coll)
        gens += [d, inverse(d)]
    start = eps(pres, base_word(coll))
    seen = {canonical_key(start)}
    frontier = [start]
    sizes = [1]
    for _ in range(length):
        grown: List[Diagram] = []
        for d in frontier:
            for step in gens:
                nd = reduce_diagram(compose(d, step))
                key = canonical_key(nd)
                if key not in seen:
                    if len(seen) >= max_elements:
                        raise ValueError(
                            f"ball exceeded the element bound {max_elements}"
                        )
                    seen.add(key)
                    grown.append(nd)
        frontier = grown
        sizes.append(len(seen))
    return tuple(sizes)


@dataclass(frozen=True)
class RaagEvidence:
    """Corroboration report for one collection.

    ``commutation`` rows are (I, J, disjoint, loops commute): the pattern
    matches the disjointness graph exactly when the two booleans agree on
    every row.  ``relators_ok`` says every defining commutator of the Artin
    group maps to the trivial diagram.  The ball-size tuples compare growth
    over radii 0..L on both sides.
    """

    collection: IntervalCollection
    graph: SimpleGraph
    commutation: Tuple[Tuple[str, str, bool, bool], ...]
    relators_checked: int
    relators_ok: bool
    diagram_balls: Tuple[int, ...]
    raag_balls: Tuple[int, ...]

    @property
    def commutation_ok(self) -> bool:
        return all(disjoint == commutes for _, _, disjoint, commutes in self.commutation)

    @property
    def balls_ok(self) -> bool:
        return self.diagram_balls == self.raag_balls

    @property
    def ok(self) -> bool:
        return self.commutation_ok and self.relators_ok and self.balls_ok


def verify_raag_iso(
    coll: IntervalCollection,
    caps: SearchCaps = SearchCaps(),
    length: int = 3,
) -> RaagEvidence:
    """Evidence (not proof) that the loop subgroup is the right-angled
    Artin group of the disjointness graph: the pairwise commutation pattern,
    the images of all defining relators, and ball growth up to ``length``.
    The element bound for the concrete ball search is taken from ``caps``.
    """
    graph = disjointness_graph(coll)
    rows: List[Tuple[str, str, bool, bool]] = []
    for (n1, l1, h1), (n2, l2, h2) in combinations(coll.intervals, 2):
        disjoint = not intersects((l1, h1), (l2, h2))
        img = evaluate_raag_word(
            RaagWord(((n1, 1), (n2, 1), (n1, -1), (n2, -1))), coll
        )
        rows.append((n1, n2, disjoint, img.cells == 0))
    relators_ok = True
    checked = 0
    for u, v in sorted(graph.edges):
        img = evaluate_raag_word(
            RaagWord(((u, 1), (v, 1), (u, -1), (v, -1))), coll
        )
        checked += 1
        relators_ok = relators_ok and img.cells == 0
    bound = max(1000, caps.max_class_size)
    return RaagEvidence(
        coll,
        graph,
        tuple(rows),
        checked,
        relators_ok,
        diagram_ball_sizes(coll, length, max_elements=bound),
        raag_ball_sizes(graph, length),
    )


def evidence_to_json(ev: RaagEvidence) -> Dict[str, object]:
    return {
        "collection": collection_to_json(ev.collection),
        "graph": {
            "vertices": list(ev.graph.vertices),
            "edges": [list(e) for e in sorted(ev.graph.edges)],
        },
        "commutation": [list(row) for row in ev.commutation],
        "commutation_ok": ev.commutation_ok,
        "relators_checked": ev.relators_checked,
        "relators_ok": ev.relators_ok,
        "balls": {
            "diagram": list(ev.diagram_balls),
            "raag": list(ev.raag_balls),
            "ok": ev.balls_ok,
        },
        "ok": ev.ok,
    }


__all__ = [
    "IntervalCollection",
    "IntervalRecognition",
    "RaagEvidence",
    "SimpleGraph",
    "base_word",
    "collection_to_json",
    "complement",
    "complete_graph",
    "cycle_graph",
    "delta_diagram",
    "diagram_ball_sizes",
    "disjointness_graph",
    "edgeless_graph",
    "evaluate_raag_word",
    "evidence_to_json",
    "independent_edge_pair",
    "induced_subgraph",
    "intersects",
    "interval_graph",
    "is_complement_of_interval",
    "maximal_cliques",
    "orientation_is_transitive",
    "parse_intervals",
    "path_graph",
    "presentation_for",
    "raag_ball_sizes",
    "realize_interval_graph",
    "recognition_to_json",
    "transitive_orientation",
    "verify_raag_iso",
]
