"""Interval collections, recognition certificates, and the Artin-group
corroboration suite.

Ball-size oracles: a free group of rank r has |B(L)| following
s(0)=1, s(L+1) = s(L) + (2r)·(2r−1)^(L−1)-ish growth — concretely rank 1
gives 1,3,5,7, rank 2 gives 1,5,17,53 — while the free abelian groups give
1,5,13,25 (rank 2) and 1,7,25,63 (rank 3).  These literals were computed by
hand from the standard counting formulas and are frozen below; both search
routes (normal forms and reduced diagrams) must reproduce them.
"""

import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diagram_groups.diagrams import compose, inverse, is_reduced, reduce_diagram
from diagram_groups.interval import (
    IntervalCollection,
    base_word,
    collection_to_json,
    complement,
    complete_graph,
    cycle_graph,
    delta_diagram,
    diagram_ball_sizes,
    disjointness_graph,
    edgeless_graph,
    evaluate_raag_word,
    evidence_to_json,
    independent_edge_pair,
    induced_subgraph,
    intersects,
    interval_graph,
    is_complement_of_interval,
    maximal_cliques,
    orientation_is_transitive,
    parse_intervals,
    path_graph,
    presentation_for,
    raag_ball_sizes,
    realize_interval_graph,
    recognition_to_json,
    transitive_orientation,
    verify_raag_iso,
)
from diagram_groups.raag import RaagWord, raag_graph, raag_normal_form

Z1 = IntervalCollection(1, (("I", 1, 1),))
Z2 = IntervalCollection(2, (("I", 1, 1), ("J", 2, 2)))
F2 = IntervalCollection(3, (("I", 1, 2), ("J", 2, 3)))

# the square of the 6-cycle: edges at circular distance 1 or 2; its
# complement is the perfect matching of antipodes, an interval graph
P26_VERTS = tuple(f"p{i}" for i in range(6))
P26 = raag_graph(
    P26_VERTS,
    [
        (P26_VERTS[i], P26_VERTS[j])
        for i in range(6)
        for j in range(i + 1, 6)
        if min(abs(i - j), 6 - abs(i - j)) in (1, 2)
    ],
)


# ---------------------------------------------------------------------------
# collections and parsing
# ---------------------------------------------------------------------------


def test_collection_validation():
    with pytest.raises(ValueError, match="ground"):
        IntervalCollection(0, ())
    with pytest.raises(ValueError, match="duplicate"):
        IntervalCollection(3, (("I", 1, 1), ("I", 2, 2)))
    with pytest.raises(ValueError, match="illegal"):
        IntervalCollection(3, (("a b", 1, 1),))
    with pytest.raises(ValueError, match="inside"):
        IntervalCollection(3, (("I", 2, 4),))
    with pytest.raises(ValueError, match="inside"):
        IntervalCollection(3, (("I", 3, 2),))


def test_parse_intervals_both_separators():
    slash = parse_intervals("n=7 / I1: 1 3 / I2: 2 5")
    lines = parse_intervals("n=7\nI1: 1 3\nI2: 2 5")
    assert slash == lines
    assert slash.ground == 7
    assert slash.span("I2") == (2, 5)
    assert slash.names() == ("I1", "I2")
    with pytest.raises(ValueError, match="n="):
        parse_intervals("I1: 1 3")
    with pytest.raises(ValueError, match="name"):
        parse_intervals("n=3 / I1 1 3")


def test_intersects_is_closed_interval_overlap():
    assert intersects((1, 3), (3, 5))
    assert intersects((2, 2), (1, 4))
    assert not intersects((1, 2), (3, 4))


# ---------------------------------------------------------------------------
# interval graphs
# ---------------------------------------------------------------------------


def test_staircase_realizes_the_length_five_path():
    stair = IntervalCollection(
        7, tuple((f"I{k}", k, k + 1) for k in range(1, 7))
    )
    g = interval_graph(stair)
    assert len(g.vertices) == 6
    assert sorted(g.edges) == [(f"I{k}", f"I{k+1}") for k in range(1, 6)]


def test_disjoint_collection_gives_edgeless_graph():
    coll = IntervalCollection(6, (("A", 1, 1), ("B", 3, 3), ("C", 5, 6)))
    assert interval_graph(coll).edges == frozenset()


def test_common_point_gives_complete_graph():
    coll = IntervalCollection(5, (("A", 1, 5), ("B", 2, 4), ("C", 3, 3)))
    assert len(interval_graph(coll).edges) == 3


def test_complement_is_an_involution():
    g = path_graph(4)
    assert complement(complement(g)) == g
    assert disjointness_graph(F2).edges == frozenset()
    assert sorted(disjointness_graph(Z2).edges) == [("I", "J")]


def test_graph_constructors():
    assert len(path_graph(5).vertices) == 6 and len(path_graph(5).edges) == 5
    assert len(cycle_graph(5).edges) == 5
    assert len(complete_graph(4).edges) == 6
    assert edgeless_graph(3).edges == frozenset()
    sub = induced_subgraph(cycle_graph(5), ("v0", "v1", "v3"))
    assert sorted(sub.edges) == [("v0", "v1")]


# ---------------------------------------------------------------------------
# recognition
# ---------------------------------------------------------------------------


def test_independent_edge_pair_frozen():
    # the two end edges of a five-vertex path are induced and independent
    assert independent_edge_pair(path_graph(4)) == ("v0", "v1", "v3", "v4")
    assert independent_edge_pair(cycle_graph(5)) is None
    assert independent_edge_pair(path_graph(3)) is None


@pytest.mark.parametrize("n,expect", [(4, True), (5, False), (6, True), (7, False)])
def test_cycles_orientable_iff_even(n, expect):
    arcs = transitive_orientation(cycle_graph(n))
    assert (arcs is not None) == expect
    if arcs is not None:
        assert orientation_is_transitive(cycle_graph(n), arcs)


def test_complete_graphs_are_transitively_orientable():
    for n in (2, 3, 4, 5):
        arcs = transitive_orientation(complete_graph(n))
        assert arcs is not None and orientation_is_transitive(complete_graph(n), arcs)


def test_orientation_checker_rejects_bad_certificates():
    p2 = path_graph(2)
    assert not orientation_is_transitive(p2, [("v0", "v1"), ("v1", "v2")])
    assert orientation_is_transitive(p2, [("v0", "v1"), ("v2", "v1")])
    # wrong edge set
    assert not orientation_is_transitive(p2, [("v0", "v1")])


def test_maximal_cliques():
    tri = raag_graph(["a", "b", "c", "d"], [("a", "b"), ("a", "c"), ("b", "c"), ("c", "d")])
    assert maximal_cliques(tri) == (("a", "b", "c"), ("c", "d"))
    assert maximal_cliques(edgeless_graph(3)) == (("v0",), ("v1",), ("v2",))
    assert maximal_cliques(complete_graph(4)) == (("v0", "v1", "v2", "v3"),)


def test_realize_interval_graph_roundtrips_paths():
    for length in (1, 3, 7):
        g = path_graph(length)
        coll = realize_interval_graph(g)
        assert coll is not None
        assert interval_graph(coll).edges == g.edges


def test_realize_interval_graph_rejects_cycles():
    # a chordless 4-cycle is the classic non-interval graph
    assert realize_interval_graph(cycle_graph(4)) is None
    assert realize_interval_graph(cycle_graph(5)) is None


def test_realize_clique_bound():
    with pytest.raises(ValueError, match="cliques"):
        realize_interval_graph(edgeless_graph(9), max_cliques=8)


def test_recognize_c5_rejected_by_orientation():
    rec = is_complement_of_interval(cycle_graph(5))
    assert not rec.verdict
    assert rec.obstruction == "no transitive orientation exists"
    assert rec.orientation is None and rec.realization is None


def test_recognize_long_path_rejected_by_independent_edges():
    rec = is_complement_of_interval(path_graph(4))
    assert not rec.verdict
    assert rec.obstruction == "induced independent edges v0-v1 and v3-v4"


def test_recognize_k3():
    rec = is_complement_of_interval(complete_graph(3))
    assert rec.verdict
    assert orientation_is_transitive(rec.graph, rec.orientation)
    # complement is edgeless: three pairwise disjoint unit intervals
    assert interval_graph(rec.realization).edges == frozenset()
    assert len(rec.realization) == 3


def test_recognize_p26_with_certificates():
    rec = is_complement_of_interval(P26)
    assert rec.verdict
    assert orientation_is_transitive(P26, rec.orientation)
    assert interval_graph(rec.realization).edges == complement(P26).edges
    # the complement is the antipodal matching
    assert sorted(complement(P26).edges) == [
        ("p0", "p3"), ("p1", "p4"), ("p2", "p5"),
    ]


def test_recognize_c4_and_short_path():
    for g in (cycle_graph(4), path_graph(3)):
        rec = is_complement_of_interval(g)
        assert rec.verdict
        assert orientation_is_transitive(g, rec.orientation)
        assert interval_graph(rec.realization).edges == complement(g).edges


def test_recognize_size_bound():
    with pytest.raises(ValueError, match="vertices"):
        is_complement_of_interval(edgeless_graph(13))


def test_recognition_json():
    rec = is_complement_of_interval(complete_graph(3))
    blob = recognition_to_json(rec)
    assert blob["verdict"] is True
    assert blob["realization"]["n"] == 3
    again = recognition_to_json(is_complement_of_interval(complete_graph(3)))
    assert json.dumps(blob, sort_keys=True) == json.dumps(again, sort_keys=True)
    bad = recognition_to_json(is_complement_of_interval(cycle_graph(5)))
    assert "obstruction" in bad and "orientation" not in bad


@st.composite
def collections(draw, max_ground=5, max_intervals=4):
    n = draw(st.integers(1, max_ground))
    spans = [(lo, hi) for lo in range(1, n + 1) for hi in range(lo, n + 1)]
    chosen = draw(
        st.lists(st.sampled_from(spans), max_size=max_intervals, unique=True)
    )
    return IntervalCollection(
        n, tuple((f"I{k}", lo, hi) for k, (lo, hi) in enumerate(chosen))
    )


@given(collections())
@settings(max_examples=60, deadline=None)
def test_complements_of_generated_interval_graphs_are_recognized(coll):
    # one direction of the recognition theorem, with the realization
    # reproducing the intersection pattern exactly
    g = interval_graph(coll)
    rec = is_complement_of_interval(complement(g))
    assert rec.verdict
    assert orientation_is_transitive(complement(g), rec.orientation)
    assert interval_graph(rec.realization).edges == g.edges


# ---------------------------------------------------------------------------
# presentations and generator loops
# ---------------------------------------------------------------------------


def test_single_interval_presentation_frozen():
    pres = presentation_for(Z1)
    assert str(pres) == "< x1 aI bI cI | x1 = aI, aI = bI, bI = cI, cI = aI >"
    assert base_word(Z1) == ("x1",)


def test_two_interval_presentation_shape():
    pres = presentation_for(F2)
    assert pres.letters == ("x1", "x2", "x3", "aI", "bI", "cI", "aJ", "bJ", "cJ")
    assert len(pres.relations) == 8
    assert pres.relations[0].lhs == ("x1", "x2") and pres.relations[0].rhs == ("aI",)
    assert pres.relations[4].lhs == ("x2", "x3")
    assert base_word(F2) == ("x1", "x2", "x3")


def test_empty_collection_presents_a_point():
    coll = IntervalCollection(2, ())
    pres = presentation_for(coll)
    assert pres.relations == ()
    assert diagram_ball_sizes(coll, 3) == (1, 1, 1, 1)


def test_delta_diagram_is_a_five_cell_reduced_loop():
    for coll, name in ((Z1, "I"), (F2, "J"), (Z2, "J")):
        d = delta_diagram(name, coll)
        assert d.cells == 5
        assert d.is_spherical
        assert is_reduced(d)
        assert d.top == base_word(coll)


def test_delta_diagram_offset_respects_the_prefix():
    d = delta_diagram("J", F2)  # J spans [2, 3], so the loop starts after x1
    assert d.moves[0].offset == 1
    assert d.moves[0].relation == 4


def test_delta_squared_reduces_across_the_seam():
    d = delta_diagram("I", Z1)
    square = reduce_diagram(compose(d, d))
    # the reopening cell of the first loop cancels the collapsing cell of
    # the second: ten cells become eight
    assert square.cells == 8
    assert reduce_diagram(compose(d, inverse(d))).cells == 0


def test_commutators_follow_disjointness():
    comm = RaagWord((("I", 1), ("J", 1), ("I", -1), ("J", -1)))
    assert evaluate_raag_word(comm, Z2).cells == 0
    assert evaluate_raag_word(comm, F2).cells != 0
    nested = IntervalCollection(3, (("I", 1, 3), ("J", 2, 2)))
    assert evaluate_raag_word(comm, nested).cells != 0


words_ij = st.lists(
    st.tuples(st.sampled_from(["I", "J"]), st.sampled_from([1, -1])),
    max_size=6,
).map(lambda s: RaagWord(tuple(s)))


@given(words_ij)
@settings(max_examples=60, deadline=None)
def test_loop_image_trivial_iff_raag_word_trivial_f2(w):
    # faithfulness evidence on random words: the image diagram reduces to
    # the empty loop exactly when the abstract word is trivial
    graph = disjointness_graph(F2)
    expected = raag_normal_form(w, graph).syllables == ()
    assert (evaluate_raag_word(w, F2).cells == 0) == expected


@given(words_ij)
@settings(max_examples=60, deadline=None)
def test_loop_image_trivial_iff_raag_word_trivial_z2(w):
    graph = disjointness_graph(Z2)
    expected = raag_normal_form(w, graph).syllables == ()
    assert (evaluate_raag_word(w, Z2).cells == 0) == expected


# ---------------------------------------------------------------------------
# ball growth
# ---------------------------------------------------------------------------


def test_raag_ball_sizes_frozen():
    assert raag_ball_sizes(edgeless_graph(1), 3) == (1, 3, 5, 7)
    assert raag_ball_sizes(path_graph(1), 3) == (1, 5, 13, 25)  # Z x Z
    assert raag_ball_sizes(edgeless_graph(2), 3) == (1, 5, 17, 53)  # free rank 2
    assert raag_ball_sizes(complete_graph(3), 3) == (1, 7, 25, 63)  # Z^3
    assert raag_ball_sizes(edgeless_graph(3), 2) == (1, 7, 37)  # free rank 3


@pytest.mark.parametrize(
    "coll,sizes",
    [
        (Z1, (1, 3, 5, 7)),
        (Z2, (1, 5, 13, 25)),
        (F2, (1, 5, 17, 53)),
    ],
    ids=["z", "z2", "f2"],
)
def test_diagram_ball_sizes_frozen(coll, sizes):
    assert diagram_ball_sizes(coll, 3) == sizes


def test_diagram_ball_sizes_three_generators():
    z3 = IntervalCollection(3, (("A", 1, 1), ("B", 2, 2), ("C", 3, 3)))
    assert diagram_ball_sizes(z3, 3) == (1, 7, 25, 63)
    chain = IntervalCollection(
        4, (("A", 1, 2), ("B", 2, 3), ("C", 3, 4))
    )  # only A and C commute
    assert diagram_ball_sizes(chain, 3) == raag_ball_sizes(
        disjointness_graph(chain), 3
    )


def test_diagram_ball_bound():
    with pytest.raises(ValueError, match="bound"):
        diagram_ball_sizes(F2, 3, max_elements=10)


# ---------------------------------------------------------------------------
# the evidence suite
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("coll", [Z1, Z2, F2], ids=["z", "z2", "f2"])
def test_verify_raag_iso_passes(coll):
    ev = verify_raag_iso(coll, length=3)
    assert ev.ok
    assert ev.commutation_ok and ev.relators_ok and ev.balls_ok
    assert ev.diagram_balls == ev.raag_balls


def test_verify_raag_iso_report_details():
    ev = verify_raag_iso(F2, length=2)
    assert ev.commutation == (("I", "J", False, False),)
    assert ev.relators_checked == 0  # no commuting pair, no relator
    ev2 = verify_raag_iso(Z2, length=2)
    assert ev2.commutation == (("I", "J", True, True),)
    assert ev2.relators_checked == 1 and ev2.relators_ok


def test_verify_small_sweep():
    # every collection with at most 2 intervals on at most 3 points
    from itertools import combinations as _comb

    spans = lambda n: [
        (lo, hi) for lo in range(1, n + 1) for hi in range(lo, n + 1)
    ]
    for n in (1, 2, 3):
        for size in (0, 1, 2):
            for chosen in _comb(spans(n), size):
                coll = IntervalCollection(
                    n,
                    tuple(
                        (f"I{k}", lo, hi) for k, (lo, hi) in enumerate(chosen)
                    ),
                )
                assert verify_raag_iso(coll, length=2).ok


def test_evidence_json_deterministic():
    blob = evidence_to_json(verify_raag_iso(Z2, length=2))
    again = evidence_to_json(verify_raag_iso(Z2, length=2))
    assert json.dumps(blob, sort_keys=True) == json.dumps(again, sort_keys=True)
    assert blob["ok"] is True
    assert blob["balls"]["diagram"] == [1, 5, 13]
    assert blob["collection"] == collection_to_json(Z2)
