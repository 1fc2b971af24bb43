"""Tests for the diagram algebra.

The independent oracle for trace-class identity is the full swap orbit: BFS
over move sequences using single adjacent independent swaps.  Canonical keys
must be constant on each orbit and separate distinct orbits.
"""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import COMM, PADPAIR, W
from diagram_groups.diagrams import (
    CanonicalKey,
    Diagram,
    atom,
    canonical_key,
    compose,
    dsum,
    eps,
    from_derivation,
    inverse,
    is_reduced,
    key_diagram,
    parse_diagram,
    reduce_diagram,
    replay_key,
    serialize_diagram,
    swap_adjacent,
)
from diagram_groups.rewriting import (
    Derivation,
    Move,
    one_step_rewrites,
    parse_presentation,
)

SQUARES = parse_presentation("letters: k t\nrel: k k = t")  # length-changing


def swap_orbit(d: Diagram) -> set:
    """All representatives of d's trace class (oracle; use on short diagrams)."""
    seen = {d.moves}
    frontier = [d.moves]
    while frontier:
        new = []
        for seq in frontier:
            for i in range(len(seq) - 1):
                sw = swap_adjacent(seq[i], seq[i + 1], d.pres)
                if sw is not None:
                    cand = seq[:i] + sw + seq[i + 2 :]
                    if cand not in seen:
                        seen.add(cand)
                        new.append(cand)
        frontier = new
    return seen


def random_walk_diagram(pres, start, picks):
    """Deterministic pseudo-random derivation driven by a list of ints."""
    moves = []
    cur = start
    for k in picks:
        options = one_step_rewrites(cur, pres)
        if not options:
            break
        move, cur = options[k % len(options)]
        moves.append(move)
    return Diagram(pres, start, tuple(moves))


words3 = st.lists(st.sampled_from("abc"), min_size=1, max_size=5).map(tuple)
picks5 = st.lists(st.integers(0, 1000), min_size=0, max_size=5)


# the hexagon loop at abc: six edges of the commuting complex, no squares,
# so it is a nontrivial reduced spherical diagram
HEX = Diagram(
    COMM,
    tuple("abc"),
    (
        Move(0, 0, True),   # abc -> bac
        Move(1, 1, True),   # bac -> bca
        Move(0, 2, True),   # bca -> cba
        Move(1, 0, False),  # cba -> cab
        Move(0, 1, False),  # cab -> acb
        Move(1, 2, False),  # acb -> abc
    ),
)


# ---------------------------------------------------------------------------
# constructors and basic algebra
# ---------------------------------------------------------------------------


def test_atom_frozen():
    d = atom(COMM, ("a",), 0, True, ("c",))
    assert d.top == tuple("aabc")
    assert d.moves == (Move(1, 0, True),)
    assert d.bot == tuple("abac")
    assert d.cells == 1


def test_eps_identity():
    e = eps(COMM, tuple("abc"))
    assert e.cells == 0 and e.is_spherical
    assert compose(e, HEX).moves == HEX.moves
    assert compose(HEX, e).moves == HEX.moves


def test_diagram_validates_moves():
    with pytest.raises(ValueError):
        Diagram(COMM, tuple("abc"), (Move(0, 1, True),))  # "a c" not at offset 0


def test_compose_frozen_chain():
    d = (
        atom(COMM, ("a",), 0, True, ("c",))          # aabc -> abac
        * atom(COMM, tuple("ab"), 1, True, ())        # abac -> abca
        * atom(COMM, ("a",), 2, True, ("a",))         # abca -> acba
        * atom(COMM, (), 1, True, tuple("ba"))        # acba -> caba
    )
    assert d.top == tuple("aabc") and d.bot == tuple("caba") and d.cells == 4


def test_compose_mismatch_raises():
    with pytest.raises(ValueError):
        compose(atom(COMM, (), 0, True, ()), atom(COMM, (), 1, True, ()))


def test_dsum_shifts_second_block():
    left = atom(SQUARES, (), 0, True, ())  # kk -> t, bottom has length 1
    right = atom(SQUARES, (), 0, True, ())
    s = left + right
    assert s.top == tuple("kkkk")
    assert s.moves == (Move(0, 0, True), Move(1, 0, True))
    assert s.bot == tuple("tt")


def test_inverse_frozen():
    inv = inverse(HEX)
    assert inv.top == HEX.bot and inv.bot == HEX.top
    assert inv.moves[0] == Move(1, 2, True)
    assert inv.moves[-1] == Move(0, 0, False)
    assert inverse(inv).moves == HEX.moves


# ---------------------------------------------------------------------------
# swaps
# ---------------------------------------------------------------------------


def test_swap_left_case_with_length_change():
    # on kkkk: (0,kk->t) then (1,kk->t); the second acts right of the first's
    # output, so swapping moves it to offset 2 in top coordinates
    m1, m2 = Move(0, 0, True), Move(1, 0, True)
    assert swap_adjacent(m1, m2, SQUARES) == (Move(2, 0, True), Move(0, 0, True))
    d = Diagram(SQUARES, tuple("kkkk"), (m1, m2))
    e = Diagram(SQUARES, tuple("kkkk"), (Move(2, 0, True), Move(0, 0, True)))
    assert d.bot == e.bot == tuple("tt")


def test_swap_dependent_returns_none():
    # on abc: ab at 0 then (on bac) ac at 1 overlaps the output block [0,2)
    assert swap_adjacent(Move(0, 0, True), Move(1, 1, True), COMM) is None


@given(words3, picks5)
@settings(max_examples=60, deadline=None)
def test_swap_preserves_replay(start, picks):
    d = random_walk_diagram(COMM, start, picks)
    for i in range(len(d.moves) - 1):
        sw = swap_adjacent(d.moves[i], d.moves[i + 1], COMM)
        if sw is not None:
            other = Diagram(COMM, d.top, d.moves[:i] + sw + d.moves[i + 2 :])
            assert other.bot == d.bot


# ---------------------------------------------------------------------------
# canonical keys
# ---------------------------------------------------------------------------


def test_canonical_key_staircase_frozen():
    d = Diagram(
        COMM,
        tuple("aabc"),
        (Move(1, 0, True), Move(2, 1, True), Move(1, 2, True), Move(0, 1, True)),
    )
    key = canonical_key(d)
    assert key.layers == (
        ((1, 0, True),),
        ((2, 1, True),),
        ((1, 2, True),),
        ((0, 1, True),),
    )
    assert replay_key(key, COMM) == tuple("caba")


def test_canonical_key_merges_parallel_moves():
    a = Diagram(SQUARES, tuple("kkkk"), (Move(0, 0, True), Move(1, 0, True)))
    b = Diagram(SQUARES, tuple("kkkk"), (Move(2, 0, True), Move(0, 0, True)))
    key = canonical_key(a)
    assert key == canonical_key(b)
    assert key.layers == (((0, 0, True), (2, 0, True)),)
    assert replay_key(key, SQUARES) == tuple("tt")


@given(words3, picks5)
@settings(max_examples=60, deadline=None)
def test_canonical_key_constant_on_swap_orbit(start, picks):
    d = random_walk_diagram(COMM, start, picks)
    key = canonical_key(d)
    for seq in swap_orbit(d):
        assert canonical_key(Diagram(COMM, d.top, seq)) == key
    assert replay_key(key, COMM) == d.bot
    assert canonical_key(key_diagram(key, COMM)) == key


@given(words3, picks5, picks5)
@settings(max_examples=60, deadline=None)
def test_canonical_key_separates_orbits(start, p1, p2):
    d1 = random_walk_diagram(COMM, start, p1)
    d2 = random_walk_diagram(COMM, start, p2)
    same_orbit = d2.moves in swap_orbit(d1)
    assert (canonical_key(d1) == canonical_key(d2)) == same_orbit


wordskt = st.lists(st.sampled_from("kt"), min_size=1, max_size=5).map(tuple)


@given(wordskt, picks5)
@settings(max_examples=60, deadline=None)
def test_canonical_key_orbit_with_length_change(start, picks):
    # length-changing relations shift later offsets when moves swap; the key
    # must still be constant across the orbit
    d = random_walk_diagram(SQUARES, start, picks)
    key = canonical_key(d)
    for seq in swap_orbit(d):
        assert canonical_key(Diagram(SQUARES, d.top, seq)) == key
    assert replay_key(key, SQUARES) == d.bot


@given(picks5)
@settings(max_examples=60, deadline=None)
def test_canonical_key_orbit_padded_letters(picks):
    d = random_walk_diagram(PADPAIR, W("a1 b1"), picks)
    key = canonical_key(d)
    for seq in swap_orbit(d):
        assert canonical_key(Diagram(PADPAIR, d.top, seq)) == key
    assert replay_key(key, PADPAIR) == d.bot


def test_canonical_key_regression_sunk_move_shifts_laters():
    # a padding move (delta +1) commutes below two b-moves; the b-moves'
    # stored offsets must shift with it.  Frozen from a hand-checked pair
    # that an earlier layering missed.
    top = W("a1 b1")
    d1 = Diagram(PADPAIR, top, (Move(1, 3, True), Move(1, 4, True), Move(0, 6, True)))
    d2 = Diagram(PADPAIR, top, (Move(0, 6, True), Move(2, 3, True), Move(2, 4, True)))
    assert d2.moves in swap_orbit(d1)
    k1, k2 = canonical_key(d1), canonical_key(d2)
    assert k1 == k2
    assert k1.layers == (((0, 6, True), (1, 3, True)), ((2, 4, True),))


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------


def test_reduce_adjacent_dipole():
    d = Diagram(COMM, tuple("aabc"), (Move(1, 0, True), Move(1, 0, False)))
    r = reduce_diagram(d)
    assert r.cells == 0 and r.top == r.bot == tuple("aabc")


def test_reduce_separated_dipole_frozen():
    # dipole around an independent middle move keeps the middle move
    top = tuple("abcabc")
    d = Diagram(COMM, top, (Move(0, 0, True), Move(3, 0, True), Move(0, 0, False)))
    r = reduce_diagram(d)
    assert r.moves == (Move(3, 0, True),)
    assert r.bot == d.bot == tuple("abcbac")


def test_hexagon_is_reduced_and_nontrivial():
    assert HEX.is_spherical
    assert is_reduced(HEX)
    assert reduce_diagram(HEX).cells == 6


def test_reduce_of_loop_times_inverse_is_trivial():
    s = compose(HEX, inverse(HEX))
    assert s.cells == 12
    assert reduce_diagram(s).cells == 0


@given(words3, picks5)
@settings(max_examples=60, deadline=None)
def test_reduce_idempotent_and_parity(start, picks):
    d = random_walk_diagram(COMM, start, picks)
    r = reduce_diagram(d)
    assert is_reduced(r)
    assert r.top == d.top and r.bot == d.bot
    assert (d.cells - r.cells) % 2 == 0
    assert reduce_diagram(r).moves == r.moves


@given(words3, picks5, st.integers(0, 1000), st.integers(0, 1000))
@settings(max_examples=60, deadline=None)
def test_reduce_unaffected_by_dipole_insertion(start, picks, where, which):
    d = random_walk_diagram(COMM, start, picks)
    words = d.words()
    i = where % len(words)
    options = one_step_rewrites(words[i], COMM)
    if not options:
        return
    m, _ = options[which % len(options)]
    padded = Diagram(
        COMM, d.top, d.moves[:i] + (m, m.inverted()) + d.moves[i:]
    )
    assert canonical_key(reduce_diagram(padded)) == canonical_key(reduce_diagram(d))


def test_reduce_distributes_over_dsum():
    d1 = compose(HEX, inverse(HEX))
    d2 = HEX
    lhs = canonical_key(reduce_diagram(dsum(d1, d2)))
    rhs = canonical_key(dsum(reduce_diagram(d1), reduce_diagram(d2)))
    assert lhs == rhs


def test_sum_with_identity_keeps_diagram_nontrivial():
    # evidence that appending a trivial block is injective on reduced diagrams
    padded = dsum(eps(COMM, W("a a")), HEX)
    r = reduce_diagram(padded)
    assert r.cells == HEX.cells
    assert canonical_key(r) != canonical_key(eps(COMM, W("a a") + HEX.top))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def test_serialize_roundtrip():
    text = serialize_diagram(HEX)
    assert text.splitlines()[0] == "a b c"
    assert parse_diagram(text, COMM).moves == HEX.moves


def test_parse_diagram_rejects_garbage():
    with pytest.raises(ValueError):
        parse_diagram("a b c\n0 0 sideways", COMM)
    with pytest.raises(ValueError):
        parse_diagram("", COMM)
