"""Derivation diagrams over a semigroup presentation and their algebra.

A derivation (a word and a chain of moves) is drawn as a planar diagram: a
horizontal source path spelling the start word, one two-cell per move, and a
sink path spelling the end word.  Two derivations draw the same diagram
exactly when they differ by swapping consecutive moves that act on disjoint
intervals, so a :class:`Diagram` here is a move sequence *up to* such swaps.

The algebra:

* ``compose`` stacks diagrams vertically (bottom of one = top of the next),
* ``dsum`` places them side by side,
* ``inverse`` flips a diagram upside down,
* ``reduce_diagram`` cancels dipoles (a move immediately undone by its
  mirror, possibly after commuting intervening independent moves out of the
  way); the reduced form of a diagram is unique,
* ``canonical_key`` computes a layered normal form that is invariant under
  independent swaps, giving a hashable identity for the trace class.

Spherical diagrams with a fixed base word form a group under composition
once dipoles are cancelled; that group is the object of study everywhere
else in this package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .rewriting import (
    Derivation,
    Move,
    Presentation,
    Word,
    format_word,
    word_of,
)


@dataclass(frozen=True)
class Diagram:
    """A replayable move sequence considered up to independent swaps.

    Equality of the dataclass is equality of the *representative* sequence;
    use :func:`canonical_key` for trace-class identity.
    """

    pres: Presentation
    top: Word
    moves: Tuple[Move, ...]
    _words: Tuple[Word, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.pres.check_word(self.top)
        object.__setattr__(
            self, "_words", Derivation(self.top, self.moves).replay(self.pres)
        )

    @property
    def bot(self) -> Word:
        return self._words[-1]

    @property
    def cells(self) -> int:
        return len(self.moves)

    def words(self) -> Tuple[Word, ...]:
        """All intermediate words, top first, bottom last."""
        return self._words

    @property
    def is_spherical(self) -> bool:
        return self.top == self.bot

    def derivation(self) -> Derivation:
        return Derivation(self.top, self.moves)

    def __mul__(self, other: "Diagram") -> "Diagram":
        return compose(self, other)

    def __add__(self, other: "Diagram") -> "Diagram":
        return dsum(self, other)

    def __str__(self) -> str:
        return f"[{format_word(self.top)} | {len(self.moves)} cells | {format_word(self.bot)}]"


def eps(pres: Presentation, w: Word) -> Diagram:
    """The edgeless diagram on ``w`` (identity for composition)."""
    return Diagram(pres, w, ())


def atom(pres: Presentation, a: Word, relation: int, forward: bool, b: Word) -> Diagram:
    """The one-cell diagram ``a (lhs -> rhs) b`` (or backward)."""
    src, _ = pres.relations[relation].sides(forward)
    return Diagram(pres, a + src + b, (Move(len(a), relation, forward),))


def from_derivation(derivation: Derivation, pres: Presentation) -> Diagram:
    return Diagram(pres, derivation.start, derivation.steps)


def compose(d1: Diagram, d2: Diagram) -> Diagram:
    """Vertical stacking; requires ``d1.bot == d2.top`` letter for letter."""
    if d1.pres != d2.pres:
        raise ValueError("diagrams over different presentations")
    if d1.bot != d2.top:
        raise ValueError(
            f"cannot compose: {format_word(d1.bot)} != {format_word(d2.top)}"
        )
    return Diagram(d1.pres, d1.top, d1.moves + d2.moves)


def dsum(d1: Diagram, d2: Diagram) -> Diagram:
    """Horizontal sum: ``d1`` acts on the left block, then ``d2`` on the right."""
    if d1.pres != d2.pres:
        raise ValueError("diagrams over different presentations")
    shift = len(d1.bot)
    shifted = tuple(Move(m.offset + shift, m.relation, m.forward) for m in d2.moves)
    return Diagram(d1.pres, d1.top + d2.top, d1.moves + shifted)


def inverse(d: Diagram) -> Diagram:
    """Upside-down flip: same cells, reversed order, directions flipped.

    The inverse of a move transforming ``W_i`` into ``W_{i+1}`` is the move
    at the same offset with the opposite direction.
    """
    return Diagram(
        d.pres, d.bot, tuple(m.inverted() for m in reversed(d.moves))
    )


def swap_adjacent(m1: Move, m2: Move, pres: Presentation) -> Optional[Tuple[Move, Move]]:
    """Swap consecutive moves ``m1`` then ``m2`` when they are independent.

    ``m2`` (acting on the word produced by ``m1``) is independent of ``m1``
    iff its source interval is disjoint from ``m1``'s output block; the
    returned pair applies ``m2`` first, with offsets transported through the
    length change of the other move.  Returns ``None`` when they interfere.
    """
    src1, dst1 = m1.sides(pres)
    src2, dst2 = m2.sides(pres)
    d1 = len(dst1) - len(src1)
    d2 = len(dst2) - len(src2)
    if m2.offset + len(src2) <= m1.offset:
        return m2, Move(m1.offset + d2, m1.relation, m1.forward)
    if m2.offset >= m1.offset + len(dst1):
        return Move(m2.offset - d1, m2.relation, m2.forward), m1
    return None


def _find_dipole(seq: Tuple[Move, ...], pres: Presentation) -> Optional[Tuple[Move, ...]]:
    """One dipole cancellation, or None if the sequence is reduced.

    For each move (earliest first) we bubble it backwards through
    independent predecessors; if it meets its own mirror (same offset, same
    relation, opposite direction) the pair annihilates and the moves it
    passed keep their transported offsets.
    """
    for j in range(1, len(seq)):
        t = seq[j]
        passed: List[Move] = []
        i = j - 1
        while i >= 0:
            prev = seq[i]
            if t == prev.inverted():
                return seq[:i] + tuple(passed) + seq[j + 1 :]
            swapped = swap_adjacent(prev, t, pres)
            if swapped is None:
                break
            t, prev_adj = swapped
            passed.insert(0, prev_adj)
            i -= 1
    return None


def reduce_diagram(d: Diagram) -> Diagram:
    """Cancel dipoles until none remain; the result is the unique reduced form."""
    seq = d.moves
    while True:
        nxt = _find_dipole(seq, d.pres)
        if nxt is None:
            return Diagram(d.pres, d.top, seq)
        seq = nxt


def is_reduced(d: Diagram) -> bool:
    return _find_dipole(d.moves, d.pres) is None


@dataclass(frozen=True)
class CanonicalKey:
    """Layered normal form of a diagram's trace class.

    ``layers[k]`` holds (offset, relation, forward) triples in ascending
    offset order; offsets are in the coordinates of the word at the start of
    that layer, and every move sits in the earliest layer it cannot be
    commuted below.  Two diagrams get equal keys iff they differ by
    independent swaps.
    """

    top: Word
    layers: Tuple[Tuple[Tuple[int, int, bool], ...], ...]

    @property
    def cells(self) -> int:
        return sum(len(layer) for layer in self.layers)


def _wire_cells(d: Diagram) -> List[Tuple[int, bool, Tuple[int, ...], Tuple[int, ...]]]:
    """Replay a diagram as cells wired by letter occurrences.

    Every letter occurrence ever present gets a fresh wire id; a cell
    records which wires it consumes and which it produces.  Two moves of a
    sequence commute exactly when neither consumes the other's output, so
    the wire structure — unlike move offsets, which shift when neighbours
    swap — is the same for every ordering of the same diagram.
    """
    word = list(range(len(d.top)))
    fresh = len(d.top)
    cells = []
    for m in d.moves:
        src, dst = m.sides(d.pres)
        o = m.offset
        consumed = tuple(word[o:o + len(src)])
        produced = tuple(range(fresh, fresh + len(dst)))
        fresh += len(dst)
        word[o:o + len(src)] = produced
        cells.append((m.relation, m.forward, consumed, produced))
    return cells


def canonical_key(d: Diagram) -> CanonicalKey:
    """Compute the layered normal form (works on unreduced diagrams too).

    A cell's layer is the longest produce-consume chain feeding it, so it
    is the earliest round in which the cell can fire; firing the layers in
    order, leftmost cell first, replays the diagram and yields offsets in
    the coordinates where the docstring of :class:`CanonicalKey` puts them.
    """
    cells = _wire_cells(d)
    depth: Dict[int, int] = {i: 0 for i in range(len(d.top))}
    layer_of: List[int] = []
    for _, _, consumed, produced in cells:
        layer = max((depth[w] for w in consumed), default=0)
        layer_of.append(layer)
        for w in produced:
            depth[w] = layer + 1
    packed: List[Tuple[Tuple[int, int, bool], ...]] = []
    state = list(range(len(d.top)))
    for k in range(max(layer_of, default=-1) + 1):
        row = []
        for ci, (relation, forward, consumed, produced) in enumerate(cells):
            if layer_of[ci] != k:
                continue
            pos = state.index(consumed[0])
            assert tuple(state[pos:pos + len(consumed)]) == consumed
            row.append((pos, relation, forward, consumed, produced))
        row.sort(key=lambda r: r[0])
        packed.append(tuple((pos, rel, fwd) for pos, rel, fwd, _, _ in row))
        for pos, _, _, consumed, produced in reversed(row):
            state[pos:pos + len(consumed)] = produced
    return CanonicalKey(d.top, tuple(packed))


def replay_key(key: CanonicalKey, pres: Presentation) -> Word:
    """Replay a layered form back into its bottom word (validates it too)."""
    w = key.top
    for layer in key.layers:
        shift = 0
        for o, r, f in layer:
            mv = Move(o + shift, r, f)
            w = mv.apply(w, pres)
            shift += mv.delta(pres)
    return w


def key_diagram(key: CanonicalKey, pres: Presentation) -> Diagram:
    """A representative diagram of a layered form."""
    moves: List[Move] = []
    w = key.top
    for layer in key.layers:
        shift = 0
        for o, r, f in layer:
            mv = Move(o + shift, r, f)
            w = mv.apply(w, pres)
            shift += mv.delta(pres)
            moves.append(mv)
    return Diagram(pres, key.top, tuple(moves))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def serialize_diagram(d: Diagram) -> str:
    """Text form: the top word, then one ``offset relation fwd|bwd`` per line."""
    lines = [format_word(d.top)]
    for m in d.moves:
        lines.append(f"{m.offset} {m.relation} {'fwd' if m.forward else 'bwd'}")
    return "\n".join(lines) + "\n"


def parse_diagram(text: str, pres: Presentation) -> Diagram:
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty diagram text")
    top = word_of(lines[0])
    moves = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3 or parts[2] not in ("fwd", "bwd"):
            raise ValueError(f"bad move line {ln!r}")
        moves.append(Move(int(parts[0]), int(parts[1]), parts[2] == "fwd"))
    return Diagram(pres, top, tuple(moves))


__all__ = [
    "Diagram",
    "CanonicalKey",
    "eps",
    "atom",
    "from_derivation",
    "compose",
    "dsum",
    "inverse",
    "swap_adjacent",
    "reduce_diagram",
    "is_reduced",
    "canonical_key",
    "replay_key",
    "key_diagram",
    "serialize_diagram",
    "parse_diagram",
]
