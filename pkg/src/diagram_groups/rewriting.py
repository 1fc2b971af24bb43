"""Presentations of semigroups and the elementary rewriting calculus on words.

A *presentation* ``P = <letters | relations>`` is a finite alphabet together
with finitely many defining relations ``u = v`` between nonempty words over
that alphabet.  Replacing one literal occurrence of ``u`` by ``v`` (or of
``v`` by ``u``) inside a word is an *elementary rewrite*; two words are
congruent modulo ``P`` when a finite chain of rewrites connects them, and
the congruence classes are the elements of the semigroup presented by ``P``.

The word problem for semigroup presentations is undecidable, so every search
in this module is bounded by explicit :class:`SearchCaps` and reports its
verdict as a :class:`TriBool`: ``yes`` with a replayable witness, ``no`` only
when the relevant search space was provably exhausted, and ``unknown``
exactly when some cap was hit first.

The module also provides a few cheap *certificates* that stay sound on
infinite congruence classes (letter-count invariants, first/last-letter
closures, the literal-subword rewritability test).  Later modules use them
to upgrade bounded searches to exact verdicts where the combinatorics allow.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any, Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

Letter = str
Word = Tuple[Letter, ...]

EMPTY_WORD: Word = ()

#: Display token for the empty word (also accepted on input).  Letter names
#: may not collide with it.
EMPTY_TOKEN = "1"

_FORBIDDEN_IN_LETTER = set("#=:")


class PresentationError(ValueError):
    """Raised for malformed presentations, relations, or word input."""


def word_of(text: str) -> Word:
    """Parse a whitespace-separated word; ``"1"`` or ``""`` is the empty word."""
    text = text.strip()
    if not text or text == EMPTY_TOKEN:
        return EMPTY_WORD
    return tuple(text.split())


def format_word(w: Sequence[Letter]) -> str:
    """Inverse of :func:`word_of` (the empty word prints as ``1``)."""
    return " ".join(w) if w else EMPTY_TOKEN


def _check_letter_name(name: Letter) -> None:
    if not name or name == EMPTY_TOKEN or any(c in _FORBIDDEN_IN_LETTER for c in name):
        raise PresentationError(f"illegal letter name {name!r}")


@dataclass(frozen=True)
class Relation:
    """One defining relation ``lhs = rhs`` (both sides nonempty words)."""

    lhs: Word
    rhs: Word

    def __post_init__(self) -> None:
        if not self.lhs or not self.rhs:
            raise PresentationError("relation sides must be nonempty words")
        if self.lhs == self.rhs:
            raise PresentationError(
                f"trivial relation {format_word(self.lhs)} = {format_word(self.rhs)}"
            )

    def sides(self, forward: bool) -> Tuple[Word, Word]:
        """The (source, target) pair: forward rewrites lhs into rhs."""
        return (self.lhs, self.rhs) if forward else (self.rhs, self.lhs)

    def __str__(self) -> str:
        return f"{format_word(self.lhs)} = {format_word(self.rhs)}"


@dataclass(frozen=True)
class Presentation:
    """A finite semigroup presentation.

    Relations are stored in one orientation only; a relation equal to an
    earlier one (in either orientation) is rejected, as is ``u = u``.
    Letter order is significant: it fixes the shortlex order used for
    canonical representatives.
    """

    letters: Tuple[Letter, ...]
    relations: Tuple[Relation, ...]
    _index: Dict[Letter, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.letters:
            raise PresentationError("empty alphabet")
        for name in self.letters:
            _check_letter_name(name)
        if len(set(self.letters)) != len(self.letters):
            raise PresentationError("duplicate letters in alphabet")
        index = {x: i for i, x in enumerate(self.letters)}
        object.__setattr__(self, "_index", index)
        seen = set()
        for rel in self.relations:
            for x in rel.lhs + rel.rhs:
                if x not in index:
                    raise PresentationError(f"relation {rel} uses unknown letter {x!r}")
            key = frozenset((rel.lhs, rel.rhs))
            if key in seen:
                raise PresentationError(f"duplicate relation {rel} (up to orientation)")
            seen.add(key)

    def check_word(self, w: Word) -> Word:
        for x in w:
            if x not in self._index:
                raise PresentationError(f"word uses unknown letter {x!r}")
        return w

    def shortlex_key(self, w: Word) -> Tuple[int, Tuple[int, ...]]:
        """Sort key for the shortlex order induced by the alphabet order."""
        idx = self._index
        return (len(w), tuple(idx[x] for x in w))

    def __str__(self) -> str:
        rels = ", ".join(str(r) for r in self.relations)
        return f"< {' '.join(self.letters)} | {rels} >"


def parse_presentation(text: str) -> Presentation:
    """Parse the line-oriented presentation format.

    ``#`` starts a comment; blank lines are skipped.  Exactly one
    ``letters:`` line must precede any ``rel:`` line::

        letters: a b c
        rel: a b = b a     # sides are whitespace-separated letter names
    """
    letters: Optional[Tuple[Letter, ...]] = None
    relations: List[Relation] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("letters:"):
            if letters is not None:
                raise PresentationError(f"line {lineno}: duplicate letters line")
            letters = tuple(line[len("letters:"):].split())
            if not letters:
                raise PresentationError(f"line {lineno}: empty letters line")
        elif line.startswith("rel:"):
            if letters is None:
                raise PresentationError(f"line {lineno}: rel before letters line")
            body = line[len("rel:"):]
            if body.count("=") != 1:
                raise PresentationError(f"line {lineno}: relation needs exactly one '='")
            left, right = body.split("=")
            try:
                relations.append(Relation(tuple(left.split()), tuple(right.split())))
            except PresentationError as exc:
                raise PresentationError(f"line {lineno}: {exc}") from None
        else:
            raise PresentationError(f"line {lineno}: expected 'letters:' or 'rel:'")
    if letters is None:
        raise PresentationError("no letters line")
    try:
        return Presentation(letters, tuple(relations))
    except PresentationError as exc:
        raise PresentationError(str(exc)) from None


@dataclass(frozen=True)
class SearchCaps:
    """Bounds for class searches; any bound hit makes results inexact.

    ``max_word_len`` prunes words longer than the bound, ``max_class_size``
    bounds the number of distinct words explored per class, and
    ``max_bfs_depth`` bounds the number of rewrites from the seed.
    """

    max_word_len: int = 16
    max_class_size: int = 1000
    max_bfs_depth: int = 48

    def __post_init__(self) -> None:
        if min(self.max_word_len, self.max_class_size, self.max_bfs_depth) < 1:
            raise ValueError("all caps must be positive")


@dataclass(frozen=True)
class Move:
    """One elementary rewrite site: apply relation ``relation`` at ``offset``.

    ``forward`` rewrites the stored lhs into the rhs; backward the reverse.
    The inverse of a move is the same site with the direction flipped.
    """

    offset: int
    relation: int
    forward: bool

    def key(self) -> Tuple[int, int, int]:
        return (self.offset, self.relation, 0 if self.forward else 1)

    def inverted(self) -> "Move":
        return Move(self.offset, self.relation, not self.forward)

    def sides(self, pres: Presentation) -> Tuple[Word, Word]:
        return pres.relations[self.relation].sides(self.forward)

    def delta(self, pres: Presentation) -> int:
        src, dst = self.sides(pres)
        return len(dst) - len(src)

    def apply(self, w: Word, pres: Presentation) -> Word:
        src, dst = self.sides(pres)
        if w[self.offset : self.offset + len(src)] != src or self.offset < 0:
            raise ValueError(
                f"move {self} does not apply to {format_word(w)}"
            )
        return w[: self.offset] + dst + w[self.offset + len(src) :]

    def __str__(self) -> str:
        return f"({self.offset},{self.relation},{'fwd' if self.forward else 'bwd'})"


def one_step_rewrites(w: Word, pres: Presentation) -> Tuple[Tuple[Move, Word], ...]:
    """All single rewrites applicable to ``w``.

    Ordered by (offset, relation index, forward-before-backward); the result
    word of a move is always distinct from ``w`` because relation sides
    differ.
    """
    out: List[Tuple[Move, Word]] = []
    for o in range(len(w)):
        for i, rel in enumerate(pres.relations):
            for forward in (True, False):
                src, dst = rel.sides(forward)
                if w[o : o + len(src)] == src:
                    out.append((Move(o, i, forward), w[:o] + dst + w[o + len(src) :]))
    return tuple(out)


@dataclass(frozen=True)
class Derivation:
    """A replayable chain of moves starting at ``start``."""

    start: Word
    steps: Tuple[Move, ...]

    def __len__(self) -> int:
        return len(self.steps)

    def replay(self, pres: Presentation) -> Tuple[Word, ...]:
        """All intermediate words, ``start`` first; raises if a move misfires."""
        words = [self.start]
        for m in self.steps:
            words.append(m.apply(words[-1], pres))
        return tuple(words)

    def end(self, pres: Presentation) -> Word:
        return self.replay(pres)[-1]

    def inverted(self, pres: Presentation) -> "Derivation":
        return Derivation(self.end(pres), tuple(m.inverted() for m in reversed(self.steps)))

    def then(self, other: "Derivation", pres: Presentation) -> "Derivation":
        if self.end(pres) != other.start:
            raise ValueError("derivations do not chain")
        return Derivation(self.start, self.steps + other.steps)


@dataclass(frozen=True)
class ClassEnumeration:
    """Bounded BFS closure of a congruence class.

    ``members`` is shortlex-sorted; ``edges`` is the BFS spanning tree as
    (parent, move, child) triples in discovery order, so any member's
    derivation from the seed can be replayed.  ``complete`` is True exactly
    when the closure finished without suppressing any unvisited neighbour.
    """

    seed: Word
    members: Tuple[Word, ...]
    complete: bool
    edges: Tuple[Tuple[Word, Move, Word], ...]
    _tree: Dict[Word, Tuple[Word, Move]] = field(init=False, repr=False, compare=False)
    _member_set: FrozenSet[Word] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_tree", {c: (p, m) for p, m, c in self.edges})
        object.__setattr__(self, "_member_set", frozenset(self.members))

    def __contains__(self, w: Word) -> bool:
        return w in self._member_set

    def __len__(self) -> int:
        return len(self.members)

    def derivation(self, target: Word) -> Derivation:
        """Replayable derivation seed -> target along the BFS tree."""
        if target not in self._member_set:
            raise ValueError(f"{format_word(target)} was not enumerated")
        steps: List[Move] = []
        cur = target
        while cur != self.seed:
            parent, move = self._tree[cur]
            steps.append(move)
            cur = parent
        return Derivation(self.seed, tuple(reversed(steps)))


def enumerate_class(seed: Word, pres: Presentation, caps: SearchCaps) -> ClassEnumeration:
    """Breadth-first closure of ``[seed]`` under elementary rewrites.

    The seed itself is always retained (even when longer than the word cap);
    a neighbour is pruned, and completeness lost, when it would exceed any
    cap.
    """
    pres.check_word(seed)
    visited = {seed}
    edges: List[Tuple[Word, Move, Word]] = []
    queue: deque[Tuple[Word, int]] = deque([(seed, 0)])
    capped = False
    while queue:
        w, depth = queue.popleft()
        for move, nxt in one_step_rewrites(w, pres):
            if nxt in visited:
                continue
            if (
                depth + 1 > caps.max_bfs_depth
                or len(nxt) > caps.max_word_len
                or len(visited) >= caps.max_class_size
            ):
                capped = True
                continue
            visited.add(nxt)
            edges.append((w, move, nxt))
            queue.append((nxt, depth + 1))
    members = tuple(sorted(visited, key=pres.shortlex_key))
    return ClassEnumeration(seed, members, not capped, tuple(edges))


def canonical_rep(w: Word, pres: Presentation, caps: SearchCaps) -> Tuple[Word, bool]:
    """Shortlex-least member found in ``[w]``; the flag says whether it is exact
    (i.e. the enumeration completed)."""
    enum = enumerate_class(w, pres, caps)
    return enum.members[0], enum.complete


@dataclass(frozen=True)
class TriBool:
    """Three-valued verdict with an attached witness.

    ``yes`` witnesses are replayable (typically a :class:`Derivation`),
    ``no`` witnesses document the exhausted search (typically a complete
    :class:`ClassEnumeration`) or a certificate, and ``unknown`` means a
    search cap was hit before either.
    """

    value: str
    witness: Any = None

    def __post_init__(self) -> None:
        if self.value not in ("yes", "no", "unknown"):
            raise ValueError(f"bad TriBool value {self.value!r}")

    @property
    def is_yes(self) -> bool:
        return self.value == "yes"

    @property
    def is_no(self) -> bool:
        return self.value == "no"

    @property
    def is_unknown(self) -> bool:
        return self.value == "unknown"

    @staticmethod
    def yes(witness: Any = None) -> "TriBool":
        return TriBool("yes", witness)

    @staticmethod
    def no(witness: Any = None) -> "TriBool":
        return TriBool("no", witness)

    @staticmethod
    def unknown(witness: Any = None) -> "TriBool":
        return TriBool("unknown", witness)


class _BfsSide:
    """One frontier of the bidirectional search in :func:`equal_mod_p`."""

    def __init__(self, seed: Word) -> None:
        self.seed = seed
        self.parent: Dict[Word, Tuple[Word, Move]] = {}
        self.depth = {seed: 0}
        self.queue: deque[Word] = deque([seed])
        self.capped = False

    def path_from_seed(self, target: Word) -> Derivation:
        steps: List[Move] = []
        cur = target
        while cur != self.seed:
            prev, move = self.parent[cur]
            steps.append(move)
            cur = prev
        return Derivation(self.seed, tuple(reversed(steps)))

    def enumeration(self, pres: Presentation) -> ClassEnumeration:
        members = tuple(sorted(self.depth, key=pres.shortlex_key))
        edges = []
        order = sorted(self.parent.items(), key=lambda item: self.depth[item[0]])
        for child, (par, move) in order:
            edges.append((par, move, child))
        return ClassEnumeration(self.seed, members, not self.capped, tuple(edges))


def equal_mod_p(w1: Word, w2: Word, pres: Presentation, caps: SearchCaps) -> TriBool:
    """Decide ``w1 = w2`` modulo the presentation, within caps.

    Bidirectional BFS from both words.  ``yes`` carries a connecting
    :class:`Derivation` from ``w1`` to ``w2``; ``no`` carries the complete
    :class:`ClassEnumeration` that excludes the other word; ``unknown``
    means both frontiers were capped before meeting.
    """
    pres.check_word(w1)
    pres.check_word(w2)
    if w1 == w2:
        return TriBool.yes(Derivation(w1, ()))
    sides = (_BfsSide(w1), _BfsSide(w2))

    def connect(i: int, meet: Word) -> Derivation:
        d_from_w1 = sides[0].path_from_seed(meet)
        d_from_w2 = sides[1].path_from_seed(meet)
        back = tuple(m.inverted() for m in reversed(d_from_w2.steps))
        return Derivation(w1, d_from_w1.steps + back)

    while True:
        active = [s for s in sides if s.queue]
        if not active:
            break
        side = min(active, key=lambda s: len(s.queue))
        other = sides[1] if side is sides[0] else sides[0]
        w = side.queue.popleft()
        depth = side.depth[w]
        for move, nxt in one_step_rewrites(w, pres):
            if nxt in side.depth:
                continue
            if (
                depth + 1 > caps.max_bfs_depth
                or len(nxt) > caps.max_word_len
                or len(side.depth) >= caps.max_class_size
            ):
                side.capped = True
                continue
            side.depth[nxt] = depth + 1
            side.parent[nxt] = (w, move)
            side.queue.append(nxt)
            if nxt in other.depth:
                return TriBool.yes(connect(0, nxt))
        if not side.queue and not side.capped:
            # this class is completely enumerated and the other seed is not in it
            return TriBool.no(side.enumeration(pres))
    for side in sides:
        if not side.capped:
            return TriBool.no(side.enumeration(pres))
    return TriBool.unknown()


# ---------------------------------------------------------------------------
# certificates that stay sound on infinite classes
# ---------------------------------------------------------------------------


def has_singleton_class(w: Word, pres: Presentation) -> bool:
    """Exact test for ``[w] == {w}``.

    A rewrite applies to ``w`` iff some relation side occurs literally in it,
    and an applicable rewrite always changes the word (relation sides
    differ), so the class is a singleton iff no side occurs.
    """
    for o in range(len(w)):
        for rel in pres.relations:
            if w[o : o + len(rel.lhs)] == rel.lhs or w[o : o + len(rel.rhs)] == rel.rhs:
                return False
    return True


def invariant_letter_subsets(
    pres: Presentation, max_alphabet: int = 16
) -> Tuple[FrozenSet[Letter], ...]:
    """All nonempty ``S``-letter-count invariants of the congruence.

    ``S`` qualifies when every relation preserves the total number of
    letters from ``S``; the count is then constant on congruence classes.
    Exhaustive over all subsets up to ``max_alphabet`` letters; beyond that
    only singletons, their complements and the full alphabet are tested
    (still sound, just fewer certificates).
    """
    letters = pres.letters
    n = len(letters)
    diffs: List[List[int]] = []
    for rel in pres.relations:
        d = [0] * n
        for x in rel.lhs:
            d[pres._index[x]] += 1
        for x in rel.rhs:
            d[pres._index[x]] -= 1
        diffs.append(d)
    found: List[FrozenSet[Letter]] = []
    if n <= max_alphabet:
        nrel = len(diffs)
        sums = [[0] * nrel]
        for mask in range(1, 1 << n):
            low = mask & -mask
            li = low.bit_length() - 1
            prev = sums[mask ^ low]
            cur = [prev[r] + diffs[r][li] for r in range(nrel)]
            sums.append(cur)
            if all(v == 0 for v in cur):
                found.append(
                    frozenset(letters[i] for i in range(n) if mask >> i & 1)
                )
    else:
        candidates = set()
        for x in letters:
            candidates.add(frozenset([x]))
            candidates.add(frozenset(letters) - {x})
        candidates.add(frozenset(letters))
        for cand in candidates:
            if all(
                sum(d[i] for i in range(n) if letters[i] in cand) == 0 for d in diffs
            ):
                found.append(cand)
    index = pres._index
    return tuple(
        sorted(found, key=lambda s: (len(s), sorted(index[x] for x in s)))
    )


def forced_support(pres: Presentation, max_alphabet: int = 16) -> FrozenSet[Letter]:
    """Letters allowed in any word that is "invisible" to all invariants.

    If ``a = a p`` modulo the presentation then every letter-count invariant
    of ``p`` is zero, so ``p`` can only use letters outside every invariant
    subset.  Returns that residual letter set.
    """
    covered: set = set()
    for s in invariant_letter_subsets(pres, max_alphabet):
        covered |= s
    return frozenset(pres.letters) - covered


def first_letter_closure(pres: Presentation, w: Word) -> FrozenSet[Letter]:
    """Sound overapproximation of first letters across ``[w]``.

    Only a rewrite at offset 0 can change the first letter, and then only to
    the first letter of the replacing relation side; iterate to closure.
    """
    if not w:
        raise ValueError("empty word has no first letter")
    reach = {w[0]}
    changed = True
    while changed:
        changed = False
        for rel in pres.relations:
            for forward in (True, False):
                src, dst = rel.sides(forward)
                if src[0] in reach and dst[0] not in reach:
                    reach.add(dst[0])
                    changed = True
    return frozenset(reach)


def last_letter_closure(pres: Presentation, w: Word) -> FrozenSet[Letter]:
    """Mirror of :func:`first_letter_closure` for last letters."""
    if not w:
        raise ValueError("empty word has no last letter")
    reach = {w[-1]}
    changed = True
    while changed:
        changed = False
        for rel in pres.relations:
            for forward in (True, False):
                src, dst = rel.sides(forward)
                if src[-1] in reach and dst[-1] not in reach:
                    reach.add(dst[-1])
                    changed = True
    return frozenset(reach)


def letter_count(w: Word, subset: FrozenSet[Letter]) -> int:
    return sum(1 for x in w if x in subset)


__all__ = [
    "Letter",
    "Word",
    "EMPTY_WORD",
    "EMPTY_TOKEN",
    "PresentationError",
    "word_of",
    "format_word",
    "Relation",
    "Presentation",
    "parse_presentation",
    "SearchCaps",
    "Move",
    "one_step_rewrites",
    "Derivation",
    "ClassEnumeration",
    "enumerate_class",
    "canonical_rep",
    "TriBool",
    "equal_mod_p",
    "has_singleton_class",
    "invariant_letter_subsets",
    "forced_support",
    "first_letter_closure",
    "last_letter_closure",
    "letter_count",
]
