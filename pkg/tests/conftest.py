"""Shared presentation corpus for the test suite.

Each presentation is chosen for a specific behaviour:

* ``COMM``    — three pairwise-commuting letters; every class is the finite
  set of multiset permutations, so everything about it is exactly checkable.
* ``CYC3``    — three letters identified in a cycle; classes are all words of
  a fixed length, so class sizes grow as 3^n.
* ``PADPAIR`` — two identified triples (a1,a2,a3) and (b1,b2,b3) plus a
  padding letter p absorbed on the right of a's and the left of b's;
  the class of ``a1 b1`` is the infinite family ``a_i p^n b_j``.
* ``HALFPAD`` — the two absorption rules only; minimal infinite classes.
* ``DIRTY``   — ``a`` absorbs ``p`` on the right, ``b`` on the left, and
  ``p = q`` makes the absorbed letter's class nontrivial; the base word
  ``a b`` then carries a self-intersecting hyperplane.
* ``OSC_EMPTY`` — overlapping occurrences of ``k k`` inside ``x k k k y``
  are dual to one hyperplane (periodic side, empty leftover).
* ``OSC_PLAIN`` — same phenomenon for ``k h k`` inside ``x k h k h k y``
  with a nonempty leftover part.
* ``GROW``    — ``x`` absorbs an ``a`` whose class contains all of a, b, c;
  the class of ``x`` contains ``x`` followed by arbitrary words, so its
  complex has cubes of every dimension.
* ``INTEROSC`` — the sides ``u v`` and ``v w`` overlap inside
  ``c u v w d`` while ``c u`` absorbs ``v`` on the right and ``w d`` on the
  left; the two hyperplanes cross elsewhere, so they inter-osculate.
"""

from diagram_groups.rewriting import SearchCaps, parse_presentation, word_of

COMM = parse_presentation(
    """
    letters: a b c
    rel: a b = b a
    rel: a c = c a
    rel: b c = c b
    """
)

CYC3 = parse_presentation(
    """
    letters: a b c
    rel: a = b
    rel: b = c
    rel: c = a
    """
)

PADPAIR = parse_presentation(
    """
    letters: a1 a2 a3 b1 b2 b3 p
    rel: a1 = a2
    rel: a2 = a3
    rel: a3 = a1
    rel: b1 = b2
    rel: b2 = b3
    rel: b3 = b1
    rel: a1 = a1 p
    rel: b1 = p b1
    """
)

HALFPAD = parse_presentation(
    """
    letters: a b p
    rel: a = a p
    rel: b = p b
    """
)

DIRTY = parse_presentation(
    """
    letters: a b p q
    rel: a = a p
    rel: b = p b
    rel: p = q
    """
)

OSC_EMPTY = parse_presentation(
    """
    letters: x k t y
    rel: x = x k
    rel: y = k y
    rel: k k = t
    """
)

OSC_PLAIN = parse_presentation(
    """
    letters: x y k h p
    rel: x = x k h
    rel: y = h k y
    rel: k h k = p
    """
)

GROW = parse_presentation(
    """
    letters: x a b c
    rel: x = x a
    rel: a = b
    rel: b = c
    rel: c = a
    """
)

INTEROSC = parse_presentation(
    """
    letters: c u v w d m n
    rel: c u = c u v
    rel: w d = v w d
    rel: u v = m
    rel: v w = n
    """
)

DEFAULT_CAPS = SearchCaps()
SMALL_CAPS = SearchCaps(max_word_len=6, max_class_size=50, max_bfs_depth=20)
PADPAIR_CAPS = SearchCaps(max_word_len=10, max_class_size=500, max_bfs_depth=48)
# classes that absorb letters (a = ap and friends) blow up fast; keep the
# searches snappy and honestly non-exhaustive
TIGHT_CAPS = SearchCaps(max_word_len=8, max_class_size=120, max_bfs_depth=24)

W = word_of
