"""Word algebra over a countable alphabet of variables.

A word is a plain ``tuple`` of variable tokens; a token is one lowercase
letter followed by a (possibly empty) run of decimal digits.  The empty
tuple is the monoid identity and renders as ``"1"``.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass, field
from itertools import count
from typing import Iterable, Sequence

Word = tuple[str, ...]
EMPTY: Word = ()

_TOKEN = re.compile(r"[a-z][0-9]*")
_LETTERS = "abcdefghijklmnopqrstuvwxyz"


class WordSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, reason: str):
        super().__init__(f"{reason} at position {pos} in {text!r}")
        self.text = text
        self.pos = pos


def parse_word(text: str) -> Word:
    """Tokenize ``text`` by maximal munch (letter, then longest digit run).

    >>> parse_word("z1xyz2x1")
    ('z1', 'x', 'y', 'z2', 'x1')
    >>> parse_word("1")
    ()
    """
    s = text.strip()
    if s == "1" or s == "":
        if s == "":
            raise WordSyntaxError(text, 0, "empty text (use '1' for the empty word)")
        return EMPTY
    out = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if m is None:
            raise WordSyntaxError(text, pos, f"malformed token starting with {s[pos]!r}")
        out.append(m.group())
        pos = m.end()
    return tuple(out)


def format_word(w: Sequence[str]) -> str:
    return "".join(w) if w else "1"


def is_variable(token: str) -> bool:
    return _TOKEN.fullmatch(token) is not None


@dataclass(frozen=True)
class Identity:
    lhs: Word
    rhs: Word
    tag: str = ""

    def __str__(self) -> str:
        return f"{format_word(self.lhs)} = {format_word(self.rhs)}"

    def reversed_sides(self) -> "Identity":
        return Identity(self.rhs, self.lhs, self.tag)

    @property
    def is_balanced(self) -> bool:
        return Counter(self.lhs) == Counter(self.rhs)


def parse_identity(text: str, tag: str = "") -> Identity:
    """Parse ``"u = v"`` (whitespace optional, ``1`` for an empty side)."""
    if text.count("=") != 1:
        raise WordSyntaxError(text, 0, "identity must contain exactly one '='")
    left, right = text.split("=")
    return Identity(parse_word(left), parse_word(right), tag)


@dataclass(frozen=True)
class WordStats:
    content: frozenset
    occ: dict = field(hash=False)
    linear: frozenset

    @property
    def limit(self) -> int:
        """Least n such that the word is n-limited."""
        return max(self.occ.values(), default=0)

    def is_limited(self, n: int) -> bool:
        return self.limit <= n


def word_stats(w: Word) -> WordStats:
    occ = dict(Counter(w))
    return WordStats(
        content=frozenset(occ),
        occ=occ,
        linear=frozenset(x for x, k in occ.items() if k == 1),
    )


def content(w: Word) -> frozenset:
    return frozenset(w)


def is_limited(w: Word, n: int) -> bool:
    return all(k <= n for k in Counter(w).values())


def project(w: Word, keep: Iterable[str]) -> Word:
    """Delete every letter of ``w`` outside ``keep`` (the projection w[X])."""
    keep = set(keep)
    return tuple(a for a in w if a in keep)


def is_factor(a: Word, b: Word) -> bool:
    if not a:
        return True
    n = len(a)
    first = a[0]
    for i in range(len(b) - n + 1):
        if b[i] == first and b[i:i + n] == a:
            return True
    return False


def factor_positions(a: Word, b: Word) -> list[int]:
    n = len(a)
    return [i for i in range(len(b) - n + 1) if b[i:i + n] == a]


def occurrence_positions(w: Word) -> dict[str, list[int]]:
    pos: dict[str, list[int]] = {}
    for i, a in enumerate(w):
        pos.setdefault(a, []).append(i)
    return pos


def position_of(w: Word, var: str, index: int) -> int:
    """Position of the ``index``-th (1-based) occurrence of ``var`` in ``w``."""
    seen = 0
    for i, a in enumerate(w):
        if a == var:
            seen += 1
            if seen == index:
                return i
    raise IndexError(f"{var} occurs {seen} times in {format_word(w)}, no occurrence #{index}")


def occurrence_factor(w: Word, refs: Sequence[tuple[str, int]]) -> bool:
    """True iff the referenced occurrences sit at consecutive positions, in order."""
    positions = [position_of(w, v, i) for v, i in refs]
    return all(q == p + 1 for p, q in zip(positions, positions[1:]))


def interlocks(w: Word, x: str, y: str) -> bool:
    return project(w, (x, y)) in ((x, y, x, y), (y, x, y, x))


def _interlock_component(w: Word, x: str) -> set[str]:
    pos = occurrence_positions(w)
    letters = [a for a in pos if len(pos[a]) == 2]
    comp = {x}
    todo = [x]
    while todo:
        a = todo.pop()
        for b in letters:
            if b not in comp and interlocks(w, a, b):
                comp.add(b)
                todo.append(b)
    return comp


def linked(w: Word, x: str, y: str) -> bool:
    """True iff ``y`` is linked to ``x`` in ``w`` (an asymmetric relation)."""
    if x == y:
        raise ValueError("linked() needs two distinct letters")
    for z in _interlock_component(w, x):
        if z == y:
            continue
        p = project(w, (z, y))
        if p in ((z, y, z, y), (y, z, y, z), (z, y, y, z), (z, y, z)):
            return True
    return False


def smallest_block(w: Word, span: tuple[int, int]) -> tuple[int, int]:
    """Least factor ``w[lo:hi]`` containing ``span`` that holds every occurrence
    of each of its letters."""
    lo, hi = span
    if not (0 <= lo <= hi <= len(w)):
        raise ValueError(f"span {span} outside word of length {len(w)}")
    pos = occurrence_positions(w)
    while True:
        letters = set(w[lo:hi])
        nlo = min([lo] + [pos[a][0] for a in letters])
        nhi = max([hi] + [pos[a][-1] + 1 for a in letters])
        if (nlo, nhi) == (lo, hi):
            return lo, hi
        lo, hi = nlo, nhi


def reverse(w: Word) -> Word:
    return tuple(reversed(w))


def _canonical_names():
    for suffix in count():
        tail = "" if suffix == 0 else str(suffix)
        for c in _LETTERS:
            yield c + tail


def canonical_renaming(w: Iterable[str]) -> dict[str, str]:
    names = _canonical_names()
    ren: dict[str, str] = {}
    for a in w:
        if a not in ren:
            ren[a] = next(names)
    return ren


def canonical_form(w: Word) -> Word:
    """Rename letters to a, b, c, ... in order of first occurrence.

    Past 26 letters the names continue a1, b1, ..., z1, a2, ...
    """
    ren = canonical_renaming(w)
    return tuple(ren[a] for a in w)


def rename(w: Word, mapping: dict[str, str]) -> Word:
    return tuple(mapping.get(a, a) for a in w)


def fresh_letters(avoid: Iterable[str], stem: str = "q") -> Iterable[str]:
    """Endless supply of tokens ``stem0, stem1, ...`` skipping those in ``avoid``."""
    avoid = set(avoid)
    for k in count():
        tok = f"{stem}{k}"
        if tok not in avoid:
            yield tok
