"""Rees quotients M(W) of the free monoid and exact identity checking.

M(W) is the set of factors of the words in W together with an absorbing
ZERO; a product is the concatenation when that is again a factor, and ZERO
otherwise.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import permutations
from typing import Iterable, Iterator, Mapping

from .words import EMPTY, Identity, Word, format_word, is_limited, parse_word, project


class _Zero:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "ZERO"

    def __reduce__(self):
        return (_Zero, ())


ZERO = _Zero()


class UndecidedError(ValueError):
    """Raised when a question falls outside the regime where the procedure is exact."""


def format_element(e) -> str:
    return "0" if e is ZERO else format_word(e)


def factorial_closure(words: Iterable[Word]) -> frozenset:
    words = [tuple(w) for w in words]
    if not any(words):
        raise ValueError("need at least one nonempty generator word (otherwise 0 = 1)")
    out = {EMPTY}
    for w in words:
        n = len(w)
        for i in range(n):
            for j in range(i + 1, n + 1):
                out.add(w[i:j])
    return frozenset(out)


def _sort_key(w: Word):
    return (len(w), w)


class ReesMonoid:
    def __init__(self, generators: Iterable[Word]):
        gens = []
        for g in generators:
            g = tuple(g)
            if g not in gens:
                gens.append(g)
        self.generators: tuple[Word, ...] = tuple(gens)
        self.factors: frozenset = factorial_closure(self.generators)
        self.max_len: int = max(len(g) for g in self.generators)

    def __repr__(self):
        return f"ReesMonoid({len(self.generators)} generators, {len(self)} elements)"

    def __len__(self):
        return len(self.factors) + 1

    def __contains__(self, e) -> bool:
        return e is ZERO or e in self.factors

    @cached_property
    def elements(self) -> list:
        """Factors in (length, lexicographic) order, then ZERO."""
        return sorted(self.factors, key=_sort_key) + [ZERO]

    @cached_property
    def letters(self) -> list[str]:
        return sorted({a for g in self.generators for a in g})

    @cached_property
    def _suffixes(self) -> dict[Word, list[Word]]:
        # for each factor f: every t with f + t a factor, in (length, lex) order
        children: dict[Word, list[Word]] = {f: [] for f in self.factors}
        for f in self.factors:
            if f:
                children[f[:-1]].append(f)
        out: dict[Word, list[Word]] = {}
        for f in self.factors:
            exts = []
            stack = [f]
            while stack:
                g = stack.pop()
                exts.append(g[len(f):])
                stack.extend(children[g])
            exts.sort(key=_sort_key)
            out[f] = exts
        return out

    @cached_property
    def _repeats(self) -> dict[Word, int]:
        # largest number of occurrences of a factor inside one generator
        rep: dict[Word, int] = {}
        for g in self.generators:
            cnt: dict[Word, int] = {}
            n = len(g)
            for i in range(n):
                for j in range(i + 1, n + 1):
                    cnt[g[i:j]] = cnt.get(g[i:j], 0) + 1
            for f, k in cnt.items():
                if k > rep.get(f, 0):
                    rep[f] = k
        return rep

    def extensions(self, f: Word, copies: int = 1) -> list[Word]:
        """Every t with f + t a factor; for ``copies`` > 1 only those nonempty t
        occurring that many times in a single generator (and the empty t)."""
        if copies <= 1:
            return self._suffixes[f]
        key = (f, copies)
        cache = self.__dict__.setdefault("_ext_cache", {})
        if key not in cache:
            rep = self._repeats
            cache[key] = [t for t in self._suffixes[f] if not t or rep.get(t, 0) >= copies]
        return cache[key]

    def has_square(self) -> bool:
        return any(len(f) == 2 and f[0] == f[1] for f in self.factors)

    def product(self, a, b):
        if a is ZERO or b is ZERO:
            return ZERO
        ab = a + b
        return ab if ab in self.factors else ZERO

    def value(self, w: Word):
        """Element represented by the word ``w`` (ZERO if not a factor)."""
        w = tuple(w)
        if len(w) > self.max_len:
            return ZERO
        return w if w in self.factors else ZERO

    def evaluate(self, w: Word, theta: Mapping[str, object]):
        """Evaluate ``w`` under an assignment of its variables to elements."""
        parts = []
        for a in w:
            e = theta[a]
            if e is ZERO:
                return ZERO
            parts.extend(e)
            if len(parts) > self.max_len:
                return ZERO
        return self.value(tuple(parts))

    # persistence

    def to_json(self, include_factors: bool = False) -> str:
        doc = {
            "generator_words": [format_word(g) for g in self.generators],
            "max_len": self.max_len,
        }
        if include_factors:
            doc["factors"] = [format_word(f) for f in sorted(self.factors, key=_sort_key)]
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ReesMonoid":
        doc = json.loads(text)
        m = cls(parse_word(s) for s in doc["generator_words"])
        if "max_len" in doc and doc["max_len"] != m.max_len:
            raise ValueError(f"max_len {doc['max_len']} does not match generators ({m.max_len})")
        if "factors" in doc:
            stored = {parse_word(s) for s in doc["factors"]}
            for f in stored:
                for i in range(len(f)):
                    if f[:i] not in stored or f[i + 1:] not in stored:
                        raise ValueError(f"stored factor list is not factor-closed at {format_word(f)}")
            if stored != set(m.factors):
                raise ValueError("stored factor list differs from the closure of the generators")
        return m


def build_monoid(words: Iterable) -> ReesMonoid:
    return ReesMonoid(parse_word(w) if isinstance(w, str) else tuple(w) for w in words)


@dataclass(frozen=True)
class SatisfactionWitness:
    substitution: dict
    lhs_value: object
    rhs_value: object

    def __str__(self):
        sub = ", ".join(f"{k}->{format_element(v)}" for k, v in self.substitution.items())
        return f"{{{sub}}}: {format_element(self.lhs_value)} != {format_element(self.rhs_value)}"


def _nonzero_assignments(m: ReesMonoid, u: Word) -> Iterator[tuple[dict, Word]]:
    """All assignments of con(u) into the factor set with u·theta a factor.

    Scans u left to right; a fresh variable may only take values that extend
    the current prefix to a factor, which is exact because the factor set is
    closed under taking prefixes.
    """
    theta: dict[str, Word] = {}
    n = len(u)
    factors = m.factors
    occ = Counter(u)

    def rec(i: int, node: Word):
        while i < n and u[i] in theta:
            node = node + theta[u[i]]
            if node not in factors:
                return
            i += 1
        if i == n:
            yield theta, node
            return
        x = u[i]
        # the image of x shows up occ[x] times, disjointly, inside one generator
        for t in m.extensions(node, occ[x]):
            theta[x] = t
            yield from rec(i + 1, node + t)
        del theta[x]

    yield from rec(0, EMPTY)


def _concat(w: Word, theta: Mapping[str, Word]) -> Word:
    out: list[str] = []
    for a in w:
        out.extend(theta[a])
    return tuple(out)


def find_violation(m: ReesMonoid, ident: Identity) -> SatisfactionWitness | None:
    """Exact check of ``m |= lhs = rhs``; returns a witness or None.

    Witnesses are the first violation met: first among assignments making
    the left side nonzero, then among those making the right side nonzero,
    each enumerated variable-by-first-occurrence with values in
    (length, lexicographic) order.
    """
    u, v = ident.lhs, ident.rhs
    cu, cv = set(u), set(v)
    if cu != cv:
        z = min(cu ^ cv)
        theta = {a: EMPTY for a in sorted(cu | cv)}
        theta[z] = ZERO
        lhs = ZERO if z in cu else EMPTY
        rhs = ZERO if z in cv else EMPTY
        return SatisfactionWitness(theta, lhs, rhs)
    if u == v:
        return None
    for theta, uval in _nonzero_assignments(m, u):
        vval = m.value(_concat(v, theta))
        if vval != uval:
            return SatisfactionWitness(dict(theta), uval, vval)
    for theta, vval in _nonzero_assignments(m, v):
        uval = m.value(_concat(u, theta))
        if uval is ZERO:
            return SatisfactionWitness(dict(theta), uval, vval)
    return None


def satisfies(m: ReesMonoid, ident: Identity) -> bool:
    return find_violation(m, ident) is None


@dataclass
class SatisfactionReport:
    verdicts: list  # (Identity, SatisfactionWitness | None)

    @property
    def all_hold(self) -> bool:
        return all(w is None for _, w in self.verdicts)

    @property
    def failures(self) -> list:
        return [(i, w) for i, w in self.verdicts if w is not None]


def satisfies_identity_set(m: ReesMonoid, idents: Iterable[Identity]) -> SatisfactionReport:
    return SatisfactionReport([(i, find_violation(m, i)) for i in idents])


# isoterms and stability


def _check_isoterm_regime(m: ReesMonoid, w: Word):
    if not is_limited(w, 2):
        raise UndecidedError(f"{format_word(w)} is not 2-limited; isoterm check undecided")
    if not m.has_square():
        raise UndecidedError("factor set has no squared letter; isoterm check undecided")


def allowed_pair_patterns(m: ReesMonoid, p: Word) -> list[Word]:
    """Rearrangements q of ``p`` with m |= p = q (``p`` first)."""
    out = [p]
    for q in sorted(set(permutations(p))):
        if q != p and satisfies(m, Identity(p, q)):
            out.append(q)
    return out


def _prefixes(words: Iterable[Word]) -> set[Word]:
    return {w[:i] for w in words for i in range(len(w) + 1)}


def _rearrangements(w: Word, allowed: dict[tuple[str, str], list[Word]]) -> Iterator[Word]:
    """Balanced rearrangements of ``w`` whose pair projections are all allowed.

    Candidates come out in lexicographic order of letter tokens.
    """
    letters = sorted(set(w))
    pairs = list(allowed)
    pref = {p: _prefixes(allowed[p]) for p in pairs}
    full = {p: set(allowed[p]) for p in pairs}
    by_letter: dict[str, list[tuple[str, str]]] = {a: [] for a in letters}
    for p in pairs:
        by_letter[p[0]].append(p)
        by_letter[p[1]].append(p)
    remaining = Counter(w)
    proj = {p: () for p in pairs}
    out: list[str] = []
    n = len(w)

    def rec():
        if len(out) == n:
            if all(proj[p] in full[p] for p in pairs):
                yield tuple(out)
            return
        for a in letters:
            if not remaining[a]:
                continue
            ok = True
            for p in by_letter[a]:
                if proj[p] + (a,) not in pref[p]:
                    ok = False
                    break
            if not ok:
                continue
            remaining[a] -= 1
            for p in by_letter[a]:
                proj[p] = proj[p] + (a,)
            out.append(a)
            yield from rec()
            out.pop()
            for p in by_letter[a]:
                proj[p] = proj[p][:-1]
            remaining[a] += 1

    yield from rec()


def _pair_tables(m: ReesMonoid, w: Word) -> dict[tuple[str, str], list[Word]]:
    letters = sorted(set(w))
    cache: dict[Word, list[Word]] = {}
    table = {}
    for i, a in enumerate(letters):
        for b in letters[i + 1:]:
            p = project(w, (a, b))
            # allowed patterns depend only on p up to renaming
            key = tuple("a" if c == a else "b" for c in p)
            if key not in cache:
                cache[key] = allowed_pair_patterns(m, key)
            back = {"a": a, "b": b}
            table[(a, b)] = [tuple(back[c] for c in q) for q in cache[key]]
    return table


def isoterm_witness(m: ReesMonoid, w: Word) -> Word | None:
    """A word w' != w with m |= w = w', or None when ``w`` is an isoterm for ``m``."""
    w = tuple(w)
    _check_isoterm_regime(m, w)
    allowed = _pair_tables(m, w)
    for cand in _rearrangements(w, allowed):
        if cand != w and satisfies(m, Identity(w, cand)):
            return cand
    return None


def equivalent_rearrangements(m: ReesMonoid, w: Word) -> list[Word]:
    """Every w' != w with m |= w = w' (necessarily a rearrangement of w)."""
    w = tuple(w)
    _check_isoterm_regime(m, w)
    allowed = _pair_tables(m, w)
    return [c for c in _rearrangements(w, allowed) if c != w and satisfies(m, Identity(w, c))]


def is_isoterm(m: ReesMonoid, w: Word) -> bool:
    return isoterm_witness(m, w) is None


def pair_instability_witness(m: ReesMonoid, w: Word, pair: tuple[str, str]) -> Word | None:
    """A word w' with m |= w = w' and w'[x,y] != w[x,y], or None if {x,y} is stable."""
    w = tuple(w)
    x, y = pair
    if x == y or x not in w or y not in w:
        raise ValueError(f"pair {pair} must be two distinct letters of {format_word(w)}")
    _check_isoterm_regime(m, w)
    allowed = _pair_tables(m, w)
    key = (x, y) if (x, y) in allowed else (y, x)
    here = project(w, key)
    allowed[key] = [q for q in allowed[key] if q != here]
    if not allowed[key]:
        return None
    for cand in _rearrangements(w, allowed):
        if satisfies(m, Identity(w, cand)):
            return cand
    return None


def pair_stable(m: ReesMonoid, w: Word, pair: tuple[str, str]) -> bool:
    return pair_instability_witness(m, w, pair) is None
