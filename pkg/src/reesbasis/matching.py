"""Substitutions and exhaustive pattern matching of words against words.

Every variable of a pattern may take the empty word unless listed as
required-nonempty.  Results are emitted in a fixed order: by start of the
occurrence in the target, then depth-first over the pattern positions with
shorter images tried first.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .words import Identity, Word, format_word, project

DEFAULT_BUDGET = 10**8

Substitution = dict  # variable -> Word


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int, what: str = "search"):
        super().__init__(f"{what} exceeded its budget of {budget} nodes")
        self.budget = budget


def apply(theta: Mapping[str, Word], w: Word) -> Word:
    """Homomorphic image of ``w``; unmapped variables are fixed."""
    out: list[str] = []
    for a in w:
        img = theta.get(a)
        if img is None:
            out.append(a)
        else:
            out.extend(img)
    return tuple(out)


def format_substitution(theta: Mapping[str, Word]) -> str:
    return " ".join(f"{k}={format_word(v)}" for k, v in theta.items())


@dataclass(frozen=True)
class MatchResult:
    substitution: dict
    left: Word = ()
    right: Word = ()

    def __str__(self):
        return (f"{format_substitution(self.substitution)}  "
                f"[left={format_word(self.left)} right={format_word(self.right)}]")


class _Counter:
    __slots__ = ("n", "budget")

    def __init__(self, budget: int):
        self.n = 0
        self.budget = budget

    def tick(self):
        self.n += 1
        if self.n > self.budget:
            raise BudgetExceeded(self.budget, "pattern match")


def _match_from(pattern: Word, target: Word, start: int, end: int | None,
                nonempty: frozenset, counter: _Counter) -> Iterator[tuple[dict, int]]:
    """Substitutions with pattern·theta == target[start:e]; e == end when given."""
    n = len(pattern)
    limit = len(target)
    minlen = {p: (1 if p in nonempty else 0) for p in pattern}
    rest_count = [Counter(pattern[i:]) for i in range(n + 1)]
    theta: dict[str, Word] = {}

    def lower_bound(i: int) -> int:
        return sum(len(theta[p]) if p in theta else minlen[p] for p in pattern[i:])

    def rec(i: int, j: int):
        counter.tick()
        if i == n:
            if end is None or j == end:
                yield dict(theta), j
            return
        stop = limit if end is None else end
        x = pattern[i]
        img = theta.get(x)
        if img is not None:
            k = len(img)
            if j + k <= stop and target[j:j + k] == img:
                yield from rec(i + 1, j + k)
            return
        others = lower_bound(i) - rest_count[i][x] * minlen[x]
        c = rest_count[i][x]
        room = stop - j - others
        if room < 0:
            return
        max_len = room // c
        if end is not None and c == 1 and all(p in theta or p == x for p in pattern[i + 1:]):
            # the image is pinned by the remaining fixed material
            if room < minlen[x]:
                return
            lo = hi = room
        else:
            lo, hi = minlen[x], max_len
        for k in range(lo, hi + 1):
            theta[x] = target[j:j + k]
            yield from rec(i + 1, j + k)
        theta.pop(x, None)

    yield from rec(0, start)


def match_exact(pattern: Word, target: Word, nonempty: Iterable[str] = (),
                budget: int = DEFAULT_BUDGET) -> list[MatchResult]:
    """All substitutions over con(pattern) carrying pattern exactly onto target."""
    pattern, target = tuple(pattern), tuple(target)
    counter = _Counter(budget)
    out = []
    for theta, _ in _match_from(pattern, target, 0, len(target), frozenset(nonempty), counter):
        assert apply(theta, pattern) == target
        out.append(MatchResult(theta))
    return out


def iter_match_factor(pattern: Word, target: Word, nonempty: Iterable[str] = (),
                      budget: int = DEFAULT_BUDGET) -> Iterator[MatchResult]:
    pattern, target = tuple(pattern), tuple(target)
    counter = _Counter(budget)
    nonempty = frozenset(nonempty)
    for s in range(len(target) + 1):
        for theta, e in _match_from(pattern, target, s, None, nonempty, counter):
            assert apply(theta, pattern) == target[s:e]
            yield MatchResult(theta, target[:s], target[e:])


def match_factor(pattern: Word, target: Word, nonempty: Iterable[str] = (),
                 budget: int = DEFAULT_BUDGET) -> list[MatchResult]:
    """All ways of writing target = left · (pattern·theta) · right."""
    return list(iter_match_factor(pattern, target, nonempty, budget))


def unstable_pairs_of(u: Word, v: Word) -> list[tuple[str, str]]:
    letters = sorted(set(u) | set(v))
    return [(a, b) for a, b in combinations(letters, 2) if project(u, (a, b)) != project(v, (a, b))]


def _required_nonempty(ident: Identity) -> frozenset:
    # With a balanced identity, deleting a letter common to every unstable
    # pair leaves every remaining pair stable, hence both sides equal.
    if not ident.is_balanced:
        return frozenset()
    pairs = unstable_pairs_of(ident.lhs, ident.rhs)
    if not pairs:
        return frozenset()
    common = set(pairs[0])
    for p in pairs[1:]:
        common &= set(p)
    return frozenset(common)


@dataclass(frozen=True)
class Application:
    match: MatchResult
    direction: str  # "forward" rewrites lhs-instances, "backward" rhs-instances
    rewritten: Word


def iter_nontrivial_applications(ident: Identity, target: Word,
                                 budget: int = DEFAULT_BUDGET) -> Iterator[Application]:
    target = tuple(target)
    req = _required_nonempty(ident)
    for src, dst, direction in ((ident.lhs, ident.rhs, "forward"), (ident.rhs, ident.lhs, "backward")):
        if not set(dst) <= set(src):
            raise ValueError(f"identity {ident} has a side with variables missing from the other")
        for m in iter_match_factor(src, target, req, budget):
            new = m.left + apply(m.substitution, dst) + m.right
            if new != target:
                yield Application(m, direction, new)


def applies_nontrivially(ident: Identity, target: Word,
                         budget: int = DEFAULT_BUDGET) -> list[Application]:
    return list(iter_nontrivial_applications(ident, target, budget))


@dataclass
class StuckVerdict:
    identity: Identity
    certified: bool
    blockers: list  # (tag of the applicable member, "lhs" | "rhs")

    def __str__(self):
        if self.certified:
            return f"{self.identity.tag}: certificate (stuck on both sides)"
        bl = ", ".join(f"{t} on {side}" for t, side in self.blockers)
        return f"{self.identity.tag}: no certificate ({bl})"


def stuck_irredundancy_report(ids: list[Identity], budget: int = DEFAULT_BUDGET) -> list[StuckVerdict]:
    """For each member, whether no other member applies nontrivially to either side.

    A stuck member cannot be the first step of any derivation from the rest,
    which certifies that it does not follow from them.
    """
    out = []
    for k, sigma in enumerate(ids):
        blockers = []
        for j, tau in enumerate(ids):
            if j == k:
                continue
            for side, word in (("lhs", sigma.lhs), ("rhs", sigma.rhs)):
                if next(iter_nontrivial_applications(tau, word, budget), None) is not None:
                    blockers.append((tau.tag or str(tau), side))
        out.append(StuckVerdict(sigma, not blockers, blockers))
    return out
