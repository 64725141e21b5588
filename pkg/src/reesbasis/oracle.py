"""Brute-force ground truth over explicit multiplication tables."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations, product
from typing import Callable, Iterable, Iterator

import numpy as np

from .matching import BudgetExceeded
from .rees import ReesMonoid, format_element, satisfies
from .words import Identity, Word, canonical_renaming, format_word, rename

DEFAULT_BUDGET = 10**8
_CHUNK = 1 << 20


@dataclass(frozen=True, eq=False)
class FiniteMonoidTable:
    table: np.ndarray
    identity_element: int = 0
    labels: tuple = ()

    def __post_init__(self):
        t = np.asarray(self.table, dtype=np.int64)
        object.__setattr__(self, "table", t)
        k = t.shape[0]
        if t.shape != (k, k) or (k and (t.min() < 0 or t.max() >= k)):
            raise ValueError("table must be square with entries in range")
        e = self.identity_element
        if not (np.array_equal(t[e], np.arange(k)) and np.array_equal(t[:, e], np.arange(k))):
            raise ValueError(f"element {e} is not a two-sided identity")
        # (ab)c == a(bc) for all triples, a few rows of a at a time
        step = max(1, _CHUNK // max(1, k * k))
        for lo in range(0, k, step):
            rows = t[lo:lo + step]
            if not np.array_equal(t[rows, :], rows[:, t]):
                raise ValueError("table is not associative")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(k)))

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def __len__(self):
        return self.order

    def is_commutative(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def rows(self) -> list[list[int]]:
        return self.table.tolist()

    def __str__(self):
        return "\n".join(" ".join(str(v) for v in row) for row in self.rows())

    @classmethod
    def from_rees(cls, m: ReesMonoid) -> "FiniteMonoidTable":
        return _rees_table(m)


@lru_cache(maxsize=16)
def _rees_table(m: ReesMonoid) -> FiniteMonoidTable:
    elems = m.elements
    index = {e: i for i, e in enumerate(elems)}
    t = np.array([[index[m.product(a, b)] for b in elems] for a in elems], dtype=np.int64)
    return FiniteMonoidTable(t, index[()], tuple(format_element(e) for e in elems))


def cyclic_group(n: int) -> FiniteMonoidTable:
    i = np.arange(n)
    return FiniteMonoidTable((i[:, None] + i[None, :]) % n)


def as_table(m) -> FiniteMonoidTable:
    return m if isinstance(m, FiniteMonoidTable) else FiniteMonoidTable.from_rees(m)


def _variables(ident: Identity) -> list[str]:
    return sorted(set(ident.lhs) | set(ident.rhs))


def _eval(t: np.ndarray, e: int, w: Word, assign: dict, shape) -> np.ndarray:
    cur = np.full(shape, e, dtype=np.int64)
    for a in w:
        cur = t[cur, assign[a]]
    return cur


def find_violation_naive(m, ident: Identity, budget: int = DEFAULT_BUDGET):
    """First assignment (as element indices) separating the two sides, or None."""
    tab = as_table(m)
    t, e, k = tab.table, tab.identity_element, tab.order
    xs = _variables(ident)
    if k ** len(xs) > budget:
        raise BudgetExceeded(budget, "naive satisfaction")
    # vectorize over the trailing variables, loop over the leading ones
    inner = 0
    while inner < len(xs) and k ** (inner + 1) <= _CHUNK:
        inner += 1
    outer = len(xs) - inner
    grid = np.indices((k,) * inner).reshape(inner, -1) if inner else np.zeros((0, 1), dtype=np.int64)
    shape = grid.shape[1:]
    for head in product(range(k), repeat=outer):
        assign = {x: np.full(shape, head[i], dtype=np.int64) for i, x in enumerate(xs[:outer])}
        assign.update({x: grid[i] for i, x in enumerate(xs[outer:])})
        bad = np.nonzero(_eval(t, e, ident.lhs, assign, shape) != _eval(t, e, ident.rhs, assign, shape))[0]
        if bad.size:
            j = int(bad[0])
            return {x: int(assign[x][j]) for x in xs}
    return None


def satisfies_naive(m, ident: Identity, budget: int = DEFAULT_BUDGET) -> bool:
    return find_violation_naive(m, ident, budget) is None


# identity enumeration


def canonical_words(max_len: int, max_vars: int, names: str = "abcdefghijklmnopqrstuvw") -> list[Word]:
    """All words over names[:max_vars] of length <= max_len."""
    letters = names[:max_vars]
    out: list[Word] = []
    for n in range(max_len + 1):
        out += [tuple(p) for p in product(letters, repeat=n)]
    return out


def canonical_identity(u: Word, v: Word) -> tuple[Word, Word]:
    """Representative of u = v up to renaming of letters and swapping sides."""
    def form(a, b):
        r = canonical_renaming(a + b)
        return rename(a, r), rename(b, r)
    return min(form(u, v), form(v, u), key=lambda p: (len(p[0]) + len(p[1]), p))


def fingerprints(m, words: Iterable[Word], variables: list[str],
                 budget: int = DEFAULT_BUDGET) -> dict[Word, bytes]:
    """Value table of each word under every assignment of ``variables``."""
    tab = as_table(m)
    k = tab.order
    if k ** len(variables) > budget:
        raise BudgetExceeded(budget, "fingerprinting")
    if variables:
        grid = np.indices((k,) * len(variables)).reshape(len(variables), -1)
    else:
        grid = np.zeros((0, 1), dtype=np.int64)
    assign = {x: grid[i] for i, x in enumerate(variables)}
    shape = grid.shape[1:]
    return {w: _eval(tab.table, tab.identity_element, w, assign, shape).tobytes() for w in words}


def enumerate_identities(m, max_len: int, max_vars: int,
                         word_filter: Callable[[Word], bool] | None = None,
                         balanced_only: bool = False,
                         budget: int = DEFAULT_BUDGET) -> set[Identity]:
    """Nontrivial identities of m with both sides among the enumerated words,
    one representative per class under renaming and side swap."""
    words = canonical_words(max_len, max_vars)
    if word_filter is not None:
        words = [w for w in words if word_filter(w)]
    variables = sorted({a for w in words for a in w})
    fp = fingerprints(m, words, variables, budget)
    groups: dict[bytes, list[Word]] = {}
    for w in words:
        groups.setdefault(fp[w], []).append(w)
    out = set()
    for ws in groups.values():
        for i, u in enumerate(ws):
            for v in ws[i + 1:]:
                if balanced_only and not Identity(u, v).is_balanced:
                    continue
                cu, cv = canonical_identity(u, v)
                out.add(Identity(cu, cv))
    for ident in out:
        assert canonical_identity(ident.rhs, ident.lhs) == (ident.lhs, ident.rhs)
    return out


# table enumeration


def _canonical_table(t: list[list[int]]) -> tuple:
    k = len(t)
    best = None
    for p in permutations(range(1, k)):
        perm = (0,) + p
        inv = [0] * k
        for i, q in enumerate(perm):
            inv[q] = i
        key = tuple(inv[t[perm[i]][perm[j]]] for i in range(k) for j in range(k))
        if best is None or key < best:
            best = key
    return best


def iter_monoid_tables(order: int, budget: int = DEFAULT_BUDGET) -> Iterator[FiniteMonoidTable]:
    """Monoids of the given order up to isomorphism, identity element 0.

    Cells are filled row by row and a partial table is abandoned as soon as
    a fully defined associativity instance fails.
    """
    k = order
    if k < 1:
        return
    t = [[None] * k for _ in range(k)]
    for i in range(k):
        t[0][i] = t[i][0] = i
    cells = [(i, j) for i in range(1, k) for j in range(1, k)]
    seen = set()
    nodes = 0

    def consistent(i, j) -> bool:
        v = t[i][j]
        for c in range(k):
            # (ij)c = i(jc)
            l, jc = t[v][c], t[j][c]
            if l is not None and jc is not None:
                r = t[i][jc]
                if r is not None and r != l:
                    return False
            # (ci)j = c(ij)
            ci, r = t[c][i], t[c][v]
            if ci is not None and r is not None:
                l = t[ci][j]
                if l is not None and l != r:
                    return False
        # (ab)c with ab = i, c = j, against a(bc)
        for a in range(k):
            for b in range(k):
                if t[a][b] == i:
                    bj = t[b][j]
                    if bj is not None:
                        r = t[a][bj]
                        if r is not None and r != v:
                            return False
        # a(bc) with a = i, bc = j, against (ib)c
        for b in range(k):
            ib = t[i][b]
            if ib is None:
                continue
            for c in range(k):
                if t[b][c] == j:
                    l = t[ib][c]
                    if l is not None and l != v:
                        return False
        return True

    def rec(n):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(budget, "table enumeration")
        if n == len(cells):
            key = _canonical_table(t)
            if key not in seen:
                seen.add(key)
                yield key
            return
        i, j = cells[n]
        for v in range(k):
            t[i][j] = v
            if consistent(i, j):
                yield from rec(n + 1)
        t[i][j] = None

    for key in rec(0):
        yield FiniteMonoidTable(np.array(key, dtype=np.int64).reshape(k, k))


# semantic irredundancy


@dataclass
class WitnessSearch:
    witness: FiniteMonoidTable | ReesMonoid | None
    max_order: int
    nbound: int
    tables_checked: int
    skipped: list  # tags of rest members outside the checked range

    def __bool__(self):
        return self.witness is not None


def _w_index(ident: Identity) -> int | None:
    tag = ident.tag or ""
    if tag.startswith("w_") and tag[2:].isdigit():
        return int(tag[2:])
    return None


def table_satisfies(tab, ident: Identity, budget: int = DEFAULT_BUDGET) -> bool:
    if isinstance(tab, ReesMonoid):
        return satisfies(tab, ident)
    # balanced identities hold in every commutative monoid
    if ident.is_balanced and tab.is_commutative():
        return True
    return satisfies_naive(tab, ident, budget)


def rees_candidates(max_len: int, max_vars: int = 3) -> Iterator[ReesMonoid]:
    """M({w}) for canonical words w in order of length, then lexicographically."""
    for w in canonical_words(max_len, max_vars):
        if w and rename(w, canonical_renaming(w)) == w:
            yield ReesMonoid([w])


def semantic_irredundancy_witness(sigma: Identity, rest: Iterable[Identity], max_order: int = 4,
                                  nbound: int = 3, candidates: Iterable = (),
                                  budget: int = DEFAULT_BUDGET) -> WitnessSearch:
    """Least monoid table (by order, then canonical form) satisfying ``rest``
    but not ``sigma``; failing that, the first of ``candidates`` that does.

    Members w_n of rest with n > nbound are not checked.
    """
    rest = list(rest)
    if any(r.lhs == sigma.lhs and r.rhs == sigma.rhs for r in rest):
        raise ValueError(f"ill-posed query: {sigma} is itself in rest")
    skipped = [r.tag for r in rest if (_w_index(r) or 0) > nbound]
    active = [r for r in rest if (_w_index(r) or 0) <= nbound]
    active.sort(key=lambda r: len(_variables(r)))
    checked = 0

    def pool():
        for order in range(1, max_order + 1):
            yield from iter_monoid_tables(order, budget)
        yield from candidates

    for m in pool():
        checked += 1
        if table_satisfies(m, sigma, budget):
            continue
        if all(table_satisfies(m, r, budget) for r in active):
            return WitnessSearch(m, max_order, nbound, checked, skipped)
    return WitnessSearch(None, max_order, nbound, checked, skipped)


# cross-checks against the exact checker


@dataclass
class CrossCheck:
    identities: int
    disagreements: list

    @property
    def agree(self) -> bool:
        return not self.disagreements


def cross_check(m: ReesMonoid, max_len: int = 6, max_vars: int = 3,
                budget: int = DEFAULT_BUDGET) -> CrossCheck:
    """Compare the exact checker with brute force on every identity class."""
    words = canonical_words(max_len, max_vars)
    variables = sorted({a for w in words for a in w})
    fp = fingerprints(m, words, variables, budget)
    seen = set()
    bad = []
    for u in words:
        for v in words:
            r = canonical_renaming(u + v)
            if rename(u, r) != u or rename(v, r) != v:
                continue
            key = canonical_identity(u, v)
            if key in seen:
                continue
            seen.add(key)
            naive = fp[u] == fp[v]
            exact = satisfies(m, Identity(*key))
            if naive != exact:
                bad.append((format_word(key[0]), format_word(key[1]), exact, naive))
    return CrossCheck(len(seen), bad)
