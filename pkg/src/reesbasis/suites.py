"""Desk-scale verification suites, one per lemma-level claim."""
from __future__ import annotations

import random
import time
from itertools import permutations
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

from .derivation import DerivationTrace, _critical_refs, verify_trace
from .engine import decompose_adjacent, derive, monoid_V
from .matching import apply, match_factor, iter_nontrivial_applications, stuck_irredundancy_report
from .oracle import (canonical_identity, cross_check, cyclic_group, rees_candidates,
                     semantic_irredundancy_witness)
from .rees import ReesMonoid, equivalent_rearrangements, is_isoterm, satisfies
from .sigma import (aperiodic_trio, catalogue_U, catalogue_V_words, make_w,
                    make_u, make_w_prime, sigma_members, w_degeneracy_substitution, w_identity)
from .words import Identity, Word, format_word, parse_word


@dataclass
class ItemResult:
    name: str
    status: str  # "pass", "fail", "skipped"
    detail: str = ""
    seconds: float = 0.0


@dataclass
class SuiteReport:
    suite: str
    items: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(i.status == "pass" for i in self.items)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "items": [asdict(i) for i in self.items]}


def _W(*texts) -> list[Word]:
    return [parse_word(t) for t in texts]


def limited_words(max_len: int, max_vars: int, limit: int = 2) -> list[Word]:
    """Nonempty words in canonical letter order, each letter at most ``limit`` times."""
    names = "abcdefghijklmnop"[:max_vars]
    out: list[Word] = []

    def rec(w: list, counts: list):
        if w:
            out.append(tuple(w))
        if len(w) == max_len:
            return
        for i in range(min(len(counts) + 1, max_vars)):
            new = i == len(counts)
            if not new and counts[i] >= limit:
                continue
            if new:
                counts.append(0)
            counts[i] += 1
            w.append(names[i])
            rec(w, counts)
            w.pop()
            counts[i] -= 1
            if new:
                counts.pop()

    rec([], [])
    return out


def satisfied_2_limited(max_len: int = 8, max_vars: int = 4) -> list[tuple[Word, Word]]:
    """Balanced 2-limited nontrivial identities of M(V), up to renaming and side swap."""
    m = monoid_V()
    ids = set()
    for u in limited_words(max_len, max_vars):
        for v in equivalent_rearrangements(m, u):
            ids.add(canonical_identity(u, v))
    return sorted(ids, key=lambda p: (len(p[0]), p))


def random_swap_instances(count: int, seed: int = 0, max_len: int = 16,
                          letters: str = "abcdef") -> list[tuple[Word, Word]]:
    """u = L·(w_n phi)·R, v = L·(w'_n phi)·R with random phi, L, R."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(2, 4)
        alpha = letters[:rng.randint(2, len(letters))]
        phi = {x: tuple(rng.choice(alpha) for _ in range(rng.choice((0, 0, 1, 1, 2))))
               for x in set(make_w(n))}
        left = tuple(rng.choice(alpha) for _ in range(rng.randint(0, 2)))
        right = tuple(rng.choice(alpha) for _ in range(rng.randint(0, 2)))
        u = left + apply(phi, make_w(n)) + right
        v = left + apply(phi, make_w_prime(n)) + right
        if u != v and len(u) <= max_len:
            out.append((u, v))
    return out


# lemma-easy


def item_easy_pairs() -> ItemResult:
    m = ReesMonoid(_W("xyyx", "xxyy"))
    p = parse_word("xyxy")
    ok = {q for q in set(permutations(p)) if satisfies(m, Identity(p, q))}
    expected = {parse_word("xyxy"), parse_word("yxyx")}
    return ItemResult("M({xyyx,xxyy}) |= xyxy = p exactly for p in {xyxy, yxyx}",
                      "pass" if ok == expected else "fail",
                      ", ".join(sorted(format_word(q) for q in ok)))


def item_easy_isoterms() -> ItemResult:
    m = ReesMonoid(_W("xyyx"))
    words = ("xy", "xxy", "xyx", "yxx", "xx")
    bad = [w for w in words if not is_isoterm(m, parse_word(w))]
    return ItemResult("xy, xxy, xyx, yxx, xx are isoterms for M({xyyx})",
                      "fail" if bad else "pass", ", ".join(bad))


# lemma-u-isoterms


def item_u_isoterm(text: str) -> ItemResult:
    m = ReesMonoid(catalogue_U())
    ok = is_isoterm(m, parse_word(text))
    return ItemResult(f"{text} is an isoterm for M(U)", "pass" if ok else "fail")


# lemma-adjacent


def item_adjacent(max_len: int = 8, max_vars: int = 4) -> ItemResult:
    """Every critical pair of a satisfied 2-limited identity sits as u1·xy·u2·xy·u3."""
    bad = []
    count = 0
    for u, v in satisfied_2_limited(max_len, max_vars):
        for a, b in ((u, v), (v, u)):
            for _, (x, _i), (y, _j) in _critical_refs(a, b):
                count += 1
                try:
                    decompose_adjacent(a, b, (x, y))
                except ValueError as exc:
                    bad.append(f"{format_word(a)} = {format_word(b)} ({x},{y}): {exc}")
    return ItemResult(f"adjacent form of {count} critical pairs", "fail" if bad else "pass",
                      "; ".join(bad[:3]))


# lemma-v-isoterms


def item_v_no_wn(nmax: int = 8) -> ItemResult:
    bad = []
    for v in catalogue_V_words():
        for n in range(2, nmax + 1):
            if next(iter_nontrivial_applications(w_identity(n), v), None) is not None:
                bad.append(f"w_{n} on {format_word(v)}")
    return ItemResult(f"no w_n (2..{nmax}) applies nontrivially to a word of V",
                      "fail" if bad else "pass", "; ".join(bad))


def item_v_no_trio() -> ItemResult:
    # each side of a trio member has a letter occurring 3 times, and
    # cannot be sent to 1 without making the step trivial
    bad = []
    for v in catalogue_V_words():
        for r in aperiodic_trio():
            if next(iter_nontrivial_applications(r, v), None) is not None:
                bad.append(f"{r.tag} on {format_word(v)}")
    return ItemResult("aperiodic trio has no nontrivial application to a word of V",
                      "fail" if bad else "pass", "; ".join(bad))


def item_v_satisfies(nmax: int = 6) -> ItemResult:
    m = monoid_V()
    bad = [s.tag for s in sigma_members(nmax) if not satisfies(m, s)]
    return ItemResult(f"M(V) satisfies Sigma for n <= {nmax}", "fail" if bad else "pass", ", ".join(bad))


# irredundancy


def item_w_no_match(nmax: int = 7) -> ItemResult:
    bad = [(n, m) for n in range(2, nmax + 1) for m in range(2, nmax + 1)
           if n != m and match_factor(make_w(n), make_w(m), ("x", "y"))]
    return ItemResult(f"w_n is not matched into w_m for 2 <= n != m <= {nmax}",
                      "fail" if bad else "pass", str(bad) if bad else "")


def item_w_stuck(nmax: int = 7) -> ItemResult:
    report = stuck_irredundancy_report(sigma_members(nmax))
    bad = [str(r) for r in report if r.identity.tag.startswith("w_") and not r.certified]
    return ItemResult(f"every w_n (n <= {nmax}) is stuck against the other members",
                      "fail" if bad else "pass", "; ".join(bad))


def item_trio_witness(tag: str, max_order: int = 4, nbound: int = 3) -> ItemResult:
    members = sigma_members(max(nbound, 2))
    sigma = next(s for s in members if s.tag == tag)
    rest = [s for s in members if s.tag != tag]
    found = semantic_irredundancy_witness(sigma, rest, max_order, nbound, rees_candidates(5))
    w = found.witness
    if w is None:
        return ItemResult(f"semantic witness for {tag}", "fail", f"none up to order {max_order}")
    if isinstance(w, ReesMonoid):
        desc = "M({" + ", ".join(format_word(g) for g in w.generators) + "})"
    else:
        desc = f"table of order {w.order}: " + " / ".join(" ".join(map(str, r)) for r in w.rows())
    return ItemResult(f"semantic witness for {tag} (w_n checked for n <= {nbound})", "pass", desc)


def item_cube_order_two() -> ItemResult:
    z2 = cyclic_group(2)
    sigma = next(s for s in aperiodic_trio() if s.tag == "aperiodic-3")
    found = semantic_irredundancy_witness(sigma, [s for s in sigma_members(3) if s.tag != sigma.tag], 2)
    ok = found.witness is not None and found.witness.order == 2 and \
        sorted(map(tuple, found.witness.rows())) == sorted(map(tuple, z2.rows()))
    return ItemResult("x^3 = x^4 has a semantic witness of order 2 (cyclic group)", "pass" if ok else "fail")


# theorem


def item_theorem_exhaustive(max_len: int = 8, max_vars: int = 4) -> ItemResult:
    ids = satisfied_2_limited(max_len, max_vars)
    bad = []
    for u, v in ids:
        r = derive(u, v)
        if not isinstance(r, DerivationTrace) or not verify_trace(r):
            bad.append(f"{format_word(u)} = {format_word(v)}")
    return ItemResult(f"derive succeeds on all {len(ids)} satisfied 2-limited identities "
                      f"(<= {max_vars} letters)", "fail" if bad else "pass", "; ".join(bad[:5]))


def item_theorem_random(count: int = 1000, seed: int = 0) -> ItemResult:
    bad = []
    for u, v in random_swap_instances(count, seed):
        r = derive(u, v)
        if not isinstance(r, DerivationTrace) or not verify_trace(r):
            bad.append(f"{format_word(u)} = {format_word(v)}")
    return ItemResult(f"derive succeeds on {count} random w_n-swap instances",
                      "fail" if bad else "pass", "; ".join(bad[:5]))


def item_degeneracy() -> ItemResult:
    w1 = apply(w_degeneracy_substitution(2), make_w(2))
    r = derive(make_w(1), make_w_prime(1))
    ok = (w1 == make_w(1) and isinstance(r, DerivationTrace) and len(r) == 1
          and bool(verify_trace(r)))
    return ItemResult("w_1 = w'_1 follows from w_2 in one verified step", "pass" if ok else "fail")


# cross-check


def item_cross_check(words: str) -> ItemResult:
    m = ReesMonoid(_W(*words.split(",")))
    cc = cross_check(m, 6, 3)
    return ItemResult(f"exact and naive satisfaction agree over M({{{words}}}) on {cc.identities} identities",
                      "pass" if cc.agree else "fail", str(cc.disagreements[:3]) if cc.disagreements else "")


# sandwich


def sandwich_word(n: int) -> Word:
    """x0 x x1 x0 x2 x1 ... xn x(n-1) x xn."""
    return ("x0", "x") + make_u(n) + ("x", f"x{n}")


def item_sandwich_sigma(nmax: int = 8) -> ItemResult:
    m = ReesMonoid(_W("abba", "aabb"))
    bad = [s.tag for s in sigma_members(nmax) if not satisfies(m, s)]
    return ItemResult(f"M({{abba,aabb}}) satisfies Sigma for n <= {nmax}", "fail" if bad else "pass",
                      ", ".join(bad))


def item_sandwich_isoterms(nmax: int = 5) -> ItemResult:
    m = ReesMonoid(_W("abba", "aabb"))
    bad = [n for n in range(2, nmax + 1) if not is_isoterm(m, sandwich_word(n))]
    return ItemResult(f"x0 x x1 x0 ... xn x(n-1) x xn is an isoterm for M({{abba,aabb}}), 2 <= n <= {nmax}",
                      "fail" if bad else "pass", str(bad) if bad else "")


SUITES: dict[str, list[tuple[Callable, tuple]]] = {
    "lemma-easy": [(item_easy_pairs, ()), (item_easy_isoterms, ())],
    "lemma-u-isoterms": [(item_u_isoterm, (w,)) for w in ("xyzxzy", "xyxzzy", "xyxzyz")],
    "lemma-adjacent": [(item_adjacent, ())],
    "lemma-v-isoterms": [(item_v_no_wn, ()), (item_v_no_trio, ()), (item_v_satisfies, ())],
    "irredundancy": [(item_w_no_match, ()), (item_w_stuck, ()), (item_cube_order_two, ()),
                     (item_trio_witness, ("aperiodic-1",)), (item_trio_witness, ("aperiodic-2",)),
                     (item_trio_witness, ("aperiodic-3",))],
    "theorem": [(item_degeneracy, ()), (item_theorem_exhaustive, ()), (item_theorem_random, (200,))],
    "sandwich": [(item_sandwich_sigma, ()), (item_sandwich_isoterms, ())],
    "cross-check": [(item_cross_check, ("xyyx,xxyy",)), (item_cross_check, ("abba,aabb",))],
}


def _timed(fn, args) -> ItemResult:
    t = time.perf_counter()
    try:
        r = fn(*args)
    except Exception as exc:  # a crashing item is a failing item
        r = ItemResult(fn.__name__, "fail", f"{type(exc).__name__}: {exc}")
    r.seconds = round(time.perf_counter() - t, 3)
    return r


def run_suite(name: str, jobs: int = 1) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    items = SUITES[name]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_timed, *zip(*items)))
    else:
        results = [_timed(fn, args) for fn, args in items]
    return SuiteReport(name, results)

