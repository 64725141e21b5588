"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run standalone with ``python tests/test_acceptance.py``.
"""
import sys
import time
from itertools import permutations

import pytest

from reesbasis.derivation import DerivationTrace, verify_trace
from reesbasis.engine import derive
from reesbasis.matching import apply
from reesbasis.rees import ZERO, ReesMonoid, build_monoid, is_isoterm, satisfies
from reesbasis.sigma import (
    catalogue_U, catalogue_V_words, make_w, make_w_prime, self_reverse_labels,
    w_degeneracy_substitution,
)
from reesbasis.suites import (
    item_cube_order_two, item_cross_check, item_sandwich_isoterms, item_sandwich_sigma,
    item_v_no_trio, item_v_no_wn, item_v_satisfies, item_w_no_match, item_w_stuck,
    random_swap_instances, satisfied_2_limited,
)
from reesbasis.words import Identity, canonical_form, parse_word

P = parse_word
INSTANT = 1.0


def c1():
    m = build_monoid([P("xyx")])
    ok = len(m) == 7 and ZERO in m.elements and () in m.elements
    return ok, f"|M({{xyx}})| = {len(m)}"


def c2():
    m = ReesMonoid([P("xyyx"), P("xxyy")])
    base = P("xyxy")
    words = sorted(set(permutations(base)))
    held = {q for q in words if satisfies(m, Identity(base, q))}
    iso = ReesMonoid([P("xyyx")])
    isoterms = all(is_isoterm(iso, P(w)) for w in ("xy", "xxy", "xyx", "yxx", "xx"))
    ok = len(words) == 6 and held == {P("xyxy"), P("yxyx")} and isoterms
    return ok, f"{len(held)} of {len(words)} rearrangements hold; isoterms ok = {isoterms}"


def c3():
    m = ReesMonoid(catalogue_U())
    bad = [w for w in ("xyzxzy", "xyxzzy", "xyxzyz") if not is_isoterm(m, P(w))]
    return not bad, "all three are isoterms" if not bad else f"not isoterms: {bad}"


def c4():
    n = len({canonical_form(w) for w in catalogue_V_words()})
    labels = set(self_reverse_labels())
    ok = n == 37 and labels == {"3.3", "6.1", "7.3", "8.1", "9.1", "9.3"}
    return ok, f"|V| = {n}, self-reverse = {sorted(labels)}"


def c5():
    items = [item_v_no_wn(8), item_v_no_trio(), item_v_satisfies(6)]
    return all(i.status == "pass" for i in items), "; ".join(f"{i.name}: {i.status}" for i in items)


def c6():
    items = [item_w_no_match(7), item_w_stuck(7), item_cube_order_two()]
    return all(i.status == "pass" for i in items), "; ".join(f"{i.name}: {i.status}" for i in items)


def c7():
    w1 = apply(w_degeneracy_substitution(2), make_w(2))
    t = derive(make_w(1), make_w_prime(1))
    ok = w1 == make_w(1) and isinstance(t, DerivationTrace) and len(t) == 1 and bool(verify_trace(t))
    return ok, f"steps = {len(t) if isinstance(t, DerivationTrace) else 'refuted'}"


def _derives(u, v) -> bool:
    t = derive(u, v)
    return isinstance(t, DerivationTrace) and t.start == u and t.end == v and bool(verify_trace(t))


def c8():
    # with 4 letters each occurring at most twice, length 10 is never reached
    exhaustive = satisfied_2_limited(max_len=10, max_vars=4)
    bad = [(u, v) for u, v in exhaustive if not _derives(u, v)]
    rand = random_swap_instances(1000, seed=2024, max_len=16)
    bad_rand = [(u, v) for u, v in rand if not _derives(u, v)]
    ok = not bad and not bad_rand and len(rand) == 1000
    return ok, (f"exhaustive {len(exhaustive) - len(bad)}/{len(exhaustive)}, "
                f"random {len(rand) - len(bad_rand)}/{len(rand)}")


def c9():
    items = [item_cross_check("xyyx,xxyy"), item_cross_check("abba,aabb")]
    return all(i.status == "pass" for i in items), "; ".join(i.name for i in items)


def c10():
    items = [item_sandwich_sigma(8), item_sandwich_isoterms(5)]
    return all(i.status == "pass" for i in items), "; ".join(f"{i.name}: {i.status}" for i in items)


CRITERIA = [
    (1, "M({xyx}) has 7 elements", c1, INSTANT),
    (2, "xyxy is stable under M({xyyx,xxyy}) up to yxyx; short isoterms of M({xyyx})", c2, 1.0),
    (3, "three isoterms for M(U)", c3, 10.0),
    (4, "catalogue V integrity", c4, INSTANT),
    (5, "V words admit no nontrivial Sigma step; M(V) satisfies Sigma (n <= 6)", c5, 300.0),
    (6, "irredundancy at desk scale", c6, 600.0),
    (7, "w_1 is a degenerate instance of w_2", c7, INSTANT),
    (8, "derivations for satisfied 2-limited identities", c8, 1800.0),
    (9, "exact and naive satisfaction agree", c9, 300.0),
    (10, "sandwich monoid M({abba,aabb})", c10, 300.0),
]


def run_criterion(num, title, fn, limit):
    t = time.perf_counter()
    ok, detail = fn()
    secs = time.perf_counter() - t
    ok = ok and secs <= limit
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {title} ({secs:.1f}s, limit {limit:.0f}s) -- {detail}"
    return ok, line


@pytest.mark.parametrize("num,title,fn,limit", CRITERIA, ids=[f"criterion_{c[0]}" for c in CRITERIA])
def test_criterion(num, title, fn, limit, capsys):
    ok, line = run_criterion(num, title, fn, limit)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run_criterion(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
