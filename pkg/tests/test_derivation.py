import random

import pytest
from hypothesis import given, settings, strategies as st

from reesbasis.derivation import (
    DerivationStep, DerivationTrace, MalformedStepError, apply_step, bounded_search,
    find_critical_pair, make_step, one_step_rewrites, pair_statuses, remove_cycles, unstable_pairs, verify_trace,
)
from reesbasis.engine import monoid_V
from reesbasis.rees import satisfies
from reesbasis.sigma import (
    make_w, make_w_prime, sigma_members, sigma_rule, w_degeneracy_substitution, w_identity,
)
from reesbasis.words import Identity, parse_word

P = parse_word


def xy_only(n):
    theta = {v: () for v in make_w(n)}
    theta.update({"x": P("x"), "y": P("y")})
    return theta


def test_apply_step_examples():
    assert apply_step(P("xyxy"), w_identity(2), xy_only(2), (), ()) == P("yxyx")
    assert apply_step(make_w(1), w_identity(2), w_degeneracy_substitution(2), (), ()) == make_w_prime(1)
    a3 = sigma_rule("aperiodic-3")
    assert apply_step(P("xxx"), a3, {"x": P("x")}, (), ()) == P("xxxx")
    with pytest.raises(MalformedStepError):
        apply_step(P("xyyx"), w_identity(2), xy_only(2), (), ())


def test_step_inverse():
    s = make_step(P("axyxyb"), w_identity(2), xy_only(2), P("a"), P("b"))
    back = apply_step(s.after, s.rule, s.substitution, s.left, s.right, "backward")
    assert back == s.before
    assert s.inverse().after == s.before


def test_verify_trace():
    s = make_step(P("xyxy"), w_identity(2), xy_only(2))
    t = DerivationTrace(P("xyxy"), P("yxyx"), [s])
    assert verify_trace(t)
    assert verify_trace(DerivationTrace(P("xy"), P("xy"), []))
    loop = DerivationTrace(P("xyxy"), P("xyxy"), [s, s.inverse()])
    v = verify_trace(loop)
    assert not v and v.bad_step == 1
    assert remove_cycles(loop).steps == []
    wrong = DerivationTrace(P("xyxy"), P("yxyx"), [DerivationStep(
        s.rule, s.direction, s.substitution, (), (), s.before, P("yyxx"))])
    assert verify_trace(wrong).bad_step == 0


def test_verify_rejects_foreign_rules():
    rule = Identity(P("xy"), P("yx"), "commutation")
    s = make_step(P("ab"), rule, {"x": P("a"), "y": P("b")})
    assert not verify_trace(DerivationTrace(P("ab"), P("ba"), [s]))
    assert verify_trace(DerivationTrace(P("ab"), P("ba"), [s]), system=[rule])


def test_verify_respects_n_bound():
    s = make_step(P("xyxy"), w_identity(7), xy_only(7))
    t = DerivationTrace(P("xyxy"), P("yxyx"), [s])
    assert not verify_trace(t)
    assert verify_trace(t, nmax=7)


def test_trace_json_round_trip():
    s = make_step(make_w(1), w_identity(2), w_degeneracy_substitution(2))
    t = DerivationTrace(make_w(1), make_w_prime(1), [s])
    again = DerivationTrace.from_json(t.to_json())
    assert again.to_json() == t.to_json() and verify_trace(again)


def test_pairs():
    assert [s.pair for s in unstable_pairs(P("xyxy"), P("yxyx"))] == [("x", "y")]
    assert find_critical_pair(P("xyxy"), P("yxyx")) == (("x", "y"), (1, 1))
    assert unstable_pairs(P("abc"), P("abc")) == []
    assert find_critical_pair(P("abc"), P("abc")) is None
    assert all(s.stable and not s.critical_occurrences for s in pair_statuses(P("abab"), P("abab")))


@settings(max_examples=200)
@given(st.permutations(list("aabbccd")), st.permutations(range(7)))
def test_balanced_pairs_have_critical_pairs(p, order):
    u = tuple(p)
    v = tuple(u[i] for i in order)
    if u != v:
        assert find_critical_pair(u, v) is not None
        assert {s.pair for s in unstable_pairs(u, v)} == {s.pair for s in unstable_pairs(v, u)}
    unstable = {s.pair for s in unstable_pairs(u, v)}
    for s in pair_statuses(u, v):
        assert s.stable == (s.pair not in unstable)
        if s.stable:
            assert not s.critical_occurrences


def test_bounded_search():
    found = bounded_search(make_w(1), make_w_prime(1), sigma_members(3), 1)
    assert found.status == "found" and len(found.trace) == 1 and verify_trace(found.trace)
    rest = [s for s in sigma_members(5) if s.tag != "w_2"]
    assert bounded_search(make_w(2), make_w_prime(2), rest, 3).status == "none"
    same = bounded_search(P("xy"), P("xy"), [], 0)
    assert same.status == "found" and len(same.trace) == 0


def test_random_walks_are_sound_in_M_V():
    m = monoid_V()
    rng = random.Random(3)
    system = sigma_members(4)
    for _ in range(20):
        w = cur = tuple(rng.choice("abc") for _ in range(rng.randint(4, 8)))
        for _ in range(3):
            opts = list(one_step_rewrites(cur, system))
            if not opts:
                break
            cur = rng.choice(opts).after
        assert satisfies(m, Identity(w, cur))
