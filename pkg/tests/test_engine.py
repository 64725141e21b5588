import random

import pytest

from reesbasis.derivation import find_critical_pair, verify_trace
from reesbasis.engine import (
    ClaimViolation, NotUnstableError, build_phi, check_claims, decompose_adjacent, derive,
    eliminate_critical_pair, elimination, normalize_cubes, reduce1_block, reduce2_trim,
    reduce3_collapse,
)
from reesbasis.matching import apply
from reesbasis.rees import SatisfactionWitness
from reesbasis.sigma import catalogue_V_words, make_w, make_w_prime, w_identity
from reesbasis.suites import random_swap_instances, satisfied_2_limited
from reesbasis.words import canonical_form, parse_word, project

P = parse_word
XY = ("x", "y")


@pytest.mark.parametrize("w", ["zazz", "azzz", "zzaz"])
def test_normalize_cubes(w):
    out, trace = normalize_cubes(P(w))
    assert out == P("zzza")
    assert verify_trace(trace) and trace.end == out


def test_normalize_two_cubes():
    out, trace = normalize_cubes(P("abaabbc"))
    assert out[:6] in (P("aaabbb"), P("bbbaaa")) and out[6:] == P("c")
    assert verify_trace(trace)


def test_decompose():
    d = decompose_adjacent(P("axybaxyb"), None, XY)
    assert (d.orientation, d.u1, d.u2, d.u3) == ("forward", P("a"), P("ba"), P("b"))
    with pytest.raises(NotUnstableError):
        decompose_adjacent(P("axbyaxyb"), None, XY)
    with pytest.raises(NotUnstableError):
        decompose_adjacent(P("xytxy"), None, XY)  # t linear inside u2
    with pytest.raises(NotUnstableError):
        decompose_adjacent(P("xyxy"), P("xyxy"), XY)


def test_reductions():
    r1 = reduce1_block(P("ccaxybaxyb"), XY)
    assert r1.reduced == P("axybaxyb") and r1.left == P("cc") and r1.right == ()
    r2 = reduce2_trim(P("c"), P("dc"), P("d"))
    assert r2.original == P("cxydcxyd") and r2.reduced == P("xyxy")
    assert (r2.before_xy, r2.after_xy) == (P("c"), P("d"))
    r3 = reduce3_collapse(P("abxyabxy"), XY)
    assert r3.reduced == P("axyaxy") and r3.runs == {"a": P("ab")}
    assert reduce3_collapse(P("axyaxy"), XY).is_identity


@pytest.mark.parametrize("w,n,images", [
    ("xyxy", 2, {}),
    ("xyababxy", 3, {"x1": "a", "x2": "b"}),
    ("axybaxyb", 2, {"z1": "a", "z2": "b"}),
])
def test_build_phi(w, n, images):
    got_n, phi = build_phi(P(w), XY)
    assert got_n == n
    for k, v in phi.items():
        want = images.get(k, k if k in XY else "1")
        assert v == P(want)
    assert apply(phi, make_w(n)) == P(w)


def test_eliminate_requires_instability():
    with pytest.raises(NotUnstableError):
        eliminate_critical_pair(P("xyxy"), P("xyxy"))


def test_eliminate_w_n():
    for n in range(2, 6):
        out, trace = eliminate_critical_pair(make_w(n), make_w_prime(n))
        assert out == make_w_prime(n)
        assert trace.steps[0].rule.tag == f"w_{n}"


def test_derive_examples():
    t = derive(P("xxx"), P("xxxx"))
    assert len(t) == 1 and t.steps[0].rule.tag == "aperiodic-3"
    t = derive(P("xyxy"), P("yxyx"))
    assert [s.rule.tag for s in t.steps] == ["w_2"]
    t = derive(make_w(1), make_w_prime(1))
    assert verify_trace(t) and t.end == make_w_prime(1)
    assert len(derive(P("ab"), P("ab"))) == 0


def test_derive_refutes():
    w = derive(P("xyyx"), P("yxxy"))
    assert isinstance(w, SatisfactionWitness)
    assert w.lhs_value != w.rhs_value


def test_claim_diagnostics():
    with pytest.raises(ClaimViolation) as e:
        check_claims(P("abxybaxy"), XY)
    assert e.value.claim == "Claim 3"
    assert "stable" in str(e.value)
    with pytest.raises(ClaimViolation) as e:
        check_claims(P("axybxyab"), XY)
    assert e.value.claim == "Claim 1"
    ref = e.value.refuting
    assert canonical_form(ref.word) in {canonical_form(v) for v in catalogue_V_words()} or ref.reversed
    assert canonical_form(project(P("axybxyab"), set(ref.word))) == canonical_form(ref.word)


def test_claims_hold_on_satisfied_identities():
    checked = 0
    for u, v in satisfied_2_limited(max_len=8, max_vars=4):
        crit = find_critical_pair(u, v)
        if crit is None:
            continue
        e = elimination(u, v)
        check_claims(e.reductions[1].reduced, crit[0])
        checked += 1
    assert checked > 0


def test_derive_random_swaps():
    for u, v in random_swap_instances(40, seed=11):
        t = derive(u, v)
        assert verify_trace(t) and t.start == u and t.end == v


def test_derive_chains_are_repeat_free():
    rng = random.Random(5)
    for n in rng.sample(range(2, 9), 4):
        t = derive(make_w(n), make_w_prime(n))
        assert len(set(t.words())) == len(t.words())
        assert w_identity(n).tag in {s.rule.tag for s in t.steps}
