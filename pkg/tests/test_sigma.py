from collections import Counter

import pytest

from reesbasis.derivation import unstable_pairs
from reesbasis.matching import apply
from reesbasis.sigma import (
    catalogue_U, catalogue_V, catalogue_V_words, lookup_catalogue, make_u, make_w, make_w_prime,
    self_reverse_labels, sigma_members, sigma_rule, w_degeneracy_substitution,
)
from reesbasis.words import canonical_form, is_factor, is_limited, parse_word, project, rename, reverse

P = parse_word


def test_make_u():
    assert make_u(1) == P("x1x0")
    assert make_u(3) == P("x1x0x2x1x3x2")
    assert all(len(make_u(n)) == 2 * n for n in range(1, 10))
    with pytest.raises(ValueError):
        make_u(0)


def test_make_w():
    assert make_w(2) == P("x0z1xyz2x1x0x2x1z1xyz2x2")
    assert make_w_prime(2) == P("x0z1yxz2x1x0x2x1z1yxz2x2")
    for n in range(1, 11):
        assert len(make_w(n)) == 2 * n + 10
        assert project(make_w(n), {"x", "y"}) == P("xyxy")


def test_sigma_members():
    s = sigma_members(4)
    assert len(s) == 6
    assert [i.tag for i in s[:3]] == ["aperiodic-1", "aperiodic-2", "aperiodic-3"]
    assert str(s[0]) == "xt1xt2x = xxxt1t2"
    assert all(i.is_balanced for i in s[3:])
    assert "w_1" not in {i.tag for i in sigma_members(10)}
    with pytest.raises(ValueError):
        sigma_members(1)
    assert sigma_rule("w_5").lhs == make_w(5)
    with pytest.raises(KeyError):
        sigma_rule("w_1")


def test_repeated_factors_of_w():
    core = P("z1xyz2")
    core_factors = {core[i:j] for i in range(4) for j in range(i + 1, 5)}
    for n in range(2, 11):
        w = make_w(n)
        counts = Counter(w[i:j] for i in range(len(w)) for j in range(i + 1, len(w) + 1))
        repeated = {f for f, c in counts.items() if c >= 2}
        assert all(len(f) == 1 or f in core_factors for f in repeated)


@pytest.mark.parametrize("n", range(2, 11))
def test_degeneracy(n):
    theta = w_degeneracy_substitution(n)
    assert apply(theta, make_w(n)) == make_w(1)
    assert apply(theta, make_w_prime(n)) == make_w_prime(1)


@pytest.mark.parametrize("n", range(2, 9))
def test_reversal_symmetry(n):
    ren = {"x": "y", "y": "x", "z1": "z2", "z2": "z1"}
    ren.update({f"x{i}": f"x{n - i}" for i in range(n + 1)})
    w = make_w(n)
    assert rename(reverse(w), ren) == w
    assert rename(reverse(make_w_prime(n)), ren) == make_w_prime(n)
    assert canonical_form(reverse(w)) == canonical_form(w)


@pytest.mark.parametrize("n", range(2, 11))
def test_only_xy_unstable(n):
    assert [s.pair for s in unstable_pairs(make_w(n), make_w_prime(n))] == [("x", "y")]


def test_catalogue_sizes():
    assert len(catalogue_U()) == 7
    assert len(catalogue_V()) == 37
    assert self_reverse_labels() == ["3.3", "6.1", "7.3", "8.1", "9.1", "9.3"]


def test_catalogue_words():
    words = catalogue_V_words()
    assert all(is_limited(w, 2) for w in words)
    assert len({canonical_form(w) for w in words}) == 37
    assert lookup_catalogue(P("dxycdabcaebxye")).label == "9.3"
    assert lookup_catalogue(P("xyxy")) is None


def test_u_words_inside_v():
    outside = {P("xxyy"), P("xyzyxz"), P("zxyzyx")}
    for u in catalogue_U():
        if u in outside:
            continue
        # up to renaming: some projection of a V word onto |con(u)| letters
        found = any(
            is_factor(canonical_form(u), canonical_form(v[i:j]))
            for v in catalogue_V_words() for i in range(len(v)) for j in range(i + len(u), len(v) + 1)
            if len(set(v[i:j])) == len(set(u)) and canonical_form(v[i:j]) == canonical_form(u)
        )
        assert found, u
