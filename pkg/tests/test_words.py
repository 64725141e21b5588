import pytest
from hypothesis import given, settings, strategies as st

from reesbasis.words import (
    Identity, WordSyntaxError, canonical_form, format_word, interlocks, is_factor, linked,
    occurrence_factor, parse_identity, parse_word, position_of, project, rename, reverse,
    smallest_block, word_stats,
)

P = parse_word

letters = st.sampled_from(["a", "b", "c", "d", "x1"])
words = st.lists(letters, max_size=10).map(tuple)
two_limited = st.permutations(["a", "a", "b", "b", "c", "c", "d", "d", "e"]).flatmap(
    lambda p: st.integers(0, len(p)).map(lambda k: tuple(p[:k])))


def test_parse_tokens():
    assert P("z1xyz2x1") == ("z1", "x", "y", "z2", "x1")
    assert P("1") == ()
    assert P("xyyx") == ("x", "y", "y", "x")
    assert P("x12y") == ("x12", "y")


@pytest.mark.parametrize("bad", ["", "1x", "X", "x-y", "9", "x 1"])
def test_parse_errors(bad):
    with pytest.raises(WordSyntaxError):
        P(bad)


def test_parse_error_position():
    with pytest.raises(WordSyntaxError) as e:
        P("xy3Z")
    assert e.value.pos == 3


def test_identity_syntax():
    assert parse_identity("xyxy = yxyx") == parse_identity("xyxy=yxyx")
    i = parse_identity("x = 1")
    assert i.rhs == () and str(i) == "x = 1"
    with pytest.raises(WordSyntaxError):
        parse_identity("x = y = z")


@given(words)
def test_format_round_trip(w):
    assert P(format_word(w)) == w


def test_word_stats():
    s = word_stats(P("xyyx"))
    assert s.content == {"x", "y"} and s.occ == {"x": 2, "y": 2}
    assert s.is_limited(2) and not s.linear
    assert word_stats(P("atxyaxy")).linear == {"t"}
    e = word_stats(())
    assert e.content == frozenset() and e.is_limited(0)


def test_project():
    w = P("xyxzzy")
    assert project(w, {"x", "z"}) == P("xxzz")
    assert project(w, {"x"}) == P("xx")
    assert project(w, set()) == ()


@given(words, st.sets(letters), st.sets(letters))
def test_project_composes(w, X, Y):
    assert project(project(w, X), Y) == project(w, X & Y)


def test_is_factor():
    w = P("xyxzzy")
    assert is_factor(P("xz"), w)
    assert is_factor(P("zy"), w)
    assert not is_factor(P("xyy"), w)
    assert is_factor((), w)


def test_occurrence_factor():
    w = P("xyxzzy")
    assert occurrence_factor(w, [("x", 2), ("z", 1)])
    assert not occurrence_factor(w, [("z", 1), ("y", 2)])
    assert occurrence_factor(P("xx"), [("x", 1), ("x", 2)])
    with pytest.raises(IndexError):
        occurrence_factor(w, [("x", 3)])
    assert position_of(w, "y", 2) == 5


@given(st.permutations(["a", "b", "c", "d", "e"]))
def test_occurrence_factor_agrees_with_is_factor(w):
    w = tuple(w)
    refs = [(a, 1) for a in w[1:3]]
    assert occurrence_factor(w, refs) == is_factor(w[1:3], w)


def test_interlocks():
    assert interlocks(P("xyxy"), "x", "y")
    assert not interlocks(P("xyyx"), "x", "y")
    assert interlocks(P("abxyaxyb"), "a", "b")


def test_linked():
    # y linked to x, but not conversely
    assert linked(P("xyyx"), "x", "y")
    assert not linked(P("xyyx"), "y", "x")
    assert linked(P("xyxy"), "x", "y") and linked(P("xyxy"), "y", "x")
    assert linked(P("abacbc"), "a", "c")


def test_smallest_block():
    assert smallest_block(P("xxyy"), (0, 1)) == (0, 2)
    assert smallest_block(P("xyyx"), (1, 2)) == (1, 3)
    assert smallest_block(P("xyyx"), (0, 1)) == (0, 4)
    w = P("ccaxybaxyb")
    lo, hi = smallest_block(w, (3, 4))
    assert w[lo:hi] == P("axybaxyb")


@settings(max_examples=300)
@given(two_limited, st.data())
def test_block_is_linked_letters(w, data):
    if not w:
        return
    i = data.draw(st.integers(0, len(w) - 1))
    lo, hi = smallest_block(w, (i, i + 1))
    a = w[i]
    expected = {a} | {b for b in set(w) if b != a and linked(w, a, b)}
    assert set(w[lo:hi]) == expected


def test_reverse_and_canonical():
    assert canonical_form(P("zxyzyx")) == P("abcacb")
    w = P("axybcabxyc")
    assert canonical_form(reverse(w)) == canonical_form(w) == P("abcdeadbce")
    assert reverse(()) == ()


def test_canonical_past_26_letters():
    w = tuple(f"v{i}" for i in range(28))
    c = canonical_form(w)
    assert c[25] == "z" and c[26:] == ("a1", "b1")


@given(words)
def test_canonical_idempotent(w):
    assert canonical_form(canonical_form(w)) == canonical_form(w)


@given(words, st.permutations(["a", "b", "c", "d", "x1"]))
def test_canonical_renaming_invariant(w, perm):
    mapping = dict(zip(["a", "b", "c", "d", "x1"], perm))
    assert canonical_form(rename(w, mapping)) == canonical_form(w)


@given(two_limited, st.permutations(range(9)))
def test_pair_projections_determine_2_limited_words(w, order):
    other = tuple(w[i] for i in order if i < len(w))
    same = all(project(w, {a, b}) == project(other, {a, b}) for a in set(w) for b in set(w) if a < b)
    if same and sorted(w) == sorted(other) and len(set(w)) > 1:
        assert w == other


def test_balanced():
    assert Identity(P("xyx"), P("xxy")).is_balanced
    assert not Identity(P("xx"), P("x")).is_balanced
