import pytest

from reesbasis.rees import ReesMonoid, is_isoterm
from reesbasis.suites import (
    SUITES, item_trio_witness, limited_words, random_swap_instances, run_suite, sandwich_word,
)
from reesbasis.words import is_limited, parse_word


def test_run_suite_serial_and_parallel_agree():
    a = run_suite("lemma-u-isoterms")
    b = run_suite("lemma-u-isoterms", jobs=2)
    assert a.passed and b.passed
    assert [i.name for i in a.items] == [i.name for i in b.items]
    assert a.to_dict()["passed"] and len(a.to_dict()["items"]) == 3


def test_unknown_suite():
    with pytest.raises(KeyError):
        run_suite("no-such-suite")
    assert "theorem" in SUITES and "irredundancy" in SUITES


def test_limited_words():
    ws = limited_words(4, 2)
    assert all(is_limited(w, 2) and w for w in ws)
    assert parse_word("abab") in ws and parse_word("baba") not in ws


def test_random_instances_are_bounded():
    for u, v in random_swap_instances(50, seed=1):
        assert len(u) <= 16 and sorted(u) == sorted(v) and u != v


def test_sandwich_word():
    assert sandwich_word(2) == parse_word("x0xx1x0x2x1xx2")
    m = ReesMonoid([parse_word("abba"), parse_word("aabb")])
    assert not is_isoterm(m, sandwich_word(1))


def test_trio_witnesses():
    assert item_trio_witness("aperiodic-3", max_order=2).status == "pass"
    assert item_trio_witness("aperiodic-2", max_order=4).status == "pass"
