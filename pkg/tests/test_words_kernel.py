"""The compiled and pure word kernels must agree move for move."""

import random

import pytest

from mrw import _purewords, _words

try:
    from mrw import _fastwords
except ImportError:
    _fastwords = None

needs_fast = pytest.mark.skipif(_fastwords is None,
                                reason="compiled kernel not built")

RULES = [("ab", ""), ("ba", ""), ("aa", "b"), ("c", "ab")]


def random_word(rng, n):
    return "".join(rng.choice("abc") for _ in range(n))


def test_selected_kernel_is_one_of_the_two():
    assert _words.IMPL in ("pure", "fast")


def test_occurrences_overlapping():
    assert _purewords.occurrences("aaa", "aa") == [0, 1]
    assert _purewords.occurrences("abc", "") == [0, 1, 2, 3]


@needs_fast
def test_occurrences_agree():
    rng = random.Random(7)
    for _ in range(300):
        w = random_word(rng, rng.randrange(0, 12))
        s = random_word(rng, rng.randrange(0, 3))
        assert _fastwords.occurrences(w, s) == _purewords.occurrences(w, s)


@needs_fast
def test_successors_agree():
    rng = random.Random(11)
    for _ in range(300):
        w = random_word(rng, rng.randrange(0, 10))
        for proper in (True, False):
            assert _fastwords.successors(w, RULES, proper) == \
                _purewords.successors(w, RULES, proper)


@needs_fast
def test_normal_form_steps_agree():
    rng = random.Random(13)
    rules = [("ab", ""), ("ba", "")]
    for _ in range(300):
        w = random_word(rng, rng.randrange(0, 12)).replace("c", "a")
        assert _fastwords.normal_form_steps(w, rules, 100) == \
            _purewords.normal_form_steps(w, rules, 100)


def test_normal_form_budget_flag():
    # (a, aa) grows forever; the incomplete flag must come back
    word, steps, done = _purewords.normal_form_steps("a", [("a", "aa")], 5)
    assert not done and len(steps) == 5


def test_trivial_rules_skipped():
    out = _purewords.successors("aa", [("a", "a"), ("aa", "b")], True)
    assert out == [(1, 0, "b")]
