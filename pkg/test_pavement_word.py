import json
import math

import pytest

from pavement_word import WordError, build_word, check_rotation_identity, fiber_words
from seifert_invariants import parse


def test_base_word():
    word = build_word(1, 0)
    assert word.letters == "Q"
    assert word.z == 1


def test_five_two():
    word = build_word(5, 2)
    assert word.letters == "QQQHQQH"
    assert (word.u, word.v, word.w, word.z) == (1, 2, 5, 7)
    assert word.describe() == "QQQHQQH u=1 v=2 w=5 z=7"


def test_two_three():
    word = build_word(2, 3)
    assert word.letters == "QHQHH"
    assert (word.u, word.v) == (2, 1)


def test_non_positive_beta_convention():
    word = build_word(1, -2)
    assert word.letters == "QHH"
    assert (word.u, word.v, word.w, word.z) == (1, 0, 3, 3)


def test_one_beta_is_q_then_h_power():
    word = build_word(1, 4)
    assert word.letters == "QHHHH"
    assert (word.u, word.v) == (1, 0)
    assert check_rotation_identity(word)


def test_letter_access_and_counts():
    word = build_word(5, 2)
    assert word.letter(1) == "Q"
    assert word.letter(7) == "H"
    assert word.count_from(5, "Q") == 2
    assert word.count_from(2, "H") == 2


@pytest.mark.parametrize("alpha, beta", [(2, 4), (2, -1), (0, 1), (-3, 1)])
def test_rejects_inadmissible(alpha, beta):
    with pytest.raises(WordError):
        build_word(alpha, beta)


def test_rotation_identity_requires_positive_beta():
    with pytest.raises(WordError):
        check_rotation_identity(build_word(1, 0))


def test_rotation_identity_exhaustive():
    for alpha in range(1, 50):
        for beta in range(1, 51 - alpha):
            if math.gcd(alpha, beta) != 1:
                continue
            word = build_word(alpha, beta)
            assert word.letters.count("Q") == alpha
            assert word.letters.count("H") == beta
            assert word.letters[0] == "Q" and word.letters[-1] == "H"
            assert alpha * word.u - beta * word.v == 1
            assert 0 < word.u <= beta and 0 <= word.v < alpha
            assert word.w == word.z - word.u - word.v + 1
            assert check_rotation_identity(word), (alpha, beta)


def test_build_is_deterministic():
    assert build_word(7, 3) == build_word(7, 3)


def test_fiber_words_include_normalized_fiber():
    words = fiber_words(parse("e=-1;type=o1;g=0;fibers=(2,1),(3,1)"))
    assert [w.letters for w in words] == ["QH", "QQH", "QQQH"]
    assert words[0].beta == -1


@pytest.mark.parametrize("alpha,beta", [(1, 1), (2, 1), (3, 2), (7, 3), (4, 9)])
def test_bezout_window_is_plain_int(alpha, beta):
    word = build_word(alpha, beta)
    assert type(word.u) is int and type(word.v) is int
    assert json.loads(json.dumps(word.to_dict()))["u"] == word.u
