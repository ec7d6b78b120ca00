import math

import pytest

import oracles
from partition_collapse.lyndon import (
    LabelledWord,
    branching_dimension_identity,
    chain_from_word,
    compositions,
    count_lyndon_words,
    format_word,
    is_lyndon,
    is_weak_lyndon,
    labelled_weak_lyndon_words,
    lyndon_words,
    orthogonal_chain_count_formula,
    parse_word,
    primitive_root,
    reduce_word,
    reduction_sequence,
    standard_labelled_words,
    witt_count,
    word_from_colours,
)
from partition_collapse.poset_core import ArgumentError


def test_lyndon_predicates():
    assert is_lyndon((1, 1, 2))
    assert not is_lyndon((1, 2, 1, 2))
    assert is_weak_lyndon((1, 2, 1, 2))
    assert not is_weak_lyndon((2, 1))
    assert primitive_root((1, 2, 1, 2)) == ((1, 2), 2)


def test_word_text_round_trip():
    w = parse_word("1 12 2")
    assert w == ((1,), (1, 2), (2,))
    assert format_word(w) == "1 12 2"
    assert parse_word(format_word(((1, 10),))) == ((1, 10),)


@pytest.mark.parametrize("n", range(1, 9))
def test_enumeration_matches_brute_force(n):
    for comp in compositions(n):
        brute = [word_from_colours([c + 1 for c in w]) for w in oracles.lyndon_words(comp)]
        assert lyndon_words(comp) == brute


@pytest.mark.parametrize("comp", [(4, 4), (2, 2, 2), (3, 3), (1, 1, 1, 1), (6, 3), (5,), (1,)])
def test_witt_matches_independent_mobius_sum(comp):
    assert witt_count(comp) == oracles.witt_by_mobius(comp) == count_lyndon_words(comp)


def test_b44_has_eight_words():
    assert witt_count((4, 4)) == 8
    assert witt_count((2, 2)) == 1
    assert witt_count((1, 1)) == 1


def test_witt_rejects_negative():
    with pytest.raises(ArgumentError):
        witt_count((2, -1))


def test_reduction_glues_minimal_letters():
    w = word_from_colours([1, 1, 2, 1, 2, 2])
    assert reduce_word(w) == ((1,), (1, 2), (1, 2), (2,))
    seq = reduction_sequence(w)
    assert seq[-1] == ((1, 1, 2, 1, 2, 2),)


def test_reduction_of_a_power_stalls():
    w = word_from_colours([1, 2, 1, 2])
    assert reduction_sequence(w)[-1] == ((1, 2), (1, 2))


@pytest.mark.parametrize("comp", [(2, 1), (2, 2), (3, 1), (1, 1, 1), (2, 2, 1), (4, 2), (3, 3)])
def test_labelled_word_counts(comp):
    words = labelled_weak_lyndon_words(comp)
    assert len(words) == orthogonal_chain_count_formula(comp)
    assert len(set(words)) == len(words)


def test_standard_labelled_words_are_orbit_representatives():
    reps = standard_labelled_words((2, 2))
    # B(2,2) with d = 1 gives 1122, d = 2 gives (12)^2
    assert sorted(r.period for r in reps) == [1, 2]


def test_chain_from_power_word():
    lw = LabelledWord(word_from_colours([1, 2, 1, 2]), (0, 2, 1, 3), 2)
    chain = chain_from_word(lw)
    assert [str(x) for x in chain] == ["13|24"]


def test_chain_from_lyndon_word():
    lw = LabelledWord(word_from_colours([1, 1, 2, 2]), (0, 1, 2, 3), 1)
    assert [str(x) for x in chain_from_word(lw)] == ["1|23|4", "123|4"]


def test_count_formula_divides_by_d_factorial():
    # (3,3): B(3,3)·3!3!/1! + B(1,1)·3!3!/3! = 108 + 6
    assert orthogonal_chain_count_formula((3, 3)) == 114
    literal_over_d = sum(witt_count([c // d for c in (3, 3)]) * 36 // d for d in (1, 3))
    assert literal_over_d == 120
    assert len(labelled_weak_lyndon_words((3, 3))) == 114


@pytest.mark.parametrize("n", range(2, 10))
def test_branching_dimension_identity(n):
    for comp in compositions(n):
        lhs, rhs, ok = branching_dimension_identity(comp)
        assert ok and lhs == rhs == math.factorial(n - 1)


def test_compositions_enumeration():
    assert list(compositions(3)) == [(1, 1, 1), (1, 2), (2, 1), (3,)]
    assert len(list(compositions(6))) == 32
    assert list(compositions(4, max_parts=1)) == [(4,)]
