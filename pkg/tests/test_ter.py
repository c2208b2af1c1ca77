import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtlens.errors import EmptyInput
from mtlens.metrics import TerOptions, ter
from mtlens.metrics.ter import (
    pool_statistics,
    score_from_statistics,
    total_edits,
    word_edit_distance,
)

from oracles import exhaustive_shift_edit_total, levenshtein_words

GOLDEN = json.loads(
    (Path(__file__).parent / "data" / "golden_metrics.json").read_text("utf-8")
)

# small vocabulary so shifts and repeats actually occur
vocab_words = st.sampled_from(["the", "cat", "dog", "sat", "ran", "home", "a", "on"])
short_sentences = st.lists(vocab_words, min_size=1, max_size=8)


def test_identity_is_zero():
    hyps = ["the cat sat on the mat", "x"]
    out = ter(hyps, [[h] for h in hyps])
    assert out.corpus.value == 0.0
    assert all(s.value == 0.0 for s in out.per_segment)


def test_single_substitution_in_four_words():
    out = ter(["the big cat sat"], [["the small cat sat"]])
    assert out.per_segment[0].value == pytest.approx(25.0)
    # matches plain word edit distance: exactly one edit, no shift helps
    assert out.statistics[0][0] == 1


def test_block_shift_counts_as_one_edit():
    # moving "the cat sat" to the front beats editing word by word
    out = ter(["on the mat the cat sat"], [["the cat sat on the mat"]])
    assert out.statistics[0][0] == 1
    assert out.per_segment[0].value == pytest.approx(100.0 / 6)
    no_shift = word_edit_distance(
        "on the mat the cat sat".split(), "the cat sat on the mat".split()
    )
    assert no_shift > 1


def test_golden_fixture():
    g = GOLDEN["ter"]
    hyps = [p["hyp"] for p in GOLDEN["pairs"]]
    refs = [[p["ref"]] for p in GOLDEN["pairs"]]
    out = ter(hyps, refs)
    assert out.corpus.value == pytest.approx(g["corpus"], abs=1e-9)
    for seg, row, expected in zip(out.per_segment, out.statistics, g["segments"]):
        assert seg.value == pytest.approx(expected["score"], abs=1e-9)
        assert row[0] == expected["edits"]
        assert row[0] <= expected["lev_no_shift"]


def test_empty_hypothesis():
    out = ter([""], [["three little words"]])
    assert out.per_segment[0].value == pytest.approx(100.0)


def test_corpus_pools_edits_and_lengths():
    hyps = ["the cat", "a dog ran off"]
    refs = [["the hat"], ["a dog ran off"]]
    out = ter(hyps, refs)
    assert out.corpus.value == pytest.approx(100.0 * 1 / 6)
    pooled = pool_statistics(out.statistics)
    assert score_from_statistics(pooled).value == out.corpus.value


def test_corpus_order_free():
    pairs = GOLDEN["pairs"]
    out = ter([p["hyp"] for p in pairs], [[p["ref"]] for p in pairs])
    shuffled = pairs[:]
    random.Random(11).shuffle(shuffled)
    out2 = ter([p["hyp"] for p in shuffled], [[p["ref"]] for p in shuffled])
    assert out.corpus.value == out2.corpus.value


def test_multi_reference_takes_min_edits():
    out = ter(["the cat sat"], [["totally different words", "the cat sat"]])
    assert out.statistics[0][0] == 0
    # denominator is the mean reference length
    assert out.statistics[0][1] == pytest.approx(3.0)


def test_option_flags():
    assert ter(["The Cat"], [["the cat"]]).per_segment[0].value > 0
    low = ter(["The Cat"], [["the cat"]], TerOptions(lowercase=True))
    assert low.per_segment[0].value == 0.0
    norm = ter(["cat."], [["cat ."]], TerOptions(normalized=True))
    assert norm.per_segment[0].value == 0.0
    nop = ter(["cat!"], [["cat"]], TerOptions(no_punct=True))
    assert nop.per_segment[0].value == 0.0


def test_empty_inputs_rejected():
    with pytest.raises(EmptyInput):
        ter([], [])


@settings(max_examples=100, deadline=None)
@given(short_sentences, short_sentences)
def test_edit_distance_matches_oracle(hyp, ref):
    assert word_edit_distance(hyp, ref) == levenshtein_words(tuple(hyp), tuple(ref))


@settings(max_examples=60, deadline=None)
@given(short_sentences, short_sentences)
def test_greedy_never_beats_exhaustive_and_never_exceeds_levenshtein(hyp, ref):
    greedy = total_edits(hyp, ref)
    lev = levenshtein_words(tuple(hyp), tuple(ref))
    optimal = exhaustive_shift_edit_total(hyp, ref)
    assert optimal <= greedy <= lev


@settings(max_examples=60, deadline=None)
@given(short_sentences, short_sentences)
def test_upper_bound(hyp, ref):
    out = ter([" ".join(hyp)], [[" ".join(ref)]])
    bound = 100.0 * max(len(hyp), len(ref)) / len(ref)
    assert out.per_segment[0].value <= bound + 1e-9
