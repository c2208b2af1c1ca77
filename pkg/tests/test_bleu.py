import json
import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtlens.errors import EmptyInput
from mtlens.metrics import BleuOptions, bleu
from mtlens.metrics.bleu import pool_statistics, score_from_statistics

GOLDEN = json.loads(
    (Path(__file__).parent / "data" / "golden_metrics.json").read_text("utf-8")
)

words = st.text(
    alphabet=st.characters(whitelist_categories=("Ll", "Lu")),
    min_size=1,
    max_size=8,
)
sentences = st.lists(words, min_size=1, max_size=12).map(" ".join)


def test_identity_is_100():
    hyps = ["the cat sat", "¿Dónde está?"]
    out = bleu(hyps, [[h] for h in hyps])
    assert out.corpus.value == pytest.approx(100.0)
    for seg in out.per_segment:
        assert seg.value == pytest.approx(100.0)


def test_zero_unigram_overlap_is_corpus_zero():
    out = bleu(["aaa bbb ccc"], [["xxx yyy zzz"]])
    assert out.corpus.value == 0.0


def test_golden_fixture():
    g = GOLDEN["bleu"]
    hyps = [p["hyp"] for p in GOLDEN["pairs"]]
    refs = [[p["ref"]] for p in GOLDEN["pairs"]]
    out = bleu(hyps, refs)
    assert out.corpus.value == pytest.approx(g["corpus"], abs=1e-9)
    assert out.corpus.details["counts"] == g["counts"]
    assert out.corpus.details["totals"] == g["totals"]
    assert out.corpus.details["hyp_len"] == g["sys_len"]
    assert out.corpus.details["ref_len"] == g["ref_len"]
    assert out.corpus.details["bp"] == pytest.approx(g["bp"], abs=1e-12)
    for seg, expected in zip(out.per_segment, g["segments"]):
        assert seg.value == pytest.approx(expected, abs=1e-9)


def test_corpus_recomputable_from_pooled_segment_statistics():
    hyps = [p["hyp"] for p in GOLDEN["pairs"]]
    refs = [[p["ref"]] for p in GOLDEN["pairs"]]
    out = bleu(hyps, refs)
    pooled = pool_statistics(out.statistics)
    assert score_from_statistics(pooled).value == out.corpus.value


def test_corpus_order_free():
    pairs = GOLDEN["pairs"]
    out = bleu([p["hyp"] for p in pairs], [[p["ref"]] for p in pairs])
    shuffled = pairs[:]
    random.Random(7).shuffle(shuffled)
    out2 = bleu([p["hyp"] for p in shuffled], [[p["ref"]] for p in shuffled])
    assert out.corpus.value == out2.corpus.value


def test_empty_inputs_rejected():
    with pytest.raises(EmptyInput):
        bleu([], [])
    with pytest.raises(EmptyInput):
        bleu(["a"], [])
    with pytest.raises(EmptyInput):
        bleu(["a"], [[]])


def test_all_empty_hypotheses_scores_zero_with_flag():
    out = bleu(["", ""], [["a b"], ["c d"]])
    assert out.corpus.value == 0.0
    assert out.corpus.details["all_empty"] is True


def test_lowercase_option():
    out = bleu(["THE CAT"], [["the cat"]], BleuOptions(lowercase=True))
    assert out.corpus.value == pytest.approx(100.0)


def test_smoothing_variants_on_partial_overlap():
    hyps, refs = ["the dog sat"], [["the cat sat on the mat"]]
    by_method = {
        m: bleu(hyps, refs, BleuOptions(smooth_method=m)).per_segment[0].value
        for m in ("exp", "floor", "add-k", "none")
    }
    assert by_method["none"] == 0.0  # no 3-gram match, unsmoothed
    assert by_method["exp"] > 0.0
    assert by_method["add-k"] > 0.0


@settings(max_examples=60, deadline=None)
@given(sentences)
def test_identity_property(sentence):
    out = bleu([sentence], [[sentence]])
    assert out.corpus.value == pytest.approx(100.0)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(sentences, sentences), min_size=1, max_size=6), sentences)
def test_adding_reference_never_lowers_match_counts(pairs, extra_ref):
    hyps = [h for h, _ in pairs]
    base = bleu(hyps, [[r] for _, r in pairs])
    widened = bleu(hyps, [[r, extra_ref] for _, r in pairs])
    for narrow, wide in zip(base.statistics, widened.statistics):
        for k in range(4):  # clipped match counts per order
            assert wide[k] >= narrow[k]
