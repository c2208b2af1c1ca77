import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtlens.errors import AlignmentError, MissingVariant, SchemaError
from mtlens.gender import (
    GenEvalItem,
    MmhbGroup,
    MustSheSegment,
    TermPair,
    geneval_item_correct,
    geneval_score,
    mmhb_score,
    mustshe_score,
    parse_term_pairs,
)
from mtlens.metrics import chrf


class TestTermPairs:
    def test_parse_column(self):
        pairs = parse_term_pairs("amiga|amigo;ella|él")
        assert pairs == (TermPair("amiga", "amigo"), TermPair("ella", "él"))

    def test_invalid_pairs(self):
        with pytest.raises(SchemaError):
            parse_term_pairs("loner")
        with pytest.raises(SchemaError):
            TermPair("same", "same")
        with pytest.raises(SchemaError):
            TermPair("", "x")


class TestMustShe:
    def seg(self, seg_id, pairs, category=""):
        return MustSheSegment(
            segment_id=seg_id,
            term_pairs=parse_term_pairs(pairs),
            category=category,
        )

    def test_all_correct(self):
        segments = [self.seg("0", "amiga|amigo;doctora|doctor")]
        report = mustshe_score(["la amiga y la doctora"], segments)
        assert report["term_accuracy"] == 1.0
        assert report["coverage"] == 1.0

    def test_three_of_four_accuracy(self):
        # 4 terms across 2 sentences, hypothesis holds 3 correct + 1 wrong
        segments = [
            self.seg("0", "amiga|amigo;doctora|doctor", category="1F"),
            self.seg("1", "profesora|profesor;ella|él", category="1F"),
        ]
        hyps = ["la amiga y la doctora", "el profesor dijo que ella sí"]
        report = mustshe_score(hyps, segments)
        assert report["n_correct"] == 3
        assert report["n_wrong"] == 1
        assert report["term_accuracy"] == pytest.approx(0.75)
        assert report["coverage"] == 1.0

    def test_out_of_coverage_reported_absent(self):
        segments = [self.seg("0", "amiga|amigo")]
        report = mustshe_score(["nothing relevant here"], segments)
        assert report["coverage"] == 0.0
        assert report["term_accuracy"] is None
        assert report["per_sentence"][0]["accuracy"] is None

    def test_both_forms_counts_wrong(self):
        segments = [self.seg("0", "amiga|amigo")]
        report = mustshe_score(["la amiga y el amigo"], segments)
        assert report["n_wrong"] == 1
        assert report["n_correct"] == 0

    def test_token_consumed_once(self):
        # one "amiga" in the hypothesis cannot satisfy two pairs
        segments = [self.seg("0", "amiga|amigo;amiga|amigos")]
        report = mustshe_score(["solo una amiga"], segments)
        assert report["n_correct"] == 1
        assert report["coverage"] == pytest.approx(0.5)

    def test_multi_token_form_contiguous(self):
        segments = [
            MustSheSegment("0", (TermPair("la doctora", "el doctor"),))
        ]
        ok = mustshe_score(["vino la doctora ayer"], segments)
        assert ok["n_correct"] == 1
        split = mustshe_score(["la gran doctora"], segments)
        assert split["coverage"] == 0.0

    def test_matching_is_punctuation_and_case_tolerant(self):
        segments = [self.seg("0", "amiga|amigo")]
        report = mustshe_score(["¡AMIGA!"], segments)
        assert report["n_correct"] == 1

    def test_per_category_and_sentence_level(self):
        segments = [
            self.seg("0", "amiga|amigo", category="1F"),
            self.seg("1", "doctora|doctor", category="2M"),
        ]
        report = mustshe_score(["amiga", "doctor"], segments)
        assert report["per_category"]["1F"]["term_accuracy"] == 1.0
        assert report["per_category"]["2M"]["term_accuracy"] == 0.0
        assert [r["accuracy"] for r in report["per_sentence"]] == [1.0, 0.0]

    def test_alignment_error(self):
        with pytest.raises(AlignmentError):
            mustshe_score(["a"], [])


class TestMmhb:
    def build(self, n_patterns=3):
        hyps, refs, groups = {}, {}, []
        for p in range(n_patterns):
            variants = {}
            for variant in ("feminine", "masculine", "neutral"):
                seg_id = f"{p}-{variant[0]}"
                refs[seg_id] = [f"the {variant} reference {p}"]
                hyps[seg_id] = f"the {variant} reference {p}"
                variants[variant] = seg_id
            groups.append(MmhbGroup(pattern_id=str(p), variants=variants))
        return hyps, refs, groups

    def test_identity_all_variants_100_gaps_0(self):
        hyps, refs, groups = self.build()
        report = mmhb_score(hyps, refs, groups)
        for variant in ("feminine", "masculine", "neutral"):
            assert report["variants"][variant]["chrf"] == pytest.approx(100.0)
        for gap in report["gaps"].values():
            assert gap == pytest.approx(0.0)

    def test_missing_variant_row_absent(self):
        hyps, refs, groups = self.build()
        feminine_ids = [g.variants["feminine"] for g in groups]
        for seg_id in feminine_ids:
            del hyps[seg_id]
        report = mmhb_score(hyps, refs, groups)
        assert "feminine" not in report["variants"]
        assert "masculine_minus_feminine" not in report["gaps"]
        assert "masculine_minus_neutral" in report["gaps"]
        assert set(report["skipped_segment_ids"]) == set(feminine_ids)

    def test_degraded_feminine_gives_positive_gap(self):
        hyps, refs, groups = self.build()
        for g in groups:
            seg_id = g.variants["feminine"]
            hyps[seg_id] = "totally unrelated output"
        report = mmhb_score(hyps, refs, groups)
        assert report["gaps"]["masculine_minus_feminine"] > 0

    def test_agrees_with_standalone_chrf(self):
        hyps, refs, groups = self.build()
        for g in groups:
            hyps[g.variants["masculine"]] = "slightly off translation"
        report = mmhb_score(hyps, refs, groups)
        ids = [g.variants["masculine"] for g in groups]
        standalone = chrf([hyps[i] for i in ids], [refs[i] for i in ids])
        assert report["variants"]["masculine"]["chrf"] == pytest.approx(
            standalone.corpus.value, abs=1e-9
        )

    def test_all_missing_raises(self):
        _, refs, groups = self.build()
        with pytest.raises(MissingVariant):
            mmhb_score({}, refs, groups)

    def test_axis_cross_behind_flag(self):
        hyps, refs, groups = self.build(n_patterns=4)
        axes = {
            seg_id: ("age" if seg_id.startswith(("0", "1")) else "ability")
            for seg_id in hyps
        }
        base = mmhb_score(hyps, refs, groups)
        assert "by_axis" not in base
        crossed = mmhb_score(hyps, refs, groups, axes=axes)
        assert set(crossed["by_axis"]) == {"age", "ability"}
        assert crossed["by_axis"]["age"]["feminine"]["n_segments"] == 2
        assert crossed["by_axis"]["age"]["feminine"]["chrf"] == pytest.approx(100.0)

    def test_group_validation(self):
        with pytest.raises(SchemaError):
            MmhbGroup(pattern_id="p", variants={})
        with pytest.raises(SchemaError):
            MmhbGroup(pattern_id="p", variants={"masculine": "a", "feminine": "a"})
        with pytest.raises(SchemaError):
            MmhbGroup(pattern_id="p", variants={"other": "a"})


class TestGenEval:
    def items(self):
        return [
            GenEvalItem(
                segment_id="0",
                mode="sentence",
                correct_ref="la doctora llegó tarde",
                contrastive_ref="el doctor llegó tarde",
            ),
            GenEvalItem(
                segment_id="1",
                mode="contextual",
                context="My neighbour is a nurse.",
                correct_ref="él es enfermero",
                contrastive_ref="ella es enfermera",
                stereotype_group="feminine",
            ),
        ]

    def test_hypothesis_equal_to_correct_ref(self):
        item = self.items()[0]
        assert geneval_item_correct(item.correct_ref, item)

    def test_hypothesis_equal_to_contrastive_ref(self):
        item = self.items()[0]
        assert not geneval_item_correct(item.contrastive_ref, item)

    def test_third_synonym_counts_correct(self):
        item = GenEvalItem(
            segment_id="0",
            mode="sentence",
            correct_ref="la doctora llegó",
            contrastive_ref="el doctor llegó",
        )
        assert geneval_item_correct("la médica llegó", item)

    def test_report_by_mode_and_group(self):
        items = self.items()
        hyps = ["la doctora llegó tarde", "ella es enfermera"]
        report = geneval_score(hyps, items)
        assert report["accuracy"] == pytest.approx(0.5)
        assert report["by_mode"]["sentence"]["accuracy"] == 1.0
        assert report["by_mode"]["contextual"]["accuracy"] == 0.0
        assert report["by_stereotype_group"]["feminine"]["accuracy"] == 0.0

    def test_swap_symmetry_on_verbatim_fixture(self):
        # hypotheses equal one reference verbatim: swapping the
        # references maps accuracy a -> 1 - a
        items = [
            GenEvalItem(str(i), "sentence", f"ref alpha {i}", f"ref beta {i}")
            for i in range(5)
        ]
        hyps = [
            items[i].correct_ref if i < 3 else items[i].contrastive_ref
            for i in range(5)
        ]
        report = geneval_score(hyps, items)
        assert report["accuracy"] == pytest.approx(0.6)
        swapped = [
            GenEvalItem(i.segment_id, i.mode, i.contrastive_ref, i.correct_ref)
            for i in items
        ]
        swapped_report = geneval_score(hyps, swapped)
        assert report["accuracy"] + swapped_report["accuracy"] == pytest.approx(1.0)

    def test_contextual_requires_context(self):
        with pytest.raises(SchemaError):
            GenEvalItem("0", "contextual", "a", "b")

    def test_refs_must_differ(self):
        with pytest.raises(SchemaError):
            GenEvalItem("0", "sentence", "same", "same")

    @settings(max_examples=40, deadline=None)
    @given(st.permutations(list(range(5))))
    def test_order_independent(self, order):
        items = [
            GenEvalItem(str(i), "sentence", f"good {i}", f"bad {i}")
            for i in range(5)
        ]
        hyps = [f"good {i}" if i % 2 else f"bad {i}" for i in range(5)]
        base = geneval_score(hyps, items)["accuracy"]
        shuffled = geneval_score(
            [hyps[i] for i in order], [items[i] for i in order]
        )["accuracy"]
        assert base == shuffled
