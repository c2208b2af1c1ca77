"""Gender-bias evaluation: gendered-term accuracy, per-variant ChrF
breakdowns, and contrastive-reference accuracy.

Term matching is token-exact after casefolding and edge-punctuation
stripping; multi-token forms must appear contiguously; a matched token
is consumed at most once.  When both the correct and the wrong form of
a pair appear, the pair conservatively counts as wrong.  Undefined
accuracies (zero denominators) are reported as absent values, never 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import AlignmentError, MissingVariant, SchemaError
from .matching import find_occurrences, match_tokens, term_tokens
from .metrics import ChrfOptions, chrf

VARIANTS = ("feminine", "masculine", "neutral")
GAP_PAIRS = (
    ("masculine", "feminine"),
    ("masculine", "neutral"),
    ("feminine", "neutral"),
)


# ---------------------------------------------------------------------------
# term-pair accuracy

@dataclass(frozen=True)
class TermPair:
    correct_form: str
    wrong_form: str

    def __post_init__(self):
        if not self.correct_form or not self.wrong_form:
            raise SchemaError("term pair forms must be non-empty")
        if self.correct_form == self.wrong_form:
            raise SchemaError("term pair forms must differ")


@dataclass(frozen=True)
class MustSheSegment:
    segment_id: str
    term_pairs: tuple[TermPair, ...]
    category: str = ""

    def __post_init__(self):
        if not self.term_pairs:
            raise SchemaError(
                f"segment {self.segment_id} has no term pairs"
            )


def parse_term_pairs(raw: str) -> tuple[TermPair, ...]:
    """Metadata column format: `correct|wrong;correct|wrong`."""
    pairs = []
    for chunk in raw.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split("|")
        if len(parts) != 2:
            raise SchemaError(f"bad term pair {chunk!r}")
        pairs.append(TermPair(parts[0].strip(), parts[1].strip()))
    return tuple(pairs)


def _find_unconsumed(stream, form: str, consumed: set[int]):
    for occurrence in find_occurrences(stream, term_tokens(form)):
        if not any(i in consumed for i in occurrence):
            return occurrence
    return None


def _score_sentence(hyp: str, segment: MustSheSegment) -> dict:
    stream = match_tokens(hyp)
    consumed: set[int] = set()
    correct = wrong = 0
    for pair in segment.term_pairs:
        hit_correct = _find_unconsumed(stream, pair.correct_form, consumed)
        hit_wrong = _find_unconsumed(stream, pair.wrong_form, consumed)
        if hit_correct is not None and hit_wrong is not None:
            wrong += 1
            consumed.update(hit_wrong)
        elif hit_correct is not None:
            correct += 1
            consumed.update(hit_correct)
        elif hit_wrong is not None:
            wrong += 1
            consumed.update(hit_wrong)
    n_terms = len(segment.term_pairs)
    found = correct + wrong
    return {
        "segment_id": segment.segment_id,
        "category": segment.category,
        "n_terms": n_terms,
        "n_correct": correct,
        "n_wrong": wrong,
        "accuracy": correct / found if found else None,
        "coverage": found / n_terms,
    }


def _accumulate(rows: list[dict]) -> dict:
    n_terms = sum(r["n_terms"] for r in rows)
    correct = sum(r["n_correct"] for r in rows)
    wrong = sum(r["n_wrong"] for r in rows)
    found = correct + wrong
    return {
        "n_segments": len(rows),
        "n_terms": n_terms,
        "n_correct": correct,
        "n_wrong": wrong,
        "term_accuracy": correct / found if found else None,
        "coverage": found / n_terms if n_terms else None,
    }


def mustshe_score(hyps: list[str], segments: list[MustSheSegment]) -> dict:
    """Term-level accuracy and coverage, per sentence and overall."""
    if len(hyps) != len(segments):
        raise AlignmentError(
            f"{len(hyps)} hypotheses for {len(segments)} segments"
        )
    per_sentence = [
        _score_sentence(hyp, seg) for hyp, seg in zip(hyps, segments)
    ]
    report = _accumulate(per_sentence)
    categories = sorted({r["category"] for r in per_sentence if r["category"]})
    report["per_category"] = {
        cat: _accumulate([r for r in per_sentence if r["category"] == cat])
        for cat in categories
    }
    report["per_sentence"] = per_sentence
    return report


# ---------------------------------------------------------------------------
# per-variant ChrF

@dataclass(frozen=True)
class MmhbGroup:
    pattern_id: str
    variants: dict[str, str] = field(default_factory=dict)  # variant -> id

    def __post_init__(self):
        if not self.variants:
            raise SchemaError(f"pattern {self.pattern_id} has no variants")
        for variant in self.variants:
            if variant not in VARIANTS:
                raise SchemaError(f"unknown gender variant {variant!r}")
        ids = list(self.variants.values())
        if len(set(ids)) != len(ids):
            raise SchemaError(f"pattern {self.pattern_id} reuses segment ids")


def mmhb_score(
    hyps: dict[str, str],
    refs: dict[str, list[str]],
    groups: list[MmhbGroup],
    chrf_options: ChrfOptions | None = None,
    axes: dict[str, str] | None = None,
) -> dict:
    """Pooled ChrF per gender variant plus pairwise gaps.

    Variants with no resolvable segments are skipped with a warning
    entry; if nothing resolves at all this raises MissingVariant.
    Passing ``axes`` (segment id -> demographic axis) additionally
    reports the axis-by-variant cross table.
    """
    subsets: dict[str, list[str]] = {v: [] for v in VARIANTS}
    skipped: list[str] = []
    for group in groups:
        for variant, seg_id in group.variants.items():
            if seg_id in hyps and seg_id in refs:
                subsets[variant].append(seg_id)
            else:
                skipped.append(seg_id)
    if all(not ids for ids in subsets.values()):
        raise MissingVariant("no variant segment resolved in the run")

    variants_report: dict[str, dict] = {}
    for variant, ids in subsets.items():
        if not ids:
            continue
        scored = chrf(
            [hyps[i] for i in ids], [refs[i] for i in ids], chrf_options
        )
        variants_report[variant] = {
            "chrf": scored.corpus.value,
            "n_segments": len(ids),
            "segment_ids": ids,
        }

    gaps = {}
    for a, b in GAP_PAIRS:
        if a in variants_report and b in variants_report:
            gaps[f"{a}_minus_{b}"] = (
                variants_report[a]["chrf"] - variants_report[b]["chrf"]
            )
    report = {
        "variants": variants_report,
        "gaps": gaps,
        "skipped_segment_ids": skipped,
    }
    if axes is not None:
        by_axis: dict[str, dict[str, dict]] = {}
        for variant, ids in subsets.items():
            for axis in sorted({axes.get(i, "unspecified") for i in ids}):
                axis_ids = [i for i in ids if axes.get(i, "unspecified") == axis]
                if not axis_ids:
                    continue
                scored = chrf(
                    [hyps[i] for i in axis_ids],
                    [refs[i] for i in axis_ids],
                    chrf_options,
                )
                by_axis.setdefault(axis, {})[variant] = {
                    "chrf": scored.corpus.value,
                    "n_segments": len(axis_ids),
                }
        report["by_axis"] = by_axis
    return report


# ---------------------------------------------------------------------------
# contrastive accuracy

@dataclass(frozen=True)
class GenEvalItem:
    segment_id: str
    mode: str  # "sentence" or "contextual"
    correct_ref: str
    contrastive_ref: str
    context: str = ""
    stereotype_group: str = ""

    def __post_init__(self):
        if self.mode not in ("sentence", "contextual"):
            raise SchemaError(f"unknown mode {self.mode!r}")
        if self.correct_ref == self.contrastive_ref:
            raise SchemaError(
                f"item {self.segment_id}: references must differ"
            )
        if self.mode == "contextual" and not self.context:
            raise SchemaError(
                f"contextual item {self.segment_id} has no context"
            )


def _token_set(text: str) -> set[str]:
    return {t for t in match_tokens(text) if t is not None}


def geneval_item_correct(hyp: str, item: GenEvalItem) -> bool:
    """Correct iff the hypothesis avoids every token unique to the
    contrastive reference."""
    unique_to_contrastive = _token_set(item.contrastive_ref) - _token_set(
        item.correct_ref
    )
    return not (_token_set(hyp) & unique_to_contrastive)


def _acc(rows: list[bool]) -> dict:
    return {
        "n_items": len(rows),
        "n_correct": sum(rows),
        "accuracy": sum(rows) / len(rows) if rows else None,
    }


def geneval_score(hyps: list[str], items: list[GenEvalItem]) -> dict:
    if len(hyps) != len(items):
        raise AlignmentError(
            f"{len(hyps)} hypotheses for {len(items)} items"
        )
    outcomes = [
        (item, geneval_item_correct(hyp, item))
        for hyp, item in zip(hyps, items)
    ]
    report = _acc([ok for _, ok in outcomes])
    report["by_mode"] = {
        mode: _acc([ok for item, ok in outcomes if item.mode == mode])
        for mode in ("sentence", "contextual")
        if any(item.mode == mode for item, _ in outcomes)
    }
    contextual = [
        (item, ok) for item, ok in outcomes if item.mode == "contextual"
    ]
    groups = sorted(
        {item.stereotype_group for item, _ in contextual if item.stereotype_group}
    )
    report["by_stereotype_group"] = {
        group: _acc([ok for item, ok in contextual
                     if item.stereotype_group == group])
        for group in groups
    }
    report["per_item"] = [
        {"segment_id": item.segment_id, "mode": item.mode, "correct": ok}
        for item, ok in outcomes
    ]
    return report


# ---------------------------------------------------------------------------
# corpus metadata -> evaluation inputs

def mustshe_segments_from_corpus(corpus) -> list[MustSheSegment]:
    segments = []
    for seg in corpus.segments:
        raw = seg.metadata.get("term_pairs", "")
        if not raw:
            continue
        segments.append(
            MustSheSegment(
                segment_id=seg.id,
                term_pairs=parse_term_pairs(raw),
                category=seg.metadata.get("category", ""),
            )
        )
    return segments


def mmhb_groups_from_corpus(corpus) -> list[MmhbGroup]:
    by_pattern: dict[str, dict[str, str]] = {}
    for seg in corpus.segments:
        pattern = seg.metadata.get("pattern_id")
        variant = seg.metadata.get("gender_variant")
        if pattern and variant:
            by_pattern.setdefault(pattern, {})[variant] = seg.id
    return [
        MmhbGroup(pattern_id=p, variants=v) for p, v in sorted(by_pattern.items())
    ]


def geneval_items_from_corpus(corpus) -> list[GenEvalItem]:
    items = []
    for seg in corpus.segments:
        contrastive = seg.metadata.get("contrastive_ref")
        if not contrastive:
            continue
        items.append(
            GenEvalItem(
                segment_id=seg.id,
                mode=seg.metadata.get("mode", "sentence"),
                correct_ref=seg.references[0] if seg.references else "",
                contrastive_ref=contrastive,
                context=seg.metadata.get("context", ""),
                stereotype_group=seg.metadata.get("stereotype_group", ""),
            )
        )
    return items
