"""Synthetic character noise over source sentences, plus the sweep that
scores externally produced translations of each noised source.

Noise kinds: swap (exchange two adjacent characters), chardupe
(duplicate one character), chardrop (delete one character).  The noise
level is the fraction of eligible words (length >= 2) per sentence
that get perturbed: k = round-half-up(level * n_eligible).  Word and
position choices come from a generator keyed by (seed, segment index),
so any slice of a corpus reproduces byte-identical output.  Characters
are user-perceived units: a base character plus its combining marks
moves as one.
"""

from __future__ import annotations

import logging
import math
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import MissingHypotheses, PositionOutOfRange, SchemaError, WordTooShort
from .metrics import compute
from .tasks import ParallelCorpus, align_hypotheses

logger = logging.getLogger(__name__)

NOISE_KINDS = ("swap", "chardupe", "chardrop")
MIN_WORD_LEN = 2

_WS_SPLIT = re.compile(r"(\s+)")
_COMBINING = ("Mn", "Mc", "Me")
_ZWJ = "‍"


@dataclass(frozen=True)
class NoiseSpec:
    kind: str
    level: float  # the noise-level parameter, fraction in [0, 1]
    seed: int = 0

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise SchemaError(f"unknown noise kind {self.kind!r}")
        if not 0.0 <= self.level <= 1.0:
            raise SchemaError(f"noise level {self.level} outside [0, 1]")
        if not 0 <= self.seed < 2**64:
            raise SchemaError("seed must fit in 64 unsigned bits")

    def label(self) -> str:
        return f"{self.kind}.{self.level:g}"


def graphemes(word: str) -> list[str]:
    """Split into user-perceived characters: base + combining marks,
    with zero-width joiner sequences kept together."""
    clusters: list[str] = []
    for ch in word:
        if clusters and (
            unicodedata.category(ch) in _COMBINING
            or ch == _ZWJ
            or clusters[-1].endswith(_ZWJ)
        ):
            clusters[-1] += ch
        else:
            clusters.append(ch)
    return clusters


def count_to_perturb(level: float, n_eligible: int) -> int:
    """round(level * n_eligible), half up.  The tiny epsilon keeps
    decimal levels like 0.3 behaving as written despite binary floats."""
    return int(math.floor(level * n_eligible + 0.5 + 1e-9))


def perturb_word(word: str, kind: str, pos: int) -> str:
    """Apply one edit at character position ``pos`` (a user-perceived
    character index)."""
    if kind not in NOISE_KINDS:
        raise SchemaError(f"unknown noise kind {kind!r}")
    chars = graphemes(word)
    if len(chars) < MIN_WORD_LEN:
        raise WordTooShort(f"{word!r} has fewer than {MIN_WORD_LEN} characters")
    limit = len(chars) - 1 if kind == "swap" else len(chars)
    if not 0 <= pos < limit:
        raise PositionOutOfRange(
            f"position {pos} invalid for {kind} on {word!r}"
        )
    if kind == "swap":
        chars[pos], chars[pos + 1] = chars[pos + 1], chars[pos]
    elif kind == "chardupe":
        chars.insert(pos, chars[pos])
    else:  # chardrop
        del chars[pos]
    return "".join(chars)


@dataclass(frozen=True)
class AuditEntry:
    word_index: int
    original: str
    perturbed: str
    char_pos: int

    def to_dict(self) -> dict:
        return {
            "word_index": self.word_index,
            "original": self.original,
            "perturbed": self.perturbed,
            "char_pos": self.char_pos,
        }


def perturb_sentence(
    sentence: str, spec: NoiseSpec, segment_index: int
) -> tuple[str, list[AuditEntry]]:
    """Perturb k eligible words, chosen uniformly without replacement
    by a generator keyed by (seed, segment_index).  Whitespace runs and
    word order are untouched."""
    parts = _WS_SPLIT.split(sentence)
    words: list[tuple[int, str]] = [
        (i, part) for i, part in enumerate(parts) if part and not part.isspace()
    ]
    eligible = [
        idx for idx, (_, word) in enumerate(words)
        if len(graphemes(word)) >= MIN_WORD_LEN
    ]
    k = count_to_perturb(spec.level, len(eligible))
    if k == 0:
        return sentence, []

    rng = np.random.default_rng(
        np.random.SeedSequence([spec.seed, segment_index])
    )
    chosen = sorted(
        int(eligible[j])
        for j in rng.choice(len(eligible), size=k, replace=False)
    )
    audit: list[AuditEntry] = []
    for word_index in chosen:
        part_index, original = words[word_index]
        n_chars = len(graphemes(original))
        limit = n_chars - 1 if spec.kind == "swap" else n_chars
        pos = int(rng.integers(limit))
        perturbed = perturb_word(original, spec.kind, pos)
        parts[part_index] = perturbed
        audit.append(AuditEntry(word_index, original, perturbed, pos))
    return "".join(parts), audit


def apply_audit(sentence: str, audit: list[AuditEntry]) -> str:
    """Replay audit entries against the original sentence."""
    parts = _WS_SPLIT.split(sentence)
    word_part_indices = [
        i for i, part in enumerate(parts) if part and not part.isspace()
    ]
    for entry in audit:
        part_index = word_part_indices[entry.word_index]
        if parts[part_index] != entry.original:
            raise SchemaError(
                f"audit mismatch at word {entry.word_index}: "
                f"{parts[part_index]!r} != {entry.original!r}"
            )
        parts[part_index] = entry.perturbed
    return "".join(parts)


@dataclass(frozen=True)
class PerturbedCorpus:
    base: ParallelCorpus
    spec: NoiseSpec
    sources: tuple[str, ...]
    audit: tuple[tuple[AuditEntry, ...], ...]


def perturb_corpus(corpus: ParallelCorpus, spec: NoiseSpec) -> PerturbedCorpus:
    sources = []
    audits = []
    for index, seg in enumerate(corpus.segments):
        text, audit = perturb_sentence(seg.source, spec, index)
        sources.append(text)
        audits.append(tuple(audit))
    return PerturbedCorpus(
        base=corpus, spec=spec, sources=tuple(sources), audit=tuple(audits)
    )


def export_perturbed(
    perturbed: PerturbedCorpus, out_dir: Path | str
) -> tuple[Path, Path]:
    """Write `source.{kind}.{level}.txt` and the audit TSV alongside."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    label = perturbed.spec.label()
    source_path = out_dir / f"source.{label}.txt"
    source_path.write_text(
        "".join(line + "\n" for line in perturbed.sources), "utf-8"
    )
    audit_path = out_dir / f"audit.{label}.tsv"
    rows = ["segment_index\tword_index\toriginal\tperturbed\tchar_pos"]
    for seg_index, entries in enumerate(perturbed.audit):
        for e in entries:
            rows.append(
                f"{seg_index}\t{e.word_index}\t{e.original}\t{e.perturbed}\t{e.char_pos}"
            )
    audit_path.write_text("".join(r + "\n" for r in rows), "utf-8")
    return source_path, audit_path


def robustness_sweep(
    corpus: ParallelCorpus,
    hyp_files: dict[tuple[str, float], Path | str],
    metric_names: list[str],
    metric_options: dict[str, dict] | None = None,
    baseline_hyp: Path | str | None = None,
    model_id: str = "",
) -> dict:
    """Corpus scores per (kind, level) row from externally produced
    translations of each perturbed source, plus the clean baseline as
    level 0.  Rows whose hypothesis file is missing are skipped with a
    warning."""
    metric_options = metric_options or {}
    refs = corpus.references

    def score_file(path: Path | str) -> dict[str, float]:
        hyps = align_hypotheses(corpus, path, model_id).texts
        return {
            m: compute(m, hyps, refs, metric_options.get(m)).corpus.value
            for m in metric_names
        }

    rows = []
    warnings: list[str] = []
    baseline_scores = None
    if baseline_hyp is not None:
        if Path(baseline_hyp).is_file():
            baseline_scores = score_file(baseline_hyp)
        else:
            warnings.append(f"baseline hypothesis file missing: {baseline_hyp}")
            logger.warning(warnings[-1])

    for (kind, level), path in sorted(hyp_files.items()):
        if not Path(path).is_file():
            warnings.append(f"missing hypotheses for {kind} @ {level:g}: {path}")
            logger.warning(warnings[-1])
            continue
        rows.append(
            {"kind": kind, "level": level, "scores": score_file(path)}
        )

    series: dict[str, dict[str, dict[str, list[float]]]] = {}
    for kind in sorted({row["kind"] for row in rows}):
        series[kind] = {}
        kind_rows = sorted(
            (r for r in rows if r["kind"] == kind), key=lambda r: r["level"]
        )
        for metric in metric_names:
            levels = []
            values = []
            if baseline_scores is not None:
                levels.append(0.0)
                values.append(baseline_scores[metric])
            for row in kind_rows:
                levels.append(row["level"])
                values.append(row["scores"][metric])
            series[kind][metric] = {"level": levels, "score": values}

    return {
        "model_id": model_id,
        "task": corpus.task.canonical(),
        "metrics": list(metric_names),
        "baseline": baseline_scores,
        "rows": rows,
        "series": series,
        "warnings": warnings,
    }
