"""Task naming, dataset loading, and hypothesis alignment.

A task is `{src}_{tgt}_{dataset}` with an optional `_{split}` suffix,
lowercase in canonical form.  Dataset directories live under a root as
`<root>/<canonical task name>/` holding `source.txt`, `ref.0.txt` ..
`ref.K.txt`, and an optional tab-separated `meta.tsv` with a header
row, all UTF-8 with LF line endings and one segment per line.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from .errors import AlignmentError, EncodingError, MalformedTaskName, MissingDataset

# Dataset families that take a split suffix in the task name.
_SPLIT_DATASETS = {"flores", "mmhb", "geneval"}
# Single-token dataset names without splits.
_PLAIN_DATASETS = {"ntrex", "tatoeba", "nteu", "perturbations"}
# Script subtags that glue onto the preceding language token
# (FLORES-style codes such as eng_Latn).
_SCRIPT_SUBTAGS = {
    "latn", "cyrl", "arab", "deva", "hans", "hant", "ethi", "beng",
    "taml", "telu", "grek", "hebr", "jpan", "kore", "thai", "mymr",
    "khmr", "laoo", "sinh", "guru", "gujr", "knda", "mlym", "orya",
    "tibt", "geor", "armn", "olck", "tfng", "hang",
}


@dataclass(frozen=True)
class TaskId:
    """Language pair plus dataset (and optional split).

    Fields keep the caller's spelling; comparisons and the canonical
    string form are case-insensitive/lowercase.
    """

    src_lang: str
    tgt_lang: str
    dataset: str
    split: str | None = None

    def canonical(self) -> str:
        parts = [self.src_lang, self.tgt_lang, self.dataset]
        if self.split:
            parts.append(self.split)
        return "_".join(parts).lower()

    @property
    def registered(self) -> bool:
        ds = self.dataset.lower()
        return (
            ds in _SPLIT_DATASETS
            or ds in _PLAIN_DATASETS
            or ds == "must_she"
            or ds.endswith("_hb")
        )

    def _key(self):
        return (
            self.src_lang.lower(),
            self.tgt_lang.lower(),
            self.dataset.lower(),
            self.split.lower() if self.split else None,
        )

    def __eq__(self, other):
        if not isinstance(other, TaskId):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


def _merge_script_subtags(parts: list[str]) -> list[str]:
    merged: list[str] = []
    i = 0
    while i < len(parts):
        if (
            i + 1 < len(parts)
            and parts[i + 1].lower() in _SCRIPT_SUBTAGS
            and parts[i].isalpha()
            and len(parts[i]) == 3
        ):
            merged.append(parts[i] + "_" + parts[i + 1])
            i += 2
        else:
            merged.append(parts[i])
            i += 1
    return merged


def parse_task_name(name: str) -> TaskId:
    """Parse a task name into its fields.

    Unknown dataset identifiers are accepted (the whole remainder
    becomes the dataset id, flagged unregistered via
    ``TaskId.registered``).
    """
    normalized = name.strip().strip("_")
    if not normalized:
        raise MalformedTaskName("empty task name")
    parts = [p for p in normalized.split("_") if p]
    parts = _merge_script_subtags(parts)
    if len(parts) < 3:
        raise MalformedTaskName(
            f"task name {name!r} has fewer than 3 fields (src, tgt, dataset)"
        )
    src, tgt, rest = parts[0], parts[1], parts[2:]
    if src.lower() == tgt.lower():
        raise MalformedTaskName(
            f"source and target languages must differ in {name!r}"
        )
    lowered = [p.lower() for p in rest]
    if len(rest) >= 2 and lowered[-1] == "hb":
        dataset, split = "_".join(rest), None
    elif lowered[0] == "must" and len(rest) >= 2 and lowered[1] == "she":
        dataset = "_".join(rest[:2])
        split = "_".join(rest[2:]) or None
    elif lowered[0] in _SPLIT_DATASETS or lowered[0] in _PLAIN_DATASETS:
        dataset = rest[0]
        split = "_".join(rest[1:]) or None
    else:
        dataset, split = "_".join(rest), None
    return TaskId(src_lang=src, tgt_lang=tgt, dataset=dataset, split=split)


def format_task_name(task: TaskId) -> str:
    return task.canonical()


@dataclass(frozen=True)
class Segment:
    id: str
    source: str
    references: tuple[str, ...]
    metadata: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class ParallelCorpus:
    task: TaskId
    segments: tuple[Segment, ...]
    reference_free: bool = False

    def __post_init__(self):
        ids = [s.id for s in self.segments]
        if len(set(ids)) != len(ids):
            raise AlignmentError("duplicate segment ids in corpus")
        if not self.reference_free:
            for seg in self.segments:
                if not seg.references:
                    raise AlignmentError(
                        f"segment {seg.id} has no reference and the task "
                        "is not reference-free"
                    )

    @property
    def ids(self) -> list[str]:
        return [s.id for s in self.segments]

    @property
    def sources(self) -> list[str]:
        return [s.source for s in self.segments]

    @property
    def references(self) -> list[list[str]]:
        return [list(s.references) for s in self.segments]


@dataclass(frozen=True)
class HypothesisSet:
    task: TaskId
    model_id: str
    hypotheses: tuple[tuple[str, str], ...]  # (segment id, text)

    @property
    def texts(self) -> list[str]:
        return [t for _, t in self.hypotheses]


def read_lines(path: Path) -> list[str]:
    """UTF-8 lines split on LF; one trailing empty line is ignored."""
    try:
        text = path.read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{path} is not valid UTF-8: {exc}") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _read_meta(path: Path, n_segments: int) -> list[dict[str, str]]:
    lines = read_lines(path)
    if not lines:
        raise AlignmentError(f"{path} is empty")
    header = lines[0].split("\t")
    rows = lines[1:]
    if len(rows) != n_segments:
        raise AlignmentError(
            f"{path} has {len(rows)} rows for {n_segments} segments"
        )
    out = []
    for row in rows:
        values = row.split("\t")
        if len(values) != len(header):
            raise AlignmentError(
                f"{path}: row has {len(values)} fields, header has {len(header)}"
            )
        out.append(dict(zip(header, values)))
    return out


def task_directory(task: TaskId, root: Path | str) -> Path:
    return Path(root) / task.canonical()


def load_corpus(task: TaskId, root: Path | str) -> ParallelCorpus:
    """Load the aligned corpus for ``task`` from the dataset layout."""
    directory = task_directory(task, root)
    source_path = directory / "source.txt"
    if not source_path.is_file():
        raise MissingDataset(f"no dataset at {directory} (missing source.txt)")
    sources = read_lines(source_path)

    ref_paths = sorted(
        directory.glob("ref.*.txt"), key=lambda p: int(p.name.split(".")[1])
    )
    ref_columns = []
    for ref_path in ref_paths:
        refs = read_lines(ref_path)
        if len(refs) != len(sources):
            raise AlignmentError(
                f"{ref_path.name} has {len(refs)} lines, "
                f"source.txt has {len(sources)}"
            )
        ref_columns.append(refs)

    meta_path = directory / "meta.tsv"
    meta_rows = (
        _read_meta(meta_path, len(sources)) if meta_path.is_file() else None
    )

    segments = []
    for i, source in enumerate(sources):
        metadata = dict(meta_rows[i]) if meta_rows else {}
        seg_id = metadata.pop("id", str(i))
        segments.append(
            Segment(
                id=seg_id,
                source=source,
                references=tuple(col[i] for col in ref_columns),
                metadata=metadata,
            )
        )
    return ParallelCorpus(
        task=task,
        segments=tuple(segments),
        reference_free=not ref_columns,
    )


def align_hypotheses(
    corpus: ParallelCorpus, hyp_file: Path | str, model_id: str
) -> HypothesisSet:
    """Pair a one-translation-per-line file with the corpus, line i to
    segment i."""
    lines = read_lines(Path(hyp_file))
    if len(lines) != len(corpus.segments):
        raise AlignmentError(
            f"{hyp_file} has {len(lines)} hypotheses for "
            f"{len(corpus.segments)} segments"
        )
    return HypothesisSet(
        task=corpus.task,
        model_id=model_id,
        hypotheses=tuple(
            (seg.id, line) for seg, line in zip(corpus.segments, lines)
        ),
    )
