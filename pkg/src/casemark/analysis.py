"""Exploratory analyses over parallel NPs and extracted markers.

Groups parallel NPs by their cross-lingual combination of case markers (the
last token of each projected span stands in for the head word), and exports a
sparse NP-word cooccurrence matrix for external embedding or plotting.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .corpus import BOUNDARY, ParallelCorpus
from .extraction import MarkerSet
from .projection import ParallelNp

GroupKey = tuple[tuple[str, Optional[str]], ...]


@dataclass(frozen=True)
class MarkerCombinationGroup:
    key: GroupKey
    members: tuple[ParallelNp, ...]


@dataclass(frozen=True)
class CooccurrenceMatrix:
    """Sparse counts of word forms (rows, tagged `language:form`) occurring
    in parallel NPs (columns)."""

    rows: tuple[str, ...]
    cols: tuple[str, ...]
    cells: Mapping[tuple[int, int], int]
    col_text: Mapping[str, str]


def assign_marker(word: str, marker_set: MarkerSet) -> Optional[str]:
    """Longest marker matching the end of the boundary-wrapped word, if any."""
    wrapped = BOUNDARY + word + BOUNDARY
    best = None
    for marker in marker_set.grams():
        if wrapped.endswith(marker):
            if best is None or len(marker) > len(best):
                best = marker
    return best


def _head_assignment(
    pnp: ParallelNp,
    corpus: ParallelCorpus,
    language: str,
    marker_set: MarkerSet,
    head: str,
) -> Optional[str]:
    for version in sorted(pnp.projections):
        if version.language != language:
            continue
        span = pnp.projections[version]
        tokens = corpus.verse(version, pnp.verse)
        index = span.token_indices[0] if head == "first" else span.token_indices[-1]
        return assign_marker(tokens[index], marker_set)
    return None


def group_by_marker_combination(
    parallel_nps: Sequence[ParallelNp],
    corpus: ParallelCorpus,
    marker_sets: Mapping[str, MarkerSet],
    languages: Sequence[str],
    head: str = "last",
) -> list[MarkerCombinationGroup]:
    """Partition the parallel NPs by their per-language marker assignment.

    The span token standing in for the head word is the last one by default
    (suffixing languages); pass head="first" for prefixing ones. NPs lacking a
    projection in a requested language keep a None slot for it. Groups come
    out largest first (ties in key order).
    """
    if head not in ("last", "first"):
        raise ValueError(f"head must be 'last' or 'first', got {head!r}")
    for language in languages:
        if language not in marker_sets:
            raise KeyError(f"no marker set for language {language!r}")
    ordered = tuple(sorted(languages))
    buckets: dict[GroupKey, list[ParallelNp]] = defaultdict(list)
    for pnp in parallel_nps:
        key = tuple(
            (language, _head_assignment(pnp, corpus, language, marker_sets[language], head))
            for language in ordered
        )
        buckets[key].append(pnp)
    groups = [
        MarkerCombinationGroup(key=key, members=tuple(members))
        for key, members in buckets.items()
    ]
    groups.sort(key=lambda g: (-len(g.members), _key_text(g.key)))
    return groups


def _key_text(key: GroupKey) -> str:
    return " ".join(f"{language}={marker if marker is not None else '-'}" for language, marker in key)


def build_cooccurrence_matrix(
    parallel_nps: Sequence[ParallelNp],
    corpus: ParallelCorpus,
    languages: Optional[Sequence[str]] = None,
) -> CooccurrenceMatrix:
    """Count how often each word form occurs inside each parallel NP.

    Rows cover the projected spans (and the source span, when its language is
    requested); NPs from different source editions stay distinct columns.
    """
    wanted = None if languages is None else set(languages)
    counts: dict[tuple[str, str], int] = Counter()
    col_text: dict[str, str] = {}
    for pnp in parallel_nps:
        col = pnp.np_id
        source_version, source_span = pnp.source
        source_tokens = corpus.verse(source_version, pnp.verse)
        col_text[col] = " ".join(source_tokens[i] for i in source_span.token_indices)
        spans = list(pnp.projections.items())
        spans.append((source_version, source_span))
        for version, span in spans:
            if wanted is not None and version.language not in wanted:
                continue
            tokens = corpus.verse(version, pnp.verse)
            for index in span.token_indices:
                counts[(f"{version.language}:{tokens[index]}", col)] += 1
    rows = tuple(sorted({row for row, _col in counts}))
    cols = tuple(sorted(col_text))
    row_index = {row: i for i, row in enumerate(rows)}
    col_index = {col: i for i, col in enumerate(cols)}
    cells = {(row_index[row], col_index[col]): n for (row, col), n in counts.items()}
    return CooccurrenceMatrix(rows=rows, cols=cols, cells=cells, col_text=col_text)


def export_matrix(matrix: CooccurrenceMatrix, out_dir) -> None:
    """Write `matrix.tsv` triplets plus `rows.txt` / `cols.txt` sidecars in a
    fixed deterministic order."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "rows.txt", "w", encoding="utf-8") as handle:
        for row in matrix.rows:
            handle.write(row + "\n")
    with open(out_dir / "cols.txt", "w", encoding="utf-8") as handle:
        for col in matrix.cols:
            handle.write(f"{col}\t{matrix.col_text.get(col, '')}\n")
    with open(out_dir / "matrix.tsv", "w", encoding="utf-8") as handle:
        for (row_i, col_i) in sorted(matrix.cells):
            handle.write(f"{row_i}\t{col_i}\t{matrix.cells[(row_i, col_i)]}\n")


def render_group_report(
    groups: Sequence[MarkerCombinationGroup],
    corpus: ParallelCorpus,
    samples_per_group: int = 5,
) -> str:
    """Human-readable listing: one block per group with sample NP surfaces."""
    lines = []
    for group in groups:
        lines.append(f"group\t{_key_text(group.key)}\tsize={len(group.members)}")
        for pnp in group.members[:samples_per_group]:
            version, span = pnp.source
            tokens = corpus.verse(version, pnp.verse)
            surface = " ".join(tokens[i] for i in span.token_indices)
            lines.append(f"\t{pnp.verse}\t{version}\t{surface}")
    return "\n".join(lines) + ("\n" if lines else "")
