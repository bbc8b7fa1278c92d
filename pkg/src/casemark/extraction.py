"""Candidate case-marker generation and filtering.

From the NP-relevant word types of a language, every boundary-marked
character n-gram is a candidate. Candidates are filtered in three stages:
a frequency threshold on the number of NP-relevant types containing the
gram, an exact-test filter comparing inside/outside containment counts
against all other candidates, and a restriction to word-final grams.
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ThreadPoolExecutor
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .corpus import BOUNDARY, Alignment, ParallelCorpus, corpus_fingerprint
from .errors import ConfigurationError, ParseError, UndefinedOddsError
from .projection import (
    NpAnnotation,
    build_inside_outside,
    build_parallel_np_set,
    partition_word_types,
)
from .stats import ContingencyTable, fisher_exact_two_sided, odds_ratio

ABLATION_VARIANTS = ("baseline", "no_theta", "no_phi", "no_chi", "middle", "beginning")


@dataclass(frozen=True)
class PipelineConfig:
    """Thresholds and stage toggles for one extraction run.

    middle/beginning ablations admit word-internal / word-initial grams in
    addition to word-final ones; switching suffix_only off with neither admit
    flag set disables the positional restriction entirely.
    """

    theta: int = 97
    phi: float = 0.08
    chi: float = 0.34
    suffix_only: bool = True
    admit_word_initial: bool = False
    admit_word_internal: bool = False
    use_p_filter: bool = True
    use_ratio_filter: bool = True
    max_gram_length: Optional[int] = None
    languages: Optional[tuple[str, ...]] = None
    exclude_languages: tuple[str, ...] = ()

    def __post_init__(self):
        if self.theta < 1:
            raise ConfigurationError(f"theta must be >= 1, got {self.theta}")
        if not 0.0 < self.phi < 1.0:
            raise ConfigurationError(f"phi must lie in (0, 1), got {self.phi}")
        if self.chi < 0.0:
            raise ConfigurationError(f"chi must be >= 0, got {self.chi}")
        if self.max_gram_length is not None and self.max_gram_length < 1:
            raise ConfigurationError("max_gram_length must be >= 1 when set")

    def with_variant(self, variant: str) -> "PipelineConfig":
        """Config for one ablation variant of this baseline."""
        if variant == "baseline":
            return self
        if variant == "no_theta":
            return dataclasses.replace(self, theta=1)
        if variant == "no_phi":
            return dataclasses.replace(self, use_p_filter=False)
        if variant == "no_chi":
            return dataclasses.replace(self, use_ratio_filter=False)
        if variant == "middle":
            return dataclasses.replace(self, suffix_only=False, admit_word_internal=True)
        if variant == "beginning":
            return dataclasses.replace(self, suffix_only=False, admit_word_initial=True)
        raise ConfigurationError(f"unknown ablation variant {variant!r} (expected one of {ABLATION_VARIANTS})")

    def wants_language(self, language: str) -> bool:
        if language in self.exclude_languages:
            return False
        return self.languages is None or language in self.languages


@dataclass(frozen=True)
class CandidateMarker:
    """A boundary-marked gram with its type-containment counts and, when the
    exact-test stage ran, its p-value and odds ratio."""

    gram: str
    inside_count: int
    outside_count: int
    p_value: Optional[float] = None
    odds_ratio: Optional[float] = None


@dataclass(frozen=True)
class MarkerSet:
    language: str
    markers: frozenset[CandidateMarker]
    provenance: Mapping[str, object] = field(default_factory=dict)

    def grams(self) -> frozenset[str]:
        return frozenset(m.gram for m in self.markers)

    def sorted_markers(self) -> list[CandidateMarker]:
        return sorted(self.markers, key=lambda m: m.gram)


class ExactTestResult(NamedTuple):
    p_value: float
    odds_ratio: Optional[float]


def candidates_of_word(word: str, max_len: Optional[int] = None) -> set[str]:
    """All substrings of `$word$` containing at least one non-boundary
    character; duplicates within the word collapse."""
    wrapped = BOUNDARY + word + BOUNDARY
    length = len(wrapped)
    grams = set()
    for start in range(length):
        limit = length if max_len is None else min(length, start + max_len)
        for end in range(start + 1, limit + 1):
            gram = wrapped[start:end]
            if gram.strip(BOUNDARY):
                grams.add(gram)
    return grams


def build_candidate_counts(
    np_relevant: Iterable[str],
    np_irrelevant: Iterable[str],
    max_len: Optional[int] = None,
) -> dict[str, tuple[int, int]]:
    """Map each gram drawn from NP-relevant words to its type-containment
    counts (types containing it among NP-relevant / NP-irrelevant words).

    A word type contributes at most one to each count per gram; grams seen
    only in NP-irrelevant words are not in the domain.
    """
    inside: Counter = Counter()
    for word in np_relevant:
        inside.update(candidates_of_word(word, max_len))
    outside: Counter = Counter()
    for word in np_irrelevant:
        for gram in candidates_of_word(word, max_len):
            if gram in inside:
                outside[gram] += 1
    return {gram: (inside[gram], outside[gram]) for gram in inside}


def frequency_filter(counts: Mapping[str, tuple[int, int]], theta: int) -> set[str]:
    """Grams whose NP-relevant containment count reaches the threshold."""
    if theta < 1:
        raise ConfigurationError(f"theta must be >= 1, got {theta}")
    return {gram for gram, (inside, _outside) in counts.items() if inside >= theta}


def contingency_for(
    gram: str,
    candidates: Iterable[str],
    counts: Mapping[str, tuple[int, int]],
) -> ContingencyTable:
    """2x2 table for one candidate against the other surviving candidates:
    [inside(c), inside(rest); outside(c), outside(rest)]."""
    inside_total = 0
    outside_total = 0
    for other in candidates:
        i, o = counts[other]
        inside_total += i
        outside_total += o
    inside_c, outside_c = counts[gram]
    return ContingencyTable(
        a=inside_c,
        b=inside_total - inside_c,
        c=outside_c,
        d=outside_total - outside_c,
    )


def inside_outside_filter(
    candidates: Iterable[str],
    counts: Mapping[str, tuple[int, int]],
    phi: float,
    chi: float,
    use_p_filter: bool = True,
    use_ratio_filter: bool = True,
) -> dict[str, ExactTestResult]:
    """Keep candidates with p < phi and odds ratio > chi (both strict).

    Returns the survivors mapped to their test results. Candidates whose odds
    ratio is undefined (0/0) are dropped when the ratio test is active.
    """
    candidate_set = sorted(set(candidates))
    inside_total = sum(counts[c][0] for c in candidate_set)
    outside_total = sum(counts[c][1] for c in candidate_set)
    kept: dict[str, ExactTestResult] = {}
    for gram in candidate_set:
        inside_c, outside_c = counts[gram]
        table = ContingencyTable(
            a=inside_c,
            b=inside_total - inside_c,
            c=outside_c,
            d=outside_total - outside_c,
        )
        p_value = fisher_exact_two_sided(table)
        try:
            ratio = odds_ratio(table)
        except UndefinedOddsError:
            if use_ratio_filter:
                continue
            ratio = None
        if use_p_filter and not p_value < phi:
            continue
        if use_ratio_filter and not ratio > chi:
            continue
        kept[gram] = ExactTestResult(p_value=p_value, odds_ratio=ratio)
    return kept


def suffix_restrict(grams: Iterable[str]) -> set[str]:
    """Keep exactly the word-final grams (trailing boundary marker)."""
    return {gram for gram in grams if gram.endswith(BOUNDARY)}


def _positional_restrict(grams: Iterable[str], config: PipelineConfig) -> set[str]:
    if config.suffix_only:
        return suffix_restrict(grams)
    if not (config.admit_word_initial or config.admit_word_internal):
        # suffix_only switched off with no admit flags: stage disabled.
        return set(grams)
    kept = set()
    for gram in grams:
        if gram.endswith(BOUNDARY):
            kept.add(gram)
        elif gram.startswith(BOUNDARY):
            if config.admit_word_initial:
                kept.add(gram)
        elif config.admit_word_internal:
            kept.add(gram)
    return kept


def extract_markers_for_language(
    np_relevant: Iterable[str],
    np_irrelevant: Iterable[str],
    config: PipelineConfig,
) -> list[CandidateMarker]:
    """Run candidate generation and all filter stages for one language."""
    counts = build_candidate_counts(np_relevant, np_irrelevant, config.max_gram_length)
    surviving = frequency_filter(counts, config.theta)
    if config.use_p_filter or config.use_ratio_filter:
        tested = inside_outside_filter(
            surviving,
            counts,
            config.phi,
            config.chi,
            use_p_filter=config.use_p_filter,
            use_ratio_filter=config.use_ratio_filter,
        )
    else:
        tested = {gram: None for gram in surviving}
    final = _positional_restrict(tested, config)
    markers = []
    for gram in sorted(final):
        result = tested[gram]
        inside_c, outside_c = counts[gram]
        markers.append(
            CandidateMarker(
                gram=gram,
                inside_count=inside_c,
                outside_count=outside_c,
                p_value=result.p_value if result else None,
                odds_ratio=result.odds_ratio if result else None,
            )
        )
    return markers


def run_pipeline(
    corpus: ParallelCorpus,
    annotations: Sequence[NpAnnotation],
    alignments: Sequence[Alignment],
    config: PipelineConfig,
    jobs: int = 1,
) -> dict[str, MarkerSet]:
    """Full extraction: projection, partition, candidates, filters, per
    language. Languages may be restricted through the config; per-language
    work is independent and fans out over a thread pool when jobs > 1.
    """
    parallel_nps = build_parallel_np_set(corpus, annotations, alignments)
    sources = [annotation.version for annotation in annotations]
    fingerprint = corpus_fingerprint(corpus)
    languages = [lang for lang in corpus.languages() if config.wants_language(lang)]

    def one_language(language: str) -> tuple[str, MarkerSet]:
        counts = build_inside_outside(corpus, parallel_nps, language, source_versions=sources)
        partition = partition_word_types(counts)
        markers = extract_markers_for_language(partition.np_relevant, partition.np_irrelevant, config)
        provenance = {
            "config": dataclasses.asdict(config),
            "corpus_fingerprint": fingerprint,
            "np_relevant_types": len(partition.np_relevant),
            "np_irrelevant_types": len(partition.np_irrelevant),
        }
        return language, MarkerSet(language=language, markers=frozenset(markers), provenance=provenance)

    if jobs > 1 and len(languages) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one_language, languages))
    else:
        results = [one_language(language) for language in languages]
    return dict(sorted(results))


def _format_stat(value: Optional[float]) -> str:
    if value is None:
        return "NA"
    return repr(value)


def write_marker_file(marker_set: MarkerSet, path) -> None:
    """One marker per line: `<gram>\\t<inside>\\t<outside>\\t<p>\\t<odds>`,
    grams in lexicographic order; unset statistics print as NA."""
    with open(path, "w", encoding="utf-8") as handle:
        for marker in marker_set.sorted_markers():
            handle.write(
                f"{marker.gram}\t{marker.inside_count}\t{marker.outside_count}"
                f"\t{_format_stat(marker.p_value)}\t{_format_stat(marker.odds_ratio)}\n"
            )


def read_marker_file(path, language: Optional[str] = None) -> MarkerSet:
    """Inverse of write_marker_file; the language defaults to the file stem."""
    if language is None:
        language = Path(path).name.split(".", 1)[0]
    markers = []
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 5:
                raise ParseError(path, line_no, f"expected 5 fields, got {len(parts)}")
            gram, inside_text, outside_text, p_text, r_text = parts
            try:
                inside_c = int(inside_text)
                outside_c = int(outside_text)
                p_value = None if p_text == "NA" else float(p_text)
                ratio = None if r_text == "NA" else float(r_text)
            except ValueError as exc:
                raise ParseError(path, line_no, str(exc)) from None
            markers.append(
                CandidateMarker(
                    gram=gram,
                    inside_count=inside_c,
                    outside_count=outside_c,
                    p_value=p_value,
                    odds_ratio=ratio,
                )
            )
    return MarkerSet(language=language, markers=frozenset(markers))
