"""Verse-parallel corpus ingestion.

Reads per-version verse files, word-alignment files, and NP span annotation
files, and restricts everything to the verses shared by all versions. Loaded
structures are immutable and safe to share across workers.

File formats (UTF-8, one record per line, tab-separated):

* verse file       ``<verse-id>\\t<token token ...>``; the filename encodes the
  version as ``<language>-<edition>.<ext>`` (last hyphen separates the two).
* alignment file   header ``#\\t<source-version>\\t<target-version>``, then
  ``<verse-id>\\t<i-j i-j ...>`` with source-target token index pairs.
* NP annotation    ``<verse-id>\\t<start:end start:end ...>`` with half-open
  token ranges; the filename encodes the annotated version like a verse file.
"""

from __future__ import annotations

import hashlib
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ConfigurationError, CorpusError, ParseError

BOUNDARY = "$"

Verse = tuple[str, ...]


@dataclass(frozen=True, order=True)
class VersionId:
    language: str
    edition: str

    def __str__(self) -> str:
        return f"{self.language}-{self.edition}"

    @classmethod
    def from_string(cls, text: str) -> "VersionId":
        language, sep, edition = text.rpartition("-")
        if not sep or not language or not edition:
            raise ValueError(f"version id must look like <language>-<edition>, got {text!r}")
        return cls(language, edition)

    @classmethod
    def from_filename(cls, path) -> "VersionId":
        stem = Path(path).name.split(".", 1)[0]
        return cls.from_string(stem)


@dataclass(frozen=True)
class NpSpan:
    """A set of token indices in one verse; possibly discontiguous."""

    verse: str
    token_indices: tuple[int, ...]

    def __post_init__(self):
        if not self.token_indices:
            raise CorpusError(f"empty span in verse {self.verse!r}")
        if any(i < 0 for i in self.token_indices):
            raise CorpusError(f"negative token index in verse {self.verse!r}")
        if any(a >= b for a, b in zip(self.token_indices, self.token_indices[1:])):
            raise CorpusError(f"span indices must be strictly increasing in verse {self.verse!r}")

    @classmethod
    def from_range(cls, verse: str, start: int, end: int) -> "NpSpan":
        return cls(verse, tuple(range(start, end)))


@dataclass(frozen=True)
class ParallelCorpus:
    versions: Mapping[VersionId, Mapping[str, Verse]]
    shared_verses: tuple[str, ...]

    def verse(self, version: VersionId, verse_id: str) -> Verse:
        return self.versions[version][verse_id]

    def languages(self) -> tuple[str, ...]:
        return tuple(sorted({v.language for v in self.versions}))

    def versions_of(self, language: str) -> tuple[VersionId, ...]:
        return tuple(sorted(v for v in self.versions if v.language == language))

    def total_tokens(self, version: VersionId) -> int:
        return sum(len(t) for t in self.versions[version].values())


@dataclass(frozen=True)
class Alignment:
    source_version: VersionId
    target_version: VersionId
    links: Mapping[str, frozenset[tuple[int, int]]]


@dataclass(frozen=True)
class NpAnnotation:
    version: VersionId
    spans: Mapping[str, tuple[NpSpan, ...]]


def _normalize_token(token: str) -> str:
    return unicodedata.normalize("NFC", token)


def _parse_verse_file(path) -> dict[str, Verse]:
    verses: dict[str, Verse] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise ParseError(path, line_no, f"expected <verse-id>\\t<tokens>, got {len(parts)} fields")
            verse_id, text = parts
            if not verse_id:
                raise ParseError(path, line_no, "empty verse id")
            if verse_id in verses:
                raise ParseError(path, line_no, f"duplicate verse id {verse_id!r}")
            tokens = []
            for token in text.split(" "):
                if not token:
                    raise ParseError(path, line_no, "empty token (double or trailing space?)")
                if BOUNDARY in token:
                    raise ParseError(path, line_no, f"token {token!r} contains reserved character {BOUNDARY!r}")
                if any(ch.isspace() for ch in token):
                    raise ParseError(path, line_no, f"token {token!r} contains whitespace")
                tokens.append(_normalize_token(token))
            if not tokens:
                raise ParseError(path, line_no, "verse has no tokens")
            verses[verse_id] = tuple(tokens)
    return verses


def load_corpus(version_paths: Sequence, verse_allowlist: Optional[Iterable[str]] = None) -> ParallelCorpus:
    """Load verse files and keep exactly the verses present in every version.

    Raises ConfigurationError for fewer than two versions or duplicate version
    ids, ParseError for malformed lines, and CorpusError when the intersection
    of verse sets is empty.
    """
    if len(version_paths) < 2:
        raise ConfigurationError("load_corpus needs at least two version files")
    loaded: dict[VersionId, dict[str, Verse]] = {}
    for path in version_paths:
        version = VersionId.from_filename(path)
        if version in loaded:
            raise ConfigurationError(f"duplicate version {version} (from {path})")
        loaded[version] = _parse_verse_file(path)
    shared = set.intersection(*(set(v) for v in loaded.values()))
    if verse_allowlist is not None:
        shared &= set(verse_allowlist)
    if not shared:
        raise CorpusError("no shared verses across the given versions")
    shared_order = tuple(sorted(shared))
    versions = {
        version: {vid: verses[vid] for vid in shared_order}
        for version, verses in sorted(loaded.items())
    }
    return ParallelCorpus(versions=versions, shared_verses=shared_order)


def write_verse_file(corpus: ParallelCorpus, version: VersionId, path) -> None:
    """Inverse of loading: one `<verse-id>\\t<tokens>` line per shared verse."""
    verses = corpus.versions[version]
    with open(path, "w", encoding="utf-8") as handle:
        for verse_id in corpus.shared_verses:
            handle.write(f"{verse_id}\t{' '.join(verses[verse_id])}\n")


def load_alignment(path, corpus: ParallelCorpus) -> Alignment:
    """Load a word alignment between two corpus versions.

    Verses outside the corpus' shared set are ignored; shared verses missing
    from the file get an empty link set. Indices are bounds-checked against
    both verses.
    """
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    if not lines:
        raise ParseError(path, 1, "empty alignment file (missing header)")
    header = lines[0].split("\t")
    if len(header) != 3 or header[0] != "#":
        raise ParseError(path, 1, "expected header '#\\t<source-version>\\t<target-version>'")
    try:
        source = VersionId.from_string(header[1])
        target = VersionId.from_string(header[2])
    except ValueError as exc:
        raise ParseError(path, 1, str(exc)) from None
    for version in (source, target):
        if version not in corpus.versions:
            raise CorpusError(f"alignment {path} references unknown version {version}")
    shared = set(corpus.shared_verses)
    links: dict[str, frozenset[tuple[int, int]]] = {}
    for line_no, line in enumerate(lines[1:], 2):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) > 2:
            raise ParseError(path, line_no, f"expected <verse-id>\\t<links>, got {len(parts)} fields")
        verse_id = parts[0]
        if verse_id not in shared:
            continue
        pair_text = parts[1] if len(parts) == 2 else ""
        src_len = len(corpus.verse(source, verse_id))
        tgt_len = len(corpus.verse(target, verse_id))
        pairs = set()
        for chunk in pair_text.split():
            left, sep, right = chunk.partition("-")
            if not sep or not left.isdigit() or not right.isdigit():
                raise ParseError(path, line_no, f"bad link {chunk!r} (expected <i>-<j>)")
            i, j = int(left), int(right)
            if i >= src_len:
                raise CorpusError(
                    f"{path}: verse {verse_id!r} source index {i} out of bounds (verse has {src_len} tokens)"
                )
            if j >= tgt_len:
                raise CorpusError(
                    f"{path}: verse {verse_id!r} target index {j} out of bounds (verse has {tgt_len} tokens)"
                )
            pairs.add((i, j))
        links[verse_id] = frozenset(pairs)
    for verse_id in corpus.shared_verses:
        links.setdefault(verse_id, frozenset())
    return Alignment(source_version=source, target_version=target, links=links)


def load_np_annotation(path, corpus: ParallelCorpus) -> NpAnnotation:
    """Load NP spans for the version named by the filename.

    Spans must be non-empty, in bounds, and non-overlapping within a verse.
    """
    version = VersionId.from_filename(path)
    if version not in corpus.versions:
        raise CorpusError(f"annotation {path} references unknown version {version}")
    shared = set(corpus.shared_verses)
    spans: dict[str, tuple[NpSpan, ...]] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, 1):
            line = raw.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) > 2:
                raise ParseError(path, line_no, f"expected <verse-id>\\t<spans>, got {len(parts)} fields")
            verse_id = parts[0]
            if verse_id not in shared:
                continue
            if verse_id in spans:
                raise ParseError(path, line_no, f"duplicate verse id {verse_id!r}")
            verse_len = len(corpus.verse(version, verse_id))
            ranges = []
            span_text = parts[1] if len(parts) == 2 else ""
            for chunk in span_text.split():
                left, sep, right = chunk.partition(":")
                if not sep or not left.isdigit() or not right.isdigit():
                    raise ParseError(path, line_no, f"bad span {chunk!r} (expected <start>:<end>)")
                start, end = int(left), int(right)
                if start >= end:
                    raise CorpusError(f"{path}: verse {verse_id!r} has empty span {start}:{end}")
                if end > verse_len:
                    raise CorpusError(
                        f"{path}: verse {verse_id!r} span {start}:{end} out of bounds (verse has {verse_len} tokens)"
                    )
                ranges.append((start, end))
            ranges.sort()
            for (s1, e1), (s2, _e2) in zip(ranges, ranges[1:]):
                if s2 < e1:
                    raise CorpusError(f"{path}: verse {verse_id!r} has overlapping spans {s1}:{e1} and {s2}:{_e2}")
            spans[verse_id] = tuple(NpSpan.from_range(verse_id, s, e) for s, e in ranges)
    for verse_id in corpus.shared_verses:
        spans.setdefault(verse_id, ())
    return NpAnnotation(version=version, spans=spans)


def corpus_fingerprint(corpus: ParallelCorpus) -> str:
    """Content hash of the corpus, stable across load order."""
    digest = hashlib.sha256()
    for version in sorted(corpus.versions):
        digest.update(str(version).encode("utf-8"))
        for verse_id in corpus.shared_verses:
            digest.update(verse_id.encode("utf-8"))
            digest.update(" ".join(corpus.versions[version][verse_id]).encode("utf-8"))
            digest.update(b"\n")
    return digest.hexdigest()
