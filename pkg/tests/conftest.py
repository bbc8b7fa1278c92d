from types import SimpleNamespace

import pytest

from synthcorpus import build_fixture

from casemark.corpus import load_alignment, load_corpus, load_np_annotation


@pytest.fixture(scope="session")
def synth(tmp_path_factory):
    """The synthetic planted-suffix fixture, built once and loaded."""
    root = tmp_path_factory.mktemp("synth")
    fixture = build_fixture(root)
    corpus = load_corpus(fixture.verse_files)
    annotations = [load_np_annotation(p, corpus) for p in fixture.annotation_files]
    alignments = [load_alignment(p, corpus) for p in fixture.alignment_files]
    return SimpleNamespace(
        fixture=fixture,
        corpus=corpus,
        annotations=annotations,
        alignments=alignments,
    )
