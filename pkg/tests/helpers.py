"""Small shared builders for corpus-level tests."""

from pathlib import Path


def write_lines(path, lines):
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return Path(path)


def tiny_corpus_files(root, versions):
    """Write verse files from {filename: {verse_id: 'tok tok'}} and return paths."""
    paths = []
    for filename, verses in versions.items():
        lines = [f"{vid}\t{text}" for vid, text in verses.items()]
        paths.append(write_lines(Path(root) / filename, lines))
    return paths
