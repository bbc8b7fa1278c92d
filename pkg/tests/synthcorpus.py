"""Deterministic synthetic fixture: a 3-language verse-parallel corpus with
planted case suffixes.

Layout per verse (all 500 verses share it):

    english   the noun<a> verb<j> the noun<b>      NP spans 0:2 and 3:5
    lingua    <stem_a>um <m-particle> <verbstem_j>nt <stem_b>ibus <bus-particle>
    tercia    n<a> v<j> n<b>

Alignments link the english nouns and verb to their lingua/tercia
counterparts; particles are never aligned, so they always fall outside
projected NPs. Every lingua NP noun therefore carries `um` (subject slot) or
`ibus` (object slot) and every verb ends in `nt`, making {um$, ibus$} the
planted marker gold.

The lexicon is tuned so the pipeline's filters have real work to do:

* five noun stems each end in t/r/k/d/g/l, so extensions like tum$ and
  tibus$ pass the frequency threshold but are too rare to reach
  significance;
* particles ending in -m (but never -um) and in -bus (but never -ibus) give
  the sub-suffixes m$/s$/us$/bus$ enough outside mass to look distributionally
  neutral, so only the exact test can reject them.

Frequency threshold scaling: the stock threshold of 97 was tuned for corpora
with roughly 5000 NP-relevant word types per language; this fixture scales it
as theta' = max(5, round(97 * n_types / 5000)), which lands on 5 for the 120
NP-relevant lingua types generated here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

N_VERSES = 500
REFERENCE_RELEVANT_TYPES = 5000
PLANTED_GOLD = frozenset({"um$", "ibus$"})

_CONSONANTS = "glvnpdkzfrtchw"
_VOWELS = "aeo"

# Six cluster finals shared by five stems each (their um/ibus extensions pass
# the scaled frequency threshold), then a diverse tail of finals occurring at
# most three times, below any plausible scaled threshold.
_CLUSTER_FINALS = "trkdgl"
_PLAIN_FINALS = "aeonpvxzcfhwyj"


def _base(i: int, salt: int) -> str:
    # multipliers coprime to the alphabet sizes, so letters spread evenly
    c1 = _CONSONANTS[(i * 3 + salt) % len(_CONSONANTS)]
    v1 = _VOWELS[(i + salt) % len(_VOWELS)]
    c2 = _CONSONANTS[(i * 5 + salt * 5 + 3) % len(_CONSONANTS)]
    v2 = _VOWELS[(i * 2 + salt * 7 + 1) % len(_VOWELS)]
    return c1 + v1 + c2 + v2


def noun_stems() -> list[str]:
    stems = []
    for i in range(60):
        if i < 30:
            final = _CLUSTER_FINALS[i // 5]
        else:
            final = _PLAIN_FINALS[(i - 30) % len(_PLAIN_FINALS)]
        stems.append(_base(i, salt=0) + final)
    if len(set(stems)) != len(stems):
        raise AssertionError("noun stem collision; adjust the generator constants")
    return stems


def verb_stems() -> list[str]:
    stems = [_base(i, salt=1) + _base(i, salt=4)[:2] for i in range(40)]
    if len(set(stems)) != len(stems):
        raise AssertionError("verb stem collision; adjust the generator constants")
    return stems


def m_particles(count: int) -> list[str]:
    return [_base(i, salt=2)[:2] + ("em", "am", "om")[i % 3] for i in range(count)]


def bus_particles(count: int) -> list[str]:
    return [_base(i, salt=3)[:2] + ("ebus", "abus", "obus")[i % 3] for i in range(count)]


def scaled_theta(n_relevant_types: int) -> int:
    return max(5, round(97 * n_relevant_types / REFERENCE_RELEVANT_TYPES))


@dataclass
class SyntheticFixture:
    root: Path
    verse_files: list[Path] = field(default_factory=list)
    alignment_files: list[Path] = field(default_factory=list)
    annotation_files: list[Path] = field(default_factory=list)
    gold: frozenset[str] = PLANTED_GOLD
    theta: int = 5


def build_fixture(root, n_verses: int = N_VERSES, n_m_particles: int = 24, n_bus_particles: int = 24) -> SyntheticFixture:
    """Write the fixture files under `root` and return their paths."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    stems = noun_stems()
    verbs = verb_stems()
    parts_m = m_particles(n_m_particles)
    parts_bus = bus_particles(n_bus_particles)
    if len(set(parts_m)) != len(parts_m) or len(set(parts_bus)) != len(parts_bus):
        raise AssertionError("particle collision; adjust the generator constants")

    english_lines = []
    lingua_lines = []
    tercia_lines = []
    np_lines = []
    align_lingua_lines = ["#\tenglish-e1\tlingua-l1"]
    align_tercia_lines = ["#\tenglish-e1\ttercia-t1"]
    for v in range(n_verses):
        verse_id = f"v{v:03d}"
        a = v % 60
        b = (v + 31) % 60
        j = v % 40
        english = f"the noun{a} verb{j} the noun{b}"
        lingua = " ".join([
            stems[a] + "um",
            parts_m[v % len(parts_m)],
            verbs[j] + "nt",
            stems[b] + "ibus",
            parts_bus[v % len(parts_bus)],
        ])
        tercia = f"n{a} v{j} n{b}"
        english_lines.append(f"{verse_id}\t{english}")
        lingua_lines.append(f"{verse_id}\t{lingua}")
        tercia_lines.append(f"{verse_id}\t{tercia}")
        np_lines.append(f"{verse_id}\t0:2 3:5")
        align_lingua_lines.append(f"{verse_id}\t1-0 2-2 4-3")
        align_tercia_lines.append(f"{verse_id}\t1-0 2-1 4-2")

    fixture = SyntheticFixture(root=root)
    for name, lines in [
        ("english-e1.txt", english_lines),
        ("lingua-l1.txt", lingua_lines),
        ("tercia-t1.txt", tercia_lines),
    ]:
        path = root / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        fixture.verse_files.append(path)
    np_path = root / "english-e1.np"
    np_path.write_text("\n".join(np_lines) + "\n", encoding="utf-8")
    fixture.annotation_files.append(np_path)
    for name, lines in [
        ("align_english-e1_lingua-l1.tsv", align_lingua_lines),
        ("align_english-e1_tercia-t1.tsv", align_tercia_lines),
    ]:
        path = root / name
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        fixture.alignment_files.append(path)
    fixture.theta = scaled_theta(120)
    return fixture
