"""Command-line front end.

A YAML run configuration names the inputs; flags override individual keys.
Subcommands: extract, silver, eval, ablate, analyze, project. All outputs are
deterministic: re-running with identical config and inputs reproduces every
file byte for byte.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from . import analysis, evaluation, extraction, projection, silver
from .corpus import load_alignment, load_corpus, load_np_annotation, corpus_fingerprint
from .errors import CasemarkError, ConfigurationError
from .extraction import ABLATION_VARIANTS, PipelineConfig

DEFAULT_SAMPLES_PER_GROUP = 5


@dataclass
class RunConfig:
    verse_files: list[Path] = field(default_factory=list)
    alignment_files: list[Path] = field(default_factory=list)
    annotation_files: list[Path] = field(default_factory=list)
    paradigm_files: dict[str, Path] = field(default_factory=dict)
    verse_allowlist: Optional[frozenset[str]] = None
    pipeline: PipelineConfig = field(default_factory=PipelineConfig)
    output_dir: Path = Path("out")
    jobs: int = 0  # 0 means "number of processors"
    markers_dir: Optional[Path] = None
    silver_dir: Optional[Path] = None
    analysis_languages: Optional[list[str]] = None
    samples_per_group: int = DEFAULT_SAMPLES_PER_GROUP

    def effective_jobs(self) -> int:
        return self.jobs if self.jobs > 0 else (os.cpu_count() or 1)

    def resolved_markers_dir(self) -> Path:
        return self.markers_dir if self.markers_dir else self.output_dir / "markers"

    def resolved_silver_dir(self) -> Path:
        return self.silver_dir if self.silver_dir else self.output_dir / "silver"


def _expand_paths(entries, base: Path) -> list[Path]:
    paths: list[Path] = []
    for entry in entries or []:
        candidate = Path(entry)
        if not candidate.is_absolute():
            candidate = base / candidate
        if any(ch in str(entry) for ch in "*?["):
            matches = sorted(candidate.parent.glob(candidate.name))
            if not matches:
                raise ConfigurationError(f"glob {entry!r} matched no files")
            paths.extend(matches)
        else:
            paths.append(candidate)
    return paths


def _require_existing(paths, what: str) -> None:
    missing = [str(p) for p in paths if not Path(p).exists()]
    if missing:
        raise ConfigurationError(f"missing {what}: {', '.join(missing)}")


def load_run_config(path) -> RunConfig:
    """Read a YAML run configuration; relative paths resolve against the
    config file's directory."""
    path = Path(path)
    if not path.exists():
        raise ConfigurationError(f"config file {path} does not exist")
    with open(path, encoding="utf-8") as handle:
        raw = yaml.safe_load(handle) or {}
    if not isinstance(raw, dict):
        raise ConfigurationError(f"config file {path} must hold a mapping at top level")
    base = path.parent
    known = {
        "verse_files", "alignment_files", "annotation_files", "paradigm_files",
        "verse_allowlist", "verse_allowlist_file", "pipeline", "output_dir",
        "jobs", "markers_dir", "silver_dir", "analysis",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigurationError(f"unknown config keys: {', '.join(sorted(unknown))}")

    allowlist = None
    if raw.get("verse_allowlist") is not None:
        allowlist = frozenset(str(v) for v in raw["verse_allowlist"])
    if raw.get("verse_allowlist_file"):
        allow_path = base / raw["verse_allowlist_file"]
        _require_existing([allow_path], "verse allowlist file")
        with open(allow_path, encoding="utf-8") as handle:
            from_file = frozenset(line.strip() for line in handle if line.strip())
        allowlist = from_file if allowlist is None else allowlist | from_file

    pipeline_raw = dict(raw.get("pipeline") or {})
    if "languages" in pipeline_raw and pipeline_raw["languages"] is not None:
        pipeline_raw["languages"] = tuple(pipeline_raw["languages"])
    if "exclude_languages" in pipeline_raw:
        pipeline_raw["exclude_languages"] = tuple(pipeline_raw["exclude_languages"] or ())
    try:
        pipeline = PipelineConfig(**pipeline_raw)
    except TypeError as exc:
        raise ConfigurationError(f"bad pipeline config: {exc}") from None

    paradigms = {
        str(language): (base / p if not Path(p).is_absolute() else Path(p))
        for language, p in (raw.get("paradigm_files") or {}).items()
    }
    analysis_raw = raw.get("analysis") or {}

    def _resolve(value):
        if value is None:
            return None
        value = Path(value)
        return value if value.is_absolute() else base / value

    out_dir = _resolve(raw.get("output_dir", "out"))
    return RunConfig(
        verse_files=_expand_paths(raw.get("verse_files"), base),
        alignment_files=_expand_paths(raw.get("alignment_files"), base),
        annotation_files=_expand_paths(raw.get("annotation_files"), base),
        paradigm_files=paradigms,
        verse_allowlist=allowlist,
        pipeline=pipeline,
        output_dir=out_dir,
        jobs=int(raw.get("jobs", 0)),
        markers_dir=_resolve(raw.get("markers_dir")),
        silver_dir=_resolve(raw.get("silver_dir")),
        analysis_languages=list(analysis_raw["languages"]) if analysis_raw.get("languages") else None,
        samples_per_group=int(analysis_raw.get("samples_per_group", DEFAULT_SAMPLES_PER_GROUP)),
    )


def _apply_overrides(config: RunConfig, args) -> RunConfig:
    pipeline = config.pipeline
    updates = {}
    if args.theta is not None:
        updates["theta"] = args.theta
    if args.phi is not None:
        updates["phi"] = args.phi
    if args.chi is not None:
        updates["chi"] = args.chi
    if args.suffix_only is not None:
        updates["suffix_only"] = args.suffix_only
    if args.languages is not None:
        updates["languages"] = tuple(lang for lang in args.languages.split(",") if lang)
    if updates:
        pipeline = dataclasses.replace(pipeline, **updates)
    if getattr(args, "ablate", None):
        pipeline = pipeline.with_variant(args.ablate)
    config.pipeline = pipeline
    if args.out is not None:
        config.output_dir = Path(args.out)
    if args.jobs is not None:
        config.jobs = args.jobs
    return config


def _sha256(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for block in iter(lambda: handle.read(65536), b""):
            digest.update(block)
    return digest.hexdigest()


def _load_corpus_inputs(config: RunConfig):
    _require_existing(config.verse_files, "verse files")
    _require_existing(config.alignment_files, "alignment files")
    _require_existing(config.annotation_files, "annotation files")
    corpus = load_corpus(config.verse_files, config.verse_allowlist)
    annotations = [load_np_annotation(p, corpus) for p in config.annotation_files]
    alignments = [load_alignment(p, corpus) for p in config.alignment_files]
    return corpus, annotations, alignments


def _write_manifest(config: RunConfig, corpus_hash: str, languages) -> None:
    inputs = {}
    for path in [*config.verse_files, *config.alignment_files, *config.annotation_files]:
        inputs[str(path)] = _sha256(path)
    manifest = {
        "pipeline": dataclasses.asdict(config.pipeline),
        "inputs": inputs,
        "corpus_fingerprint": corpus_hash,
        "languages": sorted(languages),
        "jobs": config.effective_jobs(),
    }
    config.output_dir.mkdir(parents=True, exist_ok=True)
    with open(config.output_dir / "manifest.json", "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, sort_keys=True, indent=2)
        handle.write("\n")


def cmd_extract(config: RunConfig) -> int:
    corpus, annotations, alignments = _load_corpus_inputs(config)
    marker_sets = extraction.run_pipeline(
        corpus, annotations, alignments, config.pipeline, jobs=config.effective_jobs()
    )
    markers_dir = config.resolved_markers_dir()
    markers_dir.mkdir(parents=True, exist_ok=True)
    failures = []
    for language in sorted(marker_sets):
        try:
            extraction.write_marker_file(marker_sets[language], markers_dir / f"{language}.tsv")
        except OSError as exc:
            failures.append(f"{language}: {exc}")
    _write_manifest(config, corpus_fingerprint(corpus), marker_sets)
    for failure in failures:
        print(f"extract: {failure}", file=sys.stderr)
    return 1 if failures else 0


def cmd_silver(config: RunConfig) -> int:
    silver_dir = config.resolved_silver_dir()
    languages = {
        lang: path
        for lang, path in sorted(config.paradigm_files.items())
        if config.pipeline.wants_language(lang)
    }
    if not languages:
        print("silver: no paradigm files configured, nothing to build", file=sys.stderr)
        return 0
    _require_existing(languages.values(), "paradigm files")
    silver_dir.mkdir(parents=True, exist_ok=True)
    failures = []
    diagnostics = []
    for language, path in languages.items():
        try:
            standard = silver.build_silver(path, language)
        except CasemarkError as exc:
            failures.append(f"{language}: {exc}")
            continue
        silver.write_silver_file(standard, silver_dir / f"{language}.txt")
        diagnostics.append((language, standard.diagnostics))
    with open(silver_dir / "diagnostics.tsv", "w", encoding="utf-8") as handle:
        handle.write("language\tparadigms_used\tsuffixes_emitted\n")
        for language, diag in diagnostics:
            handle.write(f"{language}\t{diag['paradigms_used']}\t{diag['suffixes_emitted']}\n")
    for failure in failures:
        print(f"silver: {failure}", file=sys.stderr)
    return 1 if failures else 0


def _load_scorable(config: RunConfig):
    markers_dir = config.resolved_markers_dir()
    silver_dir = config.resolved_silver_dir()
    if not markers_dir.is_dir():
        raise ConfigurationError(f"markers directory {markers_dir} does not exist (run `extract` first?)")
    if not silver_dir.is_dir():
        raise ConfigurationError(f"silver directory {silver_dir} does not exist (run `silver` first?)")
    predicted = {
        p.stem: extraction.read_marker_file(p, language=p.stem)
        for p in sorted(markers_dir.glob("*.tsv"))
    }
    gold = {
        p.stem: silver.read_silver_file(p)
        for p in sorted(silver_dir.glob("*.txt"))
        if p.name != "diagnostics.tsv"
    }
    shared = sorted(
        lang for lang in set(predicted) & set(gold) if config.pipeline.wants_language(lang)
    )
    if not shared:
        raise ConfigurationError("nothing to evaluate: no language has both markers and a silver standard")
    return predicted, gold, shared


def cmd_eval(config: RunConfig) -> int:
    predicted, gold, shared = _load_scorable(config)
    per_language = {
        lang: evaluation.score(predicted[lang].grams(), gold[lang]) for lang in shared
    }
    eval_dir = config.output_dir / "eval"
    diff_dir = eval_dir / "diff"
    diff_dir.mkdir(parents=True, exist_ok=True)
    with open(eval_dir / "results.tsv", "w", encoding="utf-8") as handle:
        handle.write(evaluation.render_results_table(per_language))
    for lang in shared:
        with open(diff_dir / f"{lang}.tsv", "w", encoding="utf-8") as handle:
            handle.write(evaluation.render_diff_table(predicted[lang].grams(), gold[lang]))
    print(evaluation.render_results_table(per_language), end="")
    return 0


def cmd_ablate(config: RunConfig) -> int:
    corpus, annotations, alignments = _load_corpus_inputs(config)
    silver_dir = config.resolved_silver_dir()
    if not silver_dir.is_dir():
        raise ConfigurationError(f"silver directory {silver_dir} does not exist (run `silver` first?)")
    gold = {
        p.stem: silver.read_silver_file(p)
        for p in sorted(silver_dir.glob("*.txt"))
        if config.pipeline.wants_language(p.stem)
    }
    rows = evaluation.run_ablation(
        corpus, annotations, alignments, config.pipeline, gold, jobs=config.effective_jobs()
    )
    ablation_dir = config.output_dir / "ablation"
    ablation_dir.mkdir(parents=True, exist_ok=True)
    with open(ablation_dir / "ablation.tsv", "w", encoding="utf-8") as handle:
        handle.write(evaluation.render_ablation_table(rows))
    print(evaluation.render_ablation_table(rows), end="")
    return 0


def cmd_analyze(config: RunConfig) -> int:
    corpus, annotations, alignments = _load_corpus_inputs(config)
    markers_dir = config.resolved_markers_dir()
    if not markers_dir.is_dir():
        raise ConfigurationError(f"markers directory {markers_dir} does not exist (run `extract` first?)")
    marker_sets = {
        p.stem: extraction.read_marker_file(p, language=p.stem)
        for p in sorted(markers_dir.glob("*.tsv"))
    }
    parallel_nps = projection.build_parallel_np_set(corpus, annotations, alignments)
    languages = config.analysis_languages
    if languages is None:
        languages = sorted(set(marker_sets) & set(corpus.languages()))
    missing = [lang for lang in languages if lang not in marker_sets]
    if missing:
        raise ConfigurationError(f"no marker files for analysis languages: {', '.join(missing)}")
    analysis_dir = config.output_dir / "analysis"
    analysis_dir.mkdir(parents=True, exist_ok=True)
    groups = analysis.group_by_marker_combination(parallel_nps, corpus, marker_sets, languages)
    with open(analysis_dir / "groups.txt", "w", encoding="utf-8") as handle:
        handle.write(analysis.render_group_report(groups, corpus, config.samples_per_group))
    matrix = analysis.build_cooccurrence_matrix(parallel_nps, corpus, languages=None)
    analysis.export_matrix(matrix, analysis_dir)
    return 0


def cmd_project(config: RunConfig) -> int:
    corpus, annotations, alignments = _load_corpus_inputs(config)
    parallel_nps = projection.build_parallel_np_set(corpus, annotations, alignments)
    nps_dir = config.output_dir / "nps"
    nps_dir.mkdir(parents=True, exist_ok=True)
    projection.dump_parallel_nps(parallel_nps, corpus, nps_dir / "parallel_nps.tsv")
    return 0


_COMMANDS = {
    "extract": cmd_extract,
    "silver": cmd_silver,
    "eval": cmd_eval,
    "ablate": cmd_ablate,
    "analyze": cmd_analyze,
    "project": cmd_project,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casemark",
        description="Extract nominal case markers from a verse-parallel corpus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("extract", "run the marker extraction pipeline and write marker files"),
        ("silver", "build silver-standard suffix sets from paradigm files"),
        ("eval", "score marker files against silver standards"),
        ("ablate", "run the ablation grid and write the variant table"),
        ("analyze", "group NPs by marker combination and export the cooccurrence matrix"),
        ("project", "dump the projected parallel NP set"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", required=True, help="path to the YAML run configuration")
        cmd.add_argument("--out", default=None, help="output directory (overrides config)")
        cmd.add_argument("--languages", default=None, help="comma-separated language allowlist")
        cmd.add_argument("--jobs", type=int, default=None, help="worker pool size")
        cmd.add_argument("--theta", type=int, default=None, help="frequency threshold override")
        cmd.add_argument("--phi", type=float, default=None, help="p-value threshold override")
        cmd.add_argument("--chi", type=float, default=None, help="odds-ratio threshold override")
        cmd.add_argument("--suffix-only", dest="suffix_only", action="store_true", default=None)
        cmd.add_argument("--no-suffix-only", dest="suffix_only", action="store_false")
        cmd.add_argument(
            "--ablate",
            default=None,
            choices=ABLATION_VARIANTS,
            help="apply one ablation variant to the pipeline config",
        )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_run_config(args.config)
        config = _apply_overrides(config, args)
        return _COMMANDS[args.command](config)
    except CasemarkError as exc:
        print(f"casemark {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
