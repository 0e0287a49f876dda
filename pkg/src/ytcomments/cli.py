"""Command-line interface.

Commands: ``fetch``, ``train``, ``tune``, ``predict``, ``report``. Every command
accepts ``--config`` (YAML or JSON), ``--seed``, ``--out-dir``, ``--scheme`` and
``--disable-step``; explicit flags override config-file values.

Exit codes:

==  =====================================================
0   success
1   unexpected error
2   missing or rejected API key
3   I/O failure (unreadable/unwritable file, network)
4   invalid input data, model, vocabulary or report version
5   every grid cell failed
6   vocabulary fingerprint does not match the model
64  command-line usage error
==  =====================================================
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import click
import yaml

from . import __version__
from .corpus import CLASSES, DatasetError, SplitSpec, load_comments, load_dataset, split
from .evaluation import (
    BEST_VALUES,
    DEFAULT_LEARNING_SIZES,
    CVConfig,
    FeatureSetup,
    Grid,
    GridSearchError,
    ReportVersionError,
    evaluate,
    grid_search,
    write_csv,
)
from .features import (
    VectorizerConfig,
    Vectorizer,
    VocabularyFormatError,
    canonical_scheme,
    load_vocabulary,
    save_vocabulary,
)
from .ingest import API_KEY_ENV, CredentialError, FetchConfig, RateLimitError, fetch_comments_report, save_raw
from .models import (
    EstimatorSpec,
    ModelFormatError,
    canonical_kind,
    load_model_with_metadata,
    predict_indices,
    predict_scores,
    save_model,
)
from .preprocess import ALL_STEPS, PipelineConfig, default_pipeline, run_many

logger = logging.getLogger("ytcomments")

EXIT_ERROR = 1
EXIT_AUTH = 2
EXIT_IO = 3
EXIT_SCHEMA = 4
EXIT_GRID = 5
EXIT_FINGERPRINT = 6
EXIT_USAGE = 64


class CliError(click.ClickException):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.exit_code = code


class _Group(click.Group):
    """Usage errors get their own exit code so that 2 stays reserved for credentials."""

    def make_context(self, *args, **kwargs):
        try:
            return super().make_context(*args, **kwargs)
        except click.UsageError as exc:
            exc.exit_code = EXIT_USAGE
            raise

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as exc:
            exc.exit_code = EXIT_USAGE
            raise


# configuration -----------------------------------------------------------


def load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}", EXIT_IO) from None
    try:
        data = yaml.safe_load(text) or {}
    except yaml.YAMLError as exc:
        raise CliError(f"invalid config {path}: {exc}", EXIT_SCHEMA) from None
    if not isinstance(data, dict):
        raise CliError(f"config {path} must be a mapping", EXIT_SCHEMA)
    return data


def _pick(flag, cfg: dict, key: str, default=None):
    if flag is not None and flag != ():
        return flag
    cur = cfg
    for part in key.split("."):
        if not isinstance(cur, dict) or part not in cur:
            return default
        cur = cur[part]
    return default if cur is None else cur


def _parse_value(text: str):
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError:
        return text


def _parse_hp(pairs) -> dict:
    out = {}
    for p in pairs or ():
        if "=" not in p:
            raise click.BadParameter(f"expected KEY=VALUE, got {p!r}", param_hint="--hp")
        k, v = p.split("=", 1)
        out[k.strip()] = _parse_value(v.strip())
    return out


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunConfig:
    """Everything a train/tune run depends on; serialized as the run manifest."""

    command: str
    data: str
    scheme: str = "df_counts"
    seed: int = 0
    out_dir: str = "out"
    model: Optional[str] = None
    hyperparameters: dict = field(default_factory=dict)
    train_fraction: float = 0.8
    stratified: bool = False
    folds: int = 5
    cv: bool = True
    disable_step: list = field(default_factory=list)
    learning_sizes: list = field(default_factory=list)
    grid: dict = field(default_factory=dict)

    def pipeline(self) -> PipelineConfig:
        return default_pipeline().without(*self.disable_step)

    def setup(self) -> FeatureSetup:
        return FeatureSetup(self.pipeline(), VectorizerConfig(scheme=self.scheme))

    def split_spec(self) -> SplitSpec:
        return SplitSpec(train_fraction=self.train_fraction, seed=self.seed, stratified=self.stratified)

    def cv_config(self) -> Optional[CVConfig]:
        return CVConfig(folds=self.folds, seed=self.seed) if self.cv else None

    def manifest(self) -> dict:
        out = {
            "command": self.command, "data": self.data, "scheme": self.scheme, "seed": self.seed,
            "out_dir": self.out_dir, "model": self.model, "hyperparameters": self.hyperparameters,
            "split": {"train_fraction": self.train_fraction, "stratified": self.stratified},
            "cv": {"folds": self.folds, "enabled": self.cv},
            "disable_step": list(self.disable_step), "learning_sizes": list(self.learning_sizes),
            "package_version": __version__,
        }
        if self.grid:
            out["grid"] = self.grid
        try:
            out["data_sha256"] = _sha256(self.data)
        except OSError:
            pass
        return out


def _common(f):
    f = click.option("--disable-step", "disable_step", multiple=True,
                     type=click.Choice(sorted(ALL_STEPS)), help="Skip a preprocessing step (repeatable).")(f)
    f = click.option("--scheme", default=None, help="Feature scheme: df (df_counts) or tfidf.")(f)
    f = click.option("--out-dir", "out_dir", default=None, type=click.Path(file_okay=False),
                     help="Directory for outputs (default: out).")(f)
    f = click.option("--seed", default=None, type=click.IntRange(0, 2 ** 64 - 1), help="Random seed (default 0).")(f)
    f = click.option("--config", "config_path", default=None, type=click.Path(dir_okay=False),
                     help="YAML or JSON config file; flags override its values.")(f)
    return f


def _scheme(value) -> str:
    try:
        return canonical_scheme(str(value))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_SCHEMA) from None


def _steps(flag, cfg) -> list:
    steps = list(flag) if flag else list(_pick(None, cfg, "disable_step", []) or [])
    bad = [s for s in steps if s not in ALL_STEPS]
    if bad:
        raise CliError(f"unknown preprocessing step(s) {bad}; known: {sorted(ALL_STEPS)}", EXIT_SCHEMA)
    return steps


def _out_dir(path: str) -> Path:
    p = Path(path)
    try:
        p.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create output directory {p}: {exc}", EXIT_IO) from None
    return p


def _load_labeled(path: str):
    try:
        return load_dataset(path)
    except FileNotFoundError as exc:
        raise CliError(str(exc), EXIT_IO) from None
    except DatasetError as exc:
        raise CliError(f"invalid dataset: {exc}", EXIT_SCHEMA) from None
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO) from None


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


@click.group(cls=_Group)
@click.version_option(__version__, prog_name="ytcomments")
@click.option("-v", "--verbose", is_flag=True, help="Debug logging on stderr.")
def cli(verbose):
    """Classify YouTube comments into six categories."""
    _setup_logging(verbose)


# fetch -------------------------------------------------------------------


@cli.command()
@_common
@click.option("--video", "videos", multiple=True, help="Video id (repeatable).")
@click.option("--max", "max_comments", type=click.IntRange(1), default=None, help="Comment cap per video (default 100).")
@click.option("--page-size", type=click.IntRange(1, 100), default=None, help="Results per request (default 100).")
@click.option("--api-key", default=None, help=f"API key (default: ${API_KEY_ENV}).")
@click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Output JSONL path.")
def fetch(config_path, seed, out_dir, scheme, disable_step, videos, max_comments, page_size, api_key, out_path):
    """Download top-level comments for one or more videos to JSONL."""
    cfg = load_config(config_path)
    videos = list(_pick(videos, cfg, "video", []) or [])
    if isinstance(videos, str):
        videos = [videos]
    if not videos:
        raise click.UsageError("at least one --video is required")
    key = _pick(api_key, cfg, "api_key") or os.environ.get(API_KEY_ENV)
    if not key:
        raise CliError(f"no API key: pass --api-key or set {API_KEY_ENV}", EXIT_AUTH)
    fc = FetchConfig(api_key=key, video_ids=tuple(videos),
                     max_comments_per_video=int(_pick(max_comments, cfg, "max", 100)),
                     page_size=int(_pick(page_size, cfg, "page_size", 100)))
    try:
        rep = fetch_comments_report(fc)
    except CredentialError as exc:
        raise CliError(f"API key rejected: {exc}", EXIT_AUTH) from None
    except (RateLimitError, OSError) as exc:
        raise CliError(f"fetch failed: {exc}", EXIT_IO) from None
    target = out_path or _pick(None, cfg, "out") or str(_out_dir(_pick(out_dir, cfg, "out_dir", "out")) / "raw.jsonl")
    try:
        save_raw(rep.comments, target)
    except OSError as exc:
        raise CliError(f"cannot write {target}: {exc}", EXIT_IO) from None
    for vid in videos:
        if vid in rep.failures:
            click.echo(f"warning: {vid}: {rep.failures[vid]}", err=True)
        else:
            click.echo(f"{vid}\t{rep.counts.get(vid, 0)}")
    click.echo(f"wrote {len(rep.comments)} comments to {target}")


# train -------------------------------------------------------------------


def _run_config(command, cfg, *, data, seed, out_dir, scheme, disable_step, model=None, hp=None,
                train_fraction=None, stratified=None, folds=None, no_cv=None, sizes=None) -> RunConfig:
    data = _pick(data, cfg, "data")
    if not data:
        raise click.UsageError("--data is required (or set 'data' in the config)")
    try:
        return RunConfig(
            command=command,
            data=str(data),
            scheme=_scheme(_pick(scheme, cfg, "scheme", "df_counts")),
            seed=int(_pick(seed, cfg, "seed", 0)),
            out_dir=str(_pick(out_dir, cfg, "out_dir", "out")),
            model=_pick(model, cfg, "model"),
            hyperparameters={**(_pick(None, cfg, "hyperparameters", {}) or {}), **(hp or {})},
            train_fraction=float(_pick(train_fraction, cfg, "split.train_fraction", 0.8)),
            stratified=bool(_pick(stratified, cfg, "split.stratified", False)),
            folds=int(_pick(folds, cfg, "cv.folds", 5)),
            cv=not no_cv if no_cv else bool(_pick(None, cfg, "cv.enabled", True)),
            disable_step=_steps(disable_step, cfg),
            learning_sizes=[float(s) for s in (sizes if sizes is not None else _pick(None, cfg, "learning_sizes", []))],
            grid=_pick(None, cfg, "grid", {}) or {},
        )
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid configuration: {exc}", EXIT_SCHEMA) from None


def _parse_sizes(text: Optional[str], flag: bool):
    if text:
        return [float(s) for s in text.split(",") if s.strip()]
    if flag:
        return list(DEFAULT_LEARNING_SIZES)
    return None


def _spec_for(rc: RunConfig, spec_path: Optional[str]) -> EstimatorSpec:
    try:
        if spec_path:
            d = json.loads(Path(spec_path).read_text(encoding="utf-8"))
            if rc.model is None:
                rc.model = d["kind"]
            elif canonical_kind(rc.model) != canonical_kind(d["kind"]):
                raise ValueError(f"--model {rc.model} conflicts with spec kind {d['kind']}")
            rc.hyperparameters = {**d.get("hyperparameters", {}), **rc.hyperparameters}
        if not rc.model:
            raise click.UsageError("--model (or --spec) is required")
        kind = canonical_kind(rc.model)
        rc.model = kind
        if not spec_path:
            rc.hyperparameters = {**BEST_VALUES[rc.scheme][kind], **rc.hyperparameters}
        return EstimatorSpec(kind, rc.hyperparameters, rc.seed)
    except OSError as exc:
        raise CliError(f"cannot read spec {spec_path}: {exc}", EXIT_IO) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"invalid model settings: {exc}", EXIT_SCHEMA) from None


@cli.command()
@_common
@click.option("--data", default=None, type=click.Path(dir_okay=False), help="Labeled CSV or JSONL dataset.")
@click.option("--model", default=None, help="linear_svc, logistic_regression, multinomial_nb, random_forest, decision_tree.")
@click.option("--spec", "spec_path", default=None, type=click.Path(dir_okay=False), help="best_spec.json from tune.")
@click.option("--hp", multiple=True, help="Hyperparameter override KEY=VALUE (repeatable).")
@click.option("--train-fraction", type=float, default=None, help="Training share of the split (default 0.8).")
@click.option("--stratified/--no-stratified", default=None, help="Stratify the split by label.")
@click.option("--folds", type=click.IntRange(2), default=None, help="Cross-validation folds (default 5).")
@click.option("--no-cv", is_flag=True, default=None, help="Skip cross-validation.")
@click.option("--learning-curve", "learning_flag", is_flag=True, help="Add a learning curve (sizes 0.2..1.0).")
@click.option("--sizes", default=None, help="Comma-separated learning-curve fractions.")
def train(config_path, seed, out_dir, scheme, disable_step, data, model, spec_path, hp, train_fraction,
          stratified, folds, no_cv, learning_flag, sizes):
    """Split, preprocess, vectorize, cross-validate, fit and evaluate one model."""
    cfg = load_config(config_path)
    rc = _run_config("train", cfg, data=data, seed=seed, out_dir=out_dir, scheme=scheme, disable_step=disable_step,
                     model=model, hp=_parse_hp(hp), train_fraction=train_fraction, stratified=stratified,
                     folds=folds, no_cv=no_cv, sizes=_parse_sizes(sizes, learning_flag))
    spec = _spec_for(rc, spec_path)
    dataset = _load_labeled(rc.data)
    try:
        train_set, test_set = split(dataset, rc.split_spec())
        result = evaluate(spec, train_set, test_set, rc.setup(), rc.cv_config(), rc.learning_sizes or None, rc.seed)
    except ValueError as exc:
        raise CliError(f"training failed: {exc}", EXIT_SCHEMA) from None
    out = _out_dir(rc.out_dir)
    rep = result.report
    try:
        save_model(result.model, out / "model.json",
                   metadata={"pipeline": rc.pipeline().to_dict(), "scheme": rc.scheme, "package_version": __version__})
        save_vocabulary(result.vectorizer.vocabulary, out / "vocabulary.json")
        rep.save_json(out / "report.json")
        write_csv(out / "per_class.csv", rep.per_class_rows(),
                  ["model", "scheme", "class", "precision", "recall", "f1", "support"])
        if rep.learning_curve:
            write_csv(out / "learning_curve.csv", rep.learning_curve_rows(), ["model", "scheme", "train_size", "accuracy"])
        _write_json(out / "run_manifest.json", rc.manifest())
    except OSError as exc:
        raise CliError(f"cannot write outputs to {out}: {exc}", EXIT_IO) from None
    for w in rep.warnings:
        click.echo(f"warning: {w}", err=True)
    cv = "n/a" if rep.cv_score is None else f"{rep.cv_score:.4f}"
    click.echo(f"{spec.kind}\tscheme={rc.scheme}\tcv_score={cv}\tf1={rep.f1:.4f}\tmacro_f1={rep.macro_f1:.4f}"
               f"\tfeatures={rep.vocabulary_size}\tout={out}")


# tune --------------------------------------------------------------------


@cli.command()
@_common
@click.option("--data", default=None, type=click.Path(dir_okay=False), help="Labeled CSV or JSONL dataset.")
@click.option("--model", default=None, help="Model kind whose grid to search.")
@click.option("--train-fraction", type=float, default=None)
@click.option("--stratified/--no-stratified", default=None)
@click.option("--folds", type=click.IntRange(2), default=None)
@click.option("--n-jobs", type=click.IntRange(1), default=1, help="Grid cells evaluated in parallel.")
def tune(config_path, seed, out_dir, scheme, disable_step, data, model, train_fraction, stratified, folds, n_jobs):
    """Grid-search one model kind with cross-validation on the training split."""
    cfg = load_config(config_path)
    rc = _run_config("tune", cfg, data=data, seed=seed, out_dir=out_dir, scheme=scheme, disable_step=disable_step,
                     model=model, train_fraction=train_fraction, stratified=stratified, folds=folds)
    if not rc.model:
        raise click.UsageError("--model is required")
    try:
        kind = canonical_kind(rc.model)
        rc.model = kind
        grid = Grid(kind, {k: list(v) for k, v in rc.grid.items()}) if rc.grid else Grid.default(kind)
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid grid: {exc}", EXIT_SCHEMA) from None
    dataset = _load_labeled(rc.data)
    train_set, _ = split(dataset, rc.split_spec())
    try:
        result = grid_search(grid, train_set, CVConfig(folds=rc.folds, seed=rc.seed), rc.setup(), rc.seed,
                             n_jobs=n_jobs)
    except GridSearchError as exc:
        raise CliError(str(exc), EXIT_GRID) from None
    except ValueError as exc:
        raise CliError(f"tuning failed: {exc}", EXIT_SCHEMA) from None
    out = _out_dir(rc.out_dir)
    rows = result.rows()
    try:
        write_csv(out / "grid_results.csv", rows, _grid_fields(rows))
        best = {**result.best.to_dict(), "scheme": rc.scheme, "cv_score": result.best_score}
        _write_json(out / "best_spec.json", best)
        _write_json(out / "run_manifest.json", rc.manifest())
    except OSError as exc:
        raise CliError(f"cannot write outputs to {out}: {exc}", EXIT_IO) from None
    skipped = sum(1 for c in result.cells if c.status == "skipped")
    failed = sum(1 for c in result.cells if c.status == "failed")
    click.echo(f"{kind}\tscheme={rc.scheme}\tcells={len(rows)}\tskipped={skipped}\tfailed={failed}"
               f"\tbest={json.dumps(result.best.hyperparameters, sort_keys=True)}\tcv_score={result.best_score:.4f}")


def _grid_fields(rows: list) -> list:
    fields: list = []
    for r in rows:
        for k in r:
            if k not in fields and k != "reason":
                fields.append(k)
    return fields + ["reason"]


# predict -----------------------------------------------------------------


@cli.command()
@_common
@click.option("--model-file", default=None, type=click.Path(dir_okay=False), help="model.json written by train.")
@click.option("--vocabulary", "vocab_path", default=None, type=click.Path(dir_okay=False),
              help="vocabulary.json (default: next to the model file).")
@click.option("--input", "input_path", default=None, type=click.Path(dir_okay=False),
              help="Comments to classify (CSV with id,text or JSONL).")
def predict(config_path, seed, out_dir, scheme, disable_step, model_file, vocab_path, input_path):
    """Label unlabeled comments and write one file per category."""
    cfg = load_config(config_path)
    model_file = _pick(model_file, cfg, "model_file")
    input_path = _pick(input_path, cfg, "input")
    if not model_file or not input_path:
        raise click.UsageError("--model-file and --input are required")
    vocab_path = _pick(vocab_path, cfg, "vocabulary") or str(Path(model_file).with_name("vocabulary.json"))
    try:
        model, meta = load_model_with_metadata(model_file)
        vocab = load_vocabulary(vocab_path)
    except OSError as exc:
        raise CliError(f"cannot read model or vocabulary: {exc}", EXIT_IO) from None
    except (ModelFormatError, VocabularyFormatError, ValueError) as exc:
        raise CliError(str(exc), EXIT_SCHEMA) from None
    if vocab.fingerprint() != model.vectorizer_fingerprint:
        raise CliError("vocabulary fingerprint does not match the model; use the vocabulary.json written with it",
                       EXIT_FINGERPRINT)
    if disable_step:
        click.echo("warning: --disable-step ignored; predict uses the preprocessing recorded in the model", err=True)
    if scheme and _scheme(scheme) != vocab.config.scheme:
        click.echo(f"warning: --scheme ignored; the model was trained with {vocab.config.scheme}", err=True)
    try:
        pipeline = PipelineConfig.from_dict(meta["pipeline"]) if "pipeline" in meta else default_pipeline()
    except ValueError as exc:
        raise CliError(str(exc), EXIT_SCHEMA) from None
    try:
        comments = load_comments(input_path)
    except FileNotFoundError as exc:
        raise CliError(str(exc), EXIT_IO) from None
    except DatasetError as exc:
        raise CliError(f"invalid input: {exc}", EXIT_SCHEMA) from None

    labels: list = []
    scores: list = []
    if comments:
        X = Vectorizer.from_vocabulary(vocab).transform(run_many(comments, pipeline))
        S = predict_scores(model, X)
        idx = predict_indices(model, X)
        labels = [model.classes[i] for i in idx]
        scores = [float(S[r, i]) for r, i in enumerate(idx)]

    out = _out_dir(_pick(out_dir, cfg, "out_dir", "out"))
    by_class = out / "by_class"
    try:
        by_class.mkdir(exist_ok=True)
        rows = [{"id": c.id, "text": c.text, "predicted_label": str(lab), "score": repr(s)}
                for c, lab, s in zip(comments, labels, scores)]
        write_csv(out / "predictions.csv", rows, ["id", "text", "predicted_label", "score"])
        counts = {}
        for cls in CLASSES:
            members = [r for r in rows if r["predicted_label"] == cls.value]
            counts[cls.value] = len(members)
            with open(by_class / f"{cls.value}.jsonl", "w", encoding="utf-8") as fh:
                for r in members:
                    fh.write(json.dumps({"id": r["id"], "text": r["text"], "score": float(r["score"])},
                                        ensure_ascii=False) + "\n")
    except OSError as exc:
        raise CliError(f"cannot write outputs to {out}: {exc}", EXIT_IO) from None
    for cls, n in counts.items():
        click.echo(f"{cls}\t{n}")


# report ------------------------------------------------------------------


@cli.command()
@_common
@click.argument("reports", nargs=-1, type=click.Path(exists=False))
@click.option("--svg", is_flag=True, default=None, help="Also render SVG charts (needs matplotlib).")
def report(config_path, seed, out_dir, scheme, disable_step, reports, svg):
    """Aggregate report.json files (or directories / summary.json) into comparison tables."""
    from .report import aggregate, load_reports

    cfg = load_config(config_path)
    paths = list(reports) or list(_pick(None, cfg, "reports", []) or [])
    if not paths:
        raise click.UsageError("pass one or more report files or directories")
    try:
        loaded = load_reports(paths)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read reports: {exc}", EXIT_IO) from None
    except (ReportVersionError, KeyError, TypeError) as exc:
        raise CliError(f"incompatible report: {exc}", EXIT_SCHEMA) from None
    if scheme:
        wanted = _scheme(scheme)
        loaded = [r for r in loaded if r.scheme == wanted]
    try:
        written = aggregate(loaded, _out_dir(_pick(out_dir, cfg, "out_dir", "out")),
                            svg=bool(_pick(svg, cfg, "svg", False)))
    except ImportError as exc:
        raise CliError(f"SVG output needs matplotlib: {exc}", EXIT_ERROR) from None
    except OSError as exc:
        raise CliError(f"cannot write report outputs: {exc}", EXIT_IO) from None
    click.echo("model\tscheme\tcv_score\tf1")
    for r in sorted(loaded, key=lambda r: (r.scheme, r.model_kind)):
        cv = "" if r.cv_score is None else f"{r.cv_score:.4f}"
        click.echo(f"{r.model_kind}\t{r.scheme}\t{cv}\t{r.f1:.4f}")
    click.echo(f"wrote {', '.join(str(p) for p in written.values())}", err=True)


def main(argv=None):
    return cli.main(args=argv, prog_name="ytcomments")


if __name__ == "__main__":  # pragma: no cover
    main()
