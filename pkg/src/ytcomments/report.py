"""Aggregate evaluation reports into comparison tables and optional SVG charts."""
from __future__ import annotations

import json
from pathlib import Path

from .evaluation import REPORT_VERSION, EvaluationReport, ReportVersionError, write_csv
from .models import KINDS

SUMMARY_FORMAT = "ytcomments-summary"
SUMMARY_VERSION = 1

COMPARISON_FIELDS = ["model", "scheme", "cv_score", "f1", "macro_f1", "accuracy", "n_train", "n_test", "vocabulary_size"]
LEARNING_FIELDS = ["model", "scheme", "train_size", "accuracy"]
PER_CLASS_FIELDS = ["model", "scheme", "class", "precision", "recall", "f1", "support"]


def _order(r: EvaluationReport) -> tuple:
    kind = r.model_kind
    return (r.scheme, KINDS.index(kind) if kind in KINDS else len(KINDS), kind,
            json.dumps(r.spec, sort_keys=True))


def load_reports(paths) -> list:
    """Read report JSON files or summary files (which embed their reports)."""
    out = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            files = sorted(p.rglob("report.json"))
            if not files:
                raise FileNotFoundError(f"no report.json under {p}")
            out.extend(load_reports(files))
            continue
        data = json.loads(p.read_text(encoding="utf-8"))
        if data.get("format") == SUMMARY_FORMAT:
            if data.get("format_version") != SUMMARY_VERSION:
                raise ReportVersionError(
                    f"{p}: summary version {data.get('format_version')!r} unsupported (expected {SUMMARY_VERSION})"
                )
            out.extend(EvaluationReport.from_dict(r) for r in data["reports"])
        else:
            try:
                out.append(EvaluationReport.from_dict(data))
            except ReportVersionError as exc:
                raise ReportVersionError(f"{p}: {exc}") from None
    return out


def _f(v) -> str:
    return "" if v is None else f"{v:.6f}"


def comparison_rows(reports: list) -> list:
    return [
        {"model": r.model_kind, "scheme": r.scheme, "cv_score": _f(r.cv_score), "f1": _f(r.f1),
         "macro_f1": _f(r.macro_f1), "accuracy": _f(r.accuracy), "n_train": r.n_train, "n_test": r.n_test,
         "vocabulary_size": r.vocabulary_size}
        for r in reports
    ]


def aggregate(reports: list, out_dir, svg: bool = False) -> dict:
    """Write comparison, learning-curve and per-class CSVs plus a summary; returns file paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    reports = sorted(reports, key=_order)
    paths = {
        "comparison": out_dir / "comparison.csv",
        "learning_curves": out_dir / "learning_curves.csv",
        "per_class": out_dir / "per_class.csv",
        "summary": out_dir / "summary.json",
    }
    write_csv(paths["comparison"], comparison_rows(reports), COMPARISON_FIELDS)
    write_csv(paths["learning_curves"], [row for r in reports for row in r.learning_curve_rows()], LEARNING_FIELDS)
    write_csv(paths["per_class"], [row for r in reports for row in r.per_class_rows()], PER_CLASS_FIELDS)
    summary = {"format": SUMMARY_FORMAT, "format_version": SUMMARY_VERSION, "report_version": REPORT_VERSION,
               "reports": [r.to_dict() for r in reports]}
    paths["summary"].write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if svg:
        paths.update(render_svgs(reports, out_dir))
    return paths


def render_svgs(reports: list, out_dir) -> dict:
    """Bar chart of cv/F1 per model and learning curves per scheme; needs matplotlib."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    paths = {}
    for scheme in sorted({r.scheme for r in reports}):
        rs = [r for r in reports if r.scheme == scheme]
        fig, ax = plt.subplots(figsize=(7, 3.5))
        xs = range(len(rs))
        ax.bar([x - 0.2 for x in xs], [r.cv_score or 0 for r in rs], width=0.4, label="cv")
        ax.bar([x + 0.2 for x in xs], [r.f1 for r in rs], width=0.4, label="f1")
        ax.set_xticks(list(xs), [r.model_kind for r in rs], rotation=20)
        ax.set_ylim(0, 1)
        ax.legend()
        fig.tight_layout()
        p = out_dir / f"comparison_{scheme}.svg"
        fig.savefig(p, format="svg", metadata={"Date": None})
        plt.close(fig)
        paths[f"comparison_{scheme}_svg"] = p

        curves = [r for r in rs if r.learning_curve]
        if curves:
            fig, ax = plt.subplots(figsize=(6, 3.5))
            for r in curves:
                ax.plot([p["size"] for p in r.learning_curve], [p["accuracy"] for p in r.learning_curve],
                        marker="o", label=r.model_kind)
            ax.set_xlabel("training fraction")
            ax.set_ylabel("test accuracy")
            ax.legend()
            fig.tight_layout()
            p = out_dir / f"learning_curves_{scheme}.svg"
            fig.savefig(p, format="svg", metadata={"Date": None})
            plt.close(fig)
            paths[f"learning_curves_{scheme}_svg"] = p
    return paths
