"""Evaluation report writers: JSON + TSV tables with matplotlib figures.

Everything lands in one output directory so a run's numbers and plots
stay together.
"""

from __future__ import annotations

import json
import os

import matplotlib

matplotlib.use("Agg")  # file output only; no display in batch runs
import matplotlib.pyplot as plt

from .pipeline import EvaluationOutcome

REPORT_JSON = "report.json"
PER_SENTENCE_TSV = "per_sentence.tsv"
STAGE_TSV = "stages.tsv"
FIG_FUNNEL = "stage_funnel.png"
FIG_CANDIDATES = "candidates_hist.png"
FIG_RANKS = "target_ranks.png"


def _clean_field(text: str) -> str:
    return text.replace("\t", " ").replace("\n", " ")


def write_report_json(outcome: EvaluationOutcome, path: str) -> None:
    data = {
        "stages": outcome.stage.to_dict(),
        "evaluation": outcome.report.to_dict(),
    }
    if outcome.fuzzy_report is not None and outcome.fuzzy_stage is not None:
        data["fuzzy_stages"] = outcome.fuzzy_stage.to_dict()
        data["fuzzy_evaluation"] = outcome.fuzzy_report.to_dict()
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_stage_tsv(outcome: EvaluationOutcome, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("stage\tcandidates\ttargets_retained\n")
        for name, candidates, targets in outcome.stage.rows():
            fh.write(f"{name}\t{candidates}\t{targets}\n")


def write_per_sentence_tsv(outcome: EvaluationOutcome, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(
            "sentence\ttarget\ttarget_rank\tn_candidates\tpredicted\t"
            "retained_extraction\tretained_filtering\tretained_ranking\n"
        )
        for row in outcome.sentences:
            predicted = "|".join(
                rc.phrase.display for rc in row.detection.result.pets
            )
            rank = "" if row.target_rank is None else str(row.target_rank)
            fh.write(
                "\t".join(
                    [
                        _clean_field(row.detection.raw),
                        _clean_field(row.target),
                        rank,
                        str(len(row.detection.quality)),
                        _clean_field(predicted),
                        str(int(row.retained_extraction)),
                        str(int(row.retained_filtering)),
                        str(int(row.retained_ranking)),
                    ]
                )
                + "\n"
            )


def plot_stage_funnel(outcome: EvaluationOutcome, path: str) -> None:
    rows = outcome.stage.rows()
    names = [name for name, _, _ in rows]
    candidates = [c for _, c, _ in rows]
    targets = [t for _, _, t in rows]
    fig, (ax_c, ax_t) = plt.subplots(1, 2, figsize=(9, 3.5))
    ax_c.bar(names, candidates, color="#4878cf")
    ax_c.set_title("Candidates per stage")
    ax_c.set_ylabel("count")
    ax_t.bar(names, targets, color="#6acc65")
    ax_t.set_title("Targets retained per stage")
    for ax in (ax_c, ax_t):
        ax.tick_params(axis="x", rotation=30)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_candidate_histogram(outcome: EvaluationOutcome, path: str) -> None:
    per_sentence = [len(row.detection.quality) for row in outcome.sentences]
    fig, ax = plt.subplots(figsize=(6, 3.5))
    upper = max(per_sentence, default=0) + 1
    ax.hist(per_sentence, bins=range(0, upper + 1), color="#4878cf", edgecolor="white")
    ax.set_xlabel("candidates after filtering")
    ax.set_ylabel("sentences")
    ax.set_title(
        f"Candidates per sentence (mean {outcome.report.avg_candidates:.2f})"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_target_ranks(outcome: EvaluationOutcome, path: str) -> None:
    top_n = outcome.report.top_n
    buckets = {f"rank {r}": 0 for r in range(1, top_n + 1)}
    buckets[f"rank > {top_n}"] = 0
    buckets["missed"] = 0
    for row in outcome.sentences:
        if row.target_rank is None:
            buckets["missed"] += 1
        elif row.target_rank <= top_n:
            buckets[f"rank {row.target_rank}"] += 1
        else:
            buckets[f"rank > {top_n}"] += 1
    fig, ax = plt.subplots(figsize=(6, 3.5))
    ax.bar(list(buckets), list(buckets.values()), color="#d65f5f")
    ax.set_ylabel("sentences")
    ax.set_title(
        f"Target rank distribution (success {outcome.report.success_rate:.1%})"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def write_report(outcome: EvaluationOutcome, out_dir: str) -> list[str]:
    """Write all report artifacts into `out_dir`; returns the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        REPORT_JSON: write_report_json,
        STAGE_TSV: write_stage_tsv,
        PER_SENTENCE_TSV: write_per_sentence_tsv,
        FIG_FUNNEL: plot_stage_funnel,
        FIG_CANDIDATES: plot_candidate_histogram,
        FIG_RANKS: plot_target_ranks,
    }
    written = []
    for name, writer in paths.items():
        target = os.path.join(out_dir, name)
        writer(outcome, target)
        written.append(target)
    return written
