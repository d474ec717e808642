"""Evaluation harness: MRR and Recall@N over ranked recommendations.

A datapoint is kept only when at least one of its ground-truth papers is
cited somewhere in the database, since no ranking could ever surface a
paper the database has never seen.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .config import AppConfig, provider_from_config
from .database import EvidenceDatabase
from .recommend import run_query

DEFAULT_N_VALUES = (1, 3, 5, 10)


@dataclass(frozen=True)
class EvalDatapoint:
    query: str
    ground_truth_paper_ids: frozenset[str]

    def __post_init__(self):
        if not isinstance(self.ground_truth_paper_ids, frozenset):
            object.__setattr__(
                self, "ground_truth_paper_ids", frozenset(self.ground_truth_paper_ids)
            )
        if not self.ground_truth_paper_ids:
            raise ValueError("datapoint needs at least one ground-truth paper")


@dataclass
class MetricsReport:
    mrr: float
    recall_at: dict[int, float]
    n_queries: int
    per_query: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "mrr": self.mrr,
            "recall_at": {str(n): v for n, v in sorted(self.recall_at.items())},
            "n_queries": self.n_queries,
            "per_query": self.per_query,
        }


def load_eval_file(path) -> list[EvalDatapoint]:
    """Read line-delimited {query, ground_truth_paper_ids} records."""
    datapoints = []
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                record = json.loads(line)
                datapoints.append(
                    EvalDatapoint(
                        query=record["query"],
                        ground_truth_paper_ids=frozenset(
                            str(p) for p in record["ground_truth_paper_ids"]
                        ),
                    )
                )
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{line_no}: bad eval record: {exc}") from exc
    return datapoints


def filter_eval_candidates(
    candidates: Iterable[EvalDatapoint], db: EvidenceDatabase
) -> list[EvalDatapoint]:
    """Keep datapoints whose ground truth intersects the database's papers."""
    cited = db.cited_paper_ids()
    return [d for d in candidates if d.ground_truth_paper_ids & cited]


def reciprocal_rank(ranked_paper_ids: Sequence[str], ground_truth: frozenset[str]) -> float:
    """1/rank of the first ground-truth hit; 0 when nothing hits."""
    for rank, paper_id in enumerate(ranked_paper_ids, start=1):
        if paper_id in ground_truth:
            return 1.0 / rank
    return 0.0


def evaluate(
    db: EvidenceDatabase,
    config: AppConfig,
    eval_set: Sequence[EvalDatapoint],
    n_values: Sequence[int] = DEFAULT_N_VALUES,
    provider=None,
) -> MetricsReport:
    """Run every query through the pipeline and score the full rankings."""
    if not eval_set:
        raise ValueError("empty evaluation set")
    if provider is None:
        provider = provider_from_config(config)

    rr_sum = 0.0
    hit_counts = {n: 0 for n in n_values}
    per_query = []
    for datapoint in eval_set:
        result = run_query(db, config, datapoint.query, k=-1, provider=provider)
        ranked_ids = [rec.paper.paper_id for rec in result.recommendations]
        first_hit = None
        for rank, paper_id in enumerate(ranked_ids, start=1):
            if paper_id in datapoint.ground_truth_paper_ids:
                first_hit = rank
                break
        rr = 1.0 / first_hit if first_hit else 0.0
        rr_sum += rr
        for n in n_values:
            if first_hit is not None and first_hit <= n:
                hit_counts[n] += 1
        per_query.append(
            {
                "query": datapoint.query,
                "route": result.ranked.route_label(),
                "first_hit_rank": first_hit,
                "reciprocal_rank": rr,
            }
        )

    n_queries = len(eval_set)
    return MetricsReport(
        mrr=rr_sum / n_queries,
        recall_at={n: hit_counts[n] / n_queries for n in n_values},
        n_queries=n_queries,
        per_query=per_query,
    )


def format_report(report: MetricsReport) -> str:
    """Human-readable metrics table."""
    lines = [
        f"queries: {report.n_queries}",
        f"MRR:     {report.mrr:.5f}",
    ]
    for n, value in sorted(report.recall_at.items()):
        lines.append(f"R@{n}:".ljust(9) + f"{value:.3f}")
    return "\n".join(lines)
