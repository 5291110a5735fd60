"""Aggregation over finished logs: event curves, histograms, cohort stats.

Event indices are 1-based everywhere a human sees them (CSV, tuples from
interleaved_curve) to match how the curves are usually plotted.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from brainb.logkit import LogRecord, Relation, integer_mean, parse_log_file


@dataclass(frozen=True, slots=True)
class Cohort:
    records: tuple[LogRecord, ...]
    label: str = ""

    def __post_init__(self) -> None:
        if not self.records:
            raise ValueError("cohort needs at least one record")


def load_cohort(paths: Sequence[str | Path], label: str = "") -> Cohort:
    return Cohort(records=tuple(parse_log_file(p) for p in paths), label=label)


def interleaved_curve(record: LogRecord) -> tuple[tuple[int, int, str], ...]:
    """Finding and losing events in session order: F, L, F, L, ...

    The first finding event precedes the first losing event because the
    ungated first loss is never recorded. Indices are 1-based; when one
    sequence runs out the other continues alone.
    """
    points: list[tuple[int, int, str]] = []
    f, l = record.lost2found, record.found2lost
    for i in range(max(len(f), len(l))):
        if i < len(f):
            points.append((len(points) + 1, f[i], "F"))
        if i < len(l):
            points.append((len(points) + 1, l[i], "L"))
    return tuple(points)


@dataclass(frozen=True, slots=True)
class AveragedCurves:
    """Per-event-index means across a cohort, with how many records reach
    each index (tail means rest on very few records)."""

    f_mean: tuple[float, ...]
    l_mean: tuple[float, ...]
    f_support: tuple[int, ...]
    l_support: tuple[int, ...]


def _column_means(rows: Iterable[tuple[int, ...]]) -> tuple[tuple[float, ...], tuple[int, ...]]:
    sums: list[int] = []
    counts: list[int] = []
    for row in rows:
        for i, v in enumerate(row):
            if i == len(sums):
                sums.append(0)
                counts.append(0)
            sums[i] += v
            counts[i] += 1
    return tuple(s / c for s, c in zip(sums, counts)), tuple(counts)


def averaged_curves(cohort: Cohort) -> AveragedCurves:
    f_mean, f_support = _column_means(r.lost2found for r in cohort.records)
    l_mean, l_support = _column_means(r.found2lost for r in cohort.records)
    return AveragedCurves(f_mean=f_mean, l_mean=l_mean, f_support=f_support, l_support=l_support)


def size_histogram(cohort: Cohort) -> dict[int, int]:
    """Total recorded event count (both directions) per record."""
    hist: dict[int, int] = {}
    for r in cohort.records:
        n = len(r.lost2found) + len(r.found2lost)
        hist[n] = hist.get(n, 0) + 1
    return hist


def cohort_stats(cohort: Cohort) -> tuple[float, float, int]:
    n = len(cohort.records)
    mean_kb = sum(r.kilobytes for r in cohort.records) / n
    mean_noc = sum(r.noc for r in cohort.records) / n
    return mean_kb, mean_noc, n


def hypothesis_flag(record: LogRecord) -> Relation:
    """Recomputed from the sequences, ignoring the printed means."""
    if integer_mean(record.lost2found) < integer_mean(record.found2lost):
        return Relation.LESS
    return Relation.NOT_LESS


def export_curves_csv(curves: AveragedCurves, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["index", "f_mean", "f_support", "l_mean", "l_support"])
        for i in range(max(len(curves.f_mean), len(curves.l_mean))):
            w.writerow(
                [
                    i + 1,
                    f"{curves.f_mean[i]:.6g}" if i < len(curves.f_mean) else "",
                    curves.f_support[i] if i < len(curves.f_support) else "",
                    f"{curves.l_mean[i]:.6g}" if i < len(curves.l_mean) else "",
                    curves.l_support[i] if i < len(curves.l_support) else "",
                ]
            )


def export_histogram_csv(hist: dict[int, int], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["events", "records"])
        for n in sorted(hist):
            w.writerow([n, hist[n]])


def export_cohort_csv(cohort: Cohort, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(
            [
                "index",
                "kilobytes",
                "noc",
                "nop",
                "time_ticks",
                "n_lost",
                "n_found",
                "n_lost2found",
                "n_found2lost",
                "mean_lost2found",
                "mean_found2lost",
                "relation",
            ]
        )
        for i, r in enumerate(cohort.records, start=1):
            w.writerow(
                [
                    i,
                    f"{r.kilobytes:.6g}",
                    r.noc,
                    r.nop,
                    r.time_ticks,
                    len(r.lost),
                    len(r.found),
                    len(r.lost2found),
                    len(r.found2lost),
                    r.mean_l2f,
                    r.mean_f2l,
                    r.relation.value,
                ]
            )
