from __future__ import annotations

import csv

import pytest

from brainb.analysis import (
    AveragedCurves,
    Cohort,
    averaged_curves,
    cohort_stats,
    export_cohort_csv,
    export_curves_csv,
    export_histogram_csv,
    hypothesis_flag,
    interleaved_curve,
    load_cohort,
    size_histogram,
)
from brainb.engine import EventLedger
from brainb.logkit import Relation, build_record, write_log_file

import reference_values as rv


def record_for(l2f, f2l, lost=(), found=(), noc=10, nop=0, kb_time=6000):
    ledger = EventLedger(
        lost=list(lost) or list(f2l),
        found=list(found) or list(l2f),
        lost2found=list(l2f),
        found2lost=list(f2l),
    )
    return build_record(
        ledger, time_ticks=kb_time, bps_final=1000, noc=noc, nop=nop, ticks_per_second=10
    )


def test_cohort_rejects_empty():
    with pytest.raises(ValueError):
        Cohort(records=())


def test_interleaved_curve_alternates():
    rec = record_for(l2f=(10, 30, 50), f2l=(20, 40))
    assert interleaved_curve(rec) == (
        (1, 10, "F"),
        (2, 20, "L"),
        (3, 30, "F"),
        (4, 40, "L"),
        (5, 50, "F"),
    )


def test_interleaved_curve_reference(reference_record):
    curve = interleaved_curve(reference_record)
    assert len(curve) == len(rv.LOST2FOUND) + len(rv.FOUND2LOST)
    assert curve[0] == (1, rv.LOST2FOUND[0], "F")
    assert curve[1] == (2, rv.FOUND2LOST[0], "L")
    assert [p[0] for p in curve] == list(range(1, len(curve) + 1))


def test_averaged_curves_against_brute_force():
    recs = [
        record_for(l2f=(10, 20, 30), f2l=(5,)),
        record_for(l2f=(40, 60), f2l=(15, 25)),
        record_for(l2f=(70,), f2l=(35, 45, 55)),
    ]
    curves = averaged_curves(Cohort(records=tuple(recs)))
    # column means computed by hand over the rows above
    assert curves.f_mean == ((10 + 40 + 70) / 3, (20 + 60) / 2, 30.0)
    assert curves.f_support == (3, 2, 1)
    assert curves.l_mean == ((5 + 15 + 35) / 3, (25 + 45) / 2, 55.0)
    assert curves.l_support == (3, 2, 1)


def test_size_histogram():
    recs = (
        record_for(l2f=(1, 2), f2l=(3, 4)),       # 4 events
        record_for(l2f=(1,), f2l=(2, 3, 4)),      # 4 events
        record_for(l2f=(1,), f2l=(2,)),           # 2 events
    )
    assert size_histogram(Cohort(records=recs)) == {4: 2, 2: 1}


def test_cohort_stats(reference_record):
    mean_kb, mean_noc, n = cohort_stats(Cohort(records=(reference_record, reference_record)))
    assert n == 2
    assert mean_kb == pytest.approx(reference_record.kilobytes)
    assert mean_noc == pytest.approx(rv.NOC)


def test_hypothesis_flag_recomputes():
    import dataclasses

    rec = record_for(l2f=(10, 10), f2l=(90, 90))
    assert hypothesis_flag(rec) is Relation.LESS
    # printed means lie; the flag must not trust them
    lying = dataclasses.replace(rec, mean_l2f=99999)
    assert hypothesis_flag(lying) is Relation.LESS
    assert hypothesis_flag(record_for(l2f=(90,), f2l=(10,))) is Relation.NOT_LESS


def test_load_cohort_round_trip(tmp_path, reference_record):
    paths = []
    for i in range(3):
        p = tmp_path / f"r{i}.log"
        write_log_file(reference_record, p)
        paths.append(p)
    cohort = load_cohort(paths, label="ref")
    assert len(cohort.records) == 3
    assert cohort.label == "ref"
    assert cohort.records[0] == reference_record


def test_export_curves_csv(tmp_path):
    curves = AveragedCurves(
        f_mean=(10.0, 20.0), l_mean=(5.0,), f_support=(2, 1), l_support=(2,)
    )
    path = tmp_path / "curves.csv"
    export_curves_csv(curves, path)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["index", "f_mean", "f_support", "l_mean", "l_support"]
    assert rows[1] == ["1", "10", "2", "5", "2"]
    assert rows[2] == ["2", "20", "1", "", ""]


def test_export_histogram_csv(tmp_path):
    path = tmp_path / "hist.csv"
    export_histogram_csv({8: 2, 2: 5}, path)
    rows = list(csv.reader(path.open()))
    assert rows == [["events", "records"], ["2", "5"], ["8", "2"]]


def test_export_cohort_csv(tmp_path, reference_record):
    path = tmp_path / "cohort.csv"
    export_cohort_csv(Cohort(records=(reference_record,)), path)
    rows = list(csv.reader(path.open()))
    header, row = rows[0], rows[1]
    data = dict(zip(header, row))
    assert data["kilobytes"] == "6.37927"
    assert data["noc"] == str(rv.NOC)
    assert data["n_lost"] == str(len(rv.LOST))
    assert data["n_found"] == str(len(rv.FOUND))
    assert data["relation"] == "<"
