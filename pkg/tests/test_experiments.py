import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mobigossip.errors import InvalidParams, TraceIncomplete
from mobigossip.experiments import (
    ExperimentSpec,
    audit_phases,
    csv_rows,
    f_tau,
    fit_power_law,
    rows_to_csv,
    run_experiment,
    run_trials,
    summarize,
)
from mobigossip.generators import gen_family, gen_gstar
from mobigossip.metrics import vertex_expansion
from mobigossip.sim import ProtocolSpec, TrialRecord, run_trial
from mobigossip.suites import connected_graphs


def test_fit_sqrt():
    ns = [256, 1024, 4096, 16384]
    assert fit_power_law(ns, [math.sqrt(n) for n in ns]) == pytest.approx(0.5, abs=1e-9)


def test_fit_constant():
    assert fit_power_law([256, 1024, 4096], [7, 7, 7]) == pytest.approx(0.0, abs=1e-12)


def test_fit_nlogn():
    ns = [256, 1024, 4096]
    slope = fit_power_law(ns, [n * math.log(n) for n in ns])
    assert 1.0 < slope < 1.2


@settings(max_examples=50)
@given(st.lists(st.floats(1, 1e4), min_size=3, max_size=3), st.floats(1e-3, 1e3))
def test_fit_scale_invariant(medians, c):
    ns = [100, 400, 1600]
    assert fit_power_law(ns, [c * m for m in medians]) == pytest.approx(fit_power_law(ns, medians), abs=1e-9)


@pytest.mark.parametrize("sizes,meds", [([1], [1]), ([4, 4], [1, 2]), ([1, 2], [0, 1]), ([1, 2], [1])])
def test_fit_rejects_degenerate(sizes, meds):
    with pytest.raises(InvalidParams):
        fit_power_law(sizes, meds)


def test_f_tau():
    assert f_tau(2, 16, 1024) == pytest.approx(80.0)
    assert f_tau(1, 9, 8) == pytest.approx(27.0)


def test_audit_hand_trajectory():
    rep = audit_phases([1, 2, 4, 8], tau=1, Delta=7, n=8, alpha=1)
    assert rep.flags == (True, True, True) and rep.fraction_good == 1.0
    rep = audit_phases([1, 1, 2], tau=1, Delta=1, n=2, alpha=1)
    assert rep.flags == (False, True)


def test_audit_upper_half_uses_uninformed():
    # n = 10: 6 -> 6 stalls (bad), 6 -> 10 finishes (good)
    rep = audit_phases([1, 2, 4, 6, 6, 10], tau=1, Delta=9, n=10, alpha=Fraction(1, 2))
    assert rep.flags == (True, True, True, False, True)


def test_audit_pads_finished_run():
    rep = audit_phases([1, 2, 4], tau=3, Delta=3, n=4, alpha=1)
    assert len(rep.flags) == 1 and rep.flags[0]


def test_audit_drops_partial_phase_of_unfinished_run():
    rep = audit_phases([1, 2, 3, 4, 5], tau=3, Delta=3, n=9, alpha=1)
    assert len(rep.flags) == 1


def test_audit_trace_too_short():
    with pytest.raises(TraceIncomplete):
        audit_phases([1, 2], tau=2, Delta=3, n=9, alpha=1)


def test_audit_accepts_records_and_trace_lines():
    g = gen_gstar(1, 9)
    rec = run_trial(g, 0, ProtocolSpec("ppush"), 0, trace=True)
    a = audit_phases(rec, 1, g.Delta, g.n, Fraction(1, 5))
    b = audit_phases(rec.trace, 1, g.Delta, g.n, Fraction(1, 5))
    assert a == b


def test_audit_matchgreedy_all_good_small():
    for g in connected_graphs(6):
        alpha = vertex_expansion(g).value
        rec = run_trial(g, 0, ProtocolSpec("matchgreedy"), 0)
        for tau in (1, 2, 3):
            assert all(audit_phases(rec, tau, g.Delta, g.n, alpha).flags)


def test_experiment_p2_ppush():
    exp = ExperimentSpec("path", (2,), ProtocolSpec("ppush"), trials=10)
    (pt,) = run_experiment(exp)
    assert [r.rounds for r in pt.records] == [1] * 10
    assert pt.summary["median"] == 1 and pt.summary["timeouts"] == 0


def test_experiment_seeds_and_determinism():
    exp = ExperimentSpec("gstar", (8, 16), ProtocolSpec("pushpull"), trials=6, seed_base=40, delta=2)
    a, b = run_experiment(exp), run_experiment(exp)
    assert [r.seed for r in a[0].records] == list(range(40, 46))
    text = lambda pts: rows_to_csv([row for p in pts for row in csv_rows(p.family, exp.tau, exp.protocol, p.records)])
    assert text(a) == text(b)
    assert [p.n for p in a] == [10, 18]


def test_parallel_matches_sequential():
    g = gen_family("gnp", 40, p=0.2, seed=3)
    seq = run_trials(g, ProtocolSpec("ppush"), 6, 5, tau=2, dynamics="permute")
    par = run_trials(g, ProtocolSpec("ppush"), 6, 5, tau=2, dynamics="permute", jobs=2)
    assert [r.counts for r in seq] == [r.counts for r in par]


def test_summary_counts_timeouts_at_max_rounds():
    recs = [TrialRecord(0, 5, True, [], 4), TrialRecord(1, 9, False, [], 4), TrialRecord(2, 7, True, [], 4)]
    s = summarize(recs)
    assert s["median"] == 7 and s["max"] == 9 and s["timeouts"] == 1
    assert s["p90"] == pytest.approx(np.percentile([5, 9, 7], 90))


def test_csv_header_and_row():
    rec = TrialRecord(3, 4, True, [1, 2, 3, 4, 5], 5)
    text = rows_to_csv(csv_rows("cycle", 2, ProtocolSpec("ppush"), [rec]))
    assert text == "family,n,tau,protocol,b,resolution,seed,rounds,completed\ncycle,5,2,ppush,1,random,3,4,1\n"


def test_experiment_spec_validation():
    with pytest.raises(InvalidParams):
        ExperimentSpec("path", (), ProtocolSpec("push"))
    with pytest.raises(InvalidParams):
        ExperimentSpec("path", (3,), ProtocolSpec("push"), trials=0)
