import json

import pytest

import hacomp


def test_worked_example_counts():
    b = hacomp.worked_example()
    n = b["n_instances"]
    assert n == 25
    assert round(b["cp"] * n) == 13
    assert round(b["cp_inh"] * n) == 8
    assert round(b["ce"] * n) == 4
    assert b["ctp"] is True
    assert b["t_star"] == "AI"


def test_breakdown_tie_and_override():
    b = hacomp.breakdown([(1.0, 0.0, 0.5), (0.0, 1.0, 0.5)])
    assert b["t_star"] == "AI"
    assert b["ctp"] is False
    assert b["cp_inh"] + b["cp_coll"] == pytest.approx(b["cp"])
    h = hacomp.breakdown([(1.0, 0.0, 0.5), (0.0, 1.0, 0.5)], t_star="H")
    assert h["t_star"] == "H"


def test_errors_map_to_value_error():
    with pytest.raises(ValueError):
        hacomp.breakdown([(1.0, 0.0, 0.5)], t_star="robot")
    with pytest.raises(hacomp.Error):
        hacomp.sample_size(d=-1.0)


def test_statistics():
    a = [0.7, -1.6, -0.2, -1.2, -0.1, 3.4, 3.7, 0.8, 0.0, 2.0]
    b = [1.9, 0.8, 1.1, 0.1, -0.1, 4.4, 5.5, 1.6, 4.6, 3.4]
    t = hacomp.t_test(a, b)
    assert t["p_value"] == pytest.approx(0.0792, abs=1e-3)
    assert hacomp.sample_size()["per_group"] == 26
    mw = hacomp.mann_whitney_u([1, 2, 3], [4, 5, 6], method="exact")
    assert mw["exact"] is True
    assert mw["p_value"] == pytest.approx(0.1)


def test_cli_round_trip():
    code, log, _ = hacomp.run_cli(["simulate", "--participants", "8", "--seed", "3",
                                   "--uhci-human-mae", "200510"])
    assert code == 0
    code, out, _ = hacomp.run_cli(["-q", "analyze", "-", "--task", "regression"], log)
    assert code == 0
    report = json.loads(out)
    assert len(report["summaries"]) == 2
    code, _, err = hacomp.run_cli(["analyze", "--task", "regression", "/nonexistent.csv"])
    assert code == 2
