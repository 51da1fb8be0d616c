import json

import numpy as np
import pytest

from rotalg import harness
from rotalg.harness import P_CHECK, parse_theorems, run_harness

SMALL = dict(max_forest_nodes=3, trees_only=True)


def counts(report, theorem):
    return {check: tuple(v) for (_, check), v in report.check_counts(theorem).items()}


def test_theorem_selection():
    assert parse_theorems("all") == harness.THEOREMS
    assert parse_theorems("iso-godel,di-transfer,thm2.3") == ("thm2.3", "prop2.1")
    assert parse_theorems(["carrier-size"]) == ("carrier",)
    with pytest.raises(ValueError):
        parse_theorems("thm4.1")


def test_thm33_counts_on_small_trees():
    r = run_harness(theorems=["thm3.3"], **SMALL)
    c = counts(r, "thm3.3")
    assert r.ok and not r.notices
    assert c["derived K/Mon"] == (117, 0, 0, 0)
    for check in ("hypotheses", "lift closure", "NMAO+", "positivity closure",
                  "lowered GAO", "gamma modal", "eta modal"):
        assert c[check] == (1470, 0, 0, 0)


def test_thm36_counts_and_p_discrepancy():
    r = run_harness(theorems=["thm3.6"], **SMALL)
    c = counts(r, "thm3.6")
    assert r.ok
    for check in ("hypotheses", "NMAO- without (P)", "lowered GAO", "gamma modal", "eta modal"):
        assert c[check] == (467, 0, 0, 0)
    # (P) holds on 18 lifts: exactly those with box == diamond
    assert c[P_CHECK] == (18, 0, 0, 449)
    assert len(r.discrepancies) == 3  # first witness per algebra
    w = r.discrepancies[0].witness
    assert w["box"] != w["diamond"]


def test_strict_p_turns_the_discrepancy_into_failures():
    r = run_harness(theorems=["thm3.6"], strict_p=True, **SMALL)
    assert not r.ok
    assert counts(r, "thm3.6")[P_CHECK] == (18, 449, 0, 0)
    assert {f.check for f in r.failures} == {P_CHECK}


def test_batched_and_scalar_paths_agree():
    for thm in ("thm3.3", "thm3.6"):
        fast = run_harness(theorems=[thm], **SMALL)
        slow = run_harness(theorems=[thm], scalar=True, **SMALL)
        assert fast.check_counts() == slow.check_counts()


def test_missing_hypotheses_are_skipped_not_failed():
    r = run_harness(theorems=["thm3.6"], constraints=["□1", "□2", "◇1", "◇2", "N1"], **SMALL)
    c = counts(r, "thm3.6")
    assert r.ok
    assert c["hypotheses"] == (467, 0, 1003, 0)
    assert c["gamma modal"] == (467, 0, 0, 0)


def test_automorphism_quotient_partitions_the_pairs():
    full = run_harness(theorems=["thm3.3"], **SMALL)
    quot = run_harness(theorems=["thm3.3"], quotient=True, **SMALL)
    cq = counts(quot, "thm3.3")
    assert cq["automorphism quotient"] == (0, 0, 600, 0)
    assert cq["gamma modal"][0] + 600 == counts(full, "thm3.3")["gamma modal"][0]


def test_report_is_reproducible():
    a = run_harness(max_forest_nodes=3, theorems=["thm2.3", "prop2.1", "thm3.6"])
    b = run_harness(max_forest_nodes=3, theorems=["thm2.3", "prop2.1", "thm3.6"])
    assert a.to_json() == b.to_json()
    data = json.loads(a.to_json(timing=True))
    assert data["format"] == "rotalg-harness/1" and "wall_time" in data
    assert list(data) == ["format", "parameters", "ok", "counts", "notices", "failures",
                          "discrepancies", "outcomes", "wall_time"]


def test_parallel_jobs_match_serial():
    a = run_harness(max_forest_nodes=3, theorems=["thm2.3", "thm3.3"])
    b = run_harness(max_forest_nodes=3, theorems=["thm2.3", "thm3.3"], jobs=2)
    assert a.to_json() == b.to_json()


def test_algebra_level_theorems_up_to_four_nodes():
    r = run_harness(max_forest_nodes=4, theorems=["thm2.3", "thm2.4", "prop2.1", "carrier"])
    c = r.counts()
    assert r.ok
    assert c["thm2.3"]["passed"] == 32 and c["thm2.3"]["skipped"] == 8
    assert c["carrier"]["passed"] == 32
    assert c["prop2.1"]["failed"] == 0


def test_operator_cap_skips_with_notice():
    r = run_harness(forests=["(()())"], theorems=["thm3.3"], max_operator_size=4)
    assert r.ok
    assert counts(r, "thm3.3") == {"operator cap": (0, 0, 1, 0)}
    assert r.notices and "operator-enumeration cap" in r.notices[0]


def test_pair_cap_skips_with_notice():
    r = run_harness(forests=["(()())"], theorems=["thm3.3"], max_pairs=100)
    assert counts(r, "thm3.3")["pairs"] == (0, 0, 1250, 0)
    assert "exceed the cap" in r.notices[0]


# ------------------------------------------------------------ mutation tests


def _corrupt(monkeypatch, attr):
    original = harness._ModalContext.__init__

    def init(self, A, mode):
        original(self, A, mode)
        t = getattr(self, attr).copy()
        t[[1, 2]] = t[[2, 1]]
        setattr(self, attr, t)

    monkeypatch.setattr(harness._ModalContext, "__init__", init)


@pytest.mark.parametrize("attr, check", [("g", "gamma modal"), ("e", "eta modal")])
def test_corrupted_canonical_maps_are_detected(monkeypatch, attr, check):
    _corrupt(monkeypatch, attr)
    r = run_harness(forests=["(()())"], theorems=["thm3.3"])
    assert not r.ok
    c = counts(r, "thm3.3")
    assert c[check][1] > 0
    f = next(f for f in r.failures if f.check == check)
    assert f.witness["forest"] == "(()())"
    assert set(f.witness["box"]) == {"{}", "{0}", "{0,1}", "{0,2}", "{0,1,2}"}
    assert len(r.failures) <= harness.FAILURES_PER_CHECK * len(c)


def test_corrupted_gamma_fails_thm23(monkeypatch):
    real = harness.gamma

    def bad_gamma(A, R, modal=None, S=None):
        h = real(A, R, modal, S)
        return h.swapped(A.labels[0], A.labels[-1])

    monkeypatch.setattr(harness, "gamma", bad_gamma)
    r = run_harness(forests=["(())"], theorems=["thm2.3"])
    assert not r.ok
    assert counts(r, "thm2.3")["gamma plus"] == (0, 1, 0, 0)
    assert "FAIL" in r.failures[0].witness["detail"]


def test_corrupted_lift_is_detected(monkeypatch):
    real = harness._batch

    def bad_batch(c, b, D):
        b = np.array(b)
        b[c.A.top] = c.A.bot  # breaks box(top) = top
        return real(c, b, D)

    monkeypatch.setattr(harness, "_batch", bad_batch)
    r = run_harness(forests=["(())"], theorems=["thm3.3"])
    c = counts(r, "thm3.3")
    assert c["NMAO+"][1] > 0 and c["lowered GAO"][1] > 0
    assert "⊟1" in next(f for f in r.failures if f.check == "NMAO+").witness["detail"]
