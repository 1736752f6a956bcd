import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from escdyn import FATOU, EscapeConfig, compose, evaluate, exp_map
from escdyn.function import Affine
from escdyn.harness import (
    CHECKS,
    GRID_8,
    SEMICONJUGACY_TRIPLE,
    PropertyReport,
    check_backward_invariance,
    check_complete_invariance,
    check_composition_identity,
    check_fixed_points_escape,
    check_forward_invariance_pair,
    check_postsingular_closure,
    check_postsingular_closure_nfold,
    check_power_containments,
    check_preimage_escape,
    check_semiconjugacy,
    check_union_containment,
    composition_identity_errors,
    read_reports,
    run_check,
    run_suite,
    solve_preimage,
    write_reports,
)
from escdyn.sampling import SampleSpec

PI_I = 1j * math.pi
SMALL_GRID = SampleSpec("grid", (-8, 8, -8, 8), resolution=(48, 48))
RANDOM_8 = SampleSpec("random", (-8, 8, -8, 8), count=400, seed=1)


def consistent(rep: PropertyReport):
    assert rep.applicable == rep.passed + rep.violated
    for c in rep.details["clauses"].values():
        assert c["applicable"] == c["passed"] + c["violated"]


def test_tally_three_valued_contract():
    rep = PropertyReport("t", [])
    hyp = np.array([True, True, True, False])
    yes = np.array([True, False, False, True])
    no = np.array([False, True, False, False])
    rep.tally("c", np.zeros(4, complex), hyp, yes, no)
    assert rep.counts() == (2, 1, 1, 2)
    assert rep.violations[0]["clause"] == "c"
    assert rep.vacuous_fraction == 0.5


def test_union_containment_fatou(fatou, fatou_g):
    rep = check_union_containment(fatou, fatou_g, SMALL_GRID)
    consistent(rep)
    assert rep.violated == 0 and rep.applicable > 1000
    assert rep.details["commutes"]["ok"]


def test_union_containment_self_pair(exp_quarter):
    rep = check_union_containment(exp_quarter, exp_quarter, RANDOM_8)
    assert rep.violated == 0 and rep.applicable > 0


def test_noncommuting_pair_warns():
    rep = check_union_containment(exp_map(1), Affine(1, 1), RANDOM_8)
    assert any("commute" in w for w in rep.warnings)


def test_complete_invariance(fatou, fatou_g):
    rep = check_complete_invariance(fatou, fatou_g, SMALL_GRID)
    consistent(rep)
    assert rep.violated == 0 and rep.applicable > 1000
    assert len(rep.details["clauses"]) == 4


def test_complete_invariance_at_fixed_point(fatou, fatou_g):
    rep = check_complete_invariance(fatou, fatou_g, np.array([PI_I]))
    assert rep.violated == 0
    assert rep.details["clauses"]["forward g: z in I(fg) => g(z) in I(fg)"]["passed"] == 1


@pytest.mark.parametrize("ij", [(2, 1), (1, 2), (3, 2), (1, 1)])
def test_power_containments(fatou, fatou_g, ij):
    rep = check_power_containments(fatou, fatou_g, *ij, RANDOM_8)
    consistent(rep)
    assert rep.violated == 0 and rep.applicable > 0
    assert rep.details["swapped"] == (ij[0] < ij[1])


def test_power_containments_exp(exp_quarter):
    rep = check_power_containments(exp_quarter, exp_quarter, 3, 2, RANDOM_8)
    assert rep.violated == 0


def test_power_containments_rejects_zero(fatou, fatou_g):
    with pytest.raises(ValueError):
        check_power_containments(fatou, fatou_g, 0, 1, RANDOM_8)


def test_backward_invariance(fatou, fatou_g):
    rep = check_backward_invariance(fatou, fatou_g, SMALL_GRID)
    consistent(rep)
    assert rep.violated == 0 and rep.applicable > 1000


def test_backward_invariance_fixed_point_image(fatou, fatou_g):
    # g(i pi) = 3 pi i is again a fixed point of f, so it is not escaping under f
    rep = check_backward_invariance(fatou, fatou_g, np.array([PI_I]))
    c = rep.details["clauses"]["(2) w not in I(f) => g(w) not in I(f)"]
    assert c["passed"] == 1


def test_semiconjugacy():
    rep = check_semiconjugacy(*SEMICONJUGACY_TRIPLE, SampleSpec(count=300, seed=2))
    assert rep.details["semiconjugacy"]["ok"]
    assert rep.details["semiconjugacy"]["max_rel_diff"] <= 1e-10
    assert rep.violated == 0 and rep.applicable > 0


def test_semiconjugacy_broken_triple_warns():
    f, g, _ = SEMICONJUGACY_TRIPLE
    rep = check_semiconjugacy(f, g, Affine(0.5, 0), SampleSpec(count=100))
    assert not rep.details["semiconjugacy"]["ok"]
    assert rep.warnings
    assert rep.violated == 0


def test_semiconjugacy_self_triple(exp_quarter):
    rep = check_semiconjugacy(exp_quarter, exp_quarter, exp_quarter, SampleSpec(count=100))
    assert rep.details["semiconjugacy"]["ok"] and rep.violated == 0


def test_forward_invariance_pair():
    rep = check_forward_invariance_pair(SampleSpec("random", (0.01, 5, -8, 8), count=500))
    assert rep.violated == 0
    assert rep.vacuous_undecided == 0


def test_composition_identity():
    rep = check_composition_identity(SampleSpec(count=200, seed=4))
    consistent(rep)
    assert rep.violated == 0
    assert rep.details["max_rel_err"] <= 1e-9


def test_composition_identity_n_zero_exact():
    pts = SampleSpec(count=50).points()
    for err in composition_identity_errors(pts, 3).values():
        assert np.all(err[0] == 0)


def test_fixed_points_escape():
    rep = check_fixed_points_escape(range(-1, 1), n_probe=20)
    assert rep.violated == 0 and rep.passed == 6
    assert rep.details["counterexample_I_fg_not_in_I_f_and_I_g"]
    triples = {t["z"][1]: (t["f"], t["g"], t["fg"]) for t in rep.details["triples"]}
    assert triples[math.pi] == ("Bounded", "Escaping", "Escaping")
    assert triples[-math.pi] == ("Bounded", "Escaping", "Escaping")
    assert rep.details["probe"]["max_rel_dev"] < 1e-10


def test_solve_preimage(fatou_g):
    z = np.array([5 + 1j, 10 - 3j, 2 + 20j])
    w, conv = solve_preimage(fatou_g, z)
    assert conv.all()
    assert np.all(np.abs(evaluate(fatou_g, w) - z) <= 1e-10 * (1 + np.abs(z)))
    assert np.all(w.real > 0)


def test_preimage_escape(fatou, fatou_g):
    rep = check_preimage_escape(fatou, fatou_g, SampleSpec(count=300, window=(-8, 8, -8, 8)))
    assert rep.violated == 0
    assert rep.details["root_search"]["rate"] > 0.9


def test_preimage_nonconvergence_is_vacuous(monkeypatch, fatou, fatou_g):
    import escdyn.harness as h

    monkeypatch.setattr(h, "solve_preimage", lambda g, z: (np.zeros_like(z), np.zeros(z.size, bool)))
    rep = h.check_preimage_escape(fatou, fatou_g, np.array([1 + 0j, 2 + 1j]))
    assert rep.details["root_search"] == {"attempted": 2, "converged": 0, "rate": 0.0}
    assert rep.violated == 0 and rep.vacuous_undecided == 2


def test_postsingular_closure_exp_quarter(exp_quarter):
    rep = check_postsingular_closure(exp_quarter, exp_quarter)
    assert (rep.applicable, rep.passed, rep.violated) == (2, 2, 0)
    assert rep.details["composite_postsingular"] == "Bounded"
    assert rep.details["composite_hyperbolic"] == "Hyperbolic"
    assert rep.details["composite_max_residual"] <= 1e-10


def test_postsingular_closure_three_fold(exp_quarter):
    rep = check_postsingular_closure_nfold([exp_quarter] * 3)
    assert rep.passed == 2 and rep.violated == 0


def test_postsingular_closure_exp_one_vacuous():
    rep = check_postsingular_closure(exp_map(1), exp_map(1))
    assert rep.applicable == 0 and rep.vacuous_undecided == 2


def test_run_check_unknown():
    with pytest.raises(ValueError):
        run_check("nope")
    with pytest.raises(ValueError):
        run_check("union_containment", pair="nope")


def test_reports_round_trip(tmp_path):
    reps = run_suite("composition_identity,fixed_points_escape")
    path = write_reports(reps, tmp_path)
    rows = read_reports(path)
    assert [r["name"] for r in rows] == ["composition_identity", "fixed_points_escape"]
    assert all(r["violated"] == 0 for r in rows)
    assert (tmp_path / "composition_identity.json").exists()


def test_suite_replay_identical():
    a = [r.counts() for r in run_suite("power_containments,semiconjugacy", seed=5)]
    b = [r.counts() for r in run_suite("power_containments,semiconjugacy", seed=5)]
    assert a == b


def test_exp_pair_suite_skips_fatou_only():
    names = [r.check_name for r in run_suite("all", pair="exp")]
    assert "composition_identity" not in names
    assert "postsingular_closure" in names


def test_check_names_cover_the_suite():
    assert len(CHECKS) == 10
    assert GRID_8["resolution"] == (256, 256)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_union_containment_never_violated(seed):
    rep = check_union_containment(FATOU, compose(FATOU, Affine(1, 2j * math.pi)),
                                  SampleSpec("random", (-8, 8, -8, 8), count=60, seed=seed))
    assert rep.violated == 0
