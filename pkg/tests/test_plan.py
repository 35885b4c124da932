from fractions import Fraction

import pytest

from qspir.errors import Infeasible
from qspir.plan import Model, SchemeConfig, plan_regime
from qspir.rates import sweep, theorem_rate


def cfg_of(model, N, X, T, E, U, B, q=257, K=2):
    return SchemeConfig(model=Model.parse(model), N=N, K=K, X=X, T=T, E=E,
                        U=U, B=B, q=q)


# ---------------------------------------------------------
# pinned parameter points
# ---------------------------------------------------------

def test_half_rate_anchor():
    plan = plan_regime(cfg_of("xeutspir", 8, 3, 2, 1, 1, 0))
    assert plan.regime == 1
    assert Fraction(plan.L1 + plan.L2, 8) == Fraction(1, 2)


def test_asymmetric_regime_point():
    plan = plan_regime(cfg_of("xeutspir", 10, 2, 2, 1, 1, 0))
    assert plan.regime == 3
    assert (plan.L1, plan.L2) == (3, 4)
    assert Fraction(plan.L1 + plan.L2, 10) == Fraction(7, 10)


def test_large_byzantine_anchor():
    plan = plan_regime(cfg_of("xbeutspir-static", 17, 5, 4, 0, 0, 2))
    assert Fraction(plan.L1 + plan.L2, 17) == Fraction(4, 17)
    assert plan.m == (9, 9)
    assert plan.drop == (9, 8)


def test_rate_formula_anchor_values():
    r1 = theorem_rate(cfg_of("xeutspir", 8, 3, 2, 1, 1, 0))
    assert r1.feasible and r1.rate == Fraction(1, 2)
    r2 = theorem_rate(cfg_of("xbeutspir-static", 17, 5, 4, 0, 0, 2))
    assert r2.feasible and r2.rate == Fraction(4, 17)


def test_classical_fallback_regime():
    plan = plan_regime(cfg_of("xeutspir", 8, 1, 1, 1, 3, 0))
    assert plan.regime == 4
    assert plan.classical
    assert plan.vw == 0


def test_infeasible_reports_reason():
    with pytest.raises(Infeasible):
        plan_regime(cfg_of("xeutspir", 4, 2, 2, 0, 0, 0))


# ---------------------------------------------------------
# structural invariants of every produced plan
# ---------------------------------------------------------

def test_plan_dimensions_balance():
    """Column bookkeeping: payload + kept + correction + erasure = N."""
    count = 0
    for model in ("xeutspir", "xbeutspir-static", "xbeutspir-dynamic"):
        for N in range(2, 13):
            for X in range(0, 4):
                for T in range(0, 4):
                    for E in range(0, 3):
                        for U in range(0, 3):
                            for B in range(0, 3):
                                if B > 0 and model == "xeutspir":
                                    continue
                                try:
                                    plan = plan_regime(
                                        cfg_of(model, N, X, T, E, U, B))
                                except Infeasible:
                                    continue
                                count += 1
                                if plan.classical:
                                    continue
                                assert plan.vw + 4 * plan.B + 2 * plan.U == N
                                ks = [plan.m[i] + plan.B - plan.drop[i]
                                      for i in (0, 1)]
                                assert tuple(ks) == plan.k
                                assert plan.shared_queries == (
                                    plan.c[0] == plan.c[1]
                                    and plan.t[0] == plan.t[1])
    assert count > 400


def test_planner_agrees_with_rate_formula():
    """The layout planner and the independent case analysis must agree on
    feasibility, regime and exact rate across the whole micro grid."""
    models = ("xeutspir", "xbeutspir-static", "xbeutspir-dynamic")
    pts = sweep(models, range(2, 13), range(0, 4), range(0, 4),
                range(0, 3), range(0, 3), range(0, 3))
    feasible = 0
    for pt in pts:
        cfg = cfg_of(pt.model.value, pt.N, pt.X, pt.T, pt.E, pt.U, pt.B)
        try:
            plan = plan_regime(cfg)
        except Infeasible:
            assert not pt.feasible, (pt, "formula feasible, planner not")
            continue
        assert pt.feasible, (pt, "planner feasible, formula not")
        assert plan.regime == pt.regime
        assert (plan.L1, plan.L2) == (pt.L1, pt.L2)
        assert Fraction(plan.L1 + plan.L2, cfg.N) == pt.rate
        feasible += 1
    assert feasible > 400


def test_message_slices_partition_the_payload():
    plan = plan_regime(cfg_of("xeutspir", 10, 2, 2, 1, 1, 0))
    s0, s1 = plan.message_slices
    assert list(s0) + list(s1) == list(range(plan.L1 + plan.L2))


def test_model_parse_accepts_enum_and_string():
    assert Model.parse("xeutspir") is Model.parse(Model.parse("xeutspir"))
    with pytest.raises(ValueError):
        Model.parse("no-such-model")
