import itertools

import pytest

from qspir.corrector import (build_views, correction_vector, d_rows,
                             estimate_and_check, phi, psi, search_and_correct,
                             search_joint)
from qspir.errors import DecodeFailure, DimensionMismatch, Infeasible
from qspir.plan import Model, SchemeConfig, plan_regime
from qspir.protocol import build_scheme
from qspir.rng import Stream


def feasible_byzantine_configs(max_n: int, q: int = 257):
    """Every feasible configuration with at least one Byzantine server."""
    for model in ("xbeutspir-static", "xbeutspir-dynamic"):
        for N in range(2, max_n + 1):
            for X in range(0, 5):
                for T in range(0, 5):
                    for E in range(0, 5):
                        for U in range(0, 3):
                            for B in range(1, 4):
                                cfg = SchemeConfig(model=Model.parse(model),
                                                   N=N, K=2, X=X, T=T, E=E,
                                                   U=U, B=B, q=q)
                                try:
                                    plan = plan_regime(cfg)
                                except Infeasible:
                                    continue
                                yield cfg, plan


def views_of(cfg, plan, unresp=()):
    scheme = build_scheme(cfg, plan, unresp)
    insts = 1 if plan.classical else 2
    return scheme, [build_views(scheme.csa_resp[i], plan.c[i], plan.m[i],
                                plan.B) for i in range(insts)]


# ---------------------------------------------------------
# construction and slicing
# ---------------------------------------------------------

def test_build_views_checks_column_budget():
    cfg = SchemeConfig(model=Model.parse("xbeutspir-static"), N=8, K=2, X=1,
                       T=1, E=0, U=0, B=1, q=257)
    plan = plan_regime(cfg)
    scheme = build_scheme(cfg, plan, ())
    with pytest.raises(DimensionMismatch):
        build_views(scheme.csa_resp[0], plan.c[0] + 1, plan.m[0], plan.B)


def test_slice_shapes():
    cfg = SchemeConfig(model=Model.parse("xbeutspir-static"), N=8, K=2, X=1,
                       T=1, E=0, U=0, B=1, q=257)
    plan = plan_regime(cfg)
    _, views = views_of(cfg, plan)
    v = views[0]
    J = (2,)
    assert psi(v, J).rows == plan.B and psi(v, J).cols == 1
    assert phi(v, J).rows == plan.B
    top = d_rows(v, 3, J)
    assert top.rows == 3 and top.cols == 1


# ---------------------------------------------------------
# the estimation block is invertible for every candidate set
# ---------------------------------------------------------

def test_estimation_block_invertible_everywhere():
    for cfg, plan in feasible_byzantine_configs(8):
        for unresp in itertools.combinations(range(cfg.N), cfg.U):
            scheme, views = views_of(cfg, plan, unresp)
            nv = len(scheme.responsive)
            for v in views:
                for J in itertools.combinations(range(nv), plan.B):
                    assert psi(v, J).rank() == plan.B, (cfg, unresp, J)


# ---------------------------------------------------------
# estimation and consistency on planted deviations
# ---------------------------------------------------------

def test_estimate_recovers_planted_deviation():
    cfg = SchemeConfig(model=Model.parse("xbeutspir-static"), N=10, K=2, X=2,
                       T=2, E=0, U=1, B=1, q=257)
    plan = plan_regime(cfg)
    _, views = views_of(cfg, plan)
    v = views[0]
    J = (4,)
    delta = (123,)
    full = correction_vector(v, J, delta)
    est = estimate_and_check(v, full[v.nv - 2 * plan.B:], J)
    assert est.consistent and est.delta == delta


def test_disjoint_candidate_rejected():
    cfg = SchemeConfig(model=Model.parse("xbeutspir-static"), N=10, K=2, X=2,
                       T=2, E=0, U=1, B=1, q=257)
    plan = plan_regime(cfg)
    _, views = views_of(cfg, plan)
    v = views[0]
    full = correction_vector(v, (4,), (123,))
    est = estimate_and_check(v, full[v.nv - 2 * plan.B:], (7,))
    assert not est.consistent


def test_zero_deviation_corrects_to_zero():
    cfg = SchemeConfig(model=Model.parse("xbeutspir-static"), N=10, K=2, X=1,
                       T=1, E=0, U=0, B=2, q=257)
    plan = plan_regime(cfg)
    _, views = views_of(cfg, plan)
    z = (0,) * (2 * plan.B)
    accepted, corrections = search_and_correct(views, [z, z])
    assert all(all(c == 0 for c in corr) for corr in corrections)


def test_unexplainable_block_raises():
    cfg = SchemeConfig(model=Model.parse("xbeutspir-static"), N=8, K=2, X=1,
                       T=1, E=0, U=0, B=1, q=257)
    plan = plan_regime(cfg)
    _, views = views_of(cfg, plan)
    # independent junk in both instances is jointly unexplainable by any
    # single shared support
    with pytest.raises(DecodeFailure):
        search_joint(views, [(1, 2), (200, 3)])


def test_accepted_candidate_gives_true_correction():
    """Whatever candidate the lexicographic search accepts, the resulting
    correction vector equals the one computed from the planted support."""
    for cfg, plan in feasible_byzantine_configs(8):
        scheme, views = views_of(cfg, plan)
        nv = len(scheme.responsive)
        st = Stream(5, f"plant/{cfg.model.value}/{cfg.N}/{cfg.X}/{cfg.T}/"
                        f"{cfg.E}/{cfg.U}/{cfg.B}")
        for rep in range(20):
            support = sorted(st.sample(nv, plan.B))
            truth, zblocks = [], []
            for v in views:
                delta = [st.randint(cfg.q) for _ in range(plan.B)]
                full = correction_vector(v, support, delta)
                truth.append(tuple(full))
                zblocks.append(full[nv - 2 * plan.B:])
            accepted, corrections = search_and_correct(views, zblocks)
            for got, want in zip(corrections, truth):
                assert tuple(got) == want, (cfg, support, accepted)
