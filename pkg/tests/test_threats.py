import pytest

from qspir.errors import SetTooLarge
from qspir.plan import Model, SchemeConfig
from qspir.protocol import run_round
from qspir.rng import Stream
from qspir.threats import (BUILTIN_STRATEGIES, ByzContext, ThreatConfig,
                           apply_strategy, register_strategy)


def cfg_of(model, N, X, T, E, U, B, q=257):
    return SchemeConfig(model=Model.parse(model), N=N, K=2, X=X, T=T, E=E,
                        U=U, B=B, q=q)


STATIC = cfg_of("xbeutspir-static", 10, 2, 2, 1, 1, 1)
DYNAMIC = cfg_of("xbeutspir-dynamic", 7, 1, 1, 1, 0, 1, q=11)


# ---------------------------------------------------------
# placement validation
# ---------------------------------------------------------

def test_make_rejects_oversized_sets():
    with pytest.raises(SetTooLarge):
        ThreatConfig.make(STATIC, byzantine=(0, 1))
    with pytest.raises(SetTooLarge):
        ThreatConfig.make(STATIC, colluding=(0, 1, 2))


def test_make_rejects_out_of_range_indices():
    with pytest.raises(SetTooLarge):
        ThreatConfig.make(STATIC, unresponsive=(STATIC.N,))


def test_make_rejects_unknown_strategy():
    with pytest.raises(SetTooLarge):
        ThreatConfig.make(STATIC, strategy="no-such-strategy")


def test_static_model_forces_equal_link_sets():
    with pytest.raises(SetTooLarge):
        ThreatConfig.make(STATIC, eaves_up=(0,), eaves_down=(1,))
    tc = ThreatConfig.make(DYNAMIC, eaves_up=(0,), eaves_down=(1,))
    assert tc.eaves_up != tc.eaves_down


def test_strict_false_admits_design_violations():
    tc = ThreatConfig.make(STATIC, byzantine=(0, 1, 2), strict=False)
    assert len(tc.byzantine) == 3


def test_random_placement_is_deterministic_and_in_bounds():
    a = ThreatConfig.random(STATIC, Stream(7, "p"))
    b = ThreatConfig.random(STATIC, Stream(7, "p"))
    assert a == b
    assert len(a.colluding) == STATIC.T
    assert len(a.communicating) == STATIC.X
    assert len(a.byzantine) == STATIC.B
    assert len(a.unresponsive) == STATIC.U
    assert a.eaves_up == a.eaves_down  # static model
    c = ThreatConfig.random(DYNAMIC, Stream(7, "p"))
    assert all(0 <= n < DYNAMIC.N for n in c.eaves_up | c.eaves_down)


# ---------------------------------------------------------
# strategy formulas
# ---------------------------------------------------------

def make_ctx(q=11, servers=(3,), instances=2):
    return ByzContext(
        q=q, servers=servers, instances=instances,
        storage={n: tuple(((5 + n + i, 1),) for i in range(instances))
                 for n in servers},
        queries={n: tuple(((2 + i, 7),) for i in range(instances))
                 for n in servers},
        zhat={n: tuple(3 + i for i in range(instances)) for n in servers},
        honest={n: tuple(1 + i for i in range(instances)) for n in servers},
        stream=Stream(1, "strategy-test"),
    )


def test_honest_zero_is_all_zero():
    ctx = make_ctx()
    assert apply_strategy("honest-zero", ctx) == {3: (0, 0)}


def test_query_relay_replaces_with_query_dit():
    ctx = make_ctx()
    out = apply_strategy("query-relay", ctx)
    # instance i relays coordinate i of the first query block, recorded as
    # an additive delta against the honest answer
    assert out[3] == ((2 - 1) % 11, (7 - 2) % 11)


def test_storage_leak_replaces_with_stored_dit():
    ctx = make_ctx()
    out = apply_strategy("storage-leak", ctx)
    assert out[3] == ((8 - 1) % 11, (9 - 2) % 11)


def test_coordinated_custom_strips_masking_share():
    ctx = make_ctx()
    out = apply_strategy("coordinated-custom", ctx)
    assert out[3] == ((-3) % 11, (-4) % 11)


def test_additive_random_is_stream_deterministic():
    assert (apply_strategy("additive-random", make_ctx())
            == apply_strategy("additive-random", make_ctx()))


def test_apply_normalizes_missing_servers():
    register_strategy("test-partial", lambda ctx: {})
    try:
        out = apply_strategy("test-partial", make_ctx(servers=(1, 4)))
        assert out == {1: (0, 0), 4: (0, 0)}
    finally:
        from qspir.threats import STRATEGIES
        STRATEGIES.pop("test-partial")


def test_unknown_tag_raises():
    with pytest.raises(SetTooLarge):
        apply_strategy("bogus", make_ctx())


# ---------------------------------------------------------
# plugged strategies run end to end
# ---------------------------------------------------------

def test_builtin_strategies_list_is_registered():
    from qspir.threats import STRATEGIES
    for tag in BUILTIN_STRATEGIES:
        assert tag in STRATEGIES


def test_custom_payload_strategy_in_a_round():
    calls = []

    def evil(ctx):
        calls.append(ctx.servers)
        return {n: tuple(1 for _ in range(ctx.instances)) for n in ctx.servers}

    register_strategy("test-evil", evil)
    try:
        threat = ThreatConfig.make(STATIC, byzantine=(5,), strategy="test-evil",
                                   strict=False)
        tr = run_round(STATIC, seed=3, trial=0, threat=threat)
        assert calls == [(5,)]
        assert tr.result.w_theta == tuple(tr.W[tr.theta])
    finally:
        from qspir.threats import STRATEGIES
        STRATEGIES.pop("test-evil")
