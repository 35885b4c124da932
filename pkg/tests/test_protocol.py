from qspir.plan import Model, SchemeConfig, plan_regime
from qspir.protocol import expected_dits, run_round
from qspir.threats import BUILTIN_STRATEGIES, ThreatConfig


def cfg_of(model, N, X, T, E, U, B, q=257, K=2):
    return SchemeConfig(model=Model.parse(model), N=N, K=K, X=X, T=T, E=E,
                        U=U, B=B, q=q)


REGIME_CONFIGS = (
    (1, cfg_of("xeutspir", 8, 3, 2, 1, 1, 0)),
    (2, cfg_of("xeutspir", 4, 1, 1, 1, 0, 0, q=7)),
    (3, cfg_of("xeutspir", 10, 2, 2, 1, 1, 0)),
    (4, cfg_of("xeutspir", 6, 1, 1, 0, 3, 0, q=7)),
)


# ---------------------------------------------------------
# honest rounds
# ---------------------------------------------------------

def test_honest_round_decodes_in_every_regime():
    for regime, cfg in REGIME_CONFIGS:
        plan = plan_regime(cfg)
        assert plan.regime == regime
        for trial in range(3):
            tr = run_round(cfg, seed=101, trial=trial)
            assert tr.result.w_theta == expected_dits(tr.W, tr.theta)
            assert (tr.y is None) == plan.classical


def test_round_is_deterministic_in_seed_and_trial():
    cfg = REGIME_CONFIGS[0][1]
    a = run_round(cfg, seed=55, trial=3)
    b = run_round(cfg, seed=55, trial=3)
    assert a.W == b.W
    assert a.theta == b.theta
    assert a.answers.channel == b.answers.channel
    assert a.y == b.y
    assert a.result.w_theta == b.result.w_theta
    c = run_round(cfg, seed=55, trial=4)
    assert c.W != a.W


def test_theta_override_is_honored():
    cfg = REGIME_CONFIGS[0][1]
    for theta in range(cfg.K):
        tr = run_round(cfg, seed=9, trial=0, theta=theta)
        assert tr.theta == theta
        assert tr.result.w_theta == tuple(tr.W[theta])


# ---------------------------------------------------------
# adversarial rounds
# ---------------------------------------------------------

def test_every_byzantine_strategy_is_corrected():
    cfg = cfg_of("xbeutspir-static", 10, 2, 2, 0, 1, 1)
    for strategy in BUILTIN_STRATEGIES:
        for trial in range(3):
            threat = ThreatConfig.make(cfg, byzantine=(4,), unresponsive=(7,),
                                       strategy=strategy)
            tr = run_round(cfg, seed=23, trial=trial, threat=threat)
            assert tr.result.w_theta == expected_dits(tr.W, tr.theta), strategy
            assert tr.result.accepted_set is not None


def test_deviations_only_touch_byzantine_servers():
    cfg = cfg_of("xbeutspir-static", 10, 2, 2, 0, 1, 1)
    threat = ThreatConfig.make(cfg, byzantine=(2,), strategy="additive-random")
    tr = run_round(cfg, seed=31, trial=0, threat=threat)
    for inst_devs in tr.answers.deviations:
        for n, d in enumerate(inst_devs):
            if n != 2:
                assert d == 0


def test_unresponsive_garbage_never_reaches_the_decoder():
    cfg = cfg_of("xeutspir", 8, 3, 2, 1, 1, 0)
    for spot in range(cfg.N):
        threat = ThreatConfig.make(cfg, unresponsive=(spot,))
        tr = run_round(cfg, seed=47, trial=spot, threat=threat)
        assert tr.result.w_theta == expected_dits(tr.W, tr.theta)
        assert tr.scheme.unresponsive == (spot,)
        # the junk really is on the wire in both instance slots
        garbage = tr.answers.unresp_garbage
        assert tr.answers.channel[spot] == garbage[0][spot]
        assert tr.answers.channel[cfg.N + spot] == garbage[1][spot]


def test_classical_regime_ignores_dropped_instance():
    cfg = cfg_of("xeutspir", 6, 1, 1, 0, 3, 0, q=7)
    plan = plan_regime(cfg)
    assert plan.classical and plan.vw == 0
    for trial in range(5):
        tr = run_round(cfg, seed=71, trial=trial)
        assert tr.result.w_theta == expected_dits(tr.W, tr.theta)


def test_dummy_symbols_do_not_corrupt_decoding():
    cfg = cfg_of("xeutspir", 4, 1, 1, 1, 0, 0, q=7)
    plan = plan_regime(cfg)
    assert plan.regime == 2 and plan.dummies > 0
    for trial in range(8):
        tr = run_round(cfg, seed=83, trial=trial)
        assert tr.result.w_theta == expected_dits(tr.W, tr.theta)


def test_random_threat_rounds_across_models():
    configs = (
        cfg_of("xeutspir", 8, 3, 2, 1, 1, 0),
        cfg_of("xbeutspir-static", 10, 2, 2, 0, 1, 1),
        cfg_of("xbeutspir-dynamic", 7, 1, 1, 1, 0, 1, q=11),
    )
    for cfg in configs:
        for trial in range(4):
            tr = run_round(cfg, seed=97, trial=trial)
            assert tr.result.w_theta == expected_dits(tr.W, tr.theta)
