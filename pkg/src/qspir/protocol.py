"""End-to-end protocol: storage, queries, shared noise, answers, channel
encoding and decoding.

Quantum regimes (1-3) run two instances. Per instance i a server holds
c_i payload columns (dummy columns first, then message dits), each padded
with H storage-noise terms in powers of (f_l - a_n). Queries deliver, per
payload column, the retrieval unit vector masked by t_i noise terms. Every
server adds its share of the shared masking polynomial (m_i masking degrees
plus B extra degrees) to its answer. Instance-1 answers are scaled by u_n,
instance-2 by v_n = dual scaling, and the 2N dits enter the transfer box,
whose dropped directions are exactly the low-degree (heavily masked)
interference. Regime 4 is classical: one instance, scalar answers from
responsive servers, direct interpolation.

Decoding inverts the Vandermonde precoder block, discards erasure slots,
and, when B > 0, delegates to the corrector to locate and cancel Byzantine
contamination before reading off the retrieved dits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import corrector as corr_mod
from .codes import Points, build_csa, build_vandermonde, canonical_points, dual_scaling
from .errors import DecodeFailure, DimensionMismatch
from .field import FqMatrix, fe_inv, vec_sub
from .nsumbox import TransferBox, make_transfer, precode
from .plan import RegimePlan, SchemeConfig, plan_regime
from .rng import Stream
from .threats import ThreatConfig, apply_strategy, ByzContext


# ======================================================================
# data records
# ======================================================================


@dataclass(frozen=True)
class Storage:
    """Per-instance, per-server payload rows plus the randomness behind them.

    rows[i][n][l] is the K-vector stored for payload column l; noise[i][l][j]
    is the j-th storage-noise K-vector of column l (j = 1..H); dummies[l] are
    the instance-0 dummy payload vectors."""

    rows: tuple
    noise: tuple
    dummies: tuple


@dataclass(frozen=True)
class QuerySet:
    """Per-instance query blocks. blocks[i][n][l] is the K-vector a server
    dots against its l-th payload row; noise[i][l][j] the j-th query-noise
    K-vector (j = 1..t_i). When the plan shares queries the instance-1
    entries alias instance 0."""

    blocks: tuple
    noise: tuple
    shared: bool
    theta: int


@dataclass(frozen=True)
class SharedNoise:
    """Server-side masking randomness. zprime[i] has m_i scalars, rprime[i]
    B scalars; zhat[i][n] is server n's evaluated share — the only part a
    server (hence a Byzantine coalition) ever holds."""

    zprime: tuple
    rprime: tuple
    zhat: tuple


@dataclass(frozen=True)
class AnswerSet:
    """Honest answers plus recorded deviations and the final channel input."""

    honest: tuple            # [i][n] scalar
    deviations: tuple        # [i][n] scalar, nonzero only at Byzantine servers
    unresp_garbage: tuple    # [i][n] scalar at unresponsive servers, else 0
    channel: tuple           # quantum: 2N dits; classical: responsive scalars


@dataclass(frozen=True)
class DecodedResult:
    """Decoder output: retrieved dits, the accepted Byzantine candidate set
    (responsive-position indices) and the surviving masked-interference
    values kept for auditing."""

    w_theta: tuple[int, ...]
    accepted_set: tuple[int, ...] | None
    interference: tuple


@dataclass(frozen=True)
class BuiltScheme:
    """Everything derived from (cfg, plan, unresponsive placement)."""

    cfg: SchemeConfig
    plan: RegimePlan
    pts: Points
    u: tuple[int, ...]
    v: tuple[int, ...]
    responsive: tuple[int, ...]
    unresponsive: tuple[int, ...]
    box: TransferBox | None
    vinv: FqMatrix | None
    csa_resp: tuple          # per-instance responsive interpolation matrix


@dataclass(frozen=True)
class Transcript:
    """Complete record of one round, sufficient for every audit."""

    cfg: SchemeConfig
    plan: RegimePlan
    threat: ThreatConfig
    theta: int
    W: tuple
    storage: Storage
    queries: QuerySet
    noise: SharedNoise
    answers: AnswerSet
    scheme: BuiltScheme
    y: tuple | None          # box output (quantum regimes)
    result: DecodedResult


# ======================================================================
# construction
# ======================================================================


def scheme_points(cfg: SchemeConfig, plan: RegimePlan) -> Points:
    num_f = max(plan.c)
    return canonical_points(cfg.N, num_f, plan.vw, cfg.q)


def canonical_u(cfg: SchemeConfig) -> tuple[int, ...]:
    return tuple(range(1, cfg.N + 1))


def build_scheme(cfg: SchemeConfig, plan: RegimePlan, unresponsive) -> BuiltScheme:
    """Assemble points, scalings, transfer box and interpolation matrices
    for one placement of unresponsive servers (0-based indices)."""
    pts = scheme_points(cfg, plan)
    q = cfg.q
    unresp = tuple(sorted(unresponsive))
    if len(unresp) > cfg.U:
        raise DimensionMismatch("more unresponsive servers than the plan allows")
    if len(unresp) < cfg.U:
        # layout reserves exactly U erasure slots; pad deterministically with
        # the highest-index servers not already chosen
        pad = [n for n in range(cfg.N - 1, -1, -1) if n not in unresp]
        unresp = tuple(sorted(set(unresp) | set(pad[: cfg.U - len(unresp)])))
    responsive = tuple(n for n in range(cfg.N) if n not in unresp)
    u = canonical_u(cfg)
    v = dual_scaling(u, pts)
    rpts = pts.restrict(responsive)
    nv = len(responsive)
    if plan.classical:
        csa0 = build_csa(nv, plan.c[0], rpts)
        return BuiltScheme(cfg, plan, pts, u, v, responsive, unresp,
                           box=None, vinv=None, csa_resp=(csa0, None))
    box = _scheme_box(cfg, plan, pts, u, v, unresp)
    vand = build_vandermonde(plan.vw, pts)
    vinv = vand.inv() if plan.vw else None
    csa0 = build_csa(nv, plan.c[0], rpts)
    csa1 = csa0 if plan.c[1] == plan.c[0] else build_csa(nv, plan.c[1], rpts)
    return BuiltScheme(cfg, plan, pts, u, v, responsive, unresp,
                       box=box, vinv=vinv, csa_resp=(csa0, csa1))


def _degree_col(scale, alphas, d: int, q: int) -> list[int]:
    return [s * pow(a, d, q) % q for s, a in zip(scale, alphas)]


def _cauchy_col(scale, alphas, f: int, q: int) -> list[int]:
    return [s * fe_inv(f - a, q) % q for s, a in zip(scale, alphas)]


def _scheme_box(cfg, plan, pts, u, v, unresp) -> TransferBox:
    """Generator stack of the scheme's transfer box.

    Dropped directions: per instance, the lowest drop_i degree columns.
    Kept directions, in order: instance payload (Cauchy) columns, kept
    masked-degree columns, correction-data degree columns (honest-zero),
    then one erasure unit column per unresponsive server and instance.
    The Vandermonde precoder mixes exactly the payload+kept block.
    """
    N, q = cfg.N, cfg.q
    alphas = pts.alphas
    zeros = [0] * N

    def inst_col(i: int, col: list[int]) -> list[int]:
        return col + zeros if i == 0 else zeros + col

    scale = (u, v)
    g_cols = []
    for i in (0, 1):
        for d in range(plan.drop[i]):
            g_cols.append(inst_col(i, _degree_col(scale[i], alphas, d, q)))
    h_cols = []
    for i in (0, 1):
        for l in range(plan.c[i]):
            h_cols.append(inst_col(i, _cauchy_col(scale[i], alphas, pts.fs[l], q)))
    for i in (0, 1):
        for d in range(plan.drop[i], plan.m[i] + plan.B):
            h_cols.append(inst_col(i, _degree_col(scale[i], alphas, d, q)))
    for i in (0, 1):
        for d in range(plan.m[i] + plan.B, plan.m[i] + 3 * plan.B):
            h_cols.append(inst_col(i, _degree_col(scale[i], alphas, d, q)))
    for i in (0, 1):
        for n in unresp:
            col = [0] * (2 * N)
            col[i * N + n] = 1
            h_cols.append(col)

    G = FqMatrix.from_rows(g_cols, q).transpose()
    Hc = FqMatrix.from_rows(h_cols, q).transpose()
    base = make_transfer(G, Hc)
    if plan.vw == 0:
        return base
    vand = build_vandermonde(plan.vw, pts)
    tail = FqMatrix.identity(4 * plan.B + 2 * cfg.U, q)
    from .field import block_diag
    V2 = block_diag([vand, tail], q).inv()
    return precode(base, FqMatrix.identity(N, q), V2)


# ======================================================================
# generation
# ======================================================================


def gen_messages(cfg: SchemeConfig, plan: RegimePlan, rng: Stream) -> tuple:
    """K messages of L1+L2 dits each: W[k][d]."""
    total = plan.L1 + plan.L2
    return tuple(rng.randvec(total, cfg.q) for _ in range(cfg.K))


def payload_columns(cfg, plan, W, dummies) -> tuple:
    """Per-instance list of K-vectors occupying the payload columns."""
    s0, s1 = plan.message_slices
    inst0 = [dummies[l] for l in range(plan.dummies)]
    inst0 += [tuple(W[k][d] for k in range(cfg.K)) for d in s0]
    inst1 = [tuple(W[k][d] for k in range(cfg.K)) for d in s1]
    if plan.classical:
        return (tuple(inst0), ())
    return (tuple(inst0), tuple(inst1))


def gen_storage(cfg: SchemeConfig, plan: RegimePlan, pts: Points, W,
                rng: Stream) -> Storage:
    """Storage rows: payload vector plus H noise terms in (f_l - a_n)."""
    q, H = cfg.q, cfg.H
    dummies = tuple(rng.randvec(cfg.K, q) for _ in range(plan.dummies))
    cols = payload_columns(cfg, plan, W, dummies)
    instances = (0,) if plan.classical else (0, 1)
    noise = []
    rows = []
    for i in instances:
        inoise = tuple(
            tuple(rng.randvec(cfg.K, q) for _ in range(H))
            for _ in range(plan.c[i])
        )
        noise.append(inoise)
        irows = []
        for n in range(cfg.N):
            srows = []
            for l in range(plan.c[i]):
                base = list(cols[i][l])
                fa = (pts.fs[l] - pts.alphas[n]) % q
                p = 1
                for j in range(H):
                    p = p * fa % q
                    zj = inoise[l][j]
                    base = [(b + p * z) % q for b, z in zip(base, zj)]
                srows.append(tuple(base))
            irows.append(tuple(srows))
        rows.append(tuple(irows))
    return Storage(rows=tuple(rows), noise=tuple(noise), dummies=dummies)


def gen_queries(cfg: SchemeConfig, plan: RegimePlan, pts: Points, theta: int,
                rng: Stream) -> QuerySet:
    """Query blocks: (1/(f_l - a_n)) (e_theta + sum_j (f_l - a_n)^j Z_j)."""
    q = cfg.q
    if not 0 <= theta < cfg.K:
        raise ValueError(f"theta must be in [0, {cfg.K})")
    sets = 1 if plan.shared_queries else 2
    all_blocks = []
    all_noise = []
    for s in range(sets):
        snoise = tuple(
            tuple(rng.randvec(cfg.K, q) for _ in range(plan.t[s]))
            for _ in range(plan.c[s])
        )
        all_noise.append(snoise)
        sblocks = []
        for n in range(cfg.N):
            nblocks = []
            for l in range(plan.c[s]):
                fa = (pts.fs[l] - pts.alphas[n]) % q
                inv = fe_inv(fa, q)
                vec = [1 if k == theta else 0 for k in range(cfg.K)]
                p = 1
                for j in range(plan.t[s]):
                    p = p * fa % q
                    zj = snoise[l][j]
                    vec = [(x + p * z) % q for x, z in zip(vec, zj)]
                nblocks.append(tuple(x * inv % q for x in vec))
            sblocks.append(tuple(nblocks))
        all_blocks.append(tuple(sblocks))
    if sets == 1 and not plan.classical:
        all_blocks.append(all_blocks[0])
        all_noise.append(all_noise[0])
    return QuerySet(blocks=tuple(all_blocks), noise=tuple(all_noise),
                    shared=(sets == 1), theta=theta)


def gen_shared_noise(cfg: SchemeConfig, plan: RegimePlan, pts: Points,
                     rng: Stream) -> SharedNoise:
    """Masking polynomial coefficients and their per-server evaluations."""
    q = cfg.q
    instances = (0,) if plan.classical else (0, 1)
    zprime, rprime, zhat = [], [], []
    for i in instances:
        zp = rng.randvec(plan.m[i], q)
        rp = rng.randvec(plan.B, q)
        zprime.append(zp)
        rprime.append(rp)
        evals = []
        for n in range(cfg.N):
            a = pts.alphas[n]
            acc = 0
            p = 1
            for j in range(plan.m[i]):
                acc = (acc + p * zp[j]) % q
                p = p * a % q
            for j in range(plan.B):
                acc = (acc + p * rp[j]) % q
                p = p * a % q
            evals.append(acc)
        zhat.append(tuple(evals))
    return SharedNoise(zprime=tuple(zprime), rprime=tuple(rprime),
                       zhat=tuple(zhat))


# ======================================================================
# answers and channel
# ======================================================================


def honest_answer(storage: Storage, queries: QuerySet, noise: SharedNoise,
                  n: int, i: int, q: int) -> int:
    acc = noise.zhat[i][n]
    for srow, qrow in zip(storage.rows[i][n], queries.blocks[i][n]):
        acc = (acc + sum(s * x for s, x in zip(srow, qrow))) % q
    return acc


def compute_answers(cfg, plan, storage, queries, noise) -> tuple:
    instances = (0,) if plan.classical else (0, 1)
    return tuple(
        tuple(honest_answer(storage, queries, noise, n, i, cfg.q)
              for n in range(cfg.N))
        for i in instances
    )


def encode_channel(cfg: SchemeConfig, plan: RegimePlan, scheme: BuiltScheme,
                   honest, deviations, garbage) -> tuple:
    """Final channel input: quantum dit pairs (u_n-scaled, v_n-scaled) or the
    classical responsive answer list. Unresponsive slots carry garbage."""
    q = cfg.q
    if plan.classical:
        out = []
        for n in scheme.responsive:
            out.append((honest[0][n] + deviations[0][n]) % q)
        return tuple(out)
    dits = []
    for i in (0, 1):
        scale = scheme.u if i == 0 else scheme.v
        for n in range(cfg.N):
            if n in scheme.unresponsive:
                dits.append(garbage[i][n] % q)
            else:
                dits.append(scale[n] * ((honest[i][n] + deviations[i][n]) % q) % q)
    return tuple(dits)


# ======================================================================
# decoding
# ======================================================================


def decode(scheme: BuiltScheme, received) -> DecodedResult:
    """Recover the retrieved dits from the box output (quantum) or the
    responsive answer list (classical)."""
    plan, cfg = scheme.plan, scheme.cfg
    if plan.classical:
        return _decode_classical(scheme, received)
    q = cfg.q
    vw, B = plan.vw, plan.B
    mixed = received[:vw]
    pk = scheme.vinv.matvec(mixed) if vw else ()
    c0, c1 = plan.c
    k0, k1 = plan.k
    p_out = [list(pk[:c0]), list(pk[c0 : c0 + c1])]
    kept = [
        list(pk[c0 + c1 : c0 + c1 + k0]),
        list(pk[c0 + c1 + k0 : c0 + c1 + k0 + k1]),
    ]
    accepted = None
    if B > 0:
        zblocks = [
            received[vw : vw + 2 * B],
            received[vw + 2 * B : vw + 4 * B],
        ]
        views = [
            corr_mod.build_views(scheme.csa_resp[i], plan.c[i], plan.m[i], B)
            for i in (0, 1)
        ]
        accepted, estimates = corr_mod.search_joint(views, zblocks)
        for i in (0, 1):
            full = corr_mod.correction_vector(views[i], accepted, estimates[i])
            # payload coordinates then the kept masked-degree coordinates
            for l in range(plan.c[i]):
                p_out[i][l] = (p_out[i][l] - full[l]) % q
            for j in range(plan.k[i]):
                coord = plan.c[i] + plan.drop[i] + j
                kept[i][j] = (kept[i][j] - full[coord]) % q
    w = tuple(p_out[0][plan.dummies :]) + tuple(p_out[1])
    return DecodedResult(w_theta=w, accepted_set=accepted,
                         interference=(tuple(kept[0]), tuple(kept[1])))


def _decode_classical(scheme: BuiltScheme, answers) -> DecodedResult:
    plan, cfg = scheme.plan, scheme.cfg
    q, B = cfg.q, plan.B
    nv = len(scheme.responsive)
    if len(answers) != nv:
        raise DimensionMismatch("answer list length != responsive count")
    x = list(scheme.csa_resp[0].solve(answers))
    accepted = None
    if B > 0:
        zblock = tuple(x[nv - 2 * B :])
        views = corr_mod.build_views(scheme.csa_resp[0], plan.c[0], plan.m[0], B)
        accepted, est = corr_mod.search_joint([views], [zblock])
        est = est[0]
        full = corr_mod.correction_vector(views, accepted, est)
        x = [(xi - fi) % q for xi, fi in zip(x, full)]
    w = tuple(x[plan.dummies : plan.c[0]])
    inter = tuple(x[plan.c[0] : plan.c[0] + plan.m[0]])
    return DecodedResult(w_theta=w, accepted_set=accepted,
                         interference=(inter, ()))


# ======================================================================
# one full round
# ======================================================================


def run_round(cfg: SchemeConfig, seed, trial: int, theta: int | None = None,
              threat: ThreatConfig | None = None,
              plan: RegimePlan | None = None) -> Transcript:
    """Execute one protocol round deterministically from (seed, trial)."""
    plan = plan or plan_regime(cfg)
    label = f"t{trial}"
    if theta is None:
        theta = Stream(seed, f"{label}/theta").randint(cfg.K)
    if threat is None:
        threat = ThreatConfig.random(cfg, Stream(seed, f"{label}/placement"))
    pts = scheme_points(cfg, plan)
    W = gen_messages(cfg, plan, Stream(seed, f"{label}/w"))
    storage = gen_storage(cfg, plan, pts, W, Stream(seed, f"{label}/storage"))
    queries = gen_queries(cfg, plan, pts, theta, Stream(seed, f"{label}/query"))
    noise = gen_shared_noise(cfg, plan, pts, Stream(seed, f"{label}/mask"))
    scheme = build_scheme(cfg, plan, threat.unresponsive)
    honest = compute_answers(cfg, plan, storage, queries, noise)
    instances = 1 if plan.classical else 2

    ctx = ByzContext(
        q=cfg.q,
        servers=tuple(sorted(threat.byzantine)),
        instances=instances,
        storage={n: tuple(storage.rows[i][n] for i in range(instances))
                 for n in threat.byzantine},
        queries={n: tuple(queries.blocks[i][n] for i in range(instances))
                 for n in threat.byzantine},
        zhat={n: tuple(noise.zhat[i][n] for i in range(instances))
              for n in threat.byzantine},
        honest={n: tuple(honest[i][n] for i in range(instances))
                for n in threat.byzantine},
        stream=Stream(seed, f"{label}/strategy"),
    )
    dev_map = apply_strategy(threat.strategy, ctx)
    deviations = tuple(
        tuple(dev_map.get(n, (0,) * instances)[i] for n in range(cfg.N))
        for i in range(instances)
    )
    gst = Stream(seed, f"{label}/unresp")
    garbage = tuple(
        tuple(gst.randint(cfg.q) if n in scheme.unresponsive else 0
              for n in range(cfg.N))
        for i in range(instances)
    )
    answers = AnswerSet(
        honest=honest, deviations=deviations, unresp_garbage=garbage,
        channel=encode_channel(cfg, plan, scheme, honest, deviations, garbage),
    )
    if plan.classical:
        y = None
        result = decode(scheme, answers.channel)
    else:
        y = scheme.box.apply(answers.channel)
        result = decode(scheme, y)
    return Transcript(cfg=cfg, plan=plan, threat=threat, theta=theta, W=W,
                      storage=storage, queries=queries, noise=noise,
                      answers=answers, scheme=scheme, y=y, result=result)


def expected_dits(W, theta: int) -> tuple[int, ...]:
    return tuple(W[theta])
