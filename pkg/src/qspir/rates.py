"""Achievable-rate case analysis, independent of the constructive planner.

This module evaluates the printed rate formulas and their entry conditions
directly; it deliberately does not consult the layout planner, so tests can
cross-check formula against construction. Per-instance dit counts are
reported alongside the rate; infeasible parameter combinations come back
as rate 0 with a reason string.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .plan import Model, SchemeConfig


@dataclass(frozen=True)
class RatePoint:
    """One evaluated parameter combination."""

    model: Model
    N: int
    K: int
    X: int
    T: int
    E: int
    U: int
    B: int
    q: int
    feasible: bool
    regime: int            # 0 when infeasible
    L1: int
    L2: int
    rate: Fraction
    boundary: bool
    reason: str            # empty when feasible

    def csv_row(self) -> list:
        return [
            self.model.value, self.N, self.K, self.X, self.T, self.E,
            self.U, self.B, self.q, self.regime, self.L1, self.L2,
            self.rate.numerator, self.rate.denominator,
            1 if self.boundary else 0,
        ]


CSV_HEADER = [
    "model", "N", "K", "X", "T", "E", "U", "B", "q", "regime",
    "L1", "L2", "rate_num", "rate_den", "boundary_flag",
]


def theorem_rate(cfg: SchemeConfig) -> RatePoint:
    """Evaluate the model's rate cases at cfg; exact rational arithmetic."""
    N, U, B, E = cfg.N, cfg.U, cfg.B, cfg.E
    H, M = cfg.H, cfg.M
    hmb = H + M + B
    mu, nu = N // 2, (N + 1) // 2
    delta = N + E - 2 * H - 2 * M - 2 * B

    candidates: list[tuple[int, int, int, bool]] = []  # (regime, L1, L2, tie)
    if 2 * hmb >= N:
        if E <= 2 * hmb - N:
            L = N - H - M - 3 * B - U
            if N - U > hmb and L >= 1:
                candidates.append((1, L, L, False))
        else:
            L1 = N - H - M - 3 * B - U - delta
            L2 = L1 + delta
            if 2 * (N - U) - delta > 2 * hmb and L1 >= 0 and L1 + L2 >= 1:
                candidates.append((2, L1, L2, False))
    else:
        split = 2 * B + U + E
        if split <= hmb and N > 6 * B + 2 * U + E:
            L1 = nu - 3 * B - U - E
            L2 = mu - 3 * B - U
            if L1 >= 0 and L2 >= 0 and L1 + L2 >= 1:
                candidates.append((3, L1, L2, split == hmb))
        if split >= hmb:
            extra = 2 * M if cfg.model.dynamic_eaves else M
            L = N - H - M - 3 * B - U
            if N > H + 3 * B + U + extra and L >= 1:
                candidates.append((4, L, 0, split == hmb))

    if not candidates:
        return _infeasible_point(cfg, "no rate case applies")
    regime, L1, L2, tie = max(
        candidates, key=lambda c: (Fraction(c[1] + c[2], N), -c[0])
    )
    rate = min(Fraction(1), Fraction(L1 + L2, N))
    return RatePoint(
        model=cfg.model, N=N, K=cfg.K, X=cfg.X, T=cfg.T, E=E, U=U, B=B,
        q=cfg.q, feasible=True, regime=regime, L1=L1, L2=L2, rate=rate,
        boundary=tie, reason="",
    )


def _infeasible_point(cfg: SchemeConfig, reason: str) -> RatePoint:
    return RatePoint(
        model=cfg.model, N=cfg.N, K=cfg.K, X=cfg.X, T=cfg.T, E=cfg.E,
        U=cfg.U, B=cfg.B, q=cfg.q, feasible=False, regime=0, L1=0, L2=0,
        rate=Fraction(0), boundary=False, reason=reason,
    )


def sweep(models, Ns, Xs, Ts, Es, Us, Bs, K: int = 2, q: int = 257):
    """Deterministic nested sweep; yields RatePoint per combination.

    Combinations that violate basic config validity (e.g. B > 0 in the
    model without Byzantine servers) are skipped entirely rather than
    reported infeasible.
    """
    for model in models:
        model = Model.parse(model)
        for N in Ns:
            for X in Xs:
                for T in Ts:
                    for E in Es:
                        for U in Us:
                            for B in Bs:
                                if B > 0 and not model.byzantine:
                                    continue
                                cfg = SchemeConfig(
                                    model=model, N=N, K=K, X=X, T=T,
                                    E=E, U=U, B=B, q=q,
                                )
                                yield theorem_rate(cfg)
