"""Byzantine contamination location and cancellation.

A deviation vector Delta supported on at most B responsive servers perturbs
the interpolated coefficient vector by Cinv * Delta, where Cinv is the
inverse of the responsive interpolation matrix (payload Cauchy columns
followed by the masked-degree power columns). The honest coefficient vector
ends with 2B zeros, so the receiver sees, in those slots, two stacked B-row
snapshots of the contamination. For a candidate support J:

    Psi(J) = last B rows of Cinv, columns J       (estimation block)
    Phi(J) = preceding B rows of Cinv, columns J  (consistency block)

Delta is estimated from the Psi block and accepted iff the Phi block
agrees; the candidate search walks supports in lexicographic order and in
the two-instance regimes demands joint consistency (the lying servers are
the same in both instances). Any accepted candidate yields the same full
correction vector, which tests verify exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DecodeFailure, DimensionMismatch, Singular
from .field import FqMatrix


@dataclass(frozen=True)
class CorrectionViews:
    """Inverse-interpolation slices for one instance."""

    cinv: FqMatrix
    payload: int
    mask: int
    B: int

    @property
    def nv(self) -> int:
        return self.cinv.rows


@dataclass(frozen=True)
class DeviationEstimate:
    """Candidate support J with its estimated per-server deviations."""

    J: tuple[int, ...]
    delta: tuple[int, ...]
    consistent: bool


def build_views(csa: FqMatrix, payload_len: int, mask_len: int,
                byz_count: int) -> CorrectionViews:
    """Precompute Cinv for a responsive interpolation matrix whose columns
    are payload_len Cauchy + (mask_len + 3*byz_count) power columns."""
    if payload_len + mask_len + 3 * byz_count != csa.rows:
        raise DimensionMismatch(
            f"payload {payload_len} + mask {mask_len} + 3B "
            f"{3 * byz_count} != matrix size {csa.rows}"
        )
    return CorrectionViews(cinv=csa.inv(), payload=payload_len,
                           mask=mask_len, B=byz_count)


def d_rows(views: CorrectionViews, a: int, J) -> FqMatrix:
    """D(a, J): first a rows of Cinv restricted to columns J."""
    return views.cinv.take_rows(range(a)).take_cols(J)


def phi(views: CorrectionViews, J) -> FqMatrix:
    nv, B = views.nv, views.B
    return views.cinv.take_rows(range(nv - 2 * B, nv - B)).take_cols(J)


def psi(views: CorrectionViews, J) -> FqMatrix:
    nv, B = views.nv, views.B
    return views.cinv.take_rows(range(nv - B, nv)).take_cols(J)


def estimate_and_check(views: CorrectionViews, contaminated, J) -> DeviationEstimate:
    """Estimate deviations on support J from the last-B contaminated slots
    and test consistency against the preceding B slots."""
    B = views.B
    J = tuple(J)
    if len(contaminated) != 2 * B:
        raise DimensionMismatch("contaminated block must have 2B entries")
    try:
        delta = psi(views, J).solve(contaminated[B:])
    except Singular:
        # the invertibility lemma says this cannot happen for true layouts;
        # treat defensively as an inconsistent candidate
        return DeviationEstimate(J=J, delta=(0,) * B, consistent=False)
    check = phi(views, J).matvec(delta)
    ok = tuple(check) == tuple(x % views.cinv.q for x in contaminated[:B])
    return DeviationEstimate(J=J, delta=tuple(delta), consistent=ok)


def correction_vector(views: CorrectionViews, J, delta) -> tuple[int, ...]:
    """Full nv-length contamination vector Cinv[:, J] * delta."""
    if not J:
        return (0,) * views.nv
    return views.cinv.take_cols(J).matvec(delta)


def search_joint(views_list, zblocks):
    """Lexicographically first support consistent in every instance.

    views_list / zblocks hold one entry per instance; the support candidate
    is shared across instances (the lying servers are the same). Returns
    (accepted J, per-instance estimated deltas); DecodeFailure when no
    candidate of size B explains all contaminated blocks.
    """
    if not views_list:
        raise DimensionMismatch("need at least one instance")
    B = views_list[0].B
    nv = views_list[0].nv
    for J in itertools.combinations(range(nv), B):
        estimates = []
        for views, z in zip(views_list, zblocks):
            est = estimate_and_check(views, z, J)
            if not est.consistent:
                break
            estimates.append(est)
        else:
            return tuple(J), [est.delta for est in estimates]
    raise DecodeFailure(
        f"no Byzantine candidate set of size {B} is consistent with the "
        f"received correction data"
    )


def search_and_correct(views_list, zblocks):
    """search_joint plus the full per-instance correction vectors."""
    accepted, deltas = search_joint(views_list, zblocks)
    corrections = [
        correction_vector(views, accepted, delta)
        for views, delta in zip(views_list, deltas)
    ]
    return accepted, corrections
