"""Structured code matrices: Cauchy/Vandermonde hybrids and GRS generators.

The central object is the square hybrid matrix whose row for evaluation
point a_i is

    [ 1/(f_1-a_i) ... 1/(f_L-a_i) | 1  a_i  a_i^2 ... a_i^{n-L-1} ]

(L Cauchy columns followed by n-L Vandermonde columns). Its inverse drives
interference alignment and decoding throughout the protocol. GRS and
Cauchy-only generators describe what colluding or eavesdropping coalitions
see; the dual scaling vector v makes the pair of instance generators
self-orthogonal inside the two-instance transfer construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BadPoints, DimensionMismatch, FieldTooSmall
from .field import FqMatrix, fe_inv, is_prime


@dataclass(frozen=True)
class Points:
    """Evaluation data: server points alphas, alignment points fs, precoder
    nodes bs, all reduced mod the prime q."""

    q: int
    alphas: tuple[int, ...]
    fs: tuple[int, ...]
    bs: tuple[int, ...] = ()

    def __post_init__(self):
        if not is_prime(self.q):
            raise BadPoints(f"{self.q} is not prime")
        object.__setattr__(self, "alphas", tuple(a % self.q for a in self.alphas))
        object.__setattr__(self, "fs", tuple(f % self.q for f in self.fs))
        object.__setattr__(self, "bs", tuple(b % self.q for b in self.bs))
        if len(set(self.alphas)) != len(self.alphas):
            raise BadPoints("alpha points not pairwise distinct")
        if len(set(self.fs)) != len(self.fs):
            raise BadPoints("f points not pairwise distinct")
        if set(self.alphas) & set(self.fs):
            raise BadPoints("alpha and f points collide")
        if len(set(self.bs)) != len(self.bs):
            raise BadPoints("b points not pairwise distinct")

    def restrict(self, indices) -> "Points":
        """Sub-family keeping only the alpha points at the given 0-based indices."""
        alphas = tuple(self.alphas[i] for i in indices)
        return Points(self.q, alphas, self.fs, self.bs)


def canonical_points(N: int, num_f: int, width: int, q: int) -> Points:
    """Default placement: alphas 1..N, fs following them (wrapping mod q),
    precoder nodes 0,1,...,width-1. FieldTooSmall when q cannot host all
    distinct values."""
    if N + num_f > q:
        raise FieldTooSmall(
            f"need {N}+{num_f} distinct points but q={q}"
        )
    if width > q:
        raise FieldTooSmall(f"need {width} distinct precoder nodes but q={q}")
    alphas = tuple(range(1, N + 1))
    fs = tuple((N + j) % q for j in range(1, num_f + 1))
    bs = tuple(range(width))
    return Points(q, alphas, fs, bs)


def build_csa(n_rows: int, L: int, pts: Points) -> FqMatrix:
    """Square n_rows x n_rows hybrid matrix over the first n_rows alphas:
    L Cauchy columns (points fs[:L]) then n_rows-L power columns."""
    q = pts.q
    if n_rows > len(pts.alphas):
        raise DimensionMismatch(
            f"need {n_rows} alpha points, have {len(pts.alphas)}"
        )
    if L > len(pts.fs):
        raise DimensionMismatch(f"need {L} f points, have {len(pts.fs)}")
    if L > n_rows:
        raise DimensionMismatch("more Cauchy columns than rows")
    rows = []
    for a in pts.alphas[:n_rows]:
        row = [fe_inv(pts.fs[j] - a, q) for j in range(L)]
        p = 1
        for _ in range(n_rows - L):
            row.append(p)
            p = p * a % q
        rows.append(row)
    return FqMatrix.from_rows(rows, q)


def build_vandermonde(width: int, pts: Points) -> FqMatrix:
    """Square width x width matrix V[i][j] = bs[i]^j."""
    if width > len(pts.bs):
        raise DimensionMismatch(f"need {width} b points, have {len(pts.bs)}")
    q = pts.q
    rows = []
    for b in pts.bs[:width]:
        row = []
        p = 1
        for _ in range(width):
            row.append(p)
            p = p * b % q
        rows.append(row)
    return FqMatrix.from_rows(rows, q)


def build_grs(N: int, k: int, pts: Points, u) -> FqMatrix:
    """N x k generalized Reed-Solomon generator: row n is u_n*(1, a_n, ..., a_n^{k-1})."""
    q = pts.q
    u = _check_scaling(N, u, q)
    if N > len(pts.alphas):
        raise DimensionMismatch("not enough alpha points")
    rows = []
    for n in range(N):
        a = pts.alphas[n]
        row = []
        p = u[n]
        for _ in range(k):
            row.append(p)
            p = p * a % q
        rows.append(row)
    return FqMatrix.from_rows(rows, q)


def build_gc(N: int, L: int, pts: Points, u) -> FqMatrix:
    """N x L generalized Cauchy generator: entry (n, j) = u_n/(f_j - a_n)."""
    q = pts.q
    u = _check_scaling(N, u, q)
    if N > len(pts.alphas):
        raise DimensionMismatch("not enough alpha points")
    if L > len(pts.fs):
        raise DimensionMismatch("not enough f points")
    rows = []
    for n in range(N):
        a = pts.alphas[n]
        rows.append([u[n] * fe_inv(pts.fs[j] - a, q) % q for j in range(L)])
    return FqMatrix.from_rows(rows, q)


def build_qcsa(N: int, L: int, pts: Points, u) -> FqMatrix:
    """Row-scaled hybrid matrix diag(u) * CSA(N, L)."""
    base = build_csa(N, L, pts)
    q = pts.q
    u = _check_scaling(N, u, q)
    rows = [[u[i] * x % q for x in base.row(i)] for i in range(N)]
    return FqMatrix.from_rows(rows, q)


def dual_scaling(u, pts: Points) -> tuple[int, ...]:
    """Second-instance scaling: v_j = u_j^{-1} * prod_{i != j} (a_j - a_i)^{-1}.

    With this choice sum_n u_n v_n a_n^k = 0 for every 0 <= k <= N-2, the
    identity behind self-orthogonality of the paired instance generators.
    """
    q = pts.q
    N = len(pts.alphas)
    u = _check_scaling(N, u, q)
    v = []
    for j in range(N):
        prod = 1
        for i in range(N):
            if i != j:
                prod = prod * ((pts.alphas[j] - pts.alphas[i]) % q) % q
        v.append(fe_inv(u[j], q) * fe_inv(prod, q) % q)
    return tuple(v)


def _check_scaling(N: int, u, q: int) -> tuple[int, ...]:
    u = tuple(int(x) % q for x in u)
    if len(u) != N:
        raise DimensionMismatch(f"scaling vector length {len(u)} != {N}")
    if any(x == 0 for x in u):
        raise BadPoints("scaling vector has a zero entry")
    return u
