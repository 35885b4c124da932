import pytest

from qspir.codes import canonical_points, dual_scaling
from qspir.errors import DimensionMismatch, NotInvertible, NotSSO, Singular
from qspir.field import FqMatrix, block_diag
from qspir.nsumbox import (
    TransferBox,
    check_sso,
    make_transfer,
    make_transfer_dual_qcsa,
    precode,
)


# ---------------------------------------------------------
# self-orthogonality oracle
# ---------------------------------------------------------

def naive_sso(G):
    """Direct G^t J G computation with J = [[0, I], [-I, 0]]."""
    q = G.q
    N = G.rows // 2
    m = G.cols
    for a in range(m):
        for b in range(m):
            s = 0
            for r in range(N):
                s += G[(r, a)] * G[(N + r, b)] - G[(N + r, a)] * G[(r, b)]
            if s % q != 0:
                return False
    return True


def test_check_sso_matches_naive():
    import numpy as np
    rng = np.random.default_rng(3)
    q = 7
    for _ in range(10):
        rows = [[int(rng.integers(0, q)) for _ in range(3)] for _ in range(6)]
        G = FqMatrix.from_rows(rows, q)
        assert check_sso(G) == naive_sso(G)


def test_check_sso_accepts_planted_isotropic():
    # columns (e_i, 0) pair to zero under the symplectic form
    q = 11
    rows = [[1, 0], [0, 1], [0, 0], [0, 0], [0, 0], [0, 0]]
    assert check_sso(FqMatrix.from_rows(rows, q))


# ---------------------------------------------------------
# box construction and the selector identity
# ---------------------------------------------------------

def test_make_transfer_rejects_non_sso():
    q = 5
    G = FqMatrix.from_rows([[1, 0], [0, 0], [0, 1], [0, 0]], q)
    H = FqMatrix.identity(4, q).take_cols([0, 1])
    assert not check_sso(G)
    with pytest.raises(NotSSO):
        make_transfer(G, H)


def test_make_transfer_rejects_singular_stack():
    q = 5
    G = FqMatrix.from_rows([[1, 0], [0, 1], [0, 0], [0, 0]], q)
    H = G  # duplicated columns cannot span
    with pytest.raises(NotInvertible):
        make_transfer(G, H)


def test_selector_identity_sweep():
    """Receiver recovers exactly the second column block's coefficients:
    box(generator(x)) == x[N:] for all unit inputs, every N <= 8 at q = 13."""
    q = 13
    for N in range(2, 9):
        for L in range(0, N // 2 + 1):
            if N + max(L, 1) > q:
                continue
            pts = canonical_points(N, max(L, 1), 0, q)
            u = tuple(range(1, N + 1))
            box = make_transfer_dual_qcsa(pts, u, L)
            for col in range(2 * N):
                x = [0] * (2 * N)
                x[col] = 1
                y = box.apply(box.generator.matvec(x))
                want = tuple(1 if r == col - N else 0 for r in range(N))
                assert tuple(y) == want


def test_dual_box_first_block_is_sso_and_stack_invertible():
    q = 13
    for N in range(2, 9):
        pts = canonical_points(N, 1, 0, q)
        box = make_transfer_dual_qcsa(pts, tuple(range(1, N + 1)), 1)
        assert check_sso(box.g)
        assert box.generator.rank() == 2 * N


# ---------------------------------------------------------
# precoding
# ---------------------------------------------------------

def test_precode_composes_with_the_inverse():
    """precode(box, V1, V2) then feeding V-precoded coefficients must give
    the same receiver output as the raw box."""
    q = 13
    N = 4
    pts = canonical_points(N, 1, 0, q)
    box = make_transfer_dual_qcsa(pts, (1, 2, 3, 4), 1)
    V1 = FqMatrix.from_rows(
        [[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 2], [0, 0, 0, 1]], q)
    V2 = FqMatrix.from_rows(
        [[2, 0, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 5, 1]], q)
    boxed = precode(box, V1, V2)
    x = [3, 1, 4, 1, 5, 9, 2, 6]
    # raw on-air word, decoded through the precoded receiver map
    y = boxed.apply(box.generator.matvec(x))
    want = V2.inv().matvec(x[N:])
    assert tuple(y) == tuple(want)
    # the precoded box still satisfies its own selector identity
    y2 = boxed.apply(boxed.generator.matvec(x))
    assert tuple(y2) == tuple(x[N:])


def test_precode_rejects_singular_precoders():
    q = 13
    pts = canonical_points(4, 1, 0, q)
    box = make_transfer_dual_qcsa(pts, (1, 2, 3, 4), 1)
    bad = FqMatrix.zeros(4, 4, q)
    with pytest.raises(Singular):
        precode(box, bad, FqMatrix.identity(4, q))
