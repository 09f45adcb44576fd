import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lcsmod.errors import CompositeModulus, DimensionMismatch, EvenModulus, NotInvertible, TooLarge
from lcsmod.families import ReducedSquare
from lcsmod.lcs import magic_square
from lcsmod.zd_linalg import (
    ZdMatrix,
    ZdVector,
    ZMod,
    brute_force_solve,
    half_inverse,
    inv_mod,
    kernel_generators,
    matrix,
    rank_mod_p,
    smith_diagonalize,
    solve_linear_system,
)


@st.composite
def systems(draw, moduli=range(2, 10), max_m=4, max_n=5):
    d = draw(st.sampled_from(list(moduli)))
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.lists(st.integers(0, d - 1), min_size=n, max_size=n), min_size=m, max_size=m))
    b = draw(st.lists(st.integers(0, d - 1), min_size=m, max_size=m))
    return matrix(rows, d), b


# -- scalars -----------------------------------------------------------------


def test_inv_mod_examples():
    assert inv_mod(ZMod(2, 5)) == 3
    assert inv_mod(ZMod(1, 7)) == 1
    with pytest.raises(NotInvertible):
        inv_mod(ZMod(2, 4))


def test_inv_mod_exhaustive_up_to_50():
    for d in range(2, 51):
        for a in range(d):
            if math.gcd(a, d) == 1:
                assert (inv_mod(a, d) * a).value == 1 % d
            else:
                with pytest.raises(NotInvertible):
                    inv_mod(a, d)


def test_half_inverse():
    assert half_inverse(3) == 2
    assert half_inverse(7) == 4
    with pytest.raises(EvenModulus):
        half_inverse(4)


def test_zmod_reduces_and_compares():
    assert ZMod(-1, 5).value == 4
    assert ZMod(3, 5) + 4 == 2
    assert ZMod(3, 5) * ZMod(4, 5) == 2
    assert -ZMod(1, 3) == 2


# -- solving ------------------------------------------------------------------


def test_identity_system():
    x = solve_linear_system(ZdMatrix.identity(3, 5), [1, 2, 3])
    assert x.tolist() == [1, 2, 3]


@pytest.mark.parametrize("d", [2, 3, 4, 6, 9])
def test_all_solid_square_is_solvable(d):
    lcs = magic_square(d, (0,) * 6)
    x = solve_linear_system(lcs.M, lcs.b)
    assert x is not None
    assert lcs.M.matvec(x).tolist() == [0] * 6


def test_random_4x5_mod_6_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(30):
        M = matrix(rng.integers(0, 6, (4, 5)).tolist(), 6)
        b = rng.integers(0, 6, 4).tolist()
        x = solve_linear_system(M, b)
        sols = brute_force_solve(M, b)
        assert (x is not None) == bool(sols)
        if x is not None:
            assert x in sols


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        solve_linear_system(ZdMatrix.identity(2, 3), [1, 2, 3])


def test_parity_obstruction():
    M = matrix([[2]], 4)
    assert solve_linear_system(M, [1]) is None
    assert brute_force_solve(M, [1]) == []
    assert solve_linear_system(M, [2]).tolist() in ([1], [3])


@given(systems())
def test_solver_matches_brute_force(system):
    M, b = system
    x = solve_linear_system(M, b)
    sols = brute_force_solve(M, b)
    assert (x is not None) == bool(sols)
    if x is not None:
        assert M.matvec(x).tolist() == [v % M.modulus for v in b]


@given(systems())
def test_smith_diagonalize_factorisation(system):
    M, _ = system
    d = M.modulus
    S, U, V = smith_diagonalize(M)
    prod = (np.array(U) @ np.array(M.rows) @ np.array(V)) % d
    assert (prod == np.array(S)).all()
    m, n = M.shape
    assert all(S[i][j] == 0 for i in range(m) for j in range(n) if i != j)
    # U and V are invertible mod d: their determinants are units
    for X in (U, V):
        det = round(np.linalg.det(np.array(X, dtype=float)))
        assert math.gcd(det % d, d) == 1


@given(systems())
def test_kernel_generators_lie_in_kernel(system):
    M, _ = system
    for g in kernel_generators(M):
        assert not any(M.matvec(g))


def test_kernel_generators_span_kernel():
    M = matrix([[1, 1, 0], [0, 2, 2]], 4)
    gens = kernel_generators(M)
    spanned = {(0, 0, 0)}
    for _ in range(4):
        spanned |= {tuple((a + c * v) % 4 for a, v in zip(s, g)) for s in spanned for g in gens for c in range(4)}
    truth = {tuple(x) for x in brute_force_solve(M, [0, 0])}
    assert spanned == truth


# -- rank ----------------------------------------------------------------------


def test_rank_examples():
    assert rank_mod_p(ReducedSquare(3, (1,) * 6, (0,) * 6).lcs().M) == 5
    assert rank_mod_p(ReducedSquare(3, (1, 2, 1, 1, 1, 1), (0,) * 6).lcs().M) == 6
    assert rank_mod_p(ZdMatrix.zeros(3, 4, 5)) == 0
    with pytest.raises(CompositeModulus):
        rank_mod_p(ZdMatrix.identity(2, 6))


@given(systems(moduli=(2, 3, 5, 7)), st.data())
def test_rank_invariant_under_row_operations(system, data):
    M, _ = system
    p = M.modulus
    rows = [list(r) for r in M.rows]
    i = data.draw(st.integers(0, len(rows) - 1))
    j = data.draw(st.integers(0, len(rows) - 1))
    c = data.draw(st.integers(1, p - 1))
    rows[i], rows[j] = rows[j], rows[i]
    rows[i] = [c * v for v in rows[i]]
    assert rank_mod_p(matrix(rows, p)) == rank_mod_p(M)


@given(systems(moduli=(2, 3, 5, 7)))
def test_rank_matches_kernel_size(system):
    M, _ = system
    p = M.modulus
    n = M.shape[1]
    zero = [0] * M.shape[0]
    assert len(brute_force_solve(M, zero)) == p ** (n - rank_mod_p(M))


# -- brute force ------------------------------------------------------------------


def test_brute_force_examples():
    assert [x.tolist() for x in brute_force_solve(matrix([[1, 1]], 2), [0])] == [[0, 0], [1, 1]]
    sq = magic_square(2)
    assert brute_force_solve(sq.M, sq.b) == []


def test_brute_force_lexicographic_and_cap():
    sols = brute_force_solve(matrix([[1, 1, 1]], 3), [0])
    tuples = [tuple(x) for x in sols]
    assert tuples == sorted(tuples) and len(tuples) == 9
    with pytest.raises(TooLarge):
        brute_force_solve(ZdMatrix.zeros(1, 21, 2), [0])
    assert len(brute_force_solve(matrix([[1, 0]], 3), [0], cap=9)) == 3


def test_vector_and_matrix_validation():
    assert ZdVector((5, -1), 3).tolist() == [2, 2]
    with pytest.raises(DimensionMismatch):
        ZdMatrix(((1, 2), (3,)), 5)
