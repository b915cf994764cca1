import random
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from _data import DCUBE, DCUBE_M, DCUBE_Q, KALEIDOSCOPE_M, SPINNER, SPINNER_M, SPINNER_M_AS_PRINTED, SPINNER_Q
from usokit import (
    Face,
    blowup_pmatrix,
    build_mv,
    dcube_outmap,
    face_subcube,
    has_property_l,
    is_p_matrix,
    is_spd,
    is_uso,
    lcp_solution_at,
    lgraph,
    pcube_outmap,
    schur_reduce,
    solve_exact,
)
from usokit.errors import NotGeneric, NotPMatrix, NotSpd, SingularMatrix, ZeroPivot
from usokit.lcp import (
    as_matrix,
    as_vector,
    bareiss_determinant,
    leading_minors,
    mat_vec,
    random_diagonally_dominant,
    random_generic_q,
    random_spd,
    reduced_rhs,
)


def to_np(m):
    return np.array([[float(x) for x in row] for row in m])


def float_outmap(m, q):
    """Sign oracle using floating-point solves."""
    n = len(q)
    a = to_np(m)
    out = []
    for v in range(1 << n):
        mv = np.eye(n)
        for i in range(n):
            if v >> i & 1:
                mv[:, i] = -a[:, i]
        x = np.linalg.solve(mv, np.array([float(y) for y in q]))
        out.append(sum(1 << i for i in range(n) if x[i] < 0))
    return out


# exact algebra

int_matrices = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(int_matrices)
def test_determinant_matches_numpy(rows):
    det = bareiss_determinant(as_matrix(rows))
    assert det.denominator == 1
    assert float(det) == pytest.approx(np.linalg.det(np.array(rows, dtype=float)), abs=1e-6)


def test_determinant_rational():
    m = as_matrix([[Fraction(1, 2), 1], [Fraction(1, 3), Fraction(2, 5)]])
    assert bareiss_determinant(m) == Fraction(1, 5) - Fraction(1, 3)


@given(int_matrices, st.data())
def test_solve_exact(rows, data):
    n = len(rows)
    b = as_vector(data.draw(st.lists(st.integers(-9, 9), min_size=n, max_size=n)))
    m = as_matrix(rows)
    if bareiss_determinant(m) == 0:
        with pytest.raises(SingularMatrix):
            solve_exact(m, b)
    else:
        assert mat_vec(m, solve_exact(m, b)) == b


def test_build_mv():
    m = as_matrix([[1, 2], [3, 4]])
    assert build_mv(m, 0) == as_matrix([[1, 0], [0, 1]])
    assert build_mv(m, 0b01) == as_matrix([[-1, 0], [-3, 1]])
    assert build_mv(m, 0b11) == as_matrix([[-1, -2], [-3, -4]])


def test_mj_inverse_column_pattern():
    # M({j})^-1 is the identity except column j = (-m_ij / m_jj), with -1/m_jj on the diagonal
    m = DCUBE_M
    for j in range(3):
        cols = [solve_exact(build_mv(m, 1 << j), [Fraction(int(r == c)) for r in range(3)]) for c in range(3)]
        for c in range(3):
            for r in range(3):
                if c != j:
                    assert cols[c][r] == int(r == c)
                elif r == j:
                    assert cols[c][r] == -1 / m[j][j]
                else:
                    assert cols[c][r] == -m[r][j] / m[j][j]


# P-matrices and P-cubes

def test_spinner_matrix():
    assert is_p_matrix(SPINNER_M)
    assert pcube_outmap(SPINNER_M, SPINNER_Q) == SPINNER


def test_printed_spinner_matrix_is_not_p():
    assert not is_p_matrix(SPINNER_M_AS_PRINTED)
    with pytest.raises(NotPMatrix):
        pcube_outmap(SPINNER_M_AS_PRINTED, SPINNER_Q)


def test_pcube_matches_float_oracle():
    rng = random.Random(7)
    for _ in range(30):
        n = rng.randint(1, 5)
        m = random_diagonally_dominant(n, rng)
        q = random_generic_q(m, rng)
        assert list(pcube_outmap(m, q).table) == float_outmap(m, q)


def test_degenerate_q():
    with pytest.raises(NotGeneric) as err:
        pcube_outmap(SPINNER_M, as_vector([0, 1, 1]))
    assert err.value.vertex == 0 and err.value.index == 1


def test_lcp_solution():
    for v in range(8):
        sol = lcp_solution_at(SPINNER_M, SPINNER_Q, v)
        assert all(x == 0 for x in sol.residual(SPINNER_M, SPINNER_Q))
        assert all(sol.w[i] * sol.z[i] == 0 for i in range(3))
    # the sink carries the feasible solution
    assert lcp_solution_at(SPINNER_M, SPINNER_Q, 0).is_feasible()
    assert sum(lcp_solution_at(SPINNER_M, SPINNER_Q, v).is_feasible() for v in range(8)) == 1


def test_random_pcubes_are_usos():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(2, 5)
        m = random_diagonally_dominant(n, rng)
        assert is_p_matrix(m)
        assert is_uso(pcube_outmap(m, random_generic_q(m, rng)))


# D-cubes

def test_dcube_example():
    assert is_spd(DCUBE_M)
    assert leading_minors(DCUBE_M) == [5, 105, 1]
    o = dcube_outmap(DCUBE_M, DCUBE_Q)
    assert o == DCUBE
    assert has_property_l(o).holds


def test_not_spd():
    with pytest.raises(NotSpd):
        dcube_outmap(SPINNER_M, SPINNER_Q)
    assert not is_spd(as_matrix([[1, 2], [2, 1]]))


@pytest.mark.parametrize("seed", range(10))
def test_random_spd(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    m = random_spd(n, rng)
    assert is_spd(m)
    assert np.all(np.linalg.eigvalsh(to_np(m)) > 0)
    o = dcube_outmap(m, random_generic_q(m, rng))
    assert is_uso(o) and has_property_l(o).holds


# Schur reduction

def test_schur_example():
    m = as_matrix([[1, 2], [2, 25]])
    assert schur_reduce(m, 1) == as_matrix([[21]])
    assert schur_reduce(DCUBE_M, 2) == [[5 - Fraction(100, 41), 2 - Fraction(60, 41)], [2 - Fraction(60, 41), 1 - Fraction(36, 41)]]
    assert schur_reduce(DCUBE_M, 1) == as_matrix([[21, -2], [-2, Fraction(1, 5)]])


def test_schur_zero_pivot():
    with pytest.raises(ZeroPivot):
        schur_reduce(as_matrix([[0, 1], [1, 1]]), 1)


def test_schur_symmetric_identity():
    # reducing an SPD matrix keeps it SPD and symmetric
    rng = random.Random(3)
    for _ in range(10):
        n = rng.randint(2, 5)
        m = random_spd(n, rng)
        for k in range(1, n + 1):
            r = schur_reduce(m, k)
            assert is_spd(r)
            # det M = m_kk det(reduced)
            assert bareiss_determinant(m) == m[k - 1][k - 1] * bareiss_determinant(r)


def face_consistent(m, q, o):
    n = len(q)
    for k in range(1, n + 1):
        b = 1 << (k - 1)
        face = face_subcube(o, Face(b, (1 << n) - 1))
        if face != pcube_outmap(schur_reduce(m, k), reduced_rhs(m, q, k), check=False):
            return False
    return True


def test_face_consistency_dcube_example():
    assert face_consistent(DCUBE_M, DCUBE_Q, DCUBE)


def test_face_consistency_pcubes():
    rng = random.Random(5)
    for _ in range(15):
        n = rng.randint(2, 5)
        m = random_diagonally_dominant(n, rng)
        q = random_generic_q(m, rng)
        assert face_consistent(m, q, pcube_outmap(m, q))


# arcs at the empty set

def arc_by_formula(m, q, s, t):
    return q[t] * (q[t] - m[t][s] / m[s][s] * q[s]) < 0


def test_arc_criterion_pcubes():
    rng = random.Random(9)
    for _ in range(20):
        n = rng.randint(2, 5)
        m = random_diagonally_dominant(n, rng)
        q = random_generic_q(m, rng)
        g = lgraph(pcube_outmap(m, q), 0)
        for s, t in combinations(range(n), 2):
            for a, b in ((s, t), (t, s)):
                assert ((a + 1, b + 1) in g.arcs) == arc_by_formula(m, q, a, b)


def test_chain_inequality_along_paths():
    rng = random.Random(13)
    for _ in range(20):
        n = rng.randint(2, 6)
        m = random_spd(n, rng)
        q = random_generic_q(m, rng)
        g = lgraph(dcube_outmap(m, q), 0)
        # transitive closure of the arcs
        reach = {(s, t) for s, t in g.arcs}
        changed = True
        while changed:
            new = {(a, d) for a, b in reach for c, d in reach if b == c and a != d}
            changed = not new <= reach
            reach |= new
        for s, t in reach:
            assert 0 < m[s - 1][s - 1] * q[t - 1] ** 2 < m[t - 1][t - 1] * q[s - 1] ** 2


# blow-up

def test_blowup_of_spinner_matrix():
    assert blowup_pmatrix(SPINNER_M) == KALEIDOSCOPE_M
    assert is_p_matrix(KALEIDOSCOPE_M)


def test_blowup_rejects_non_p():
    with pytest.raises(NotPMatrix):
        blowup_pmatrix(SPINNER_M_AS_PRINTED)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_blowup_keeps_p(seed, n):
    m = random_diagonally_dominant(n, random.Random(seed))
    assert is_p_matrix(blowup_pmatrix(m))
