"""Exact rational linear algebra and P-cubes from linear complementarity data.

Matrices are lists of rows of :class:`fractions.Fraction`; every sign
decision is made exactly.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .cube import OutMap, bits
from .errors import DimensionTooLarge, NotGeneric, NotPMatrix, NotSpd, SingularMatrix, ZeroPivot

Matrix = list[list[Fraction]]
Vector = list[Fraction]

MAX_P_TEST_DIM = 14


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    m = [[Fraction(x) for x in row] for row in rows]
    if any(len(row) != len(m[0]) for row in m):
        raise ValueError("matrix rows have different lengths")
    return m


def as_vector(values: Sequence) -> Vector:
    return [Fraction(x) for x in values]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def _square(a: Matrix) -> int:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    return n


def _integer_row(row: Sequence[Fraction]) -> list[int]:
    scale = math.lcm(*(x.denominator for x in row)) if row else 1
    return [int(x * scale) for x in row]


def bareiss_determinant(a: Matrix) -> Fraction:
    """Determinant by fraction-free elimination on a denominator-cleared copy."""
    n = _square(a)
    if n == 0:
        return Fraction(1)
    scale = Fraction(1)
    m = []
    for row in a:
        den = math.lcm(*(x.denominator for x in row))
        scale *= den
        m.append([int(x * den) for x in row])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return Fraction(sign * m[n - 1][n - 1]) / scale


def solve_exact(a: Matrix, b: Vector) -> Vector:
    """Solve ``a x = b`` exactly with fraction-free elimination and back substitution."""
    n = _square(a)
    if len(b) != n:
        raise ValueError("right-hand side has the wrong length")
    aug = [_integer_row(list(row) + [Fraction(bi)]) for row, bi in zip(a, b)]
    prev = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if aug[r][k] != 0), None)
        if piv is None:
            raise SingularMatrix(f"matrix is singular (no pivot in column {k + 1})")
        if piv != k:
            aug[k], aug[piv] = aug[piv], aug[k]
        pivot = aug[k][k]
        for i in range(k + 1, n):
            mik = aug[i][k]
            row_i, row_k = aug[i], aug[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(aug[i][n]) - sum((aug[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        x[i] = s / aug[i][i]
    return x


def mat_vec(a: Matrix, x: Vector) -> Vector:
    return [sum((aij * xj for aij, xj in zip(row, x)), Fraction(0)) for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def principal_submatrix(m: Matrix, idx: Sequence[int]) -> Matrix:
    return [[m[i][j] for j in idx] for i in idx]


def build_mv(m: Matrix, v: int) -> Matrix:
    """Column i is -M_i for dimension i in ``v`` and the unit column otherwise."""
    n = _square(m)
    out = identity(n)
    for b in bits(v):
        for r in range(n):
            out[r][b] = -m[r][b]
    return out


def principal_minors(m: Matrix):
    """Yield ``(index tuple, minor)`` for every nonempty principal submatrix."""
    n = _square(m)
    for size in range(1, n + 1):
        for idx in combinations(range(n), size):
            yield idx, bareiss_determinant(principal_submatrix(m, idx))


def is_p_matrix(m: Matrix) -> bool:
    n = _square(m)
    if n > MAX_P_TEST_DIM:
        raise DimensionTooLarge(f"P-matrix test supports n <= {MAX_P_TEST_DIM}")
    return all(minor > 0 for _, minor in principal_minors(m))


def is_symmetric(m: Matrix) -> bool:
    n = _square(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i))


def leading_minors(m: Matrix) -> list[Fraction]:
    n = _square(m)
    return [bareiss_determinant(principal_submatrix(m, range(k))) for k in range(1, n + 1)]


def is_spd(m: Matrix) -> bool:
    """Symmetric with all leading principal minors positive (Sylvester)."""
    return is_symmetric(m) and all(d > 0 for d in leading_minors(m))


def _solve_vertex(m: Matrix, q: Vector, v: int) -> Vector:
    x = solve_exact(build_mv(m, v), q)
    for i, xi in enumerate(x):
        if xi == 0:
            raise NotGeneric(v, i + 1)
    return x


def pcube_outmap(m: Matrix, q: Vector, check: bool = True) -> OutMap:
    """Outmap φ(V) = {i : (M(V)^-1 q)_i < 0}; raises before emitting anything if q is degenerate."""
    n = _square(m)
    if len(q) != n:
        raise ValueError("q has the wrong length")
    if check and not is_p_matrix(m):
        raise NotPMatrix("matrix has a nonpositive principal minor")
    table = []
    for v in range(1 << n):
        x = _solve_vertex(m, q, v)
        table.append(sum(1 << i for i, xi in enumerate(x) if xi < 0))
    return OutMap(n, table)


@dataclass(frozen=True)
class LcpSolution:
    w: tuple[Fraction, ...]
    z: tuple[Fraction, ...]
    basis: int

    def residual(self, m: Matrix, q: Vector) -> list[Fraction]:
        mz = mat_vec(m, list(self.z))
        return [wi - mzi - qi for wi, mzi, qi in zip(self.w, mz, q)]

    def is_feasible(self) -> bool:
        return all(x >= 0 for x in self.w) and all(x >= 0 for x in self.z)


def lcp_solution_at(m: Matrix, q: Vector, v: int, check: bool = True) -> LcpSolution:
    """Complementary (w, z) with w_i = 0 on ``v`` and z_i = 0 off ``v``."""
    n = _square(m)
    if check and not is_p_matrix(m):
        raise NotPMatrix("matrix has a nonpositive principal minor")
    x = _solve_vertex(m, q, v)
    w = tuple(Fraction(0) if v >> i & 1 else x[i] for i in range(n))
    z = tuple(x[i] if v >> i & 1 else Fraction(0) for i in range(n))
    return LcpSolution(w, z, v)


def schur_reduce(m: Matrix, k: int) -> Matrix:
    """Entries m_ij - m_ik m_kj / m_kk over i, j != k (``k`` is 1-based)."""
    n = _square(m)
    kk = k - 1
    pivot = m[kk][kk]
    if pivot == 0:
        raise ZeroPivot(f"diagonal entry {k} is zero")
    rest = [i for i in range(n) if i != kk]
    return [[m[i][j] - m[i][kk] * m[kk][j] / pivot for j in rest] for i in rest]


def reduced_rhs(m: Matrix, q: Vector, k: int) -> Vector:
    """Right-hand side of the facet {k} ⊆ V: entries of M({k})^-1 q off ``k``."""
    kk = k - 1
    pivot = m[kk][kk]
    if pivot == 0:
        raise ZeroPivot(f"diagonal entry {k} is zero")
    return [q[i] - m[i][kk] * q[kk] / pivot for i in range(len(q)) if i != kk]


def dcube_outmap(m: Matrix, q: Vector) -> OutMap:
    # local import: lgraph imports analysis, which is independent of this module
    from .lgraph import first_cyclic_vertex

    if not is_spd(m):
        raise NotSpd("matrix is not symmetric positive definite")
    o = pcube_outmap(m, q, check=False)
    if first_cyclic_vertex(o) is not None:
        raise AssertionError("D-cube without property L: exactness bug")
    return o


def blowup_pmatrix(a: Matrix, check: bool = True) -> Matrix:
    """Block matrix [[A, A+I], [A-I, A]] of twice the size."""
    n = _square(a)
    if check and not is_p_matrix(a):
        raise NotPMatrix("input is not a P-matrix")
    one = Fraction(1)
    out = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            eye = one if i == j else 0
            out[i][j] = a[i][j]
            out[i][j + n] = a[i][j] + eye
            out[i + n][j] = a[i][j] - eye
            out[i + n][j + n] = a[i][j]
    return out


def random_spd(n: int, rng: random.Random, spread: int = 5) -> Matrix:
    """BᵀB + I for an integer B with entries in [-spread, spread]."""
    b = [[Fraction(rng.randint(-spread, spread)) for _ in range(n)] for _ in range(n)]
    m = mat_mul(transpose(b), b)
    for i in range(n):
        m[i][i] += 1
    return m


def random_diagonally_dominant(n: int, rng: random.Random, spread: int = 5) -> Matrix:
    """Strictly row diagonally dominant with positive diagonal, hence a P-matrix."""
    m = [[Fraction(rng.randint(-spread, spread)) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        off = sum(abs(m[i][j]) for j in range(n) if j != i)
        m[i][i] = off + rng.randint(1, spread)
    return m


def random_generic_q(m: Matrix, rng: random.Random, spread: int = 10, attempts: int = 1000) -> Vector:
    """Integer q for which every vertex solve has nonzero coordinates."""
    n = _square(m)
    for _ in range(attempts):
        q = [Fraction(rng.randint(-spread, spread)) for _ in range(n)]
        try:
            for v in range(1 << n):
                _solve_vertex(m, q, v)
        except NotGeneric:
            continue
        return q
    raise RuntimeError("no generic right-hand side found")
