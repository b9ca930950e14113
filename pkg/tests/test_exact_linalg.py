"""Exact rational linear algebra: examples and structural invariants."""

import random
from fractions import Fraction
from itertools import combinations

import pytest

from linminmax.errors import DimensionError
from linminmax.exact_linalg import (
    Mat,
    Subspace,
    rational_from_string,
    rational_to_string,
    solve_exact,
    subspace_intersection,
    subspace_sum,
    unit_vec,
    vec,
)
from conftest import rand_mat, rand_vec


def cofactor_det(m: Mat) -> Fraction:
    """Independent determinant oracle by first-row cofactor expansion."""
    n = m.rows
    if n == 0:
        return Fraction(1)
    if n == 1:
        return m.entry(0, 0)
    total = Fraction(0)
    for j in range(n):
        if m.entry(0, j) == 0:
            continue
        minor = Mat(
            [
                [m.entry(i, c) for c in range(n) if c != j]
                for i in range(1, n)
            ],
            n - 1,
        )
        sign = -1 if j % 2 else 1
        total += sign * m.entry(0, j) * cofactor_det(minor)
    return total


def minor_rank(m: Mat) -> int:
    """Exhaustive oracle: largest k with a nonzero k x k minor."""
    best = 0
    for k in range(1, min(m.rows, m.cols) + 1):
        for rows in combinations(range(m.rows), k):
            for cols in combinations(range(m.cols), k):
                sub = Mat([[m.entry(i, j) for j in cols] for i in rows], k)
                if cofactor_det(sub) != 0:
                    best = k
                    break
            else:
                continue
            break
    return best


def test_rational_strings():
    assert rational_to_string(Fraction(3, 4)) == "3/4"
    assert rational_to_string(Fraction(-5)) == "-5"
    assert rational_from_string("7/2") == Fraction(7, 2)
    assert rational_from_string("-3") == Fraction(-3)
    q = Fraction(6, -4)
    assert q.denominator > 0 and rational_to_string(q) == "-3/2"


def test_rank_examples():
    assert Mat.identity(3).rank() == 3
    assert Mat.zeros(2, 3).rank() == 0
    assert Mat([[1, 2], [2, 4]]).rank() == 1


def test_det_examples():
    assert Mat.identity(4).det() == 1
    assert Mat([[1, 1], [1, 1]]).det() == 0
    m = Mat([[2, 1], [1, 2]])
    assert m.det() == 3 == cofactor_det(m)
    with pytest.raises(DimensionError):
        Mat.zeros(2, 3).det()


def test_det_matches_cofactor_oracle():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(0, 4)
        m = Mat(
            [
                [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(n)]
                for _ in range(n)
            ],
            n,
        )
        assert m.det() == cofactor_det(m)


def test_kernel_examples():
    assert Mat.zeros(2, 3).kernel() == Subspace.full(3)
    assert Mat.identity(3).kernel() == Subspace.zero(3)
    k = Mat([[1, 1, 0]]).kernel()
    assert k.dim == 2
    assert k.contains(vec(1, -1, 0))
    assert k.contains(vec(0, 0, 1))


def test_kernel_solves_to_zero():
    rng = random.Random(11)
    for _ in range(40):
        m = rand_mat(rng, rng.randint(1, 4), rng.randint(1, 4))
        k = m.kernel()
        assert k.dim == m.cols - m.rank()
        for b in k.vectors:
            assert m.apply(b).is_zero()


def test_orthocomplement_examples():
    s = Subspace.span(3, [unit_vec(3, 0)])
    assert s.orthocomplement() == Subspace.span(3, [unit_vec(3, 1), unit_vec(3, 2)])
    assert Subspace.full(4).orthocomplement() == Subspace.zero(4)
    s2 = Subspace.span(2, [vec(1, 1)])
    assert s2.orthocomplement() == Subspace.span(2, [vec(1, -1)])


def test_subspace_algebra_examples():
    e1, e2, e3 = (unit_vec(3, i) for i in range(3))
    a = Subspace.span(3, [e1])
    b = Subspace.span(3, [e2])
    assert subspace_sum(a, b).dim == 2
    assert subspace_intersection(a, b) == Subspace.zero(3)
    s = Subspace.span(3, [e1, e2])
    assert subspace_sum(s, s) == s
    assert subspace_intersection(s, s) == s
    t = Subspace.span(3, [e2, e3])
    assert subspace_intersection(s, t) == Subspace.span(3, [e2])
    with pytest.raises(DimensionError):
        subspace_sum(a, Subspace.zero(2))


def test_rank_transpose_invariant():
    rng = random.Random(13)
    for _ in range(50):
        m = rand_mat(rng, rng.randint(1, 5), rng.randint(1, 5))
        assert m.rank() == m.transpose().rank()


def test_rank_matches_minor_oracle():
    rng = random.Random(17)
    for _ in range(40):
        m = rand_mat(rng, rng.randint(1, 4), rng.randint(1, 4), bound=2)
        assert m.rank() == minor_rank(m)


def test_orthocomplement_dimension_and_positivity():
    rng = random.Random(19)
    for _ in range(40):
        n = rng.randint(1, 5)
        s = Subspace.span(n, [rand_vec(rng, n) for _ in range(rng.randint(0, n))])
        perp = s.orthocomplement()
        assert s.dim + perp.dim == n
        assert subspace_intersection(s, perp) == Subspace.zero(n)


def test_orthocomplement_involution():
    rng = random.Random(23)
    for _ in range(40):
        n = rng.randint(1, 5)
        s = Subspace.span(n, [rand_vec(rng, n) for _ in range(rng.randint(0, n))])
        assert s.orthocomplement().orthocomplement() == s


def test_grassmann_identity():
    rng = random.Random(29)
    for _ in range(40):
        n = rng.randint(1, 5)
        a = Subspace.span(n, [rand_vec(rng, n) for _ in range(rng.randint(0, n))])
        b = Subspace.span(n, [rand_vec(rng, n) for _ in range(rng.randint(0, n))])
        assert a.dim + b.dim == subspace_sum(a, b).dim + subspace_intersection(a, b).dim


def test_solve_exact_round_trip():
    rng = random.Random(31)
    solved = 0
    for _ in range(30):
        n = rng.randint(1, 4)
        m = rand_mat(rng, n, n)
        b = rand_mat(rng, n, rng.randint(1, 3))
        x = solve_exact(m, b)
        if m.det() == 0:
            assert x is None
        else:
            assert m @ x == b
            solved += 1
    assert solved > 5


def test_matrix_json_round_trip():
    m = Mat([[Fraction(1, 2), 3], [0, Fraction(-7, 5)]])
    assert Mat.from_json(m.to_json()) == m
    s = Subspace.span(3, [vec(1, 2, 3), vec(0, 1, 1)])
    assert Subspace.from_json(s.to_json(), 3) == s
    z = Subspace.zero(3)
    assert Subspace.from_json(z.to_json(), 3) == z


def test_kron_shapes_and_values():
    a = Mat([[1, 2], [3, 4]])
    b = Mat([[0, 1], [1, 0]])
    k = a.kron(b)
    assert (k.rows, k.cols) == (4, 4)
    assert k.entry(0, 1) == 1 and k.entry(0, 3) == 2
    assert a.kron(Mat.identity(1)) == a


def test_subspace_canonical_equality():
    s1 = Subspace.span(3, [vec(1, 1, 0), vec(0, 0, 2)])
    s2 = Subspace.span(3, [vec(2, 2, 2), vec(0, 0, 1), vec(3, 3, 5)])
    assert s1 == s2
    assert hash(s1) == hash(s2)
