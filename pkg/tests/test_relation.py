"""Relations, induced matrix spaces, and the finiteness reduction."""

import pytest

from linminmax.errors import DimensionError
from linminmax.exact_linalg import IntEchelon, Mat, Subspace, clear_denominators, unit_vec, vec
from linminmax.relation import (
    GenericSampler,
    MatrixSpace,
    Relation,
    apply_space,
    neighborhood_span,
    reduce_relation,
    sample_element,
    to_matrix_space,
)
from conftest import rand_relation, rand_subspace, rand_vec


def spans_same(space_a, space_b):
    if (space_a.m, space_a.n) != (space_b.m, space_b.n):
        return False
    width = space_a.m * space_a.n
    ech = IntEchelon(width)
    for b in space_a.basis:
        ech.add(clear_denominators(b.flatten().entries))
    if not all(
        ech.contains(clear_denominators(b.flatten().entries)) for b in space_b.basis
    ):
        return False
    ech2 = IntEchelon(width)
    for b in space_b.basis:
        ech2.add(clear_denominators(b.flatten().entries))
    return all(
        ech2.contains(clear_denominators(b.flatten().entries)) for b in space_a.basis
    )


def test_to_matrix_space_examples():
    e = lambda i: unit_vec(2, i)
    R = Relation(2, 2, [(e(0), e(0))])
    V = to_matrix_space(R)
    assert V.basis == (Mat([[1, 0], [0, 0]]),)

    dup = Relation(2, 2, [(e(0), e(0)), (e(0).scaled(2), e(0).scaled(2))])
    assert to_matrix_space(dup).dim == 1
    assert len(reduce_relation(dup).pairs) == 1


def test_to_matrix_space_random_span(rng):
    for _ in range(10):
        n, m = rng.randint(2, 3), rng.randint(2, 3)
        R = rand_relation(rng, n, m, n * m + 5)
        V = to_matrix_space(R)
        assert V.dim <= n * m
        full = MatrixSpace(m, n, V.basis)
        from linminmax.exact_linalg import outer

        for v, w in R.pairs:
            assert full.contains(outer(w, v))


def test_reduce_relation_preserves_neighborhoods(rng):
    for _ in range(8):
        n, m = rng.randint(2, 4), rng.randint(2, 4)
        R = rand_relation(rng, n, m, 10)
        small = reduce_relation(R)
        assert len(small.pairs) <= n * m
        assert spans_same(to_matrix_space(R), to_matrix_space(small))
        for _ in range(20):
            E = rand_subspace(rng, n)
            assert apply_space(to_matrix_space(R), E) == apply_space(
                to_matrix_space(small), E
            )


def test_reduce_keeps_index_order():
    e = lambda i: unit_vec(3, i)
    R = Relation(3, 3, [(e(0), e(1)), (e(1), e(2)), (e(2), e(0))])
    assert reduce_relation(R).pairs == R.pairs


def test_neighborhood_examples():
    e = lambda i: unit_vec(4, i)
    R = Relation(4, 4, [(e(0), e(1)), (e(0), e(2)), (e(0), e(3))])
    assert neighborhood_span(R, [e(0)]) == Subspace.span(4, [e(1), e(2), e(3)])
    # vectors orthogonal to every v
    assert neighborhood_span(R, [e(1), e(2)]) == Subspace.zero(4)


def test_neighborhood_equals_apply_space(rng):
    for _ in range(15):
        n, m = rng.randint(2, 4), rng.randint(2, 4)
        R = rand_relation(rng, n, m, rng.randint(1, 8))
        S = [rand_vec(rng, n) for _ in range(rng.randint(1, 3))]
        V = to_matrix_space(R)
        assert neighborhood_span(R, S) == apply_space(V, Subspace.span(n, S))


def test_apply_space_examples():
    V = MatrixSpace(2, 2, [Mat.identity(2)])
    E = Subspace.span(2, [vec(1, 1)])
    assert apply_space(V, E) == E
    V0 = MatrixSpace(2, 2, [])
    assert apply_space(V0, Subspace.full(2)) == Subspace.zero(2)
    # 3x3 skew action on a coordinate line
    skew = MatrixSpace(
        3,
        3,
        [
            Mat([[0, 1, 0], [-1, 0, 0], [0, 0, 0]]),
            Mat([[0, 0, 1], [0, 0, 0], [-1, 0, 0]]),
            Mat([[0, 0, 0], [0, 0, 1], [0, -1, 0]]),
        ],
    )
    line = Subspace.span(3, [unit_vec(3, 0)])
    assert apply_space(skew, line) == Subspace.span(3, [unit_vec(3, 1), unit_vec(3, 2)])
    with pytest.raises(DimensionError):
        apply_space(skew, Subspace.full(2))


def test_apply_space_monotone(rng):
    for _ in range(10):
        n = rng.randint(2, 4)
        R = rand_relation(rng, n, n, rng.randint(1, 6))
        V = to_matrix_space(R)
        small = rand_subspace(rng, n, max_dim=n - 1)
        extra = rand_vec(rng, n)
        big = Subspace.span(n, list(small.vectors) + [extra])
        image_small = apply_space(V, small)
        image_big = apply_space(V, big)
        assert image_big.contains_subspace(image_small)


def test_sampler_determinism_and_sampling():
    V = MatrixSpace(2, 2, [Mat([[1, 0], [0, 0]])])
    a = sample_element(V, GenericSampler(seed=123))
    b = sample_element(V, GenericSampler(seed=123))
    assert a == b
    c = sample_element(V, GenericSampler(seed=123, coeff_bound=5))
    assert abs(c.entry(0, 0)) <= 5
    assert c.entry(1, 1) == 0
    V0 = MatrixSpace(3, 2, [])
    assert sample_element(V0, GenericSampler(seed=1)) == Mat.zeros(3, 2)


def test_relation_json_round_trip(rng):
    R = rand_relation(rng, 3, 2, 4)
    assert Relation.from_json(R.to_json()) == R
    V = to_matrix_space(R)
    V2 = MatrixSpace.from_json(V.to_json())
    assert spans_same(V, V2)


def test_zero_pairs_are_dropped_by_reduce():
    e = lambda i: unit_vec(2, i)
    R = Relation(2, 2, [(vec(0, 0), e(1)), (e(0), e(1))])
    assert reduce_relation(R).pairs == ((e(0), e(1)),)
    # but they are retained in the relation itself
    assert len(R.pairs) == 2
