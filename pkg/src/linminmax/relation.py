"""Relations between rational vector spaces and their induced matrix spaces.

A relation is a finite list of vector pairs (v, w) in F^n x F^m.  Each pair
induces the rank-one map w v^T, and the span of those maps is the matrix
space the min-max machinery actually works with.  Because only that span
matters, any relation can be thinned to at most n*m pairs without changing
any neighborhood span; `reduce_relation` does exactly that.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import DimensionError
from .exact_linalg import (
    IntEchelon,
    Mat,
    Subspace,
    Vec,
    clear_denominators,
    outer,
)


class Relation:
    """Finite list of pairs (v, w) with v in F^n and w in F^m.

    Pairs are addressed by their index in the list; duplicates are allowed.
    """

    __slots__ = ("n", "m", "pairs")

    def __init__(self, n: int, m: int, pairs):
        pairs = tuple((v, w) for v, w in pairs)
        for v, w in pairs:
            if v.dim != n or w.dim != m:
                raise DimensionError("relation pair with wrong dimensions")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "pairs", pairs)

    def __setattr__(self, name, value):
        raise AttributeError("Relation is immutable")

    def __len__(self) -> int:
        return len(self.pairs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Relation)
            and (self.n, self.m) == (other.n, other.m)
            and self.pairs == other.pairs
        )

    def __hash__(self):
        return hash((self.n, self.m, self.pairs))

    def __repr__(self):
        return f"Relation(n={self.n}, m={self.m}, pairs={len(self.pairs)})"

    def has_pair(self, v: Vec, w: Vec) -> bool:
        """Literal membership of (v, w) in the pair list."""
        return (v, w) in self.pairs

    def to_json(self):
        return {
            "n": self.n,
            "m": self.m,
            "pairs": [[v.to_json(), w.to_json()] for v, w in self.pairs],
        }

    @classmethod
    def from_json(cls, data) -> "Relation":
        return cls(
            int(data["n"]),
            int(data["m"]),
            [(Vec.from_json(v), Vec.from_json(w)) for v, w in data["pairs"]],
        )


class MatrixSpace:
    """Span of a linearly independent list of m x n matrices.

    When the space was built from a relation, `source_pairs` remembers the
    (v, w) pairs behind the kept rank-one generators; the exact enumeration
    routines use them instead of generic witness search.
    """

    __slots__ = ("m", "n", "basis", "source_pairs")

    def __init__(self, m: int, n: int, basis, source_pairs=None):
        basis = tuple(basis)
        for b in basis:
            if (b.rows, b.cols) != (m, n):
                raise DimensionError("basis matrix with wrong shape")
        ech = IntEchelon(m * n)
        for b in basis:
            if not ech.add(clear_denominators(b.flatten().entries)):
                raise ValueError("matrix space basis is linearly dependent")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(
            self, "source_pairs", tuple(source_pairs) if source_pairs else None
        )

    def __setattr__(self, name, value):
        raise AttributeError("MatrixSpace is immutable")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, a: Mat) -> bool:
        if (a.rows, a.cols) != (self.m, self.n):
            raise DimensionError("membership test with wrong shape")
        ech = IntEchelon(self.m * self.n)
        for b in self.basis:
            ech.add(clear_denominators(b.flatten().entries))
        return ech.contains(clear_denominators(a.flatten().entries))

    def source_relation(self) -> Relation | None:
        if self.source_pairs is None:
            return None
        return Relation(self.n, self.m, self.source_pairs)

    def to_json(self):
        return {"m": self.m, "n": self.n, "basis": [b.to_json() for b in self.basis]}

    @classmethod
    def from_json(cls, data) -> "MatrixSpace":
        m, n = int(data["m"]), int(data["n"])
        return cls(m, n, [Mat.from_json(b, cols=n) for b in data["basis"]])


@dataclass
class GenericSampler:
    """Deterministic stream of integer coefficients for generic elements.

    The same seed reproduces the same stream; coefficients are uniform on
    [-coeff_bound, coeff_bound].
    """

    seed: int
    coeff_bound: int = 10**6
    trials: int = 25
    _rng: random.Random = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.coeff_bound <= 0 or self.trials <= 0:
            raise ValueError("coeff_bound and trials must be positive")
        self._rng = random.Random(self.seed)

    def coefficient(self) -> int:
        return self._rng.randint(-self.coeff_bound, self.coeff_bound)

    def coefficients(self, k: int) -> list[int]:
        return [self.coefficient() for _ in range(k)]


# ---------------------------------------------------------------------------
# operations


def rank_one_generators(R: Relation):
    """All w v^T for the pairs of R, in pair order."""
    return [outer(w, v) for v, w in R.pairs]


def reduced_indices(R: Relation) -> list[int]:
    """Indices of a maximal prefix-greedy sub-list with independent rank-ones."""
    ech = IntEchelon(R.n * R.m)
    kept = []
    for i, (v, w) in enumerate(R.pairs):
        if v.is_zero() or w.is_zero():
            continue
        if ech.add(clear_denominators(outer(w, v).flatten().entries)):
            kept.append(i)
    return kept


def reduce_relation(R: Relation) -> Relation:
    """Sub-list of at most n*m pairs spanning the same matrix space."""
    return Relation(R.n, R.m, [R.pairs[i] for i in reduced_indices(R)])


def to_matrix_space(R: Relation) -> MatrixSpace:
    """Independent rank-one generators of span{w v^T : (v, w) in R}."""
    kept = [R.pairs[i] for i in reduced_indices(R)]
    return MatrixSpace(
        R.m, R.n, [outer(w, v) for v, w in kept], source_pairs=kept
    )


def apply_space(V: MatrixSpace, E: Subspace) -> Subspace:
    """V[E] = span{A e : A in V, e in E}."""
    if E.ambient != V.n:
        raise DimensionError("apply_space ambient mismatch")
    return Subspace.span(
        V.m, [b.apply(e) for b in V.basis for e in E.vectors]
    )


def neighborhood_span(R: Relation, S) -> Subspace:
    """span N(S): the w's of pairs whose v meets some element of S."""
    S = list(S)
    for u in S:
        if u.dim != R.n:
            raise DimensionError("neighborhood of a vector with wrong dimension")
    hits = [w for v, w in R.pairs if any(u.dot(v) != 0 for u in S)]
    return Subspace.span(R.m, hits)


def sample_element(V: MatrixSpace, sampler: GenericSampler) -> Mat:
    """Random integer-coefficient combination of the basis."""
    acc = Mat.zeros(V.m, V.n)
    for b in V.basis:
        acc = acc + b.scaled(sampler.coefficient())
    return acc


def space_product(a: MatrixSpace, b: MatrixSpace) -> MatrixSpace:
    """Span of all products A B with A in a, B in b."""
    if a.n != b.m:
        raise DimensionError("space product with incompatible shapes")
    ech = IntEchelon(a.m * b.n)
    kept = []
    for x in a.basis:
        for y in b.basis:
            p = x @ y
            if ech.add(clear_denominators(p.flatten().entries)):
                kept.append(p)
    return MatrixSpace(a.m, b.n, kept)


def space_power_is_zero(V: MatrixSpace, k: int) -> bool:
    """Whether V^k = {0} (V must be square)."""
    if V.m != V.n:
        raise DimensionError("powers of a non-square matrix space")
    if V.dim == 0:
        return True
    current = V
    for _ in range(k - 1):
        current = space_product(current, V)
        if current.dim == 0:
            return True
    return current.dim == 0


def is_nilpotent_algebra(V: MatrixSpace) -> bool:
    """V^2 contained in V and V^n = {0}."""
    if V.m != V.n:
        return False
    ech = IntEchelon(V.m * V.n)
    for b in V.basis:
        ech.add(clear_denominators(b.flatten().entries))
    for x in V.basis:
        for y in V.basis:
            if not ech.contains(clear_denominators((x @ y).flatten().entries)):
                return False
    return space_power_is_zero(V, V.n)
