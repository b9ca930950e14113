"""Linorders: linear analogues of strict posets, with chain decompositions.

A linorder is a relation on F^n x F^n that is closed under composition
through nonorthogonal middles and has v orthogonal to w in every pair; its
rank-one span is then a nilpotent operator algebra.  The maximum antichain
dimension equals n minus the minimum cover size, and is matched both by
bi-chain decompositions (alternating w, v sequences) and by coherent
decompositions (iterate chains of one matrix from the algebra).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CertificationError,
    DimensionError,
    InvariantViolation,
)
from .exact_linalg import (
    IntEchelon,
    Mat,
    Subspace,
    Vec,
    clear_denominators,
    outer,
    subspace_sum,
    unit_vec,
)
from .classical_oracles import Poset
from .matching_cover import (
    PROVED,
    CertifiedValue,
    DEFAULT_BUDGET,
    max_matching,
    min_cover,
)
from .relation import (
    GenericSampler,
    MatrixSpace,
    Relation,
    space_power_is_zero,
    to_matrix_space,
)


@dataclass(frozen=True)
class Linorder:
    relation: Relation
    validated: bool = True

    @property
    def n(self) -> int:
        return self.relation.n


@dataclass(frozen=True)
class LinorderViolation:
    """First failing axiom instance: ("transitivity", (i, j)) or ("orthogonality", i)."""

    axiom: str
    witness: tuple


def validate_linorder(R: Relation):
    """Check both linorder axioms; returns a Linorder or the first violation.

    Also sanity-checks that the induced rank-one span is nilpotent, which
    the axioms guarantee.
    """
    if R.n != R.m:
        raise DimensionError("a linorder lives on F^n x F^n")
    for i, (v, w) in enumerate(R.pairs):
        if v.dot(w) != 0:
            return LinorderViolation("orthogonality", (i,))
    pair_set = set(R.pairs)
    for i, (v, w) in enumerate(R.pairs):
        for j, (v2, w2) in enumerate(R.pairs):
            if w.dot(v2) != 0 and (v, w2) not in pair_set:
                return LinorderViolation("transitivity", (i, j))
    if not space_power_is_zero(to_matrix_space(R), R.n):
        raise InvariantViolation("linorder axioms hold but the span is not nilpotent")
    return Linorder(R)


@dataclass(frozen=True)
class BiChain:
    """Alternating sequence (w_1, v_1, ..., w_r, v_r) with indexed R-links.

    w_i is never orthogonal to v_i, and (v_i, w_{i+1}) is the relation pair
    at link_pair_indices[i].
    """

    ws: tuple
    vs: tuple
    link_pair_indices: tuple

    @property
    def length(self) -> int:
        return len(self.ws)

    def to_json(self):
        return {
            "ws": [w.to_json() for w in self.ws],
            "vs": [v.to_json() for v in self.vs],
            "links": list(self.link_pair_indices),
        }


@dataclass(frozen=True)
class BiChainDecomposition:
    relation: Relation
    chains: tuple

    @property
    def size(self) -> int:
        return len(self.chains)

    def to_json(self):
        return {"size": self.size, "chains": [c.to_json() for c in self.chains]}


@dataclass(frozen=True)
class CoherentDecomposition:
    """Chains (seed, A seed, ..., A^{len-1} seed) implemented by one matrix."""

    A: Mat
    chains: tuple  # of (seed: Vec, length: int)

    @property
    def size(self) -> int:
        return len(self.chains)

    def to_json(self):
        return {
            "A": self.A.to_json(),
            "chains": [
                {"seed": seed.to_json(), "length": length}
                for seed, length in self.chains
            ],
        }

    def iterates(self):
        vectors = []
        for seed, length in self.chains:
            u = seed
            for _ in range(length):
                vectors.append(u)
                u = self.A.apply(u)
        return vectors


def verify_bichain(R: Relation, chain: BiChain) -> bool:
    r = chain.length
    if len(chain.vs) != r or len(chain.link_pair_indices) != r - 1:
        return False
    for w, v in zip(chain.ws, chain.vs):
        if w.dot(v) == 0:
            return False
    for i, idx in enumerate(chain.link_pair_indices):
        if R.pairs[idx] != (chain.vs[i], chain.ws[i + 1]):
            return False
    return True


def verify_bichain_decomposition(D: BiChainDecomposition) -> bool:
    R = D.relation
    if not all(verify_bichain(R, c) for c in D.chains):
        return False
    ech_v = IntEchelon(R.n)
    ech_w = IntEchelon(R.n)
    count = 0
    for c in D.chains:
        for v in c.vs:
            if not ech_v.add(clear_denominators(v.entries)):
                return False
        for w in c.ws:
            if not ech_w.add(clear_denominators(w.entries)):
                return False
        count += c.length
    return count == R.n and ech_v.rank == R.n and ech_w.rank == R.n


def verify_coherent_decomposition(
    D: CoherentDecomposition, space: MatrixSpace | None = None
) -> bool:
    n = D.A.rows
    ech = IntEchelon(n)
    count = 0
    for seed, length in D.chains:
        u = seed
        for _ in range(length):
            if not ech.add(clear_denominators(u.entries)):
                return False
            u = D.A.apply(u)
            count += 1
    if count != n or ech.rank != n:
        return False
    if space is not None and not space.contains(D.A):
        return False
    return True


def max_antichain(L: Linorder, budget: int = DEFAULT_BUDGET) -> CertifiedValue:
    """Largest subspace C with every pair orthogonal to C on one side.

    C is read off a minimum cover as (E + F)^perp; its dimension is exactly
    n minus the cover size.
    """
    R = L.relation
    cover = min_cover(R, budget)
    C = subspace_sum(cover.E, cover.F).orthocomplement()
    value = R.n - cover.size
    if C.dim != value:
        raise InvariantViolation("minimum cover with overlapping sides")
    if not verify_antichain(R, C):
        raise InvariantViolation("cover conversion is not an antichain")
    return CertifiedValue(value, C, cover, PROVED)


def verify_antichain(R: Relation, C: Subspace) -> bool:
    perp = C.orthocomplement()
    return all(perp.contains(v) or perp.contains(w) for v, w in R.pairs)


def _perfect_nonorthogonal_bijection(ws, vs):
    """phi with w_i not orthogonal to v_{phi(i)} via augmenting paths."""
    n = len(ws)
    adj = [
        [j for j in range(n) if ws[i].dot(vs[j]) != 0]
        for i in range(n)
    ]
    match_w = [None] * n
    match_v = [None] * n

    def augment(i, seen):
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if match_v[j] is None or augment(match_v[j], seen):
                match_w[i] = j
                match_v[j] = i
                return True
        return False

    for i in range(n):
        if not augment(i, set()):
            raise InvariantViolation(
                "independent families always admit a nonorthogonal bijection"
            )
    return match_w


def _complete_to_basis(vectors, n):
    """Extend a list of independent vectors by standard basis vectors."""
    ech = IntEchelon(n)
    out = list(vectors)
    for v in out:
        if not ech.add(clear_denominators(v.entries)):
            raise InvariantViolation("basis completion fed dependent vectors")
    for i in range(n):
        e = unit_vec(n, i)
        if ech.add(clear_denominators(e.entries)):
            out.append(e)
    return out


def bichain_decomposition(
    L: Linorder, budget: int = DEFAULT_BUDGET
) -> BiChainDecomposition:
    """Decompose F^n into the minimum number of bi-chains.

    Steps: maximum matching; completion of its v's and w's to bases; a
    bijection phi with w_i never orthogonal to v_{phi(i)}; then the 2n-vertex
    graph with edges w_i -> v_{phi(i)} and v_i -> w_i (matched i) splits into
    maximal paths, each of which is a bi-chain.
    """
    R = L.relation
    n = R.n
    cv = max_matching(R, budget)
    s = cv.value
    matched = list(cv.primal.indices)
    vs = [R.pairs[i][0] for i in matched]
    ws = [R.pairs[i][1] for i in matched]
    vs = _complete_to_basis(vs, n)
    ws = _complete_to_basis(ws, n)
    phi = _perfect_nonorthogonal_bijection(ws, vs)

    # Functional graph: w_i -> v_{phi(i)} always; v_j -> w_j only when j < s.
    # Verify acyclicity before extracting paths.
    for start in range(n):
        trail = set()
        i = start
        while True:
            if i in trail:
                raise InvariantViolation("bi-chain graph has a cycle")
            trail.add(i)
            i = phi[i]
            if i >= s:
                break

    # Maximal paths start at the w's no matched v points to (indices >= s).
    starts = [i for i in range(n) if i >= s]
    chains = []
    for start in starts:
        chain_ws = []
        chain_vs = []
        links = []
        i = start
        while True:
            chain_ws.append(ws[i])
            chain_vs.append(vs[phi[i]])
            j = phi[i]
            if j < s:
                links.append(matched[j])
                i = j
            else:
                break
        chains.append(BiChain(tuple(chain_ws), tuple(chain_vs), tuple(links)))
    D = BiChainDecomposition(R, tuple(chains))
    if D.size != n - s:
        raise InvariantViolation("path extraction produced the wrong chain count")
    if not verify_bichain_decomposition(D):
        raise InvariantViolation("bi-chain decomposition failed verification")
    return D


def w_chain_check(L: Linorder, chains) -> bool:
    """Whether the given w-sequences are linked chains whose entries form a basis.

    Consecutive entries must be linked through some relation pair (v, w')
    with the current entry not orthogonal to v and w' the next entry.  This
    is the weaker single-sided notion that can undercut the antichain bound.
    """
    R = L.relation
    n = R.n
    ech = IntEchelon(n)
    total = 0
    for chain in chains:
        chain = list(chain)
        for w, w_next in zip(chain, chain[1:]):
            if not any(
                w.dot(v) != 0 and w2 == w_next for v, w2 in R.pairs
            ):
                return False
        for w in chain:
            if not ech.add(clear_denominators(w.entries)):
                return False
            total += 1
    return total == n and ech.rank == n


def nilpotent_jordan_chains(A: Mat):
    """Jordan chain seeds and lengths of a nilpotent matrix.

    Kernel filtration ker A <= ker A^2 <= ... with greedy lifting: new seeds
    at the deepest level first, then their images carried down.  The number
    of chains is dim ker A and the collected iterates form a basis.
    """
    if not A.is_square():
        raise DimensionError("Jordan chains of a non-square matrix")
    n = A.rows
    if n == 0:
        return []
    powers = [Mat.identity(n)]
    while not powers[-1].is_zero():
        if len(powers) > n:
            raise ValueError("matrix is not nilpotent")
        powers.append(powers[-1] @ A)
    p = len(powers) - 1  # nilpotency index
    kernels = [A.power(j).kernel() for j in range(p + 1)]  # kernels[0] = {0}
    chains: list[tuple[Vec, int]] = []
    carried: list[Vec] = []
    for j in range(p, 0, -1):
        ech = IntEchelon(n)
        for b in kernels[j - 1].vectors:
            ech.add(clear_denominators(b.entries))
        for u in carried:
            if not ech.add(clear_denominators(u.entries)):
                raise InvariantViolation("carried Jordan vectors became dependent")
        new = []
        for b in kernels[j].vectors:
            if ech.add(clear_denominators(b.entries)):
                new.append(b)
        chains.extend((seed, j) for seed in new)
        carried = [A.apply(u) for u in carried + new]
    if len(chains) != kernels[1].dim:
        raise InvariantViolation("chain count differs from kernel dimension")
    return chains


def coherent_decomposition(
    L: Linorder, sampler: GenericSampler, budget: int = DEFAULT_BUDGET
) -> CoherentDecomposition:
    """Minimum coherent decomposition via a sampled maximum-rank element.

    The implementing matrix is a random combination of the rank-one
    generators certified against the cover dual; its Jordan chains give the
    decomposition, of size equal to the maximum antichain dimension.
    """
    R = L.relation
    n = R.n
    cover = min_cover(R, budget)
    target = cover.size
    space = to_matrix_space(R)
    if target == 0:
        A = Mat.zeros(n, n)
        chains = tuple((unit_vec(n, i), 1) for i in range(n))
    else:
        A = None
        for _ in range(sampler.trials):
            cand = Mat.zeros(n, n)
            for b in space.basis:
                cand = cand + b.scaled(sampler.coefficient())
            if cand.rank() == target:
                A = cand
                break
        if A is None:
            raise CertificationError(
                f"no sampled element reached the certified maximum rank {target}"
            )
        chains = tuple(nilpotent_jordan_chains(A))
    D = CoherentDecomposition(A, chains)
    if D.size != n - target:
        raise InvariantViolation("coherent decomposition has the wrong size")
    if not verify_coherent_decomposition(D, space):
        raise InvariantViolation("coherent decomposition failed verification")
    return D


def bichain_to_coherent(D: BiChainDecomposition) -> CoherentDecomposition:
    """Sum the interior links w v^T of every bi-chain and take Jordan chains.

    Double independence makes the sum's rank equal the number of interior
    pairs, so the coherent decomposition has the same size as D.
    """
    R = D.relation
    n = R.n
    A = Mat.zeros(n, n)
    count = 0
    for chain in D.chains:
        for idx in chain.link_pair_indices:
            v, w = R.pairs[idx]
            A = A + outer(w, v)
            count += 1
    if A.rank() != count:
        raise InvariantViolation("interior rank-one sum lost rank")
    if count == 0:
        chains = tuple((unit_vec(n, i), 1) for i in range(n))
    else:
        chains = tuple(nilpotent_jordan_chains(A))
    out = CoherentDecomposition(A, chains)
    if out.size != D.size:
        raise InvariantViolation("coherent conversion changed the size")
    if not verify_coherent_decomposition(out):
        raise InvariantViolation("converted decomposition failed verification")
    return out


def poset_embed(P: Poset) -> Linorder:
    """Standard-basis linorder with a pair (e_i, e_j) for each p_i > p_j."""
    n = P.size
    pairs = [(unit_vec(n, i), unit_vec(n, j)) for i, j in P.gt]
    result = validate_linorder(Relation(n, n, pairs))
    if isinstance(result, LinorderViolation):
        raise InvariantViolation("poset embedding violated a linorder axiom")
    return result
