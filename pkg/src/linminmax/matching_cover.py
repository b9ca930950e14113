"""Matchings, covers, and certified min-max values for relations.

The maximum size of a matching (pairs with doubly independent vectors)
equals the minimum size of a cover (a subspace pair absorbing every pair of
the relation).  Both optima are computed by exact enumeration at desk scale:
covers by a branch-and-bound over the subset-generated candidates
(span of unselected v's, span of selected w's), matchings by a pruned DFS
with incremental independence tests.  Every returned value carries a primal
and a dual certificate of equal size.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BudgetExceededError,
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
    unit_vec,
)
from .relation import (
    GenericSampler,
    MatrixSpace,
    Relation,
    apply_space,
    neighborhood_span,
    reduced_indices,
    to_matrix_space,
)

PROVED = "proved"
LOWER_BOUND_ONLY = "lower_bound_only"

DEFAULT_BUDGET = 20


@dataclass(frozen=True)
class Matching:
    """Index set into a relation whose v's and w's are independent."""

    relation: Relation
    indices: tuple

    @property
    def size(self) -> int:
        return len(self.indices)

    def pairs(self):
        return [self.relation.pairs[i] for i in self.indices]

    def rank_one_sum(self) -> Mat:
        acc = Mat.zeros(self.relation.m, self.relation.n)
        for v, w in self.pairs():
            acc = acc + outer(w, v)
        return acc

    def to_json(self):
        return list(self.indices)


@dataclass(frozen=True)
class Cover:
    """Subspace pair (E, F) with v in E or w in F for every relation pair."""

    E: Subspace
    F: Subspace

    @property
    def size(self) -> int:
        return self.E.dim + self.F.dim

    def to_json(self):
        return {"E": self.E.to_json(), "F": self.F.to_json()}


@dataclass(frozen=True)
class ShrunkWitness:
    """A subspace whose neighborhood span has strictly smaller dimension."""

    S: Subspace
    neighborhood: Subspace

    @property
    def defect(self) -> int:
        return self.S.dim - self.neighborhood.dim

    def to_json(self):
        return {"S": self.S.to_json(), "neighborhood": self.neighborhood.to_json()}


@dataclass(frozen=True)
class CertifiedValue:
    """An optimum together with primal and dual witnesses that meet."""

    value: int
    primal: object
    dual: object
    status: str = PROVED

    @property
    def proved(self) -> bool:
        return self.status == PROVED


def verify_matching(m: Matching) -> bool:
    if len(set(m.indices)) != len(m.indices):
        return False
    R = m.relation
    ech_v = IntEchelon(R.n)
    ech_w = IntEchelon(R.m)
    for v, w in m.pairs():
        if not ech_v.add(clear_denominators(v.entries)):
            return False
        if not ech_w.add(clear_denominators(w.entries)):
            return False
    # Prop-style sanity: the plain rank-one sum must have full matching rank.
    return m.rank_one_sum().rank() == m.size


def verify_cover(R: Relation, c: Cover) -> bool:
    if c.E.ambient != R.n or c.F.ambient != R.m:
        return False
    return all(c.E.contains(v) or c.F.contains(w) for v, w in R.pairs)


def _reduced_pairs(R: Relation, budget: int):
    kept = reduced_indices(R)
    if len(kept) > budget:
        raise BudgetExceededError(
            f"{len(kept)} independent pairs exceed the subset budget {budget}"
        )
    return kept


def min_cover(R: Relation, budget: int = DEFAULT_BUDGET) -> Cover:
    """Minimum-size cover by branch-and-bound over subset-generated covers.

    Every cover dominates the subset cover with T = {i : w_i in F}, so the
    optimum over (span{v_i : i not in T}, span{w_i : i in T}) is the true
    minimum.  Ranks only grow along a DFS branch, which makes the running
    dimension sum a sound pruning bound.
    """
    kept = _reduced_pairs(R, budget)
    pairs = [R.pairs[i] for i in kept]
    vrows = [clear_denominators(v.entries) for v, _ in pairs]
    wrows = [clear_denominators(w.entries) for _, w in pairs]
    best_size = min(R.n, R.m) + 1
    best_T: set[int] | None = None

    def dfs(idx, ech_v, ech_w, T):
        nonlocal best_size, best_T
        if ech_v.rank + ech_w.rank >= best_size:
            return
        if idx == len(pairs):
            best_size = ech_v.rank + ech_w.rank
            best_T = set(T)
            return
        # i in T: w_i joins F.
        ech = ech_w.copy()
        ech.add(wrows[idx])
        T.append(idx)
        dfs(idx + 1, ech_v, ech, T)
        T.pop()
        # i not in T: v_i joins E.
        ech = ech_v.copy()
        ech.add(vrows[idx])
        dfs(idx + 1, ech, ech_w, T)

    dfs(0, IntEchelon(R.n), IntEchelon(R.m), [])
    if best_T is None:
        # No pairs at all: the empty cover.
        best_T = set()
    E = Subspace.span(R.n, [v for i, (v, _) in enumerate(pairs) if i not in best_T])
    F = Subspace.span(R.m, [w for i, (_, w) in enumerate(pairs) if i in best_T])
    cover = Cover(E, F)
    if not verify_cover(R, cover):
        raise InvariantViolation("subset-generated cover misses a dropped pair")
    return cover


def _matching_search(R: Relation, kept, target: int):
    """DFS for `target` doubly independent pairs among the kept indices."""
    pairs = [R.pairs[i] for i in kept]
    vrows = [clear_denominators(v.entries) for v, _ in pairs]
    wrows = [clear_denominators(w.entries) for _, w in pairs]
    chosen: list[int] = []

    def dfs(idx, ech_v, ech_w):
        if len(chosen) == target:
            return True
        if len(chosen) + (len(pairs) - idx) < target:
            return False
        for i in range(idx, len(pairs)):
            ev = ech_v.copy()
            if not ev.add(vrows[i]):
                continue
            ew = ech_w.copy()
            if not ew.add(wrows[i]):
                continue
            chosen.append(i)
            if dfs(i + 1, ev, ew):
                return True
            chosen.pop()
        return False

    if dfs(0, IntEchelon(R.n), IntEchelon(R.m)):
        return tuple(kept[i] for i in chosen)
    return None


def max_matching(R: Relation, budget: int = DEFAULT_BUDGET) -> CertifiedValue:
    """Maximum matching with the minimum cover as its dual certificate."""
    cover = min_cover(R, budget)
    kept = _reduced_pairs(R, budget)
    indices = _matching_search(R, kept, cover.size)
    if indices is None:
        raise InvariantViolation(
            "no matching of the minimum cover size exists; duality violated"
        )
    matching = Matching(R, indices)
    if not verify_matching(matching):
        raise InvariantViolation("matching certificate failed verification")
    return CertifiedValue(cover.size, matching, cover, PROVED)


def saturated_matching(R: Relation, budget: int = DEFAULT_BUDGET):
    """A matching whose v's form a basis of F^n, or a shrunk-subspace witness.

    The witness is a basis S of E^perp for a cover (E, F) of size < n; its
    neighborhood span then has dimension at most dim F < dim span S.
    """
    if not (R.m >= R.n >= 1):
        raise DimensionError("saturated matchings need m >= n >= 1")
    cover = min_cover(R, budget)
    if cover.size >= R.n:
        cv = max_matching(R, budget)
        if cv.value != R.n:
            raise InvariantViolation("cover of size n but no saturated matching")
        return cv.primal
    S = cover.E.orthocomplement()
    nb = neighborhood_span(R, S.vectors)
    witness = ShrunkWitness(S, nb)
    if witness.defect <= 0:
        raise InvariantViolation("shrunk witness has no defect")
    return witness


def defect_matching(R: Relation, d: int, budget: int = DEFAULT_BUDGET):
    """Matching of size n - d via the dummy-coordinate augmentation.

    Appends d coordinates to F^m, links every e_i to each new coordinate,
    extracts a saturated matching there, and discards the dummy pairs.  When
    the deficiency condition fails the shrunk witness is returned instead.
    """
    if d < 0:
        raise ValueError("defect must be nonnegative")
    if d >= R.n:
        return Matching(R, ())
    cover = min_cover(R, budget)
    if cover.size < R.n - d:
        # Deficiency condition fails; E^perp is more than d short.
        S = cover.E.orthocomplement()
        return ShrunkWitness(S, neighborhood_span(R, S.vectors))
    m2 = R.m + d
    lifted = [(v, Vec(list(w.entries) + [0] * d)) for v, w in R.pairs]
    dummies = [
        (unit_vec(R.n, i), unit_vec(m2, R.m + j))
        for i in range(R.n)
        for j in range(d)
    ]
    aug = Relation(R.n, m2, lifted + dummies)
    result = saturated_matching(aug, budget)
    if isinstance(result, ShrunkWitness):
        raise InvariantViolation("augmentation failed to restore the Hall condition")
    original = tuple(i for i in result.indices if i < len(R.pairs))
    if len(original) < R.n - d:
        raise InvariantViolation("augmentation kept more than d dummy pairs")
    matching = Matching(R, original[: R.n - d])
    if not verify_matching(matching):
        raise InvariantViolation("defect matching failed verification")
    return matching


def extract_matching_from_combination(
    R: Relation,
    target: int,
    sampler: GenericSampler,
    budget: int = DEFAULT_BUDGET,
) -> Matching:
    """`target` distinct indices whose plain rank-one sum has rank `target`.

    The precondition (some combination reaches the target rank) is checked
    by sampling; the indices are then found greedily with exact rank tests,
    falling back to the exhaustive matching search.
    """
    if target == 0:
        return Matching(R, ())
    kept = _reduced_pairs(R, budget)
    space = to_matrix_space(R)
    reached = 0
    for _ in range(sampler.trials):
        acc = Mat.zeros(R.m, R.n)
        for b in space.basis:
            acc = acc + b.scaled(sampler.coefficient())
        reached = max(reached, acc.rank())
        if reached >= target:
            break
    if reached < target:
        raise CertificationError(
            f"no sampled combination reached rank {target} (best {reached})"
        )
    # Greedy: keep an index when it bumps the rank of the running sum.
    chosen: list[int] = []
    acc = Mat.zeros(R.m, R.n)
    for i in kept:
        v, w = R.pairs[i]
        cand = acc + outer(w, v)
        if cand.rank() == len(chosen) + 1:
            chosen.append(i)
            acc = cand
            if len(chosen) == target:
                break
    if len(chosen) < target:
        indices = _matching_search(R, kept, target)
        if indices is None:
            raise InvariantViolation(
                "sampled rank reached the target but no index set does"
            )
        chosen = list(indices)
    matching = Matching(R, tuple(chosen))
    if matching.rank_one_sum().rank() != target:
        raise InvariantViolation("extracted index set lost rank")
    return matching


def lovasz_max_rank(
    V: MatrixSpace, sampler: GenericSampler, budget: int = DEFAULT_BUDGET
) -> CertifiedValue:
    """Maximum rank in a rank-one generated space, with a shrunk-subspace dual.

    The value is n - d where d is the largest dimension defect dim E -
    dim V[E]; the primal is an explicit matrix of that rank, the dual the
    maximizing subspace (read off the minimum cover).
    """
    R = V.source_relation()
    if R is None:
        raise ValueError("lovasz_max_rank needs recorded rank-one generators")
    cover = min_cover(R, budget)
    value = cover.size
    matching = extract_matching_from_combination(R, value, sampler, budget)
    element = matching.rank_one_sum()
    shrunk = cover.E.orthocomplement()
    witness = ShrunkWitness(shrunk, apply_space(V, shrunk))
    if witness.defect != R.n - value:
        raise InvariantViolation("cover conversion produced the wrong defect")
    return CertifiedValue(value, element, witness, PROVED)


def rado_transversal(sets, m: int, budget: int = DEFAULT_BUDGET):
    """Independent representatives w_i in S_i, or a violating subfamily.

    Encodes the families as the relation {(e_i, v) : v in S_i}; a failed
    saturated matching converts into indices of k sets whose union spans
    fewer than k dimensions.
    """
    sets = [list(s) for s in sets]
    n = len(sets)
    if m < n:
        raise DimensionError("rado_transversal needs ambient m >= number of sets")
    pairs = []
    for i, S in enumerate(sets):
        for v in S:
            if v.dim != m:
                raise DimensionError("set vector with wrong ambient dimension")
            pairs.append((unit_vec(n, i), v))
    R = Relation(n, m, pairs)
    result = saturated_matching(R, budget)
    if isinstance(result, ShrunkWitness):
        # The witness span is a coordinate subspace here (all v's are e_i),
        # and the sets it touches have a union of deficient dimension.
        members = [i for i in range(n) if any(u[i] != 0 for u in result.S.vectors)]
        union = Subspace.span(m, [v for i in members for v in sets[i]])
        if union.dim >= len(members):
            raise InvariantViolation("Rado witness family is not violating")
        return None, members
    transversal: list[Vec | None] = [None] * n
    for idx in result.indices:
        v, w = R.pairs[idx]
        i = next(j for j, x in enumerate(v.entries) if x != 0)
        transversal[i] = w
    if any(t is None for t in transversal):
        raise InvariantViolation("saturated matching missed a set")
    return transversal, None


def certificate_to_json(cv: CertifiedValue) -> dict:
    data = {"value": cv.value, "status": cv.status}
    if isinstance(cv.primal, Matching):
        data["matching"] = cv.primal.to_json()
    elif isinstance(cv.primal, Mat):
        data["element"] = cv.primal.to_json()
    elif hasattr(cv.primal, "to_json"):
        data["primal"] = cv.primal.to_json()
    if isinstance(cv.dual, Cover):
        data["cover"] = cv.dual.to_json()
    elif hasattr(cv.dual, "to_json"):
        data["dual"] = cv.dual.to_json()
    return data
