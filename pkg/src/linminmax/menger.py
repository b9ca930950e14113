"""Linear Menger: coherent path capacity and separator certificates.

The coherent path capacity between subspaces E and F relative to a relation
R is the maximum, over A in the induced matrix space, of
rank [[I - A, i],[p, 0]] - n, with i the inclusion of E and p the projection
onto F.  It equals the minimum separator size, and both sides are computed
exactly: the capacity by minimizing the rank of the bordered subset matrix
over all index subsets (a branch-and-bound whose node ranks only grow), the
separator by converting the minimizing subset.  Random sampling supplies the
primal element and an early-exit bound, never the value itself.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    BudgetExceededError,
    DimensionError,
    InvariantViolation,
)
from .exact_linalg import (
    IntEchelon,
    Mat,
    Subspace,
    Vec,
    block,
    clear_denominators,
    hstack,
    solve_exact,
    subspace_intersection,
    subspace_sum,
    unit_vec,
    vstack,
)
from .classical_oracles import Digraph
from .matching_cover import (
    LOWER_BOUND_ONLY,
    PROVED,
    CertifiedValue,
    DEFAULT_BUDGET,
    max_matching,
)
from .relation import (
    GenericSampler,
    Relation,
    reduced_indices,
    sample_element,
    to_matrix_space,
)


@dataclass(frozen=True)
class Separator:
    """Pair (E~, F~) pinching every relation path from E to F.

    E is inside E~, F inside F~, the orthocomplement of F~ inside E~, and no
    pair jumps from F~^perp past E~; the size is dim(E~ n F~).
    """

    E_tilde: Subspace
    F_tilde: Subspace
    E: Subspace
    F: Subspace

    @property
    def size(self) -> int:
        return subspace_intersection(self.E_tilde, self.F_tilde).dim

    def to_json(self):
        return {
            "E_tilde": self.E_tilde.to_json(),
            "F_tilde": self.F_tilde.to_json(),
            "size": self.size,
        }


def verify_separator(R: Relation, sep: Separator) -> bool:
    if not sep.E_tilde.contains_subspace(sep.E):
        return False
    if not sep.F_tilde.contains_subspace(sep.F):
        return False
    if not sep.E_tilde.contains_subspace(sep.F_tilde.orthocomplement()):
        return False
    return all(
        sep.F_tilde.contains(v) or sep.E_tilde.contains(w) for v, w in R.pairs
    )


@dataclass(frozen=True)
class BiPath:
    """Alternating (w_1, v_1, ..., w_r, v_r) from E to F with indexed links."""

    ws: tuple
    vs: tuple
    link_pair_indices: tuple

    @property
    def length(self) -> int:
        return len(self.ws)


def verify_bipath(R: Relation, E: Subspace, F: Subspace, path: BiPath) -> bool:
    r = path.length
    if r == 0 or len(path.vs) != r or len(path.link_pair_indices) != r - 1:
        return False
    if not E.contains(path.ws[0]) or not F.contains(path.vs[-1]):
        return False
    for w, v in zip(path.ws, path.vs):
        if w.dot(v) == 0:
            return False
    for i, idx in enumerate(path.link_pair_indices):
        if R.pairs[idx] != (path.vs[i], path.ws[i + 1]):
            return False
    return True


def independent_bipaths_check(R, E, F, paths) -> bool:
    """All paths valid, with jointly independent v's and jointly independent w's."""
    if not all(verify_bipath(R, E, F, p) for p in paths):
        return False
    n = R.n
    ech_v = IntEchelon(n)
    ech_w = IntEchelon(n)
    for p in paths:
        for v in p.vs:
            if not ech_v.add(clear_denominators(v.entries)):
                return False
        for w in p.ws:
            if not ech_w.add(clear_denominators(w.entries)):
                return False
    return True


# ---------------------------------------------------------------------------
# the subset minimization behind the path capacities


class _Found(Exception):
    pass


def _capacity_search(R: Relation, E: Subspace, F: Subspace, budget, stop_at=None):
    """Exact min over S of rank([p; V_Sc^T] [i, W_S]) with sound pruning.

    The pairing matrix of a partial assignment is a submatrix of every leaf
    below it, so its rank lower-bounds those leaves and the branch can be
    cut once it reaches the current best.  `stop_at` (a certified lower
    bound, e.g. from sampling) allows stopping at the first optimal subset.
    Returns (value, S, kept_indices).
    """
    kept = reduced_indices(R)
    if len(kept) > budget:
        raise BudgetExceededError(
            f"{len(kept)} independent pairs exceed the subset budget {budget}"
        )
    pairs = [R.pairs[i] for i in kept]
    r = len(pairs)
    row_vecs = list(F.vectors) + [v for v, _ in pairs]
    col_vecs = list(E.vectors) + [w for _, w in pairs]
    n_f, n_e = len(F.vectors), len(E.vectors)
    int_rows = [
        clear_denominators([rv.dot(cv) for cv in col_vecs]) for rv in row_vecs
    ]

    best: int | None = None
    best_s: list[int] | None = None

    def node_rank(rows, cols, cutoff):
        ech = IntEchelon(len(cols))
        for a in rows:
            src = int_rows[a]
            if ech.add([src[c] for c in cols]) and ech.rank >= cutoff:
                return ech.rank
        return ech.rank

    def dfs(k, rows, cols):
        nonlocal best, best_s
        cutoff = best if best is not None else r + n_e + n_f + 1
        rk = node_rank(rows, cols, cutoff)
        if best is not None and rk >= best:
            return
        if k == r:
            best = rk
            best_s = [c - n_e for c in cols if c >= n_e]
            if stop_at is not None and best <= stop_at:
                raise _Found()
            return
        dfs(k + 1, rows, cols + [n_e + k])  # k in S: w_k joins the C side
        dfs(k + 1, rows + [n_f + k], cols)  # k not in S: v_k joins the D side

    try:
        dfs(0, list(range(n_f)), list(range(n_e)))
    except _Found:
        pass
    return best, set(best_s), kept


def _build_separator(R, E, F, kept, S) -> Separator:
    pairs = [R.pairs[i] for i in kept]
    C = subspace_sum(E, Subspace.span(R.n, [pairs[i][1] for i in S]))
    D = subspace_sum(F, Subspace.span(R.n, [pairs[i][0] for i in range(len(pairs)) if i not in S]))
    e_tilde = subspace_sum(C, D.orthocomplement())
    sep = Separator(e_tilde, D, E, F)
    if not verify_separator(R, sep):
        raise InvariantViolation("subset conversion is not a separator")
    return sep


def min_separator(
    R: Relation, E: Subspace, F: Subspace, budget: int = DEFAULT_BUDGET
) -> Separator:
    """Minimum-size (E, F)-separator from the minimizing index subset."""
    _check_square(R, E, F)
    value, S, kept = _capacity_search(R, E, F, budget)
    sep = _build_separator(R, E, F, kept, S)
    if sep.size != value:
        raise InvariantViolation("separator size differs from the subset minimum")
    return sep


def _check_square(R: Relation, E: Subspace, F: Subspace):
    if R.n != R.m:
        raise DimensionError("path capacities need a relation on F^n x F^n")
    if E.ambient != R.n or F.ambient != R.n:
        raise DimensionError("E and F must live in the relation's space")


def _inclusion(E: Subspace, n: int) -> Mat:
    return E.basis if E.dim else Mat.zeros(n, 0)


def _projection(F: Subspace, n: int) -> Mat:
    return F.basis.transpose() if F.dim else Mat.zeros(0, n)


def bordered_matrix(A: Mat, E: Subspace, F: Subspace) -> Mat:
    """[[I - A, i],[p, 0]] with i = basis of E, p = transposed basis of F."""
    n = A.rows
    iota = _inclusion(E, n)
    pi = _projection(F, n)
    return block(
        [
            [Mat.identity(n) - A, iota],
            [pi, Mat.zeros(pi.rows, iota.cols)],
        ]
    )


def bordered_rank(A: Mat, E: Subspace, F: Subspace) -> int:
    return bordered_matrix(A, E, F).rank()


def subset_bordered_matrix(R, E, F, kept, S) -> Mat:
    """[[I, i, W_S],[p, 0, 0],[V_Sc^T, 0, 0]] from the capacity proof."""
    n = R.n
    iota = _inclusion(E, n)
    pi = _projection(F, n)
    ws = [R.pairs[kept[i]][1] for i in sorted(S)]
    vs = [R.pairs[kept[i]][0] for i in range(len(kept)) if i not in S]
    w_mat = Mat.from_cols(ws, rows=n) if ws else Mat.zeros(n, 0)
    v_mat = (
        Mat([v.entries for v in vs], n) if vs else Mat.zeros(0, n)
    )
    top = hstack([Mat.identity(n), iota, w_mat])
    mid = hstack([pi, Mat.zeros(pi.rows, iota.cols), Mat.zeros(pi.rows, w_mat.cols)])
    bot = hstack(
        [v_mat, Mat.zeros(v_mat.rows, iota.cols), Mat.zeros(v_mat.rows, w_mat.cols)]
    )
    return vstack([top, mid, bot])


def cpc(
    R: Relation,
    E: Subspace,
    F: Subspace,
    sampler: GenericSampler,
    budget: int = DEFAULT_BUDGET,
) -> CertifiedValue:
    """Coherent path capacity with a sampled primal and separator dual.

    The value is the exact subset minimum; sampling provides the element
    whose bordered rank attains it (and an early-exit bound for the
    enumeration).  Guttman rank additivity is asserted on every sampled A
    with I - A invertible.
    """
    _check_square(R, E, F)
    n = R.n
    space = to_matrix_space(R)
    best_A = Mat.zeros(n, n)
    best_rank = bordered_rank(best_A, E, F) - n
    _assert_guttman(best_A, E, F)
    for _ in range(sampler.trials):
        A = sample_element(space, sampler)
        _assert_guttman(A, E, F)
        val = bordered_rank(A, E, F) - n
        if val > best_rank:
            best_rank, best_A = val, A
    value, S, kept = _capacity_search(R, E, F, budget, stop_at=best_rank)
    if value < best_rank:
        raise InvariantViolation("sampled rank exceeded the subset minimum")
    sep = _build_separator(R, E, F, kept, S)
    if sep.size != value:
        raise InvariantViolation("separator size differs from capacity")
    if subset_bordered_matrix(R, E, F, kept, S).rank() != n + value:
        raise InvariantViolation("subset bordered matrix rank mismatch")
    status = PROVED if best_rank == value else LOWER_BOUND_ONLY
    return CertifiedValue(value, best_A, sep, status)


def _assert_guttman(A: Mat, E: Subspace, F: Subspace):
    """rank [[I-A, i],[p, 0]] = n + rank(p (I-A)^{-1} i) when I-A is invertible."""
    n = A.rows
    m = Mat.identity(n) - A
    inv_iota = solve_exact(m, _inclusion(E, n))
    if inv_iota is None:
        return
    schur_rank = (_projection(F, n) @ inv_iota).rank()
    if bordered_rank(A, E, F) != n + schur_rank:
        raise InvariantViolation("Guttman rank additivity failed")


# ---------------------------------------------------------------------------
# subset formulas for generic ranks


def generic_rank_rank_one_update(A: Mat, v: Vec, w: Vec) -> int:
    """Generic rank of A + x w v^T: min(rank [A | w], rank [A ; v^T])."""
    if v.dim != A.cols or w.dim != A.rows:
        raise DimensionError("rank-one update with mismatched shapes")
    col_aug = hstack([A, Mat.from_cols([w])])
    row_aug = vstack([A, Mat([v.entries], A.cols)])
    return min(col_aug.rank(), row_aug.rank())


def generic_rank_sum(A: Mat, pairs, budget: int = DEFAULT_BUDGET) -> int:
    """Generic rank of A + sum_i x_i w_i v_i^T over the subset formula.

    Minimizes rank [[A, W_S],[V_Sc^T, 0]] over subsets S by the same
    monotone branch-and-bound as the capacity search.
    """
    pairs = list(pairs)
    if len(pairs) > budget:
        raise BudgetExceededError(
            f"{len(pairs)} pairs exceed the subset budget {budget}"
        )
    for v, w in pairs:
        if v.dim != A.cols or w.dim != A.rows:
            raise DimensionError("update pair with mismatched shape")
    r = len(pairs)
    best: int | None = None

    def node_matrix(w_sel, v_sel) -> Mat:
        ws = [pairs[i][1] for i in w_sel]
        vs = [pairs[i][0] for i in v_sel]
        w_mat = Mat.from_cols(ws, rows=A.rows) if ws else Mat.zeros(A.rows, 0)
        v_mat = Mat([v.entries for v in vs], A.cols) if vs else Mat.zeros(0, A.cols)
        top = hstack([A, w_mat])
        bot = hstack([v_mat, Mat.zeros(v_mat.rows, w_mat.cols)])
        return vstack([top, bot])

    def dfs(k, w_sel, v_sel):
        nonlocal best
        rk = node_matrix(w_sel, v_sel).rank()
        if best is not None and rk >= best:
            return
        if k == r:
            best = rk
            return
        dfs(k + 1, w_sel + [k], v_sel)
        dfs(k + 1, w_sel, v_sel + [k])

    dfs(0, [], [])
    return best


# ---------------------------------------------------------------------------
# graph encoding and the Konig reduction


def graph_instance(G: Digraph, H, K, with_loops: bool = False):
    """Standard-basis encoding of a digraph with source and sink vertex sets.

    Returns (R, E, F); with_loops adds a pair (e_i, e_i) per vertex, the
    augmentation used by the classical separator correspondence.
    """
    n = G.size
    pairs = [(unit_vec(n, i), unit_vec(n, j)) for i, j in G.edges]
    if with_loops:
        pairs += [(unit_vec(n, i), unit_vec(n, i)) for i in range(n)]
    E = Subspace.span(n, [unit_vec(n, i) for i in H])
    F = Subspace.span(n, [unit_vec(n, i) for i in K])
    return Relation(n, n, pairs), E, F


def konig_via_menger(
    R: Relation, sampler: GenericSampler, budget: int = DEFAULT_BUDGET
) -> CertifiedValue:
    """Maximum matching value recovered through the path-capacity machinery.

    Embeds R on F^{n+m} as (v + 0, 0 + w), routes from F^n + 0 to 0 + F^m,
    and checks the block rank identity that makes the capacity collapse to
    rank(A) + n + m on sampled elements.
    """
    n, m = R.n, R.m
    big = n + m
    lifted = [
        (Vec(list(v.entries) + [0] * m), Vec([0] * n + list(w.entries)))
        for v, w in R.pairs
    ]
    R2 = Relation(big, big, lifted)
    E = Subspace.span(big, [unit_vec(big, i) for i in range(n)])
    F = Subspace.span(big, [unit_vec(big, n + j) for j in range(m)])

    space = to_matrix_space(R)
    for _ in range(3):
        A = sample_element(space, sampler)
        stacked = block(
            [
                [Mat.identity(n), Mat.zeros(n, m), Mat.identity(n)],
                [-A, Mat.identity(m), Mat.zeros(m, n)],
                [Mat.zeros(m, n), Mat.identity(m), Mat.zeros(m, n)],
            ]
        )
        if stacked.rank() != A.rank() + n + m:
            raise InvariantViolation("Konig reduction rank identity failed")

    capacity = cpc(R2, E, F, sampler, budget)
    direct = max_matching(R, budget)
    if capacity.value != direct.value:
        raise InvariantViolation(
            "path capacity disagrees with the matching optimum"
        )
    return capacity
