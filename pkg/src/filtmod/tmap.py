"""The surjection from extension coordinates onto eigenvalue deformations
plus filtration-preserving endomorphisms, its kernels, image subspaces, and
the classification of eigenvalue subsets.

Domain coordinates of a ``TDomainVector``: psi (n smooth torus coordinates),
mu (one unit coordinate mapping to the identity endomorphism), and one
coordinate c_I per subset I with 1 <= |I| <= n-1.  The map sends psi
identically to the eigenvalue-deformation block and (mu, c) to
mu * Id + sum_I c_I * T_I inside the filtration-preserving endomorphisms.

Matrices are flattened row-major into n^2 coordinates for subspace work.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .coxeter import Permutation, crossing_number, support
from .exterior import (
    estar,
    fil_2nd_max,
    fil_max,
    functional_space_killing,
    transfer_solve,
    wedge,
    wedge_basis,
    wedge_index,
    wedge_of_wedge,
)
from .linalg import Matrix, Subspace, kernel
from .phimodule import (
    FilteredPhiModule,
    Refinement,
    SubsetI,
    all_subsets,
    canonical_refinement,
    filtration_subspace,
    relative_position,
    require_valid,
)


def flatten(m: Matrix) -> tuple[Fraction, ...]:
    return tuple(x for row in m.entries for x in row)


def unflatten(v, n: int) -> Matrix:
    return Matrix.from_rows([list(v[i * n : (i + 1) * n]) for i in range(n)], n)


@lru_cache(maxsize=None)
def homfil_basis(D: FilteredPhiModule) -> Subspace:
    """Canonical basis of {M : M Fil^{-h_j} <= Fil^{-h_j} for all j}.

    Dimension n(n+1)/2.
    """
    require_valid(D)
    n = D.n
    constraints = []
    for j in range(1, n):
        W = filtration_subspace(D, j)
        # M v in W  <=>  proj of M v onto the complement of W vanishes;
        # encode via a basis of functionals killing W.
        killers = kernel(W.basis).vectors()
        for v in W.vectors():
            for phi in killers:
                # constraint sum_{r,c} phi_r v_c M[r][c] = 0
                row = [Fraction(0)] * (n * n)
                for r in range(n):
                    for c in range(n):
                        row[r * n + c] = phi[r] * v[c]
                constraints.append(row)
    if not constraints:
        return Subspace.full(n * n)
    return kernel(Matrix.from_rows(constraints, n * n))


def t_operator(D: FilteredPhiModule, I: SubsetI) -> Matrix:
    """T_I: the transfer of the normalized coordinate functional at e_{I^c}."""
    return transfer_solve(D, I.size, estar(D, I))


@dataclass(frozen=True)
class TOperatorSet:
    """The operators T_I together with the nonzero scale chosen for each
    (the normalized construction has all scales 1).  Downstream observables
    must not depend on the scales; constraints phrased in normalized
    coordinates divide them back out."""

    D: FilteredPhiModule
    subsets: tuple[SubsetI, ...]
    operators: tuple[Matrix, ...]
    scales: tuple[Fraction, ...]

    @staticmethod
    def build(D: FilteredPhiModule, scales=None) -> "TOperatorSet":
        subsets = tuple(all_subsets(D.n))
        if scales is None:
            scales = (Fraction(1),) * len(subsets)
        scales = tuple(Fraction(s) for s in scales)
        if len(scales) != len(subsets) or any(s == 0 for s in scales):
            raise ValueError("need one nonzero scale per subset")
        ops = []
        for k, I in enumerate(subsets):
            T = t_operator(D, I)
            if scales[k] != 1:
                T = Matrix.from_rows(
                    [[scales[k] * x for x in row] for row in T.entries], D.n
                )
            ops.append(T)
        return TOperatorSet(D, subsets, tuple(ops), scales)

    def operator(self, I: SubsetI) -> Matrix:
        return self.operators[self.subsets.index(I)]


def t_apply(ops: TOperatorSet, psi, mu, c) -> tuple[tuple, Matrix]:
    """Apply the assembled map: phi part = psi, fil part = mu Id + sum c_I T_I."""
    n = ops.D.n
    fil = [[Fraction(0)] * n for _ in range(n)]
    for r in range(n):
        fil[r][r] = Fraction(mu)
    for k, I in enumerate(ops.subsets):
        coef = Fraction(c[k])
        if coef == 0:
            continue
        for r in range(n):
            for cc in range(n):
                fil[r][cc] += coef * ops.operators[k].entries[r][cc]
    return tuple(Fraction(x) for x in psi), Matrix.from_rows(fil, n)


def levi_block_sizes(n: int, S) -> list[int]:
    """Block sizes of {0..n-1} cut at the elements of S."""
    cuts = sorted(set(S))
    bounds = [0] + cuts + [n]
    return [b - a for a, b in zip(bounds, bounds[1:])]


def expected_kernel_dim(n: int, S) -> int:
    """(sum_{i in S} C(n,i)) + 1 - dim r_{P_{S^c}} with
    dim r_{P_{S^c}} = k + (n^2 - sum n_b^2)/2 for the S-cut Levi blocks."""
    S = sorted(set(S))
    blocks = levi_block_sizes(n, S)
    k = len(S) + 1
    dim_r = k + (n * n - sum(b * b for b in blocks)) // 2
    return sum(comb(n, i) for i in S) + 1 - dim_r


def _restricted_subsets(ops: TOperatorSet, S) -> list[int]:
    S = set(S)
    return [k for k, I in enumerate(ops.subsets) if I.size in S]


def t_kernel(ops: TOperatorSet, S=None) -> tuple[Subspace, list[SubsetI]]:
    """Kernel of (mu, c) -> mu Id + sum c_I T_I restricted to |I| with
    s_{|I|} in S.  Coordinates: [mu] + [c_I in subset order].

    The dimension is checked against the closed formula; mismatch raises.
    """
    if S is None:
        S = range(1, ops.D.n)
    return _t_kernel(ops, tuple(sorted(set(S))))


@lru_cache(maxsize=None)
def _t_kernel(ops: TOperatorSet, S: tuple[int, ...]) -> tuple[Subspace, list[SubsetI]]:
    n = ops.D.n
    idxs = _restricted_subsets(ops, S)
    cols = [flatten(Matrix.identity(n))] + [flatten(ops.operators[k]) for k in idxs]
    m = Matrix.from_rows(
        [[cols[c][r] for c in range(len(cols))] for r in range(n * n)],
        len(cols),
    )
    ker = kernel(m)
    expect = expected_kernel_dim(n, S)
    if ker.dim != expect:
        raise RuntimeError(
            f"kernel dimension {ker.dim} != formula value {expect} for S={sorted(set(S))}"
        )
    return ker, tuple(ops.subsets[k] for k in idxs)


@lru_cache(maxsize=None)
def _transfer_span(D: FilteredPhiModule, i: int, killed: Subspace) -> Subspace:
    from .exterior import transfer_solve_batch

    funcs = functional_space_killing(D, i, killed)
    mats = [flatten(T) for T in transfer_solve_batch(D, i, funcs)]
    return Subspace.from_vectors(D.n * D.n, mats)


def kernel_image_in_homfil(ops: TOperatorSet, S, i: int) -> Subspace:
    """{sum_{|I|=i} c_I T_I : c in t_kernel} as a matrix subspace; checked to
    equal the transfer images of the maps vanishing on the one-but-last
    exterior filtration step.  Mismatch raises."""
    if i not in set(S):
        raise ValueError("i must lie in S")
    n = ops.D.n
    ker, subsets = t_kernel(ops, S)
    vecs = []
    for kv in ker.vectors():
        acc = [Fraction(0)] * (n * n)
        for pos, I in enumerate(subsets):
            if I.size != i:
                continue
            coef = kv[1 + pos]
            if coef == 0:
                continue
            flat = flatten(ops.operator(I))
            for t in range(n * n):
                acc[t] += coef * flat[t]
        vecs.append(acc)
    left = Subspace.from_vectors(n * n, vecs)
    right = _transfer_span(ops.D, i, fil_2nd_max(ops.D, sorted(set(S)), i))
    if left != right:
        raise RuntimeError(
            f"kernel image at block {i} does not match the one-but-last-step characterization"
        )
    return left


def inf_domain(ops: TOperatorSet, S) -> Subspace:
    """Cut-out subspace of the (mu, c)-space: mu = 0 and, for each j with
    s_j in S, the sum of c_I over nonsplit I of size j vanishes.

    Coordinates: [mu] + [c_I over all subsets in order].
    """
    n = ops.D.n
    cls = classify(ops)
    nvars = 1 + len(ops.subsets)
    constraints = [[Fraction(1)] + [Fraction(0)] * len(ops.subsets)]
    for j in sorted(set(S)):
        row = [Fraction(0)] * nvars
        for pos, I in enumerate(ops.subsets):
            if I.size == j and not cls[I.members].split:
                # the sum constraint lives in normalized coordinates
                row[1 + pos] = ops.scales[pos]
        if any(x != 0 for x in row):
            constraints.append(row)
    return kernel(Matrix.from_rows(constraints, nvars))


def inf_image_in_homfil(ops: TOperatorSet, S, i: int) -> Subspace:
    """{sum_{|I|=i} c_I T_I : v in inf_domain}; checked to equal the transfer
    images of the maps vanishing on the top Plücker line.  Mismatch raises."""
    if i not in set(S):
        raise ValueError("i must lie in S")
    n = ops.D.n
    dom = inf_domain(ops, S)
    vecs = []
    for kv in dom.vectors():
        acc = [Fraction(0)] * (n * n)
        for pos, I in enumerate(ops.subsets):
            if I.size != i:
                continue
            coef = kv[1 + pos]
            if coef == 0:
                continue
            flat = flatten(ops.operator(I))
            for t in range(n * n):
                acc[t] += coef * flat[t]
        vecs.append(acc)
    left = Subspace.from_vectors(n * n, vecs)
    line = fil_max(ops.D, i)
    amb = len(line.coords)
    right = _transfer_span(
        ops.D, i, Subspace.from_vectors(amb, [line.coords])
    )
    if left != right:
        raise RuntimeError(
            f"inf image at block {i} does not match the top-line characterization"
        )
    return left


@dataclass(frozen=True)
class SubsetClassification:
    members: tuple[int, ...]
    split: bool
    cosplit: bool
    critical: bool
    very_critical: bool


def _second_wedge_span(D: FilteredPhiModule, i: int) -> Subspace:
    """Span of (wedges of n-i-1 vectors of Fil^{-h_i}) wedged with the whole
    space, inside the (n-i)-th exterior power."""
    n = D.n
    W = list(filtration_subspace(D, i).vectors())
    gens = []
    for combo in itertools.combinations(range(len(W)), n - i - 1):
        x = wedge(n, [W[c] for c in combo])
        for j in range(n):
            e = [Fraction(int(k == j)) for k in range(n)]
            gens.append(wedge_of_wedge(x, wedge(n, [e])).coords)
    return Subspace.from_vectors(len(wedge_basis(n, n - i)), gens)


@lru_cache(maxsize=None)
def classify(ops: TOperatorSet) -> dict[tuple[int, ...], SubsetClassification]:
    """Per-subset split / cosplit / critical / very-critical flags.

    Very-criticality is decided by three independent criteria that must
    agree: the crossing number of the relative position, vanishing of T_I,
    and the coefficient test in the second wedge span.  Disagreement raises.
    """
    D = ops.D
    require_valid(D)
    n = D.n
    w0 = Permutation.longest(n)
    out = {}
    full_S = list(range(1, n))
    second_max = {i: fil_2nd_max(D, full_S, i) for i in range(1, n)}
    second_span = {i: _second_wedge_span(D, i) for i in range(1, n)}
    for I in ops.subsets:
        i = I.size
        vmax = fil_max(D, i)
        split = vmax.coefficient(I.complement()) == 0
        wprod = relative_position(D, canonical_refinement(I)) * w0
        critical = i in support(wprod)
        vc_a = crossing_number(wprod, i) >= 2
        T = ops.operator(I)
        vc_b = all(x == 0 for row in T.entries for x in row)
        idx = wedge_index(n, n - i, I.complement())
        vc_c = all(v[idx] == 0 for v in second_span[i].vectors())
        if not (vc_a == vc_b == vc_c):
            raise RuntimeError(
                f"very-criticality criteria disagree for I={I.members}: "
                f"crossing={vc_a} operator={vc_b} coefficient={vc_c}"
            )
        if split != critical:
            raise RuntimeError(
                f"split/critical equivalence fails for I={I.members}"
            )
        amb = len(wedge_basis(n, n - i))
        e_ic = [Fraction(0)] * amb
        e_ic[idx] = Fraction(1)
        cosplit = second_max[i].contains(e_ic)
        out[I.members] = SubsetClassification(
            I.members, split, cosplit, critical, vc_a
        )
    return out


def homfilR_i(D: FilteredPhiModule, ref: Refinement, i: int) -> Subspace:
    """{M filtration-preserving : M e_tau(j) = a e_tau(j) for j < i and
    M e_tau(j) - b e_tau(j) in span(e_tau(0..i-1)) for j >= i, some a, b},
    as a matrix subspace."""
    require_valid(D)
    n = D.n
    if not 1 <= i <= n - 1:
        raise ValueError("index out of range")
    tau = ref.tau
    hf = homfil_basis(D)
    # unknowns: coefficients over homfil basis, plus a and b
    hb = list(hf.vectors())
    nh = len(hb)
    constraints = []
    first = [tau(j) for j in range(i)]
    for j in range(n):
        col = tau(j)
        for r in range(n):
            # entry M[r][col] of M = sum_k x_k B_k
            coef_row = [hb[k][r * n + col] for k in range(nh)]
            if j < i:
                # must equal a * delta(r, col)
                row = coef_row + [-Fraction(int(r == col)), Fraction(0)]
                constraints.append(row)
            else:
                if r in first:
                    continue  # free: lands in span(e_tau(<i))
                row = coef_row + [Fraction(0), -Fraction(int(r == col))]
                constraints.append(row)
    ker = kernel(Matrix.from_rows(constraints, nh + 2))
    mats = []
    for kv in ker.vectors():
        acc = [Fraction(0)] * (n * n)
        for k in range(nh):
            if kv[k] == 0:
                continue
            for t in range(n * n):
                acc[t] += kv[k] * hb[k][t]
        mats.append(acc)
    return Subspace.from_vectors(n * n, mats)


def f_i(D: FilteredPhiModule, ref: Refinement, i: int, M: Matrix) -> tuple[Fraction, Fraction]:
    """Extract (a, b) from a member of the i-th restricted subspace."""
    sub = homfilR_i(D, ref, i)
    if not sub.contains(flatten(M)):
        raise ValueError("matrix outside the restricted subspace")
    tau = ref.tau
    a = M.entries[tau(0)][tau(0)]
    b = M.entries[tau(i)][tau(i)]
    return a, b


def f_i_bijective(D: FilteredPhiModule, ref: Refinement, i: int) -> bool:
    """True iff (a, b) extraction is a bijection of the restricted subspace
    onto the plane, i.e. the subspace is exactly 2-dimensional (the map is
    always surjective: identity gives (1,1) and the a=0 slice maps onto b)."""
    return homfilR_i(D, ref, i).dim == 2


def crit_kernel_check(ops: TOperatorSet, I: SubsetI) -> bool:
    """For a configuration whose relative position has crossing number 1 at
    |I|: T_I is nonzero, lies in the restricted subspace, maps to (0,0), and
    lies in the kernel of the (a, b) extraction.  When the restricted
    subspace is 3-dimensional (equivalently pair_count == 1) that kernel is
    a line, so T_I must span it; larger restricted subspaces have a larger
    kernel and only membership is required."""
    D = ops.D
    ref = canonical_refinement(I)
    w = relative_position(D, ref) * Permutation.longest(D.n)
    if crossing_number(w, I.size) != 1:
        raise ValueError("requires crossing number 1")
    T = ops.operator(I)
    flat = flatten(T)
    if all(x == 0 for x in flat):
        return False
    sub = homfilR_i(D, ref, I.size)
    if not sub.contains(flat):
        return False
    a, b = f_i(D, ref, I.size, T)
    if (a, b) != (0, 0):
        return False
    # kernel of (a, b) on the restricted subspace: {M : a(M) = b(M) = 0}
    n = D.n
    tau = ref.tau
    basis = sub.vectors()
    cons = []
    for which in (tau(0), tau(I.size)):
        cons.append([basis[k][which * n + which] for k in range(len(basis))])
    coeff_ker = kernel(Matrix.from_rows(cons, len(basis)))
    mats = []
    for kv in coeff_ker.vectors():
        acc = [Fraction(0)] * (n * n)
        for k in range(len(basis)):
            for t in range(n * n):
                acc[t] += kv[k] * basis[k][t]
        mats.append(acc)
    ker_sub = Subspace.from_vectors(n * n, mats)
    if not ker_sub.contains(flat):
        return False
    if sub.dim == 3:
        return ker_sub.dim == 1
    return True
