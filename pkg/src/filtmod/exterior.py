"""Exterior powers with lexicographic sorted-subset bases.

The basis of the k-th exterior power of Q^n is indexed by sorted k-subsets of
{0..n-1} in lexicographic order; the sign of a wedge of basis vectors is the
sign of the permutation sorting the indices.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .linalg import Matrix, Subspace, frac, solve, vec
from .phimodule import FilteredPhiModule, SubsetI, filtration_subspace, require_valid


def wedge_basis(n: int, k: int) -> list[tuple[int, ...]]:
    return list(itertools.combinations(range(n), k))


def wedge_index(n: int, k: int, subset: Sequence[int]) -> int:
    return wedge_basis(n, k).index(tuple(sorted(subset)))


@dataclass(frozen=True)
class WedgeVector:
    n: int
    degree: int
    coords: tuple[Fraction, ...]  # indexed by wedge_basis(n, degree)

    def coefficient(self, subset: Sequence[int]) -> Fraction:
        return self.coords[wedge_index(self.n, self.degree, subset)]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    @staticmethod
    def basis_element(n: int, subset: Sequence[int]) -> "WedgeVector":
        k = len(subset)
        coords = [Fraction(0)] * len(wedge_basis(n, k))
        coords[wedge_index(n, k, subset)] = Fraction(1)
        return WedgeVector(n, k, tuple(coords))


def wedge(n: int, vectors: Sequence[Sequence]) -> WedgeVector:
    """Wedge of k vectors of Q^n: coordinates are the k x k minors."""
    vs = [vec(v) for v in vectors]
    k = len(vs)
    coords = []
    for cols in wedge_basis(n, k):
        sub = Matrix.from_rows([[v[c] for c in cols] for v in vs], k)
        coords.append(_det(sub))
    return WedgeVector(n, k, tuple(coords))


def _det(m: Matrix) -> Fraction:
    k = m.rows
    if k == 0:
        return Fraction(1)
    rows = [list(r) for r in m.entries]
    det = Fraction(1)
    for c in range(k):
        piv = next((i for i in range(c, k) if rows[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det *= rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, k):
            f = rows[i][c] * inv
            if f != 0:
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return det


def wedge_of_wedge(x: WedgeVector, y: WedgeVector) -> WedgeVector:
    """Product x ^ y in the exterior algebra."""
    if x.n != y.n:
        raise ValueError("ambient mismatch")
    n = x.n
    k = x.degree + y.degree
    out = [Fraction(0)] * len(wedge_basis(n, k)) if k <= n else []
    if k > n:
        return WedgeVector(n, k, ())
    bx = wedge_basis(n, x.degree)
    by = wedge_basis(n, y.degree)
    for ix, sx in enumerate(bx):
        cx = x.coords[ix]
        if cx == 0:
            continue
        for iy, sy in enumerate(by):
            cy = y.coords[iy]
            if cy == 0 or set(sx) & set(sy):
                continue
            merged = list(sx) + list(sy)
            sign = _sort_sign(merged)
            out[wedge_index(n, k, merged)] += sign * cx * cy
    return WedgeVector(n, k, tuple(out))


def _sort_sign(indices: list[int]) -> int:
    sign = 1
    arr = list(indices)
    for i in range(len(arr)):
        for j in range(i + 1, len(arr)):
            if arr[i] > arr[j]:
                arr[i], arr[j] = arr[j], arr[i]
                sign = -sign
    return sign


def wedge_pairing(x: WedgeVector, y: WedgeVector) -> Fraction:
    """Coefficient of e_{0..n-1} in x ^ y; a perfect bilinear pairing."""
    if x.degree + y.degree != x.n:
        raise ValueError("degree mismatch")
    prod = wedge_of_wedge(x, y)
    return prod.coords[0]


@lru_cache(maxsize=None)
def fil_max(D: FilteredPhiModule, i: int) -> WedgeVector:
    """The degree n-i Plücker vector wedge(v_i..v_{n-1}) (nonzero)."""
    if not 1 <= i <= D.n - 1:
        raise ValueError("index out of range")
    return wedge(D.n, D.flag[i:])


def fil_2nd_max(D: FilteredPhiModule, S: Sequence[int], i: int) -> Subspace:
    """The one-but-last step of the S-induced filtration on the (n-i)-th
    exterior power, as a canonical subspace of its coordinate space.

    Writing S = {i_1 < ... < i_m} with i_0 := 0:
      i == i_m: span of (wedges of n-i_m-1 vectors of Fil^{-h_{i_m}}) wedged
                with Fil^{-h_{i_{m-1}}};
      i == i_j, j < m: span of (top wedge of Fil^{-h_{i_{j+1}}}) ^ (wedges of
                i_{j+1}-i_j-1 vectors of Fil^{-h_{i_j}}) ^ Fil^{-h_{i_{j-1}}}.
    """
    return _fil_2nd_max(D, tuple(sorted(set(S))), i)


@lru_cache(maxsize=None)
def _fil_2nd_max(D: FilteredPhiModule, S: tuple[int, ...], i: int) -> Subspace:
    S = list(S)
    if not S or i not in S:
        raise ValueError("i must lie in the nonempty step set S")
    n = D.n
    chain = [0] + S
    pos = chain.index(i)  # >= 1
    dim_amb = len(wedge_basis(n, n - i))

    def step_basis(j: int) -> list[tuple[Fraction, ...]]:
        return list(filtration_subspace(D, j).vectors())

    gens: list[WedgeVector] = []
    if i == S[-1]:
        inner = step_basis(i)
        prev = step_basis(chain[pos - 1])
        for combo in itertools.combinations(range(len(inner)), n - i - 1):
            x = wedge(n, [inner[c] for c in combo])
            for v in prev:
                gens.append(wedge_of_wedge(x, wedge(n, [v])))
    else:
        nxt = chain[pos + 1]
        top = wedge(n, step_basis(nxt))  # degree n - nxt
        mid_basis = step_basis(i)
        for combo in itertools.combinations(range(len(mid_basis)), nxt - i - 1):
            x = wedge_of_wedge(top, wedge(n, [mid_basis[c] for c in combo]))
            for v in step_basis(chain[pos - 1]):
                gens.append(wedge_of_wedge(x, wedge(n, [v])))
    return Subspace.from_vectors(dim_amb, [g.coords for g in gens])


def expected_2nd_max_dim(n: int, S: Sequence[int], i: int) -> int:
    S = sorted(set(S))
    chain = [0] + S
    pos = chain.index(i)
    if i == S[-1]:
        return 1 + (n - i) * (i - chain[pos - 1])
    return 1 + (i - chain[pos - 1]) * (chain[pos + 1] - i)


@dataclass(frozen=True)
class LineValuedMap:
    """A map from the (n-i)-th exterior power to the line through ``line``:
    x -> functional(x) * line, with functional given by coordinates."""

    n: int
    degree: int
    functional: tuple[Fraction, ...]
    line: WedgeVector  # degree n - i representative spanning the target line


def estar(D: FilteredPhiModule, I: SubsetI) -> LineValuedMap:
    """The normalized coordinate functional at e_{I^c}.

    Nonsplit case (coefficient lam of e_{I^c} in fil_max nonzero): sends
    e_{I^c} to fil_max / lam, every other basis wedge to 0.  Split case:
    sends e_{I^c} to fil_max itself (arbitrary nonzero choice).
    """
    require_valid(D)
    i = I.size
    v = fil_max(D, i)
    lam = v.coefficient(I.complement())
    amb = len(wedge_basis(D.n, D.n - i))
    functional = [Fraction(0)] * amb
    functional[wedge_index(D.n, D.n - i, I.complement())] = (
        1 / lam if lam != 0 else Fraction(1)
    )
    return LineValuedMap(D.n, D.n - i, tuple(functional), v)


def functional_space_killing(
    D: FilteredPhiModule, i: int, killed: Subspace
) -> list[LineValuedMap]:
    """Basis of line-valued maps on the (n-i)-th exterior power vanishing on
    ``killed`` (target line = fil_max(D, i))."""
    from .linalg import kernel

    line = fil_max(D, i)
    if killed.dim == 0:
        amb = len(wedge_basis(D.n, D.n - i))
        funcs = Subspace.full(amb).vectors()
    else:
        funcs = kernel(killed.basis).vectors()
    return [LineValuedMap(D.n, D.n - i, f, line) for f in funcs]


def apply_line_map(F: LineValuedMap, x: WedgeVector) -> WedgeVector:
    c = sum((a * b for a, b in zip(F.functional, x.coords)), Fraction(0))
    return WedgeVector(F.n, F.line.degree, tuple(c * t for t in F.line.coords))


@lru_cache(maxsize=None)
def _transfer_system(D: FilteredPhiModule, i: int):
    """Coefficient matrix of the transfer equations at block i, together with
    the data needed to evaluate right-hand sides and assemble solutions.

    Unknowns: a (scalar on W = Fil^{-h_i}), then c[t][s] with f(u_t) =
    sum_s c[t][s] w_s over a unit-vector complement basis (u_t) of W.
    """
    require_valid(D)
    n = D.n
    if not 1 <= i <= n - 1:
        raise ValueError("index out of range")
    W = filtration_subspace(D, i)
    wbasis = list(W.vectors())  # n - i vectors
    comp_idx = _complement_indices(W)
    nun = 1 + len(comp_idx) * (n - i)

    # Express each eigenbasis vector d_j = w-combination + complement part.
    decomp = []
    basis_mat = Matrix.from_rows(
        wbasis + [_unit(n, c) for c in comp_idx], n
    ).transpose()
    for j in range(n):
        sol = solve(basis_mat, _unit(n, j))
        decomp.append(sol)  # first n-i coords: along W; rest: along units

    rows = []
    rhs_info = []  # per row: ((x ^ d_j) coords, output coordinate index)
    xs = [
        wedge(n, [wbasis[c] for c in combo])
        for combo in itertools.combinations(range(len(wbasis)), n - i - 1)
    ]
    amb_hi = len(wedge_basis(n, n - i))
    for x in xs:
        for j in range(n):
            prod = wedge_of_wedge(x, wedge(n, [_unit(n, j)]))
            # f(d) = a * w_part(d) + sum_t alpha_t(d) * sum_s c[t][s] w_s
            # build coefficient of each unknown in x ^ f(d), per output coord
            coeffs = [[Fraction(0)] * nun for _ in range(amb_hi)]
            wpart = [
                sum(
                    (decomp[j][s] * wbasis[s][idx] for s in range(len(wbasis))),
                    Fraction(0),
                )
                for idx in range(n)
            ]
            xa = wedge_of_wedge(x, wedge(n, [wpart]))
            for c_out in range(amb_hi):
                coeffs[c_out][0] += xa.coords[c_out]
            for t in range(len(comp_idx)):
                alpha = decomp[j][len(wbasis) + t]
                if alpha == 0:
                    continue
                for s in range(n - i):
                    xw = wedge_of_wedge(x, wedge(n, [wbasis[s]]))
                    u = 1 + t * (n - i) + s
                    for c_out in range(amb_hi):
                        coeffs[c_out][u] += alpha * xw.coords[c_out]
            for c_out in range(amb_hi):
                rows.append(coeffs[c_out])
                rhs_info.append((prod.coords, c_out))
    return (
        Matrix.from_rows(rows, nun),
        tuple(rhs_info),
        tuple(decomp),
        tuple(wbasis),
        tuple(comp_idx),
    )


def _assemble_transfer(D, i, sol, decomp, wbasis, comp_idx) -> Matrix:
    n = D.n
    a = sol[0]
    cols = []
    for j in range(n):
        fd = [Fraction(0)] * n
        for s in range(len(wbasis)):
            coef = a * decomp[j][s]
            for idx in range(n):
                fd[idx] += coef * wbasis[s][idx]
        for t in range(len(comp_idx)):
            alpha = decomp[j][len(wbasis) + t]
            if alpha == 0:
                continue
            for s in range(n - i):
                coef = alpha * sol[1 + t * (n - i) + s]
                for idx in range(n):
                    fd[idx] += coef * wbasis[s][idx]
        cols.append(fd)
    return Matrix.from_rows(
        [[cols[j][idx] for j in range(n)] for idx in range(n)], n
    )


def transfer_solve_batch(
    D: FilteredPhiModule, i: int, Fs: Sequence[LineValuedMap]
) -> list[Matrix]:
    """Solve the transfer equations at block i for several maps at once:
    one elimination of the shared coefficient matrix with one right-hand
    column per map."""
    from .linalg import rref

    A, rhs_info, decomp, wbasis, comp_idx = _transfer_system(D, i)
    nun = A.cols
    aug_rows = []
    for row, (prod_coords, c_out) in zip(A.entries, rhs_info):
        vals = []
        for F in Fs:
            c = sum(
                (a * b for a, b in zip(F.functional, prod_coords)), Fraction(0)
            )
            vals.append(c * F.line.coords[c_out])
        aug_rows.append(list(row) + vals)
    R, pivots = rref(Matrix.from_rows(aug_rows, nun + len(Fs)))
    if any(p >= nun for p in pivots):
        raise RuntimeError("transfer system inconsistent")
    out = []
    for fidx in range(len(Fs)):
        sol = [Fraction(0)] * nun
        for k, pc in enumerate(pivots):
            sol[pc] = R.entries[k][nun + fidx]
        out.append(_assemble_transfer(D, i, sol, decomp, wbasis, comp_idx))
    return out


@lru_cache(maxsize=None)
def transfer_solve(D: FilteredPhiModule, i: int, F: LineValuedMap) -> Matrix:
    """The unique f in Hom(D, Fil^{-h_i}), scalar on Fil^{-h_i}, with
    x ^ f(d) = F(x ^ d) for x in the (n-i-1)-th wedge of Fil^{-h_i} and d in
    the eigenbasis.  One exact linear system in 1 + i(n-i) unknowns.
    """
    return transfer_solve_batch(D, i, (F,))[0]


def _unit(n: int, j: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(k == j)) for k in range(n))


def _complement_indices(W: Subspace) -> list[int]:
    """Coordinate indices whose unit vectors complete a basis of W."""
    pivots = set()
    for row in W.basis.entries:
        for c, x in enumerate(row):
            if x != 0:
                pivots.add(c)
                break
    return [c for c in range(W.ambient_dim) if c not in pivots]
