"""Regular filtered modules in an eigenbasis.

A ``FilteredPhiModule`` is rank-n data: nonzero eigenvalues phi_0..phi_{n-1}
subject to the genericity condition phi_j / phi_k not in {1, p^f}, strictly
decreasing integer weights h_0 > ... > h_{n-1}, and a full flag given by n
independent vectors v_0..v_{n-1} with Fil^{-h_j} = span(v_j..v_{n-1}).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .coxeter import Permutation
from .linalg import Matrix, Subspace, frac, vec


@dataclass(frozen=True)
class Refinement:
    """An ordering of eigenvalue indices: (phi_tau(0), ..., phi_tau(n-1))."""

    tau: Permutation


@dataclass(frozen=True)
class SubsetI:
    """Sorted eigenvalue-index subset with 1 <= |I| <= n-1."""

    members: tuple[int, ...]
    n: int

    def __post_init__(self):
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("members must be sorted and distinct")
        if not 1 <= len(self.members) <= self.n - 1:
            raise ValueError("cardinality out of range")
        if any(not 0 <= m < self.n for m in self.members):
            raise ValueError("member out of range")

    @property
    def size(self) -> int:
        return len(self.members)

    def complement(self) -> tuple[int, ...]:
        return tuple(j for j in range(self.n) if j not in self.members)


def all_subsets(n: int):
    """All SubsetI of {0..n-1} in (size, lex) order."""
    import itertools

    for k in range(1, n):
        for members in itertools.combinations(range(n), k):
            yield SubsetI(members, n)


@dataclass(frozen=True)
class FilteredPhiModule:
    n: int
    p: int
    f: int
    eigenvalues: tuple[Fraction, ...]
    weights: tuple[int, ...]
    flag: tuple[tuple[Fraction, ...], ...]  # v_0..v_{n-1}, coords in eigenbasis

    @staticmethod
    def make(n, p, f, eigenvalues, weights, flag) -> "FilteredPhiModule":
        return FilteredPhiModule(
            n,
            p,
            f,
            tuple(frac(x) for x in eigenvalues),
            tuple(int(h) for h in weights),
            tuple(vec(v) for v in flag),
        )


def validate(D: FilteredPhiModule) -> list[str]:
    """Full list of invariant violations (empty list = valid)."""
    out = []
    if D.n < 2:
        out.append("rank must be at least 2")
    if len(D.eigenvalues) != D.n:
        out.append("eigenvalue count != n")
    if len(D.weights) != D.n:
        out.append("weight count != n")
    if len(D.flag) != D.n or any(len(v) != D.n for v in D.flag):
        out.append("flag must be n vectors of dimension n")
        return out
    if any(x == 0 for x in D.eigenvalues):
        out.append("eigenvalues must be nonzero")
    else:
        pf = Fraction(D.p) ** D.f
        for j in range(len(D.eigenvalues)):
            for k in range(len(D.eigenvalues)):
                if j == k:
                    continue
                ratio = D.eigenvalues[j] / D.eigenvalues[k]
                if ratio == 1:
                    out.append(f"eigenvalue ratio ({j},{k}) equals 1")
                elif ratio == pf:
                    out.append(f"eigenvalue ratio ({j},{k}) equals p^f")
    if any(a <= b for a, b in zip(D.weights, D.weights[1:])):
        out.append("weights not strictly decreasing")
    if Matrix.from_rows(D.flag, D.n).rank() != D.n:
        out.append("flag vectors not linearly independent")
    return out


def require_valid(D: FilteredPhiModule) -> None:
    violations = validate(D)
    if violations:
        raise ValueError("; ".join(violations))


def filtration_subspace(D: FilteredPhiModule, j: int) -> Subspace:
    """Canonical subspace span(v_j..v_{n-1}) of dimension n-j."""
    if not 0 <= j <= D.n - 1:
        raise ValueError("index out of range")
    return Subspace.from_vectors(D.n, D.flag[j:])


def canonical_refinement(I: SubsetI) -> Refinement:
    """I in increasing order, then its complement in increasing order."""
    return Refinement(Permutation(tuple(I.members) + I.complement()))


def compatible_refinements(I: SubsetI):
    """All refinements tau with tau({0..|I|-1}) = I."""
    import itertools

    for first in itertools.permutations(I.members):
        for rest in itertools.permutations(I.complement()):
            yield Refinement(Permutation(tuple(first) + tuple(rest)))


@lru_cache(maxsize=None)
def relative_position(D: FilteredPhiModule, ref: Refinement) -> Permutation:
    """The Bruhat cell of the flag with respect to the ordered eigenbasis.

    g is the n x n matrix with (f_{n-1},...,f_0) = (e_tau(0),...,e_tau(n-1)) g
    where f_j = v_j; the permutation is read off the ranks of the top-left
    submatrices of g.
    """
    require_valid(D)
    tau = ref.tau
    n = D.n
    # column c holds the coordinates of v_{n-1-c} in the basis e_tau(0..n-1)
    g = Matrix.from_rows(
        [[D.flag[n - 1 - c][tau(r)] for c in range(n)] for r in range(n)], n
    )
    # dims[a][b] = dim(span(first b columns) cap span(e_tau(0..a-1)))
    #            = b - rank(rows >= a, first b columns)
    dims = [[0] * (n + 1) for _ in range(n + 1)]
    for a in range(n + 1):
        for b in range(1, n + 1):
            sub = Matrix.from_rows([g.entries[i][:b] for i in range(a, n)], b)
            dims[a][b] = b - sub.rank()
    window = [0] * n
    for b in range(1, n + 1):
        for a in range(1, n + 1):
            if dims[a][b] - dims[a - 1][b] - dims[a][b - 1] + dims[a - 1][b - 1] == 1:
                window[b - 1] = a - 1
                break
    return Permutation(tuple(window))


_POOL = [Fraction(x) for x in (1, 2, 3, 5, 7, -1, -2, -3, Fraction(1, 2), Fraction(2, 3), Fraction(5, 2), Fraction(-3, 2))]


def _generic_eigenvalues(n: int, p: int, f: int, rng: random.Random) -> tuple[Fraction, ...]:
    pf = Fraction(p) ** f
    for _ in range(10000):
        vals = tuple(
            Fraction(rng.randint(1, 50) * (2 * n + 1) + k, rng.randint(1, 7))
            for k in range(n)
        )
        ok = True
        for j in range(n):
            for k in range(n):
                if j != k and vals[j] / vals[k] in (1, pf):
                    ok = False
        if ok:
            return vals
    raise RuntimeError("retry budget exhausted")


def _flag_fully_generic(flag, n: int) -> bool:
    """All Plücker minors of all flag steps nonzero."""
    import itertools

    m = Matrix.from_rows(flag, n)
    for i in range(1, n):
        rows = [m.entries[j] for j in range(i, n)]
        for cols in itertools.combinations(range(n), n - i):
            sub = Matrix.from_rows([[r[c] for c in cols] for r in rows], n - i)
            if sub.rank() < n - i:
                return False
    return True


def random_module(
    n: int, p: int, f: int, seed: int, flag_mode: str = "generic"
) -> FilteredPhiModule:
    """Deterministic pseudorandom valid instance."""
    rng = random.Random((seed, n, p, f, flag_mode).__repr__())
    eigenvalues = _generic_eigenvalues(n, p, f, rng)
    weights = tuple(range(n - 1, -1, -1))
    for _ in range(10000):
        if flag_mode == "generic":
            flag = tuple(
                tuple(rng.choice(_POOL) for _ in range(n)) for _ in range(n)
            )
            if Matrix.from_rows(flag, n).rank() < n:
                continue
            if not _flag_fully_generic(flag, n):
                continue
        elif flag_mode == "permutation":
            perm = list(range(n))
            rng.shuffle(perm)
            flag = tuple(
                tuple(Fraction(int(k == perm[j])) for k in range(n)) for j in range(n)
            )
        else:
            raise ValueError(f"unknown flag_mode {flag_mode!r}")
        D = FilteredPhiModule(n, p, f, eigenvalues, weights, flag)
        if not validate(D):
            return D
    raise RuntimeError("retry budget exhausted")


def permutation_flag_module(
    n: int, p: int, f: int, perm: Permutation, seed: int = 0
) -> FilteredPhiModule:
    """Valid instance with v_j = e_{perm(j)}."""
    rng = random.Random((seed, n, p, f, "permflag").__repr__())
    eigenvalues = _generic_eigenvalues(n, p, f, rng)
    flag = tuple(
        tuple(Fraction(int(k == perm(j))) for k in range(n)) for j in range(n)
    )
    return FilteredPhiModule(n, p, f, eigenvalues, tuple(range(n - 1, -1, -1)), flag)
