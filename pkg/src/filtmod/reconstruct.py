"""Recovery of the flag of a filtered module from the kernel and cut-out
matrix subspaces produced by the assembled operator map.

Given a set S = {i_1 < ... < i_m} of flag steps, the recovery input holds
one matrix subspace per proper chain prefix plus a final one from the
cut-out domain; each is (checked to be, then used as) a hom-space
Hom(D/A, B) for flag steps A, B, from which A and B are read off exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, Subspace, kernel
from .phimodule import FilteredPhiModule, filtration_subspace, require_valid
from .tmap import (
    TOperatorSet,
    inf_image_in_homfil,
    kernel_image_in_homfil,
    unflatten,
)


def hom_space(n: int, A: Subspace, B: Subspace) -> Subspace:
    """Matrices vanishing on A with image inside B, flattened row-major."""
    constraints = []
    for v in A.vectors():
        for r in range(n):
            row = [Fraction(0)] * (n * n)
            for c in range(n):
                row[r * n + c] = v[c]
            constraints.append(row)
    for phi in kernel(B.basis).vectors():
        for c in range(n):
            row = [Fraction(0)] * (n * n)
            for r in range(n):
                row[r * n + c] = phi[r]
            constraints.append(row)
    if not constraints:
        return Subspace.full(n * n)
    return kernel(Matrix.from_rows(constraints, n * n))


def recover_from_hom(U: Subspace) -> tuple[Subspace, Subspace]:
    """Read (A, B) back from a nonzero subspace U = Hom(D/A, B):
    B is the sum of the column spaces of a basis of U, A the intersection
    of their kernels."""
    if U.dim == 0:
        raise ValueError("cannot recover from the zero subspace")
    nsq = U.ambient_dim
    n = round(nsq ** 0.5)
    if n * n != nsq:
        raise ValueError("ambient dimension is not a square")
    B = Subspace.zero(n)
    A = Subspace.full(n)
    for v in U.vectors():
        M = unflatten(v, n)
        cols = [[M.entries[r][c] for r in range(n)] for c in range(n)]
        B = B.sum(Subspace.from_vectors(n, cols))
        A = A.intersect(kernel(M))
    return A, B


@dataclass(frozen=True)
class RecoveryInput:
    n: int
    steps: tuple[int, ...]  # i_1 < ... < i_m
    chain_spaces: tuple[Subspace, ...]  # one per proper prefix, j = 1..m-1
    final_space: Subspace  # from the cut-out domain at block i_m

    def __post_init__(self):
        if list(self.steps) != sorted(set(self.steps)):
            raise ValueError("steps must be sorted and distinct")
        if not self.steps or not all(1 <= i <= self.n - 1 for i in self.steps):
            raise ValueError("steps out of range")
        if len(self.chain_spaces) != len(self.steps) - 1:
            raise ValueError("need one chain space per proper prefix")


def recover_filtration(inp: RecoveryInput) -> dict[int, Subspace]:
    """Map each step i_j of the input to its recovered flag subspace.

    The deepest step comes from the image side of the final space (the A
    and B sides must agree there); every earlier step comes from the common
    kernel of its chain space.  The results must form a chain with the
    expected dimensions.
    """
    n = inp.n
    steps = inp.steps
    A_fin, B_fin = recover_from_hom(inp.final_space)
    if A_fin != B_fin:
        raise RuntimeError("final-space kernel and image sides disagree")
    out = {steps[-1]: B_fin}
    for j, i in enumerate(steps[:-1], start=1):
        A, B = recover_from_hom(inp.chain_spaces[j - 1])
        if B != B_fin:
            raise RuntimeError(f"chain space at step {i} has the wrong image side")
        out[i] = A
    prev = None
    for i in sorted(out, reverse=True):
        if out[i].dim != n - i:
            raise RuntimeError(f"recovered step {i} has dimension {out[i].dim}")
        if prev is not None and not out[i].contains_subspace(prev):
            raise RuntimeError("recovered subspaces do not form a chain")
        prev = out[i]
    return out


def assemble_input(ops: TOperatorSet, S) -> RecoveryInput:
    """Build the recovery input for a validated instance and steps S.

    Each matrix subspace is checked against its hom-space identity before
    being handed to recovery; a mismatch raises.
    """
    D = ops.D
    require_valid(D)
    n = D.n
    steps = tuple(sorted(set(S)))
    if not steps or not all(1 <= i <= n - 1 for i in steps):
        raise ValueError("steps out of range")
    deepest = steps[-1]
    deep_fil = filtration_subspace(D, deepest)
    chain = []
    for j in range(1, len(steps)):
        prefix = set(steps[:j]) | {deepest}
        U = kernel_image_in_homfil(ops, prefix, deepest)
        expect = hom_space(n, filtration_subspace(D, steps[j - 1]), deep_fil)
        if U != expect:
            raise RuntimeError(
                f"chain space for prefix {sorted(prefix)} is not the expected hom-space"
            )
        chain.append(U)
    U_inf = inf_image_in_homfil(ops, steps, deepest)
    expect = hom_space(n, deep_fil, deep_fil)
    if U_inf != expect:
        raise RuntimeError("final space is not the expected hom-space")
    return RecoveryInput(n, steps, tuple(chain), U_inf)


def roundtrip(D: FilteredPhiModule, S, ops: TOperatorSet | None = None) -> bool:
    """True iff recovery over S returns exactly the flag steps of D."""
    if ops is None:
        ops = TOperatorSet.build(D)
    recovered = recover_filtration(assemble_input(ops, S))
    return all(
        recovered[i] == filtration_subspace(D, i) for i in sorted(set(S))
    )
