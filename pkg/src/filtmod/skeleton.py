"""Symbolic finite-length shape of the representation attached to an
instance: layered multiset of constituents, split flags, top multiplicity,
very-critical direct summands, and the counting formulas.

Constituents are the algebraic one (``ALG``) and one companion ``C(I)`` per
eigenvalue subset I.  Extension blocks between ALG and each C(I) are
structurally one-dimensional, so only flags and multiplicities are stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .linalg import Matrix, Subspace, kernel
from .phimodule import FilteredPhiModule, SubsetI, all_subsets
from .tmap import TOperatorSet, classify, expected_kernel_dim, t_kernel


@dataclass(frozen=True)
class Constituent:
    kind: str  # "ALG" | "C"
    subset: tuple[int, ...] | None = None
    sigma_tag: int = 0

    def __post_init__(self):
        if self.kind == "ALG" and self.subset is not None:
            raise ValueError("ALG carries no subset")


@dataclass(frozen=True)
class PiSkeleton:
    n: int
    socle: tuple[Constituent, ...]
    middle_nonsplit: tuple[Constituent, ...]
    top_alg_multiplicity: int
    very_critical_summands: tuple[tuple[int, ...], ...]
    cosocle: tuple[Constituent, ...]


def _sortkey(c: Constituent):
    return (c.kind, c.subset or (), c.sigma_tag)


def _build(ops: TOperatorSet, S, flat: bool) -> PiSkeleton:
    n = ops.D.n
    S = sorted(set(S))
    cls = classify(ops)
    members = [I for I in ops.subsets if I.size in S]
    vc = tuple(I.members for I in members if cls[I.members].very_critical)
    if flat:
        members = [I for I in members if not cls[I.members].very_critical]
    socle = [Constituent("ALG")]
    middle = []
    for I in members:
        c = cls[I.members]
        if c.split:
            socle.append(Constituent("C", I.members))
        else:
            middle.append(Constituent("C", I.members))
    top = t_kernel(ops, S)[0].dim if S else 0
    if flat:
        # very-critical kernel coordinates detach with their summands
        top -= len(vc)
        vc = ()
    cos = [Constituent("ALG")] * top
    for I in members:
        if cls[I.members].cosplit:
            cos.append(Constituent("C", I.members))
    skel = PiSkeleton(
        n,
        tuple(sorted(socle, key=_sortkey)),
        tuple(sorted(middle, key=_sortkey)),
        top,
        tuple(sorted(vc)),
        tuple(sorted(cos, key=_sortkey)),
    )
    _check_invariants(skel, cls, S)
    return skel


def _check_invariants(skel: PiSkeleton, cls, S) -> None:
    socle_C = {c.subset for c in skel.socle if c.kind == "C"}
    nonsplit = {c.subset for c in skel.middle_nonsplit}
    if nonsplit & socle_C:
        raise RuntimeError("a companion cannot be both split and nonsplit")
    split_sets = {m for m, c in cls.items() if c.split}
    vc_all = {m for m, c in cls.items() if c.very_critical}
    if not set(skel.very_critical_summands) <= split_sets:
        raise RuntimeError("very-critical summands must be split")
    if not socle_C <= split_sets:
        raise RuntimeError("socle companions must be split")
    if nonsplit & vc_all:
        raise RuntimeError("very-critical companions must be split")
    if skel.top_alg_multiplicity < 0:
        raise RuntimeError("negative top multiplicity")


def build_pi(ops: TOperatorSet) -> PiSkeleton:
    """Full skeleton: all subsets, top multiplicity = full kernel dimension,
    very-critical companions split off as direct summands."""
    return _build(ops, range(1, ops.D.n), flat=False)


def build_pi_S(ops: TOperatorSet, S) -> PiSkeleton:
    """Constituents restricted to sizes in S; top multiplicity from the
    restricted kernel."""
    return _build(ops, S, flat=False)


def build_pi_flat(ops: TOperatorSet) -> PiSkeleton:
    """Drop very-critical summands and their kernel coordinates."""
    return _build(ops, range(1, ops.D.n), flat=True)


def ext_dims(modules: list[FilteredPhiModule]) -> dict:
    """Extension-dimension counts: per instance n + n(n+1)/2, aggregate for d
    instances n + d n(n+1)/2, assembled both by the closed formula and by
    summing per-instance counts minus (d-1) n."""
    if not modules:
        raise ValueError("need at least one instance")
    base = modules[0]
    for D in modules[1:]:
        if (D.n, D.p, D.f, D.eigenvalues) != (
            base.n,
            base.p,
            base.f,
            base.eigenvalues,
        ):
            raise ValueError("instances must share rank, prime, degree, eigenvalues")
    from .tmap import homfil_basis

    n = base.n
    d = len(modules)
    per = []
    for D in modules:
        hf = homfil_basis(D).dim
        if hf != n * (n + 1) // 2:
            raise RuntimeError("filtration-endomorphism dimension mismatch")
        per.append(n + hf)
    closed = n + d * n * (n + 1) // 2
    amalgam = sum(per) - (d - 1) * n
    if closed != amalgam:
        raise RuntimeError("aggregate count mismatch")
    return {
        "per_instance": per,
        "aggregate_closed": closed,
        "aggregate_amalgam": amalgam,
    }


def decompose_by_support(U: Subspace) -> list[list[int]]:
    """Finest partition of the support coordinates of U into blocks B with
    U equal to the direct sum of its intersections with the B-coordinate
    subspaces.  Union-find over the canonical basis supports, then an exact
    direct-sum verification."""
    basis = U.vectors()
    support = sorted(
        {c for v in basis for c, x in enumerate(v) if x != 0}
    )
    parent = {c: c for c in support}

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for v in basis:
        sup = [c for c, x in enumerate(v) if x != 0]
        for c in sup[1:]:
            union(sup[0], c)
    blocks: dict[int, list[int]] = {}
    for c in support:
        blocks.setdefault(find(c), []).append(c)
    out = sorted((sorted(b) for b in blocks.values()), key=lambda b: b[0])
    # verify: U = direct sum of U cap (block coordinate spaces)
    amb = U.ambient_dim
    total = Subspace.zero(amb)
    dims = 0
    for b in out:
        bset = set(b)
        coord = Subspace.from_vectors(
            amb,
            [
                [Fraction(int(c == k)) for c in range(amb)]
                for k in b
            ],
        )
        piece = U.intersect(coord)
        dims += piece.dim
        total = total.sum(piece)
    if dims != U.dim or total != U:
        raise RuntimeError("support decomposition does not reassemble the space")
    return out


def skeleton_equal(a: PiSkeleton, b: PiSkeleton) -> bool:
    if a.n != b.n:
        raise ValueError("rank mismatch")
    return a == b
