"""Operator construction, kernel dimensions, image subspaces, and subset
classification."""

import itertools
import random
from fractions import Fraction

import pytest

from filtmod.coxeter import Permutation
from filtmod.linalg import Matrix, Subspace
from filtmod.phimodule import (
    Refinement,
    SubsetI,
    canonical_refinement,
    permutation_flag_module,
    random_module,
    relative_position,
)
from filtmod.tmap import (
    TOperatorSet,
    classify,
    crit_kernel_check,
    expected_kernel_dim,
    f_i,
    f_i_bijective,
    flatten,
    homfil_basis,
    homfilR_i,
    inf_domain,
    inf_image_in_homfil,
    kernel_image_in_homfil,
    levi_block_sizes,
    t_apply,
    t_kernel,
    unflatten,
)


def test_flatten_roundtrip():
    m = Matrix.from_rows([[1, 2], [3, 4]], 2)
    assert unflatten(flatten(m), 2) == m


def test_homfil_dimension_and_membership():
    for n in (2, 3, 4):
        D = random_module(n, 3, 1, n)
        hf = homfil_basis(D)
        assert hf.dim == n * (n + 1) // 2
        assert hf.contains(flatten(Matrix.identity(n)))
        # members preserve every step
        from filtmod.phimodule import filtration_subspace

        for v in hf.vectors():
            M = unflatten(v, n)
            for j in range(1, n):
                W = filtration_subspace(D, j)
                for wv in W.vectors():
                    assert W.contains(M.matvec(wv))


def test_kernel_dims_frozen():
    for n, expect in ((2, 0), (3, 1), (4, 5)):
        D = random_module(n, 3, 1, 2 * n + 1)
        ops = TOperatorSet.build(D)
        ker, _ = t_kernel(ops)
        assert ker.dim == expect == 2**n - 1 - n * (n + 1) // 2


def test_levi_blocks_and_formula_examples():
    assert levi_block_sizes(5, [2, 3]) == [2, 1, 2]
    # single-step value: C(n,j) - 1 - j(n-j)
    from math import comb

    for n in (3, 4, 5):
        for j in range(1, n):
            assert expected_kernel_dim(n, [j]) == comb(n, j) - 1 - j * (n - j)
    # the extreme single steps give zero
    for n in (3, 4, 5):
        assert expected_kernel_dim(n, [1]) == 0
        assert expected_kernel_dim(n, [n - 1]) == 0


def test_kernel_dim_matches_formula_all_S():
    for n in (3, 4):
        D = random_module(n, 3, 1, 7 * n)
        ops = TOperatorSet.build(D)
        for r in range(1, n):
            for S in itertools.combinations(range(1, n), r):
                ker, _ = t_kernel(ops, list(S))
                assert ker.dim == expected_kernel_dim(n, S)


def test_kernel_members_annihilate():
    D = random_module(4, 3, 1, 13)
    ops = TOperatorSet.build(D)
    ker, subsets = t_kernel(ops)
    for kv in ker.vectors():
        psi, fil = t_apply(
            ops, [0] * 4, kv[0], list(kv[1:])
        )
        assert all(x == 0 for row in fil.entries for x in row)


def test_surjectivity_onto_homfil():
    for n in (2, 3, 4):
        D = random_module(n, 3, 1, 3 * n + 2)
        ops = TOperatorSet.build(D)
        hf = homfil_basis(D)
        span_T = Subspace.from_vectors(
            n * n, [flatten(T) for T in ops.operators]
        )
        ident = Subspace.from_vectors(n * n, [flatten(Matrix.identity(n))])
        assert span_T.sum(ident) == hf
        assert not span_T.contains(flatten(Matrix.identity(n)))


def test_scale_invariance_of_kernel_and_classification():
    D = random_module(4, 3, 1, 17)
    plain = TOperatorSet.build(D)
    rng = random.Random(5)
    scales = tuple(
        Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in plain.subsets
    )
    scaled = TOperatorSet.build(D, scales=scales)
    assert t_kernel(plain)[0].dim == t_kernel(scaled)[0].dim
    assert classify(plain) == classify(scaled)
    for i in (1, 2, 3):
        assert kernel_image_in_homfil(
            plain, [1, 2, 3], i
        ) == kernel_image_in_homfil(scaled, [1, 2, 3], i)


def test_generic_flag_classification_all_nonsplit():
    D = random_module(4, 3, 1, 21)
    cls = classify(TOperatorSet.build(D))
    for c in cls.values():
        assert not c.split and not c.critical and not c.very_critical


def test_rank_two_cosplit_always():
    for seed in range(3):
        D = random_module(2, 3, 1, seed)
        cls = classify(TOperatorSet.build(D))
        assert all(c.cosplit for c in cls.values())
    for win in ((0, 1), (1, 0)):
        D = permutation_flag_module(2, 3, 1, Permutation(win))
        cls = classify(TOperatorSet.build(D))
        assert all(c.cosplit for c in cls.values())


def test_gl4_reversed_instance():
    D = permutation_flag_module(4, 3, 1, Permutation.longest(4))
    ops = TOperatorSet.build(D)
    ker, _ = t_kernel(ops)
    assert ker.dim == 5
    cls = classify(ops)
    vc = [m for m, c in cls.items() if c.very_critical]
    assert vc == [(0, 1)]
    # the vanished operator is identically zero
    T = ops.operator(SubsetI((0, 1), 4))
    assert all(x == 0 for row in T.entries for x in row)


def test_rank_three_never_very_critical():
    for win in itertools.permutations(range(3)):
        D = permutation_flag_module(3, 3, 1, Permutation(win))
        cls = classify(TOperatorSet.build(D))
        assert not any(c.very_critical for c in cls.values())


def test_inf_domain_constraints():
    D = random_module(3, 3, 1, 31)
    ops = TOperatorSet.build(D)
    dom = inf_domain(ops, [1, 2])
    for v in dom.vectors():
        assert v[0] == 0  # no unit component
    # codimension: 1 (unit) plus one sum constraint per step with a
    # nonsplit subset present
    assert dom.ambient_dim - dom.dim == 3


def test_image_characterizations_do_not_raise():
    D = random_module(4, 3, 1, 41)
    ops = TOperatorSet.build(D)
    for r in range(1, 4):
        for S in itertools.combinations(range(1, 4), r):
            for i in S:
                kernel_image_in_homfil(ops, list(S), i)
                inf_image_in_homfil(ops, list(S), i)


def test_restricted_endomorphisms_and_f_i():
    n = 3
    generic = random_module(n, 3, 1, 51)
    ref = canonical_refinement(SubsetI((0,), n))
    for i in (1, 2):
        # generic flag: relative position times reversal is the identity,
        # whose support misses every generator
        assert f_i_bijective(generic, ref, i)
        sub = homfilR_i(generic, ref, i)
        assert sub.dim == 2
        ident = Matrix.identity(n)
        a, b = f_i(generic, ref, i, ident)
        assert (a, b) == (1, 1)
    reversed_ = permutation_flag_module(n, 3, 1, Permutation.longest(n))
    for i in (1, 2):
        assert not f_i_bijective(reversed_, ref, i)


def test_crit_kernel_check_on_crossing_one_configuration():
    from filtmod.coxeter import crossing_number

    # the reversed flag has crossing number one at every block for rank 3;
    # its restricted subspaces come in dims 3 and 4, so both the
    # line-spanning branch and the membership-only branch are exercised
    D = permutation_flag_module(3, 3, 1, Permutation.longest(3))
    ops = TOperatorSet.build(D)
    seen_dims = set()
    for I in ops.subsets:
        ref = canonical_refinement(I)
        w = relative_position(D, ref) * Permutation.longest(3)
        if crossing_number(w, I.size) == 1:
            assert crit_kernel_check(ops, I)
            seen_dims.add(homfilR_i(D, ref, I.size).dim)
    assert seen_dims == {3, 4}


def test_f_i_rejects_outside_matrix():
    D = random_module(3, 3, 1, 61)
    ref = canonical_refinement(SubsetI((0,), 3))
    bad = Matrix.from_rows([[0, 1, 0], [0, 0, 0], [0, 0, 0]], 3)
    if not homfilR_i(D, ref, 1).contains(flatten(bad)):
        with pytest.raises(ValueError):
            f_i(D, ref, 1, bad)
