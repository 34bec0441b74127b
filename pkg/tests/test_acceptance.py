"""Acceptance gate: one criterion per test, each reported as a single
PASS/FAIL line in the terminal summary.  All equalities are bit-exact."""

import itertools
import random
import time
from fractions import Fraction
from functools import lru_cache
from math import comb

from conftest import run_criterion

from filtmod.coxeter import (
    Permutation,
    WEIL_FORM_TAGS,
    crossing_number,
    min_generator_multiplicity,
    multfree_decompose,
    reduced_words,
    reflections_dropping,
    support,
)
from filtmod.linalg import Matrix, Subspace
from filtmod.phimodule import (
    FilteredPhiModule,
    Refinement,
    SubsetI,
    all_subsets,
    canonical_refinement,
    compatible_refinements,
    filtration_subspace,
    permutation_flag_module,
    random_module,
    relative_position,
)
from filtmod.reconstruct import assemble_input, recover_filtration, roundtrip
from filtmod.skeleton import build_pi, build_pi_flat, ext_dims
from filtmod.tmap import (
    TOperatorSet,
    classify,
    crit_kernel_check,
    expected_kernel_dim,
    f_i_bijective,
    flatten,
    homfil_basis,
    inf_image_in_homfil,
    kernel_image_in_homfil,
    t_kernel,
)


@lru_cache(maxsize=None)
def perm_corpus(n):
    out = []
    for win in itertools.permutations(range(n)):
        D = permutation_flag_module(n, 3, 1, Permutation(win))
        out.append((D, TOperatorSet.build(D)))
    return tuple(out)


@lru_cache(maxsize=None)
def random_corpus(n, count, base_seed=1000):
    out = []
    for k in range(count):
        D = random_module(n, 3, 1, base_seed + k)
        out.append((D, TOperatorSet.build(D)))
    return tuple(out)


def nonempty_step_sets(n):
    return [
        list(s)
        for r in range(1, n)
        for s in itertools.combinations(range(1, n), r)
    ]


def test_ac1_kernel_dimension():
    def body():
        start = time.monotonic()
        counts = {2: 80, 3: 60, 4: 40, 5: 20}
        assert sum(counts.values()) == 200
        for n, count in counts.items():
            expect = 2**n - 1 - n * (n + 1) // 2
            for _, ops in random_corpus(n, count):
                assert t_kernel(ops)[0].dim == expect
            for _, ops in perm_corpus(n):
                assert t_kernel(ops)[0].dim == expect
        assert time.monotonic() - start < 60

    run_criterion("AC1", body)


def test_ac2_restricted_kernel_formula():
    def body():
        for n in (2, 3, 4, 5):
            for D, ops in random_corpus(n, 2) + perm_corpus(n)[:2]:
                for S in nonempty_step_sets(n):
                    ker, _ = t_kernel(ops, S)
                    blocks_cut = sorted(set(S))
                    bounds = [0] + blocks_cut + [n]
                    sizes = [b - a for a, b in zip(bounds, bounds[1:])]
                    dim_r = (len(blocks_cut) + 1) + (
                        n * n - sum(b * b for b in sizes)
                    ) // 2
                    assert (
                        ker.dim
                        == sum(comb(n, i) for i in blocks_cut) + 1 - dim_r
                        == expected_kernel_dim(n, S)
                    )
            # single-step values, including the zero cases at the ends
            for j in range(1, n):
                assert expected_kernel_dim(n, [j]) == comb(n, j) - 1 - j * (
                    n - j
                )
            assert expected_kernel_dim(n, [1]) == 0
            assert expected_kernel_dim(n, [n - 1]) == 0

    run_criterion("AC2", body)


def test_ac3_surjectivity():
    def body():
        for n in (2, 3, 4, 5):
            corpus = random_corpus(n, 5) + (
                perm_corpus(n) if n <= 4 else perm_corpus(n)[:10]
            )
            for D, ops in corpus:
                span_T = Subspace.from_vectors(
                    n * n, [flatten(T) for T in ops.operators]
                )
                ident = flatten(Matrix.identity(n))
                assert span_T.sum(
                    Subspace.from_vectors(n * n, [ident])
                ) == homfil_basis(D)
                assert not span_T.contains(ident)

    run_criterion("AC3", body)


def test_ac4_criticality_criteria_agree():
    def body():
        # classify raises when the three very-criticality criteria or the
        # split/critical equivalence disagree on any subset
        for n in (2, 3, 4):
            for D, ops in perm_corpus(n):
                classify(ops)
        for n in (2, 3, 4, 5):
            for D, ops in random_corpus(n, 5):
                cls = classify(ops)
                for c in cls.values():
                    assert c.split == c.critical
        for D, ops in perm_corpus(5)[:12]:
            classify(ops)

    run_criterion("AC4", body)


def test_ac5_coxeter_oracle_agreement():
    def body():
        start = time.monotonic()
        for n in (2, 3, 4, 5):
            for win in itertools.permutations(range(n)):
                w = Permutation(win)
                words = reduced_words(w)
                letters = set().union(*(set(word) for word in words))
                assert support(w) == letters
                for i in range(1, n):
                    d = crossing_number(w, i)
                    m = min_generator_multiplicity(w, i)
                    assert (d == 0) == (m == 0)
                    assert (d == 1) == (m == 1)
                    assert (d >= 2) == (m >= 2)
        assert time.monotonic() - start < 120

    run_criterion("AC5", body)


def test_ac6_rank4_reversed_instance():
    def body():
        D = permutation_flag_module(4, 3, 1, Permutation.longest(4))
        ops = TOperatorSet.build(D)
        assert t_kernel(ops)[0].dim == 5
        cls = classify(ops)
        vc = [m for m, c in cls.items() if c.very_critical]
        assert vc == [(0, 1)]
        skel = build_pi(ops)
        assert skel.very_critical_summands == ((0, 1),)

    run_criterion("AC6", body)


def test_ac7_image_characterizations():
    def body():
        # the image builders raise unless the subspace equalities hold
        for n in (2, 3, 4):
            for D, ops in perm_corpus(n):
                for S in nonempty_step_sets(n):
                    for i in S:
                        kernel_image_in_homfil(ops, S, i)
                        inf_image_in_homfil(ops, S, i)
        for D, ops in random_corpus(5, 20):
            for S in nonempty_step_sets(5):
                for i in S:
                    kernel_image_in_homfil(ops, S, i)
                    inf_image_in_homfil(ops, S, i)

    run_criterion("AC7", body)


def test_ac8_cosocle_duality():
    def body():
        for n in (3, 4, 5):
            corpus = random_corpus(n, 5) + (
                perm_corpus(n) if n <= 4 else perm_corpus(n)[:10]
            )
            for D, ops in corpus:
                cls = classify(ops)
                for m, c in cls.items():
                    comp = SubsetI(m, n).complement()
                    if c.cosplit:
                        assert cls[comp].split
                    if n == 3 and cls[comp].split:
                        assert c.cosplit
        for D, ops in random_corpus(2, 5) + perm_corpus(2):
            cls = classify(ops)
            assert all(c.cosplit for c in cls.values())

    run_criterion("AC8", body)


def test_ac9_restricted_extraction_bijectivity():
    def body():
        w0 = {n: Permutation.longest(n) for n in (2, 3, 4)}
        for n in (2, 3, 4):
            corpus = perm_corpus(n) + random_corpus(n, 2)
            for D, ops in corpus:
                for win in itertools.permutations(range(n)):
                    ref = Refinement(Permutation(win))
                    w = relative_position(D, ref) * w0[n]
                    for i in range(1, n):
                        assert f_i_bijective(D, ref, i) == (
                            i not in support(w)
                        ), (n, D.flag, win, i)
                # kernel-spanning property on crossing-number-one subsets
                for I in ops.subsets:
                    w = relative_position(D, canonical_refinement(I)) * w0[n]
                    if crossing_number(w, I.size) == 1:
                        assert crit_kernel_check(ops, I)

    run_criterion("AC9", body)


def test_ac10_reconstruction_roundtrip():
    def body():
        start = time.monotonic()
        for n in (2, 3, 4, 5):
            for D, ops in random_corpus(n, 100):
                for S in nonempty_step_sets(n):
                    assert roundtrip(D, S, ops)
        for n in (2, 3, 4):
            for D, ops in perm_corpus(n):
                for S in nonempty_step_sets(n):
                    assert roundtrip(D, S, ops)
        assert time.monotonic() - start < 300

    run_criterion("AC10", body)


def test_ac11_choice_invariance():
    def body():
        rng = random.Random(42)
        for n in (3, 4):
            D, plain = random_corpus(n, 1)[0]
            S = list(range(1, n))
            # operator rescaling
            scales = tuple(
                Fraction(rng.randint(1, 9), rng.randint(1, 9))
                for _ in plain.subsets
            )
            scaled = TOperatorSet.build(D, scales=scales)
            assert t_kernel(plain)[0].dim == t_kernel(scaled)[0].dim
            assert classify(plain) == classify(scaled)
            for i in S:
                assert kernel_image_in_homfil(
                    plain, S, i
                ) == kernel_image_in_homfil(scaled, S, i)
                assert inf_image_in_homfil(plain, S, i) == inf_image_in_homfil(
                    scaled, S, i
                )
            assert build_pi(plain) == build_pi(scaled)
            assert recover_filtration(
                assemble_input(plain, S)
            ) == recover_filtration(assemble_input(scaled, S))
            # flag-vector rescaling leaves every subspace unchanged
            lam = [Fraction(rng.randint(1, 7)) for _ in range(n)]
            D2 = FilteredPhiModule(
                n,
                D.p,
                D.f,
                D.eigenvalues,
                D.weights,
                tuple(
                    tuple(lam[j] * x for x in v)
                    for j, v in enumerate(D.flag)
                ),
            )
            ops2 = TOperatorSet.build(D2)
            assert classify(ops2) == classify(plain)
            assert t_kernel(ops2)[0].dim == t_kernel(plain)[0].dim
            rec = recover_filtration(assemble_input(ops2, S))
            assert all(
                rec[i] == filtration_subspace(D, i) for i in S
            )
            # eigenbasis rescaling: coordinates transform, flags follow
            mu = [Fraction(rng.randint(1, 7)) for _ in range(n)]
            D3 = FilteredPhiModule(
                n,
                D.p,
                D.f,
                D.eigenvalues,
                D.weights,
                tuple(
                    tuple(v[k] / mu[k] for k in range(n)) for v in D.flag
                ),
            )
            ops3 = TOperatorSet.build(D3)
            cls3 = classify(ops3)
            cls = classify(plain)
            for m in cls:
                assert (
                    cls3[m].split,
                    cls3[m].cosplit,
                    cls3[m].critical,
                    cls3[m].very_critical,
                ) == (
                    cls[m].split,
                    cls[m].cosplit,
                    cls[m].critical,
                    cls[m].very_critical,
                )
            assert t_kernel(ops3)[0].dim == t_kernel(plain)[0].dim
            assert roundtrip(D3, S, ops3)
            # refinement choice: the crossing number at |I| is shared by all
            # compatible refinements
            for I in all_subsets(n):
                vals = {
                    crossing_number(
                        relative_position(D, ref) * Permutation.longest(n),
                        I.size,
                    )
                    for ref in compatible_refinements(I)
                }
                assert len(vals) == 1

    run_criterion("AC11", body)


def test_ac12_extension_counts():
    def body():
        for n in (2, 3, 4):
            base = random_module(n, 3, 1, 500 + n)
            variants = [base] + [
                FilteredPhiModule(
                    n,
                    base.p,
                    base.f,
                    base.eigenvalues,
                    base.weights,
                    random_module(n, 3, 1, 600 + n * 10 + k).flag,
                )
                for k in (1, 2)
            ]
            for d in (1, 2, 3):
                out = ext_dims(variants[:d])
                assert out["per_instance"] == [n + n * (n + 1) // 2] * d
                assert (
                    out["aggregate_closed"]
                    == out["aggregate_amalgam"]
                    == n + d * n * (n + 1) // 2
                )

    run_criterion("AC12", body)


def test_ac13_word_decomposition_and_reflection_counts():
    def body():
        for n in (2, 3, 4, 5):
            for win in itertools.permutations(range(n)):
                w = Permutation(win)
                for i in range(1, n):
                    if crossing_number(w, i) != 1:
                        continue
                    wp, tag = multfree_decompose(w, i)
                    assert tag in WEIL_FORM_TAGS
                    assert i not in support(wp)
                    assert any(
                        word.count(i) == 1 for word in reduced_words(wp * w)
                    )
        recorded = {}
        for n in (2, 3, 4):
            for win in itertools.permutations(range(n)):
                w = Permutation(win)
                for i in range(1, n):
                    cnt = reflections_dropping(w, i)
                    recorded[(n, win, i)] = (cnt, cnt == 1)
        assert len(recorded) == sum(
            (n - 1) * len(list(itertools.permutations(range(n))))
            for n in (2, 3, 4)
        )

    run_criterion("AC13", body)
