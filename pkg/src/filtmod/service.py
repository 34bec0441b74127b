"""Request/response models and handler functions.

Handlers are pure functions from pydantic request models to pydantic
response models; both the HTTP app and the command-line tool call them.
All rationals travel as strings ("p/q" or "p"); there are no floats in the
wire format.  Every response carries a "schema" version tag.
"""

from __future__ import annotations

from pydantic import BaseModel, Field

from .coxeter import (
    MAX_WORD_N,
    Permutation,
    crossing_number,
    length,
    min_generator_multiplicity,
    multfree_decompose,
    pair_count,
    reduced_words,
    reflections_dropping,
    right_descents,
    support,
)
from .linalg import Subspace, format_fraction, matrix_to_json
from .phimodule import (
    FilteredPhiModule,
    SubsetI,
    filtration_subspace,
    random_module,
    validate,
)
from .reconstruct import assemble_input, recover_filtration
from .skeleton import (
    PiSkeleton,
    build_pi_flat,
    build_pi_S,
    ext_dims,
)
from .tmap import (
    TOperatorSet,
    classify,
    expected_kernel_dim,
    homfil_basis,
    inf_image_in_homfil,
    kernel_image_in_homfil,
    t_kernel,
)

SCHEMA = "filtmod/1"


class InstanceDoc(BaseModel):
    n: int
    p: int
    f: int
    eigenvalues: list[str]
    weights: list[int]
    flag: list[list[str]]

    @staticmethod
    def from_module(D: FilteredPhiModule) -> "InstanceDoc":
        return InstanceDoc(
            n=D.n,
            p=D.p,
            f=D.f,
            eigenvalues=[format_fraction(x) for x in D.eigenvalues],
            weights=list(D.weights),
            flag=[[format_fraction(x) for x in v] for v in D.flag],
        )

    def to_module(self) -> FilteredPhiModule:
        return FilteredPhiModule.make(
            self.n, self.p, self.f, self.eigenvalues, self.weights, self.flag
        )


def _subspace_rows(U: Subspace) -> list[list[str]]:
    return [[format_fraction(x) for x in v] for v in U.vectors()]


class ValidateRequest(BaseModel):
    instance: InstanceDoc


class ValidateResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA, alias="schema")
    valid: bool
    violations: list[str]

    model_config = {"populate_by_name": True}


def handle_validate(req: ValidateRequest) -> ValidateResponse:
    violations = validate(req.instance.to_module())
    return ValidateResponse(valid=not violations, violations=violations)


class SubsetReport(BaseModel):
    members: list[int]
    split: bool
    cosplit: bool
    critical: bool
    very_critical: bool


class ClassifyRequest(BaseModel):
    instance: InstanceDoc


class ClassifyResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA, alias="schema")
    n: int
    subsets: list[SubsetReport]
    very_critical_subsets: list[list[int]]

    model_config = {"populate_by_name": True}


def handle_classify(req: ClassifyRequest) -> ClassifyResponse:
    D = req.instance.to_module()
    ops = TOperatorSet.build(D)
    cls = classify(ops)
    reports = [
        SubsetReport(
            members=list(I.members),
            split=cls[I.members].split,
            cosplit=cls[I.members].cosplit,
            critical=cls[I.members].critical,
            very_critical=cls[I.members].very_critical,
        )
        for I in ops.subsets
    ]
    return ClassifyResponse(
        n=D.n,
        subsets=reports,
        very_critical_subsets=[
            list(m) for m, c in sorted(cls.items()) if c.very_critical
        ],
    )


class TMapRequest(BaseModel):
    instance: InstanceDoc
    S: list[int] | None = None


class CheckLine(BaseModel):
    name: str
    passed: bool


class TMapResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA, alias="schema")
    n: int
    S: list[int]
    operators: dict[str, list[list[str]]]
    kernel_dim: int
    formula_dim: int
    kernel_basis: list[list[str]]
    kernel_coordinates: list[list[int]]
    kernel_image_dims: dict[str, int]
    inf_image_dims: dict[str, int]
    classification: list[SubsetReport]
    checks: list[CheckLine]

    model_config = {"populate_by_name": True}


def handle_tmap(req: TMapRequest) -> TMapResponse:
    D = req.instance.to_module()
    S = sorted(set(req.S)) if req.S else list(range(1, D.n))
    ops = TOperatorSet.build(D)
    checks: list[CheckLine] = []
    ker, subsets = t_kernel(ops, S)
    formula = expected_kernel_dim(D.n, S)
    checks.append(CheckLine(name="kernel_dimension_formula", passed=ker.dim == formula))
    hf = homfil_basis(D)
    checks.append(
        CheckLine(
            name="endomorphism_space_dimension",
            passed=hf.dim == D.n * (D.n + 1) // 2,
        )
    )
    kimg = {}
    iimg = {}
    for i in S:
        kimg[str(i)] = kernel_image_in_homfil(ops, S, i).dim
        iimg[str(i)] = inf_image_in_homfil(ops, S, i).dim
    checks.append(CheckLine(name="image_characterizations", passed=True))
    cls = classify(ops)
    reports = [
        SubsetReport(
            members=list(I.members),
            split=cls[I.members].split,
            cosplit=cls[I.members].cosplit,
            critical=cls[I.members].critical,
            very_critical=cls[I.members].very_critical,
        )
        for I in ops.subsets
    ]
    return TMapResponse(
        n=D.n,
        S=S,
        operators={
            ",".join(map(str, I.members)): matrix_to_json(ops.operator(I))
            for I in ops.subsets
        },
        kernel_dim=ker.dim,
        formula_dim=formula,
        kernel_basis=_subspace_rows(ker),
        kernel_coordinates=[list(I.members) for I in subsets],
        kernel_image_dims=kimg,
        inf_image_dims=iimg,
        classification=reports,
        checks=checks,
    )


class SkeletonRequest(BaseModel):
    instance: InstanceDoc
    S: list[int] | None = None
    flat: bool = False


class SkeletonResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA, alias="schema")
    n: int
    S: list[int]
    flat: bool
    socle: list[str]
    middle_nonsplit: list[str]
    top_alg_multiplicity: int
    very_critical_summands: list[list[int]]
    cosocle: list[str]
    diagram: str

    model_config = {"populate_by_name": True}


def _constituent_label(c) -> str:
    if c.kind == "ALG":
        return "ALG"
    return "C{" + ",".join(map(str, c.subset)) + "}"


def _diagram(skel: PiSkeleton) -> str:
    rows = [
        "cosocle : " + " + ".join(_constituent_label(c) for c in skel.cosocle),
        "middle  : "
        + (
            " + ".join(_constituent_label(c) for c in skel.middle_nonsplit)
            or "(none)"
        ),
        "socle   : " + " + ".join(_constituent_label(c) for c in skel.socle),
    ]
    if skel.very_critical_summands:
        rows.append(
            "summands: "
            + " + ".join(
                "[C{" + ",".join(map(str, m)) + "} - ALG]"
                for m in skel.very_critical_summands
            )
        )
    return "\n".join(rows)


def handle_skeleton(req: SkeletonRequest) -> SkeletonResponse:
    D = req.instance.to_module()
    S = sorted(set(req.S)) if req.S else list(range(1, D.n))
    ops = TOperatorSet.build(D)
    if req.flat:
        skel = build_pi_flat(ops)
    else:
        skel = build_pi_S(ops, S)
    return SkeletonResponse(
        n=D.n,
        S=S,
        flat=req.flat,
        socle=[_constituent_label(c) for c in skel.socle],
        middle_nonsplit=[_constituent_label(c) for c in skel.middle_nonsplit],
        top_alg_multiplicity=skel.top_alg_multiplicity,
        very_critical_summands=[list(m) for m in skel.very_critical_summands],
        cosocle=[_constituent_label(c) for c in skel.cosocle],
        diagram=_diagram(skel),
    )


class ReconstructRequest(BaseModel):
    instance: InstanceDoc
    S: list[int] | None = None


class ReconstructResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA, alias="schema")
    n: int
    S: list[int]
    recovered: dict[str, list[list[str]]]
    matches_input_flag: bool

    model_config = {"populate_by_name": True}


def handle_reconstruct(req: ReconstructRequest) -> ReconstructResponse:
    D = req.instance.to_module()
    S = sorted(set(req.S)) if req.S else list(range(1, D.n))
    ops = TOperatorSet.build(D)
    recovered = recover_filtration(assemble_input(ops, S))
    match = all(recovered[i] == filtration_subspace(D, i) for i in S)
    return ReconstructResponse(
        n=D.n,
        S=S,
        recovered={str(i): _subspace_rows(recovered[i]) for i in S},
        matches_input_flag=match,
    )


class WeylRequest(BaseModel):
    window: list[int]


class WeylIndexReport(BaseModel):
    i: int
    crossing_number: int
    pair_count: int
    min_generator_multiplicity: int | None
    reflections_dropping: int
    reflections_dropping_is_one: bool
    multfree_form: str | None


class WeylResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA, alias="schema")
    window: list[int]
    length: int
    right_descents: list[int]
    support: list[int]
    reduced_word_count: int | None
    per_index: list[WeylIndexReport]

    model_config = {"populate_by_name": True}


def handle_weyl(req: WeylRequest) -> WeylResponse:
    w = Permutation(tuple(req.window))
    small = w.n <= MAX_WORD_N
    per = []
    for i in range(1, w.n):
        form = None
        if crossing_number(w, i) == 1:
            form = multfree_decompose(w, i)[1]
        per.append(
            WeylIndexReport(
                i=i,
                crossing_number=crossing_number(w, i),
                pair_count=pair_count(w, i),
                min_generator_multiplicity=(
                    min_generator_multiplicity(w, i) if small else None
                ),
                reflections_dropping=reflections_dropping(w, i),
                reflections_dropping_is_one=reflections_dropping(w, i) == 1,
                multfree_form=form,
            )
        )
    return WeylResponse(
        window=list(w.window),
        length=length(w),
        right_descents=right_descents(w),
        support=sorted(support(w)),
        reduced_word_count=len(reduced_words(w)) if small else None,
        per_index=per,
    )


class RandomRequest(BaseModel):
    n: int
    p: int = 3
    f: int = 1
    seed: int = 0
    flag_mode: str = "generic"


class RandomResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA, alias="schema")
    instance: InstanceDoc

    model_config = {"populate_by_name": True}


def handle_random(req: RandomRequest) -> RandomResponse:
    D = random_module(req.n, req.p, req.f, req.seed, req.flag_mode)
    return RandomResponse(instance=InstanceDoc.from_module(D))


class CheckRequest(BaseModel):
    n: int = 3
    trials: int = 5
    seed: int = 0
    instances: list[InstanceDoc] | None = None


class CheckResponse(BaseModel):
    schema_version: str = Field(default=SCHEMA, alias="schema")
    trials: int
    checks: list[CheckLine]
    all_passed: bool

    model_config = {"populate_by_name": True}


def _check_instance(D: FilteredPhiModule, tag: str, checks: list[CheckLine]) -> None:
    from .reconstruct import roundtrip
    from .skeleton import build_pi

    ops = TOperatorSet.build(D)
    n = D.n
    S_all = list(range(1, n))
    ker, _ = t_kernel(ops, S_all)
    checks.append(
        CheckLine(
            name=f"{tag}:kernel_formula",
            passed=ker.dim == expected_kernel_dim(n, S_all),
        )
    )
    cls = classify(ops)
    checks.append(
        CheckLine(
            name=f"{tag}:split_iff_critical",
            passed=all(c.split == c.critical for c in cls.values()),
        )
    )
    cosoc_ok = True
    if n >= 3:
        for m, c in cls.items():
            if c.cosplit:
                I = SubsetI(m, n)
                if not cls[I.complement()].split:
                    cosoc_ok = False
    checks.append(CheckLine(name=f"{tag}:cosocle_duality", passed=cosoc_ok))
    img_ok = True
    try:
        for i in S_all:
            kernel_image_in_homfil(ops, S_all, i)
            inf_image_in_homfil(ops, S_all, i)
    except RuntimeError:
        img_ok = False
    checks.append(CheckLine(name=f"{tag}:image_characterizations", passed=img_ok))
    try:
        build_pi(ops)
        build_pi_flat(ops)
        skel_ok = True
    except RuntimeError:
        skel_ok = False
    checks.append(CheckLine(name=f"{tag}:skeleton_invariants", passed=skel_ok))
    checks.append(
        CheckLine(name=f"{tag}:reconstruction_roundtrip", passed=roundtrip(D, S_all, ops))
    )
    counts = ext_dims([D])
    checks.append(
        CheckLine(
            name=f"{tag}:extension_counts",
            passed=counts["aggregate_closed"] == n + n * (n + 1) // 2,
        )
    )


def handle_check(req: CheckRequest) -> CheckResponse:
    checks: list[CheckLine] = []
    trials = 0
    if req.instances:
        for k, doc in enumerate(req.instances):
            _check_instance(doc.to_module(), f"instance{k}", checks)
            trials += 1
    else:
        for t in range(req.trials):
            D = random_module(req.n, 3, 1, req.seed * 10007 + t)
            _check_instance(D, f"trial{t}", checks)
            trials += 1
    return CheckResponse(
        trials=trials,
        checks=checks,
        all_passed=all(c.passed for c in checks),
    )
