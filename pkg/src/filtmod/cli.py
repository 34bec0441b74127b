"""Command-line surface.

Thin client of the service handlers, run in-process so the tool works
offline and deterministically.  Exit codes: 0 success, 1 invariant or
verification failure, 2 malformed input.
"""

from __future__ import annotations

import json
import sys

import click
import pydantic

from . import service

EXIT_FAIL = 1
EXIT_BAD_INPUT = 2


def _load_instance(path: str) -> service.InstanceDoc:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"cannot read instance file: {exc}", err=True)
        sys.exit(EXIT_BAD_INPUT)
    try:
        return service.InstanceDoc.model_validate(data)
    except pydantic.ValidationError as exc:
        click.echo(f"malformed instance document: {exc}", err=True)
        sys.exit(EXIT_BAD_INPUT)


def _emit(resp: pydantic.BaseModel) -> None:
    click.echo(
        json.dumps(resp.model_dump(by_alias=True), indent=2, sort_keys=True)
    )


def _run(handler, req):
    try:
        return handler(req)
    except ValueError as exc:
        click.echo(f"invalid input: {exc}", err=True)
        sys.exit(EXIT_BAD_INPUT)
    except RuntimeError as exc:
        click.echo(f"invariant failure: {exc}", err=True)
        sys.exit(EXIT_FAIL)


def _parse_S(s: str | None) -> list[int] | None:
    if s is None:
        return None
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        click.echo(f"malformed --S list: {s!r}", err=True)
        sys.exit(EXIT_BAD_INPUT)


@click.group()
def main() -> None:
    """Exact tools for filtered-module classification and flag recovery."""


@main.command()
@click.argument("file", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def validate(file: str, as_json: bool) -> None:
    """Check an instance file against all model invariants."""
    doc = _load_instance(file)
    resp = _run(service.handle_validate, service.ValidateRequest(instance=doc))
    if as_json:
        _emit(resp)
    elif resp.valid:
        click.echo("valid")
    else:
        for v in resp.violations:
            click.echo(f"violation: {v}")
    sys.exit(0 if resp.valid else EXIT_FAIL)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def classify(file: str, as_json: bool) -> None:
    """Split/cosplit/critical/very-critical flags for every subset."""
    doc = _load_instance(file)
    resp = _run(service.handle_classify, service.ClassifyRequest(instance=doc))
    if as_json:
        _emit(resp)
    else:
        for s in resp.subsets:
            flags = [
                name
                for name, on in (
                    ("split", s.split),
                    ("cosplit", s.cosplit),
                    ("critical", s.critical),
                    ("very_critical", s.very_critical),
                )
                if on
            ]
            click.echo(f"{{{','.join(map(str, s.members))}}}: {' '.join(flags) or '-'}")


@main.command()
@click.argument("file", type=click.Path())
@click.option("--S", "s_list", default=None, help="comma list of flag steps")
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def tmap(file: str, s_list: str | None, as_json: bool) -> None:
    """Operators, kernel, image subspaces, and per-invariant pass/fail."""
    doc = _load_instance(file)
    resp = _run(
        service.handle_tmap,
        service.TMapRequest(instance=doc, S=_parse_S(s_list)),
    )
    if as_json:
        _emit(resp)
    else:
        click.echo(f"kernel dim {resp.kernel_dim} (formula {resp.formula_dim})")
        for c in resp.checks:
            click.echo(f"{'PASS' if c.passed else 'FAIL'} {c.name}")
    sys.exit(0 if all(c.passed for c in resp.checks) else EXIT_FAIL)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--S", "s_list", default=None, help="comma list of flag steps")
@click.option("--flat", is_flag=True, help="drop very-critical summands")
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def skeleton(file: str, s_list: str | None, flat: bool, as_json: bool) -> None:
    """Layered constituent diagram and canonical JSON form."""
    doc = _load_instance(file)
    resp = _run(
        service.handle_skeleton,
        service.SkeletonRequest(instance=doc, S=_parse_S(s_list), flat=flat),
    )
    if as_json:
        _emit(resp)
    else:
        click.echo(resp.diagram)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--S", "s_list", default=None, help="comma list of flag steps")
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def reconstruct(file: str, s_list: str | None, as_json: bool) -> None:
    """Recover the flag steps in S from kernel data; PASS iff they match."""
    doc = _load_instance(file)
    resp = _run(
        service.handle_reconstruct,
        service.ReconstructRequest(instance=doc, S=_parse_S(s_list)),
    )
    if as_json:
        _emit(resp)
    else:
        for i in sorted(resp.recovered, key=int):
            click.echo(f"step {i}: {resp.recovered[i]}")
        click.echo("PASS" if resp.matches_input_flag else "FAIL")
    sys.exit(0 if resp.matches_input_flag else EXIT_FAIL)


@main.command()
@click.argument("window")
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def weyl(window: str, as_json: bool) -> None:
    """Word-combinatorics report for a permutation given as a comma list."""
    try:
        win = [int(x) for x in window.split(",")]
    except ValueError:
        click.echo(f"malformed window: {window!r}", err=True)
        sys.exit(EXIT_BAD_INPUT)
    resp = _run(service.handle_weyl, service.WeylRequest(window=win))
    if as_json:
        _emit(resp)
    else:
        click.echo(f"length {resp.length}, support {resp.support}")
        for r in resp.per_index:
            click.echo(
                f"i={r.i}: crossing {r.crossing_number}, pairs {r.pair_count}, "
                f"min mult {r.min_generator_multiplicity}, "
                f"dropping {r.reflections_dropping}"
            )


@main.command("random")
@click.option("--n", required=True, type=int)
@click.option("--p", default=3, type=int)
@click.option("--f", default=1, type=int)
@click.option("--seed", default=0, type=int)
@click.option(
    "--flag-mode",
    default="generic",
    type=click.Choice(["generic", "permutation"]),
)
def random_instance(n: int, p: int, f: int, seed: int, flag_mode: str) -> None:
    """Emit a deterministic pseudorandom valid instance document."""
    resp = _run(
        service.handle_random,
        service.RandomRequest(n=n, p=p, f=f, seed=seed, flag_mode=flag_mode),
    )
    click.echo(
        json.dumps(
            resp.instance.model_dump(by_alias=True), indent=2, sort_keys=True
        )
    )


@main.command()
@click.argument("files", nargs=-1, type=click.Path())
@click.option("--n", default=3, type=int)
@click.option("--trials", default=5, type=int)
@click.option("--seed", default=0, type=int)
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
def check(files, n: int, trials: int, seed: int, as_json: bool) -> None:
    """Run the full invariant suite on given or generated instances."""
    instances = [_load_instance(f) for f in files] or None
    resp = _run(
        service.handle_check,
        service.CheckRequest(n=n, trials=trials, seed=seed, instances=instances),
    )
    if as_json:
        _emit(resp)
    else:
        for c in resp.checks:
            click.echo(f"{'PASS' if c.passed else 'FAIL'} {c.name}")
        click.echo("all passed" if resp.all_passed else "FAILURES")
    sys.exit(0 if resp.all_passed else EXIT_FAIL)


if __name__ == "__main__":
    main()
