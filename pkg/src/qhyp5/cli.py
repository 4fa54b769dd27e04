"""Command-line front end: JSON reports, DOT graphs and resolution traces.

Exit codes: 0 success, 1 input error, 2 internal consistency failure.
"""

from __future__ import annotations

import json
import random
import sys
from importlib import metadata
from typing import Any, Callable

import click

from . import fibers as fib
from .gf import FieldError, ParseError, Poly, parse_poly
from .invariants import surface_invariants
from .mw import LatticeError, section_search, torsion_rank, trivial_lattice
from .normal import DegenerateEquation, normalize
from .rational import (
    NotRational,
    Table3Mismatch,
    classify_normalized,
    enumerate_candidates,
    scan as run_scan,
    verify_table,
)
from .resolve import (
    ResolutionError,
    artin_details,
    derive_fiber_graph,
    resolve_infinity,
    resolve_local_germ,
    trace_lines,
)

EXIT_OK, EXIT_INPUT, EXIT_CONSISTENCY = 0, 1, 2
INPUT_ERRORS = (ParseError, FieldError, DegenerateEquation, fib.FiberTypeError, ValueError)
CONSISTENCY_ERRORS = (Table3Mismatch, ResolutionError, LatticeError, AssertionError)


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:  # pragma: no cover - source checkout
        return "0.0.0"


def emit(obj: Any) -> None:
    click.echo(json.dumps(obj, indent=2, ensure_ascii=False))


def guarded(fn: Callable[..., int | None]) -> Callable[..., None]:
    """Map library exceptions onto the exit-code contract."""

    def wrapper(*args, **kwargs):
        try:
            code = fn(*args, **kwargs) or EXIT_OK
        except CONSISTENCY_ERRORS as exc:
            click.echo(f"consistency failure: {exc}", err=True)
            sys.exit(EXIT_CONSISTENCY)
        except INPUT_ERRORS as exc:
            click.echo(f"input error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        sys.exit(code)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


def _phi(text: str, k: int) -> Poly:
    return parse_poly(text, k)


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------


def invariants_block(eq, census=None) -> dict:
    census = census if census is not None else fib.census(eq)
    si = surface_invariants(eq, census)
    return si.to_json()


def build_report(text: str, k: int, max_ext: int) -> dict:
    phi = _phi(text, k)
    eq = normalize(phi)
    census = fib.census(eq)
    si = surface_invariants(eq, census)
    lat = trivial_lattice(census, eq.m)
    lattice = {"rank": lat.rank, "det": lat.det, "r": None}
    if si.pa == 0:
        lattice["r"] = torsion_rank(lat, si.pa, si.rho)
    search = section_search(eq, min(max_ext, 6))
    table3 = None
    if eq.k == 1:
        match = classify_normalized(eq, max_ext)
        table3 = None if isinstance(match, NotRational) else match.to_json()
    return {
        "tool_version": tool_version(),
        "input": {"phi": text, "field": k},
        "normalized": eq.to_json(),
        "census": census.to_json(),
        "invariants": si.to_json(),
        "lattice": lattice,
        "sections": {
            "field": search.field,
            "complete": search.complete,
            "list": [s.to_json() for s in search.sections],
        },
        "table3": table3,
        "warnings": list(si.warnings),
    }


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

phi_option = click.option("--phi", "phi_text", required=True, help="phi(t), e.g. 't^6+t^4'.")
field_option = click.option("--field", "k", default=1, show_default=True, type=int,
                            help="Coefficients live in GF(5^k).")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(tool_version(), prog_name="qhyp5")
def cli() -> None:
    """Genus-2 quasi-hyperelliptic fibrations y^2 = x^5 + phi(t) in characteristic 5."""


@cli.command()
@phi_option
@field_option
@click.option("--max-ext", default=2, show_default=True, type=int,
              help="Extension degree for the section search.")
@guarded
def classify(phi_text: str, k: int, max_ext: int) -> int:
    """Full JSON report for one equation."""
    emit(build_report(phi_text, k, max_ext))
    return EXIT_OK


@cli.command()
@click.option("--e", "e", type=int, help="Local invariant e.")
@click.option("--type", "type_name", help="Fiber type, e.g. C33 or 'C(3,3)'.")
@click.option("--dot", is_flag=True, help="Emit a DOT graph instead of JSON.")
@guarded
def fibers(e: int | None, type_name: str | None, dot: bool) -> int:
    """Template dual graph of a fiber type."""
    if (e is None) == (type_name is None):
        raise click.UsageError("give exactly one of --e and --type")
    ft = fib.classify_e(e) if e is not None else fib.parse_type(type_name)
    g = fib.template(ft)
    if dot:
        click.echo(g.to_dot(), nl=False)
    else:
        emit({
            "type": ft.label,
            "e": ft.e_value,
            "euler": ft.euler,
            "fiber_square": g.fiber_square(),
            "graph": g.to_json(),
        })
    return EXIT_OK


@cli.command()
@click.option("--d", "d", type=int, required=True, help="deg phi.")
@click.option("--dot", is_flag=True)
@guarded
def infinity(d: int, dot: bool) -> int:
    """Resolution of the fiber at t = infinity for deg phi = d."""
    res = resolve_infinity(d)
    if dot:
        click.echo(res.graph.to_dot(), nl=False)
        return EXIT_OK
    expected = fib.infinity_type(d)
    if not res.graph.isomorphic(fib.template(expected)):
        raise ResolutionError(f"resolved fiber at infinity is not {expected}")
    emit(res.to_json())
    return EXIT_OK


@cli.command()
@click.option("--e", "e", type=int, required=True)
@click.option("--trace", is_flag=True, help="Also print the blow-up log, one JSON object per line.")
@click.option("--dot", is_flag=True)
@guarded
def resolve(e: int, trace: bool, dot: bool) -> int:
    """Canonical resolution of the germ x^5 + t^e."""
    local = resolve_local_germ(e)
    graph = derive_fiber_graph(local)
    if not graph.isomorphic(fib.template(fib.classify_e(e))):
        raise ResolutionError(f"resolved fiber for e = {e} differs from its template")
    if dot:
        click.echo(graph.to_dot(), nl=False)
        return EXIT_OK
    emit(local.to_json())
    if trace:
        click.echo(trace_lines(local.config))
    return EXIT_OK


@cli.command()
@phi_option
@field_option
@guarded
def invariants(phi_text: str, k: int) -> int:
    """Closed-form invariants, cross-checked against the resolution."""
    eq = normalize(_phi(phi_text, k))
    block = invariants_block(eq)
    art = artin_details(eq)
    if (art.pa, art.K_sq) != (block["pa"], block["K_sq"]):
        raise AssertionError(
            f"closed form ({block['pa']}, {block['K_sq']}) != resolution ({art.pa}, {art.K_sq})"
        )
    emit(block)
    return EXIT_OK


@cli.command()
@phi_option
@field_option
@click.option("--max-ext", default=2, show_default=True, type=int)
@guarded
def sections(phi_text: str, k: int, max_ext: int) -> int:
    """Integral sections (x(t), y(t)) with y != 0."""
    eq = normalize(_phi(phi_text, k))
    res = section_search(eq, max_ext)
    emit({
        "phi": str(eq.phi),
        "field": res.field,
        "complete": res.complete,
        "sections": [s.to_json() for s in res.sections],
    })
    return EXIT_OK


@cli.command()
@phi_option
@field_option
@guarded
def lattice(phi_text: str, k: int) -> int:
    """Trivial lattice Gram matrix, determinant and torsion rank."""
    eq = normalize(_phi(phi_text, k))
    census = fib.census(eq)
    si = surface_invariants(eq, census)
    lat = trivial_lattice(census, eq.m)
    out = lat.to_json()
    out["r"] = torsion_rank(lat, si.pa, si.rho) if si.pa == 0 else None
    out["rho"] = si.rho
    emit(out)
    return EXIT_OK


@cli.command("rational-table")
@click.option("--max-ext", default=2, show_default=True, type=int)
@guarded
def rational_table(max_ext: int) -> int:
    """Re-derive every row of the rational classification and compare."""
    checks = verify_table(max_ext)
    for c in checks:
        click.echo(f"row {c.row:2d}: {'ok  ' if c.ok else 'FAIL'} {c.detail}")
    combos = enumerate_candidates()
    for c in combos:
        state = "realizable" if c.realizable else "not realizable"
        click.echo(f"combo {c.label:>4}: m={c.m} {c.describe()}: {state}, row {c.table3_row}")
    n_ok = sum(c.ok for c in checks)
    click.echo(f"{n_ok}/{len(checks)} rows verified")
    return EXIT_OK if n_ok == len(checks) else EXIT_CONSISTENCY


@cli.command()
@click.option("--degree", type=int, required=True, help="Survey every normalized phi of degree <= n.")
@guarded
def scan(degree: int) -> int:
    """Exhaustive survey over GF(5)."""
    if not 1 <= degree <= 9:
        raise ValueError("--degree must lie in 1..9 (the survey is exhaustive)")
    rep = run_scan(degree)
    emit(rep.to_json())
    return EXIT_CONSISTENCY if rep.unmatched else EXIT_OK


@cli.command("artin-check")
@click.option("--count", default=200, show_default=True, type=int)
@click.option("--max-degree", default=19, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@guarded
def artin_check(count: int, max_degree: int, seed: int) -> int:
    """Compare closed-form invariants with the resolution on random phi."""
    rng = random.Random(seed)
    degrees = [d for d in range(1, max_degree + 1) if d % 5]
    bad = []
    for _ in range(count):
        d = rng.choice(degrees)
        codes = [0 if i % 5 == 0 else rng.randrange(5) for i in range(d)] + [rng.randrange(1, 5)]
        eq = normalize(Poly(1, codes))
        si = surface_invariants(eq)
        art = artin_details(eq)
        if (si.pa, si.K_sq) != (art.pa, art.K_sq):
            bad.append(str(eq.phi))
    emit({"count": count, "seed": seed, "mismatches": bad})
    return EXIT_CONSISTENCY if bad else EXIT_OK


def run(argv: list[str] | None = None) -> int:
    """Invoke the CLI in-process and return its exit code."""
    try:
        cli.main(args=argv, prog_name="qhyp5", standalone_mode=False)
    except SystemExit as exc:
        return int(exc.code or 0)
    except click.exceptions.Abort:
        return EXIT_INPUT
    except click.ClickException as exc:  # unknown flags, missing options
        exc.show()
        return EXIT_INPUT
    return EXIT_OK


def main(argv: list[str] | None = None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":  # pragma: no cover
    main()
