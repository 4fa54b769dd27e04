"""Rational surfaces: candidate fiber combinations, realizability, and matching against the
ten-row classification table.

A rational surface has p_a = 0.  With the fiber at infinity general
(d = 10m + 9) the affine census must satisfy

    n1 + 2 n2 + 3 n3 + 5 n5 + 6 n6 + 7 n7 + 8 n8 = 10m + 8
    n3 + n5 + 2 n6 + 2 n7 + 2 n8                 = 4m + 2

which forces m <= 1.  Realizability of a solution is decided exactly: one
fiber is moved to infinity, two affine points are fixed at 0 and 1, and the
integrability conditions on phi' = prod (t - a_i)^(b_i) (no exponent = 4 mod 5)
are solved with a Groebner basis over GF(5) (distinct points enforced with an
auxiliary inverse).
"""

from __future__ import annotations

import itertools
import warnings
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Union

import sympy

from .fibers import BY_INDEX, BY_LABEL, REDUCIBLE_INDICES, census as fiber_census
from .gf import Poly, get_field, parse_poly
from .invariants import surface_invariants
from .mw import SectionCandidate, section_search, torsion_rank, trivial_lattice
from .normal import DegenerateEquation, NormalizedEquation, normalize

ROMAN = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x", "xi")


class Table3Mismatch(RuntimeError):
    """Computed data disagrees with the table, or a rational census matches no row."""


class NotIntegrable(ValueError):
    """phi' has a term of degree 4 mod 5, so it is not the derivative of a polynomial."""


# ---------------------------------------------------------------------------
# the table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Table3Row:
    no: int
    fibers: tuple[tuple[str, int], ...]
    rho: int
    r: int
    equation: Optional[str]  # a defining phi, or None for a family without a listed member
    derivative_family: Optional[str] = None  # shape of phi' for parameter families
    sections: tuple[tuple[str, str], ...] = ()  # (x, y) over GF(5), both signs listed

    @property
    def multiset(self) -> Counter:
        return Counter(dict(self.fibers))

    def expected_sections(self) -> set[tuple[str, str]]:
        return {(str(parse_poly(x)), str(parse_poly(y))) for x, y in self.sections}


def _pm(x: str, y: str) -> tuple[tuple[str, str], tuple[str, str]]:
    yp = parse_poly(y)
    return (x, str(yp)), (x, str(-yp))


def _row7_sections() -> tuple[tuple[str, str], ...]:
    t = Poly.t(1)
    w = t**5 - t
    out = list(_pm("t^4", str(w * w)))
    for i in range(5):
        x = Poly.from_ints([4 * i**4 + 1, 4 * i**3, 4 * i**2, 4 * i])
        q = w // (t - i)
        out += _pm(str(x), str(q * q))
    return tuple(out)


TABLE3: tuple[Table3Row, ...] = (
    Table3Row(1, (("C(13,8)", 1),), 14, 0, "t"),
    Table3Row(2, (("C(9,7)", 1), ("C(5,1)", 1)), 14, 1, "t^2", sections=_pm("0", "t")),
    Table3Row(3, (("C(4,6)", 1), ("C(9,2)", 1)), 13, 0, "t^3"),
    Table3Row(4, (("C(4,6)", 1), ("C(5,1)", 2)), 13, 1, "t^3+t^2"),
    Table3Row(5, (("C(11,5)", 1), ("C(3,3)", 1)), 14, 1, "t^4", sections=_pm("0", "t^2")),
    Table3Row(
        6, (("C(3,3)", 2), ("C(5,1)", 2)), 14, 2, "t^6+t^4",
        sections=_pm("2*t", "t^3+t^2") + _pm("-2*t", "t^3-t^2"),
    ),
    Table3Row(
        7, (("C(3,3)", 6),), 14, 3, "t^16+t^12+t^8+t^4",
        derivative_family="t^3 (t-1)^3 (t-a)^3 (t-b)^3 (t-c)^3",
        sections=_row7_sections(),
    ),
    Table3Row(
        8, (("C(3,3)", 4), ("C(4,6)", 1)), 13, 2, None,
        derivative_family="t^3 (t-1)^3 (t-a)^3 (t-b)^3",
    ),
    Table3Row(9, (("C(3,3)", 2), ("C(4,6)", 2)), 12, 1, "t^13+t^11+t^9+t^7"),
    Table3Row(10, (("C(4,6)", 3),), 11, 0, "t^13+t^12+4*t^8+4*t^7"),
)
BY_ROW = {row.no: row for row in TABLE3}


def row_for_multiset(ms: Counter) -> Optional[Table3Row]:
    for row in TABLE3:
        if row.multiset == ms:
            return row
    return None


# ---------------------------------------------------------------------------
# integration of phi'
# ---------------------------------------------------------------------------


def antiderivative(dphi: Poly) -> Poly:
    """The unique phi with phi' = dphi and no exponent divisible by 5."""
    F = dphi.field
    out = [0]
    for i, c in enumerate(dphi.c):
        if c and (i + 1) % 5 == 0:
            raise NotIntegrable(f"phi' has a term t^{i}")
        out.append(F.div(c, (i + 1) % 5) if c else 0)
    return Poly(dphi.k, out)


def derivative_from_points(points: Iterable[tuple[int, int]], k: int = 1) -> Poly:
    """prod (t - a)^b for (code a, b) over GF(5^k)."""
    F = get_field(k)
    out = Poly.one(k)
    for a, b in points:
        out = out * Poly(k, (F.neg(a), 1)) ** b
    return out


# ---------------------------------------------------------------------------
# candidate combinations
# ---------------------------------------------------------------------------


Counts = tuple[tuple[int, int], ...]  # (fiber index b, count), b in REDUCIBLE_INDICES


@dataclass(frozen=True)
class Realization:
    realizable: bool
    gauge_d: int  # degree of phi with the chosen fiber at infinity
    witness: Optional[Poly] = None  # an explicit phi, when one was found over GF(5^k), k <= 2
    witness_verified: bool = False


@dataclass(frozen=True)
class CandidateCombo:
    label: str
    m: int
    counts: Counts
    realization: Realization
    table3_row: Optional[int]

    @property
    def realizable(self) -> bool:
        return self.realization.realizable

    def n(self, b: int) -> int:
        return dict(self.counts).get(b, 0)

    @property
    def multiset(self) -> Counter:
        return Counter({BY_INDEX[b].label: c for b, c in self.counts if c})

    def describe(self) -> str:
        return ", ".join(
            f"{BY_INDEX[b].label} x {c}" for b, c in sorted(self.counts, key=lambda bc: -bc[0]) if c
        )

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "m": self.m,
            "fibers": self.describe(),
            "counts": {f"n{b}": self.n(b) for b in REDUCIBLE_INDICES},
            "realizable": self.realizable,
            "gauge_d": self.realization.gauge_d,
            "witness": None if self.realization.witness is None else str(self.realization.witness),
            "witness_field": None if self.realization.witness is None else self.realization.witness.k,
            "table3_row": self.table3_row,
        }


def solve_census_equations(max_m: int = 5) -> list[tuple[int, Counts]]:
    """All nonnegative solutions (m, counts) with m <= max_m; only m <= 1 survive."""
    out = []
    idx = REDUCIBLE_INDICES
    for m in range(max_m + 1):
        total, genus = 10 * m + 8, 4 * m + 2
        weight2 = {1: 0, 2: 0, 3: 1, 5: 1, 6: 2, 7: 2, 8: 2}

        def rec(i: int, rem: int, g: int, acc: list[int]):
            if i == len(idx):
                if rem == 0 and g == 0:
                    out.append((m, tuple((b, c) for b, c in zip(idx, acc) if c)))
                return
            b = idx[i]
            for c in range(rem // b + 1):
                if weight2[b] * c > g:
                    break
                rec(i + 1, rem - b * c, g - weight2[b] * c, acc + [c])

        rec(0, total, genus, [])
    return out


# ordering and names of the combinations as conventionally listed
_LISTING: tuple[dict[int, int], ...] = (
    {8: 1}, {7: 1, 1: 1}, {6: 1, 2: 1}, {6: 1, 1: 2}, {5: 1, 3: 1}, {3: 2, 2: 1},
    {3: 2, 1: 2}, {3: 6}, {3: 4, 6: 1}, {3: 2, 6: 2}, {6: 3},
)


def _gauge(counts: Counts, m: int) -> tuple[int, list[int]]:
    """Put the fiber with the largest index at infinity; returns (d, affine indices)."""
    bs = sorted((b for b, c in counts for _ in range(c)), reverse=True)
    b0 = bs[0]
    return 10 * m + 9 - b0, bs[1:]


def _distinct_assignments(bs: list[int]) -> list[tuple[int, ...]]:
    """Assignments of indices to (0, 1, free...) up to t -> 1 - t and free-point symmetry."""
    out = set()
    for perm in set(itertools.permutations(bs)):
        head = tuple(sorted(perm[:2])) if len(perm) >= 2 else perm[:2]
        out.add(head + tuple(sorted(perm[2:])))
    return sorted(out)


def _conditions(assign: tuple[int, ...]):
    t = sympy.Symbol("t")
    free = sympy.symbols(f"a0:{max(len(assign) - 2, 0)}")
    pts = [sympy.Integer(0), sympy.Integer(1)][: len(assign)] + list(free)
    expr = sympy.Integer(1)
    for p, b in zip(pts, assign):
        expr *= (t - p) ** (b)
    P = sympy.Poly(sympy.expand(expr), t)
    conds = []
    for j in range(4, P.degree() + 1, 5):
        c = sympy.Poly(P.coeff_monomial(t**j), *(free or (t,)), modulus=5)
        if not c.is_zero:
            conds.append(c.as_expr())
    return free, pts, conds


@lru_cache(maxsize=None)
def _assignment_consistent(assign: tuple[int, ...]) -> bool:
    free, pts, conds = _conditions(assign)
    if not free:
        return not conds
    if not conds:
        return True
    z = sympy.Symbol("z")
    dist = sympy.Integer(1)
    for p, q in itertools.combinations(pts, 2):
        dist *= p - q
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        G = sympy.groebner(
            [sympy.expand(c) for c in conds] + [sympy.expand(z * dist - 1)],
            z, *free, modulus=5, order="grevlex",
        )
    return list(G.exprs) != [1]


def _search_witness(assign: tuple[int, ...], d: int, k: int) -> Optional[Poly]:
    F = get_field(k)
    nfree = len(assign) - 2
    values = range(2, F.q)
    for free in itertools.combinations(values, max(nfree, 0)):
        pts = [0, 1][: len(assign)] + list(free)
        dphi = derivative_from_points(zip(pts, assign), k)
        if any(dphi.c[j] for j in range(4, len(dphi.c), 5)):
            continue
        phi = antiderivative(dphi)
        if phi.degree == d:
            return phi
    return None


@lru_cache(maxsize=None)
def realize(counts: Counts, m: int) -> Realization:
    d, affine = _gauge(counts, m)
    assigns = _distinct_assignments(affine)
    consistent = [a for a in assigns if _assignment_consistent(a)]
    if not consistent:
        return Realization(False, d)
    target = Counter({BY_INDEX[b].label: c for b, c in counts if c})
    for k in (1, 2):
        for a in consistent:
            if len(a) - 2 > 3 and k > 1:
                continue  # keep the exhaustive witness search desk-sized
            phi = _search_witness(a, d, k)
            if phi is None:
                continue
            try:
                eq = normalize(phi)
            except DegenerateEquation:
                continue
            ok = fiber_census(eq).multiset() == target
            return Realization(True, d, phi, ok)
    return Realization(True, d)


@lru_cache(maxsize=None)
def enumerate_candidates() -> tuple[CandidateCombo, ...]:
    sols = solve_census_equations()
    if any(m > 1 for m, _ in sols):
        raise Table3Mismatch("a solution with m > 1 contradicts the bound m <= 1")
    listing = [tuple(sorted(x.items())) for x in _LISTING]
    def order(sol):
        key = tuple(sorted(sol[1]))
        return (listing.index(key) if key in listing else len(listing), sol)
    out = []
    for m, counts in sorted(sols, key=order):
        key = tuple(sorted(counts))
        label = ROMAN[listing.index(key)] if key in listing else "?"
        ms = Counter({BY_INDEX[b].label: c for b, c in counts})
        row = row_for_multiset(ms)
        out.append(CandidateCombo(label, m, key, realize(key, m), row.no if row else None))
    return tuple(out)


# ---------------------------------------------------------------------------
# classification of a concrete phi
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NotRational:
    pa: int
    equation_normalized: str
    fibers: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "rational": False,
            "pa": self.pa,
            "equation_normalized": self.equation_normalized,
            "sigma_fibers": list(self.fibers),
        }


@dataclass(frozen=True)
class Table3Match:
    row: int
    fibers: tuple[str, ...]
    rho: int
    r: int
    K_sq: int
    sections: tuple[SectionCandidate, ...]
    sections_complete: bool
    equation_normalized: str
    lattice_det: int

    def to_json(self) -> dict:
        return {
            "rational": True,
            "row": self.row,
            "sigma_fibers": list(self.fibers),
            "rho": self.rho,
            "r": self.r,
            "sections": [s.to_json() for s in self.sections],
            "sections_complete": self.sections_complete,
            "equation_normalized": self.equation_normalized,
        }


def classify_normalized(eq: NormalizedEquation, max_ext: int = 2) -> Union[Table3Match, NotRational]:
    c = fiber_census(eq)
    inv = surface_invariants(eq, c)
    fibers = tuple(c.describe())
    if inv.pa != 0:
        return NotRational(inv.pa, str(eq.phi), fibers)
    row = row_for_multiset(c.multiset())
    if row is None:
        raise Table3Mismatch(f"rational census {list(fibers)} of {eq.phi} matches no table row")
    lat = trivial_lattice(c, eq.m)
    r = torsion_rank(lat, inv.pa, inv.rho)
    if inv.rho != row.rho or r != row.r:
        raise Table3Mismatch(
            f"row {row.no}: computed (rho, r) = ({inv.rho}, {r}), table ({row.rho}, {row.r})"
        )
    search = section_search(eq, max_ext)
    if len(search.sections) > 5**r - 1:
        raise Table3Mismatch(f"{len(search.sections)} sections exceed |J(K)| - 1 = {5**r - 1}")
    return Table3Match(
        row=row.no, fibers=fibers, rho=inv.rho, r=r, K_sq=inv.K_sq,
        sections=search.sections, sections_complete=search.complete,
        equation_normalized=str(eq.phi), lattice_det=lat.det,
    )


def classify_rational(phi: Poly, max_ext: int = 2) -> Union[Table3Match, NotRational]:
    return classify_normalized(normalize(phi), max_ext)


# ---------------------------------------------------------------------------
# verification of the whole table
# ---------------------------------------------------------------------------


@dataclass
class RowCheck:
    row: int
    ok: bool
    detail: str
    census_only: bool = False


def verify_row(row: Table3Row, max_ext: int = 2) -> RowCheck:
    if row.equation is None:
        # the parameter family: test every member the exact solver can produce
        counts = tuple(sorted(Counter({BY_LABEL[l].index: n for l, n in row.fibers}).items()))
        m = next(c.m for c in enumerate_candidates() if c.counts == counts)
        real = realize(counts, m)
        if not real.realizable:
            return RowCheck(
                row.no, False,
                f"no phi realizes {dict(row.fibers)}: the integrability conditions on phi' "
                f"have no solution with distinct points (d = {real.gauge_d} gauge)",
            )
        if real.witness is None:
            return RowCheck(row.no, False, "realizable but no witness found at desk scale")
        eq_text = str(real.witness)
    else:
        eq_text = row.equation
    phi = parse_poly(eq_text)
    res = classify_rational(phi, max_ext)
    if not isinstance(res, Table3Match):
        return RowCheck(row.no, False, f"{eq_text}: p_a = {res.pa}, not rational")
    if res.row != row.no:
        return RowCheck(row.no, False, f"{eq_text}: matched row {res.row}")
    got = {(str(s.x), str(s.y)) for s in res.sections}
    if row.equation is not None and got != row.expected_sections():
        return RowCheck(row.no, False, f"{eq_text}: sections {sorted(got)} differ")
    return RowCheck(row.no, True, f"{eq_text}: rho={res.rho} r={res.r} sections={len(got)}")


def verify_table(max_ext: int = 2) -> list[RowCheck]:
    return [verify_row(row, max_ext) for row in TABLE3]


# ---------------------------------------------------------------------------
# exhaustive survey
# ---------------------------------------------------------------------------


@dataclass
class ScanReport:
    degree: int
    total: int = 0
    degenerate: int = 0
    by_row: Counter = field(default_factory=Counter)
    non_rational: Counter = field(default_factory=Counter)  # by p_a
    unmatched: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "total": self.total,
            "degenerate": self.degenerate,
            "rational_by_row": {str(k): v for k, v in sorted(self.by_row.items())},
            "non_rational_by_pa": {str(k): v for k, v in sorted(self.non_rational.items())},
            "unmatched": self.unmatched,
        }


def normalized_polys(degree: int) -> Iterable[Poly]:
    """Every phi over GF(5) of degree 1..degree with no exponent divisible by 5."""
    exps = [i for i in range(1, degree + 1) if i % 5]
    for coeffs in itertools.product(range(5), repeat=len(exps)):
        if not any(coeffs):
            continue
        codes = [0] * (degree + 1)
        for e, c in zip(exps, coeffs):
            codes[e] = c
        yield Poly(1, codes)


def scan(degree: int) -> ScanReport:
    rep = ScanReport(degree)
    for phi in normalized_polys(degree):
        rep.total += 1
        try:
            eq = normalize(phi)
        except DegenerateEquation:
            rep.degenerate += 1
            continue
        c = fiber_census(eq)
        inv = surface_invariants(eq, c)
        if inv.pa != 0:
            rep.non_rational[inv.pa] += 1
            continue
        row = row_for_multiset(c.multiset())
        if row is None:
            rep.unmatched.append(str(phi))
        else:
            rep.by_row[row.no] += 1
    return rep


__all__ = [
    "BY_ROW",
    "CandidateCombo",
    "NotIntegrable",
    "NotRational",
    "Realization",
    "RowCheck",
    "ScanReport",
    "TABLE3",
    "Table3Match",
    "Table3Mismatch",
    "Table3Row",
    "antiderivative",
    "classify_normalized",
    "classify_rational",
    "derivative_from_points",
    "enumerate_candidates",
    "normalized_polys",
    "realize",
    "row_for_multiset",
    "scan",
    "solve_census_equations",
    "verify_row",
    "verify_table",
]
