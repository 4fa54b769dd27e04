"""Mordell-Weil data: trivial lattice, torsion rank, height pairing, sections.

All lattice arithmetic is exact (integers and :class:`fractions.Fraction`).
Local contributions are read off ``-A_v^{-1}`` where ``A_v`` is the Gram
matrix of the non-identity components of a fiber template.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

import sympy

from .fibers import (
    BY_LABEL,
    FiberCensus,
    FiberType,
    classify_e,
    infinity_type,
    parse_type,
    template,
)
from .gf import (
    FieldElement,
    NotFifthPower,
    Poly,
    factor,
    fifth_root,
    embed_code,
    get_field,
    roots_of_irreducible,
)
from .normal import NormalizedEquation

IDENTITY = "identity"
Component = Union[int, str]


class LatticeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------


def int_det(matrix: Sequence[Sequence[int]]) -> int:
    if not matrix:
        return 1
    return int(sympy.Matrix(matrix).det(method="bareiss"))


def neg_inverse(matrix: Sequence[Sequence[int]]) -> list[list[Fraction]]:
    inv = sympy.Matrix(matrix).inv()
    return [[-Fraction(int(x.p), int(x.q)) for x in row] for row in inv.tolist()]


# ---------------------------------------------------------------------------
# trivial lattice
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GramLattice:
    basis_labels: tuple[str, ...]
    gram: tuple[tuple[int, ...], ...]
    blocks: tuple[tuple[str, int], ...]  # (fiber label, det of its non-identity block)

    @property
    def rank(self) -> int:
        return len(self.basis_labels)

    @property
    def det(self) -> int:
        return int_det(self.gram)

    def to_json(self) -> dict:
        return {
            "basis": list(self.basis_labels),
            "gram": [list(r) for r in self.gram],
            "rank": self.rank,
            "det": self.det,
            "blocks": [{"fiber": lab, "det": d} for lab, d in self.blocks],
        }


def fiber_block(ft: FiberType) -> tuple[list[int], list[list[int]]]:
    """Non-identity component ids of the template and their Gram matrix."""
    g = template(ft)
    ids = g.non_identity_ids()
    return ids, g.matrix(ids)


def block_det(ft: FiberType) -> int:
    return int_det(fiber_block(ft)[1])


def trivial_lattice(census: FiberCensus, m: int) -> GramLattice:
    fibers = census.fibers()
    labels = ["O", "F"]
    blocks = []
    for v, ft in enumerate(fibers):
        ids, _ = fiber_block(ft)
        labels += [f"R[{v}:{ft.label}].{i}" for i in ids]
        blocks.append((ft.label, block_det(ft)))
    n = len(labels)
    gram = [[0] * n for _ in range(n)]
    gram[0][0] = -(m + 1)
    gram[0][1] = gram[1][0] = 1
    off = 2
    for ft in fibers:
        _, mat = fiber_block(ft)
        for i, row in enumerate(mat):
            for j, x in enumerate(row):
                gram[off + i][off + j] = x
        off += len(mat)
    return GramLattice(tuple(labels), tuple(tuple(r) for r in gram), tuple(blocks))


def torsion_rank(lat: GramLattice, pa: int, rho: Optional[int] = None) -> int:
    """r with |J(K)| = 5^r, assuming a unimodular Neron-Severi lattice."""
    if pa != 0:
        raise LatticeError(f"torsion rank needs a rational surface (p_a = {pa})")
    if rho is not None and lat.rank != rho:
        raise LatticeError(f"trivial lattice has rank {lat.rank} < rho = {rho}; the group is not finite")
    d = abs(lat.det)
    r = 0
    while d % 25 == 0:
        d //= 25
        r += 1
    if d != 1:
        raise LatticeError(f"|det Triv| = {abs(lat.det)} is not an even power of 5")
    return r


# ---------------------------------------------------------------------------
# local contributions and the height pairing
# ---------------------------------------------------------------------------


def _resolve_type(ft: FiberType | str) -> FiberType:
    if isinstance(ft, FiberType):
        return ft
    return BY_LABEL[ft] if ft in BY_LABEL else parse_type(ft)


@lru_cache(maxsize=None)
def contribution_matrix(label: str) -> tuple[tuple[int, ...], tuple[tuple[Fraction, ...], ...]]:
    ft = BY_LABEL[label]
    if not ft.reducible:
        raise LatticeError(f"{label} is irreducible; it contributes nothing")
    ids, mat = fiber_block(ft)
    return tuple(ids), tuple(tuple(r) for r in neg_inverse(mat))


def local_contribution(ft: FiberType | str, i: Component, j: Component) -> Fraction:
    ft = _resolve_type(ft)
    if i == IDENTITY or j == IDENTITY:
        return Fraction(0)
    ids, inv = contribution_matrix(ft.label)
    g = template(ft)
    for c in (i, j):
        if c not in ids:
            if c in g.ids():
                return Fraction(0)  # the identity component given by number
            raise LatticeError(f"{ft.label} has no component R{c}")
    return inv[ids.index(i)][ids.index(j)]


def simple_components(ft: FiberType | str) -> list[int]:
    """Non-identity components of multiplicity one (the ones sections can meet)."""
    g = template(_resolve_type(ft))
    return [c.id for c in g.components if c.mult == 1 and not c.is_identity]


def tabulated_contributions(ft: FiberType | str) -> Optional[tuple[Fraction, Fraction]]:
    """(contr(P), contr(P, Q)) for P, Q on distinct simple components, if any exist.

    ``None`` when the fiber has fewer than two simple non-identity components.
    """
    ft = _resolve_type(ft)
    simple = simple_components(ft)
    if len(simple) < 2:
        return None
    diag = {local_contribution(ft, a, a) for a in simple}
    off = {local_contribution(ft, a, b) for a, b in itertools.combinations(simple, 2)}
    if len(diag) != 1 or len(off) != 1:
        raise LatticeError(f"{ft.label}: simple components are not symmetric")
    return diag.pop(), off.pop()


@dataclass(frozen=True)
class Incidence:
    fiber: FiberType
    p: Component
    q: Component


def height_pairing(
    PO: int, QO: int, PQ: int, O_sq: int, incidences: Iterable[Incidence | tuple] = ()
) -> Fraction:
    total = Fraction(-(PQ - PO - QO + O_sq))
    for inc in incidences:
        if not isinstance(inc, Incidence):
            inc = Incidence(_resolve_type(inc[0]), inc[1], inc[2])
        total -= local_contribution(inc.fiber, inc.p, inc.q)
    return total


@dataclass(frozen=True)
class SelfPairingShape:
    """<P, P> = po_coef * (P.O) + const for an integral section with given hits."""

    po_coef: int
    const: Fraction
    K_dot_P: tuple[int, int]  # (coefficient of P.O, constant)

    def value(self, PO: int) -> Fraction:
        return self.po_coef * PO + self.const

    def self_intersection(self, PO: int) -> int:
        a, b = self.K_dot_P
        return -2 - (a * PO + b)


def section_self_pairing(
    d: int,
    affine_hits: Sequence[tuple[int, Component]] = (),
    infinity_hit: Component = IDENTITY,
) -> SelfPairingShape:
    """Self-pairing of a section from the canonical divisor and adjunction.

    ``affine_hits`` lists (e, template component id or ``"identity"``) for the
    reducible affine fibers; ``infinity_hit`` names the component met at t = oo.
    Uses <P,P> = -(P^2) + 2(P.O) - (O^2) - sum contr and P^2 = -2 - K.P.
    """
    from .resolve import resolve_infinity, resolve_local_germ

    inf = resolve_infinity(d)
    fr = inf.fiber
    to_final = {t: f for f, t in fr.mapping.items()}
    ft_inf = infinity_type(d)
    g_inf = template(ft_inf)
    hit = g_inf.identity.id if infinity_hit == IDENTITY else int(infinity_hit)
    if g_inf.component(hit).mult != 1:
        raise LatticeError("a section meets a fiber in a component of multiplicity one")
    k_const = inf.canonical["raw"][to_final.get(hit, hit)]
    contr = Fraction(0)
    if ft_inf.reducible:
        contr += local_contribution(ft_inf, infinity_hit, infinity_hit)
    for e, comp in affine_hits:
        ft = classify_e(e)
        if comp != IDENTITY:
            if template(ft).component(int(comp)).mult != 1:
                raise LatticeError("a section meets a fiber in a component of multiplicity one")
            k_const += resolve_local_germ(e).pullback.get(f"R{comp}", 0)
        if ft.reducible:
            contr += local_contribution(ft, comp, comp)
    o_coef = fr.o_coef
    # <P,P> = (K.P + 2) + 2 P.O - O^2 - contr
    return SelfPairingShape(
        po_coef=o_coef + 2,
        const=Fraction(k_const + 2 - fr.o_square) - contr,
        K_dot_P=(o_coef, k_const),
    )


# ---------------------------------------------------------------------------
# sections
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SectionCandidate:
    x: Poly
    y: Poly

    def key(self) -> tuple:
        return (self.x.k, self.x.degree, str(self.x), self.y.degree, str(self.y))

    def to_json(self) -> dict:
        return {"x": str(self.x), "y": str(self.y), "field": self.x.k}

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class SectionSearch:
    sections: tuple[SectionCandidate, ...]
    field: int  # degree of the field the search ran over
    complete: bool  # every root of phi' lay inside the search field
    patterns: int  # exponent patterns tried


def verify_section(eq: NormalizedEquation | Poly, cand: SectionCandidate) -> bool:
    phi = eq.phi if isinstance(eq, NormalizedEquation) else eq
    k = max(phi.k, cand.x.k, cand.y.k)
    if any(k % f for f in (phi.k, cand.x.k, cand.y.k)):
        k = math.lcm(phi.k, cand.x.k, cand.y.k)
    x, y, ph = cand.x.embed(k), cand.y.embed(k), phi.embed(k)
    return (y * y - x**5 - ph).is_zero()


def descend(p: Poly) -> Poly:
    """Rewrite p over the smallest subfield containing its coefficients."""
    F = get_field(p.k)
    k = 1
    for c in p.c:
        if c:
            k = math.lcm(k, F.minimal_degree(c))
    if k == p.k:
        return p
    image = {embed_code(a, k, p.k): a for a in range(5**k)}
    return Poly(k, (image[c] for c in p.c))


def _exponent_choices(mu: int) -> list[int]:
    # ord(y) = a gives ord(y y') = 2a - 1 when 5 does not divide a and >= 2a otherwise
    out = {0}
    if mu % 2 == 1 and ((mu + 1) // 2) % 5:
        out.add((mu + 1) // 2)
    out.update(a for a in range(5, mu // 2 + 1, 5))
    return sorted(out)


def _patterns(choices: list[list[int]], totals: set[int]):
    """Exponent vectors drawn from ``choices`` whose sum lies in ``totals``."""
    if not totals:
        return
    top = max(totals)
    room = [0] * (len(choices) + 1)
    for i in range(len(choices) - 1, -1, -1):
        room[i] = room[i + 1] + max(choices[i])
    picked: list[int] = []

    def walk(i: int, acc: int):
        if i == len(choices):
            if acc in totals:
                yield tuple(picked)
            return
        for a in choices[i]:
            s = acc + a
            if s > top or not any(s <= t <= s + room[i + 1] for t in totals):
                continue
            picked.append(a)
            yield from walk(i + 1, s)
            picked.pop()

    yield from walk(0, 0)


def admissible_y_degrees(d: int, bound: int) -> set[int]:
    """deg y = d/2, or a multiple of 5 with 2 deg y > d (then x^5 carries the top term)."""
    out = {a for a in range(5, bound + 1, 5) if 2 * a > d}
    if d % 2 == 0:
        out.add(d // 2)
    return out


def _sqrt(F, code: int) -> Optional[int]:
    if code == 0:
        return 0
    if F.pow(code, (F.q - 1) // 2) != 1:
        return None
    for a in F.elements():
        if F.mul(a, a) == code:
            return a
    return None  # pragma: no cover


def section_search(eq: NormalizedEquation, max_ext: int = 2) -> SectionSearch:
    """All integral sections with y != 0 defined over GF(5^K), K = lcm(k, max_ext)."""
    if not 1 <= max_ext <= 6:
        raise ValueError("max_ext must lie in 1..6")
    phi = eq.phi
    K = math.lcm(phi.k, max_ext)
    if K > 6:
        raise ValueError(f"search field GF(5^{K}) exceeds the tabulated range")
    F = get_field(K)
    dphi = phi.derivative().embed(K)
    # roots of phi' inside GF(5^K) with their multiplicities
    roots: list[tuple[FieldElement, int]] = []
    complete = True
    for g, mult in factor(phi.derivative()):
        if (g.degree * g.k) and K % (g.degree * g.k) == 0:
            roots += [(r, mult) for r in roots_of_irreducible(g, K)]
        else:
            complete = False
    roots.sort(key=lambda rm: rm[0].sort_key())
    choices = [_exponent_choices(mu) for _, mu in roots]
    totals = admissible_y_degrees(phi.degree, sum(max(c) for c in choices))
    linear = [Poly(K, (F.neg(r.code), 1)) for r, _ in roots]
    found: dict[tuple, SectionCandidate] = {}
    patterns = 0
    lc_dphi = dphi.c[-1]
    target = phi.embed(K)
    for pattern in _patterns(choices, totals):
        patterns += 1
        Y = Poly.one(K)
        for lin, a in zip(linear, pattern):
            if a:
                Y = Y * lin**a
        YY = Y * Y.derivative()
        if YY.degree != dphi.degree:
            continue
        # 2 c^2 Y Y' = phi' fixes c^2
        c2 = F.div(lc_dphi, F.scale(YY.c[-1], 2))
        if not (YY.scale(FieldElement(K, F.scale(c2, 2))) - dphi).is_zero():
            continue
        c = _sqrt(F, c2)
        if c is None:
            continue
        for sign in (c, F.neg(c)):
            y = Y.scale(FieldElement(K, sign))
            try:
                x = fifth_root(y * y - target)
            except NotFifthPower:
                continue
            cand = SectionCandidate(*descend_pair(x, y))
            found[cand.key()] = cand
    sections = tuple(sorted(found.values(), key=SectionCandidate.key))
    return SectionSearch(sections, K, complete, patterns)


def descend_pair(x: Poly, y: Poly) -> tuple[Poly, Poly]:
    """Put x and y over the smallest common subfield."""
    dx, dy = descend(x), descend(y)
    k = math.lcm(dx.k, dy.k)
    return x if k == x.k else dx.embed(k), y if k == y.k else dy.embed(k)


def find_sections(eq: NormalizedEquation, max_ext: int = 2) -> tuple[SectionCandidate, ...]:
    return section_search(eq, max_ext).sections


def brute_force_sections(phi: Poly, max_deg_y: int) -> tuple[SectionCandidate, ...]:
    """Exhaustive search over y in GF(5)[t] with deg y <= max_deg_y (test oracle)."""
    if phi.k != 1:
        raise ValueError("the exhaustive oracle works over GF(5) only")
    out = []
    for coeffs in itertools.product(range(5), repeat=max_deg_y + 1):
        y = Poly(1, coeffs)
        if y.is_zero():
            continue
        rest = y * y - phi
        if any(i % 5 for i in rest.exponents()):
            continue
        out.append(SectionCandidate(fifth_root(rest), y))
    return tuple(sorted(out, key=SectionCandidate.key))


__all__ = [
    "GramLattice",
    "IDENTITY",
    "Incidence",
    "LatticeError",
    "SectionCandidate",
    "SectionSearch",
    "SelfPairingShape",
    "block_det",
    "brute_force_sections",
    "contribution_matrix",
    "find_sections",
    "height_pairing",
    "local_contribution",
    "section_search",
    "section_self_pairing",
    "simple_components",
    "tabulated_contributions",
    "torsion_rank",
    "trivial_lattice",
    "verify_section",
]
