import itertools
from collections import defaultdict
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import standard_phis
from qhyp5 import fibers as fib
from qhyp5.gf import NotFifthPower, Poly, fifth_root, parse_poly, splitting_degree
from qhyp5.invariants import surface_invariants
from qhyp5.mw import (
    IDENTITY,
    LatticeError,
    SectionCandidate,
    block_det,
    brute_force_sections,
    contribution_matrix,
    find_sections,
    height_pairing,
    local_contribution,
    section_search,
    section_self_pairing,
    simple_components,
    tabulated_contributions,
    torsion_rank,
    trivial_lattice,
    verify_section,
)
from qhyp5.normal import normalize
from qhyp5.rational import TABLE3, normalized_polys

F = Fraction
P = parse_poly


def eq_of(text):
    return normalize(P(text))


def lattice_of(text):
    eq = eq_of(text)
    return trivial_lattice(fib.census(eq), eq.m)


def section_set(sections):
    return {(str(s.x), str(s.y)) for s in sections}


# --- fiber blocks and local contributions -----------------------------------------------


@pytest.mark.parametrize(
    "label,det",
    [("C(5,1)", 5), ("C(9,2)", 1), ("C(3,3)", 5), ("C(11,5)", 5),
     ("C(4,6)", 1), ("C(9,7)", 5), ("C(13,8)", 1)],
)
def test_block_determinants(label, det):
    assert abs(block_det(fib.BY_LABEL[label])) == det


@pytest.mark.parametrize(
    "label,diag,off",
    [("C(5,1)", F(4, 5), F(1, 5)), ("C(3,3)", F(3, 5), F(2, 5)),
     ("C(11,5)", F(7, 5), F(3, 5)), ("C(9,7)", F(6, 5), F(4, 5))],
)
def test_tabulated_contributions(label, diag, off):
    assert tabulated_contributions(label) == (diag, off)


@pytest.mark.parametrize("label", ["C(9,2)", "C(4,6)", "C(13,8)"])
def test_unimodular_types_have_no_torsion_pair(label):
    assert abs(block_det(fib.BY_LABEL[label])) == 1
    # every entry of -A^{-1} is integral, so contributions never cancel a fraction
    _, inv = contribution_matrix(label)
    assert all(x.denominator == 1 for row in inv for x in row)


@pytest.mark.parametrize("label", [lab for lab in fib.BY_LABEL if lab != "C(1,0)"])
def test_contribution_matrix_symmetric_positive(label):
    ids, inv = contribution_matrix(label)
    n = len(ids)
    assert all(inv[i][j] == inv[j][i] for i in range(n) for j in range(n))
    assert all(inv[i][i] > 0 for i in range(n))


def test_local_contribution_examples():
    assert local_contribution("C(3,3)", 1, 1) == F(3, 5)
    assert local_contribution("C(3,3)", 1, 2) == F(2, 5)
    a, b = simple_components("C(5,1)")
    assert local_contribution("C(5,1)", a, a) == F(4, 5)
    assert local_contribution("C(5,1)", a, b) == F(1, 5)
    assert local_contribution("C(3,3)", IDENTITY, 1) == 0
    assert local_contribution("C(3,3)", 0, 2) == 0  # identity given by number
    with pytest.raises(LatticeError):
        local_contribution("C(3,3)", 7, 1)


# --- trivial lattice and torsion rank ---------------------------------------------------


@pytest.mark.parametrize(
    "text,rank,absdet", [("t^6+t^4", 14, 5**4), ("t", 14, 1), ("t^16+t^12+t^8+t^4", 14, 5**6)]
)
def test_trivial_lattice_examples(text, rank, absdet):
    lat = lattice_of(text)
    assert lat.rank == rank
    assert abs(lat.det) == absdet


@given(standard_phis())
def test_lattice_shape(phi):
    eq = normalize(phi)
    c = fib.census(eq)
    lat = trivial_lattice(c, eq.m)
    g = lat.gram
    assert (g[0][0], g[0][1], g[1][0], g[1][1]) == (-(eq.m + 1), 1, 1, 0)
    assert all(g[0][j] == 0 and g[1][j] == 0 for j in range(2, lat.rank))
    assert lat.rank == 2 + sum(ft.n_components - 1 for ft in c.fibers())
    prod = 1
    for ft in c.fibers():
        prod *= block_det(ft)
    assert abs(lat.det) == abs(prod)


@pytest.mark.parametrize("text,r", [("t^2", 1), ("t^3+t^2", 1), ("t^13+t^12+4*t^8+4*t^7", 0)])
def test_torsion_rank_examples(text, r):
    eq = eq_of(text)
    si = surface_invariants(eq)
    assert torsion_rank(trivial_lattice(si.census, eq.m), si.pa, si.rho) == r


def test_torsion_rank_errors():
    lat = lattice_of("t^2")
    with pytest.raises(LatticeError):
        torsion_rank(lat, pa=1)
    with pytest.raises(LatticeError):
        torsion_rank(lat, pa=0, rho=13)
    # a single C(3,3) block: |det| = 5 is an odd power
    c = fib.FiberCensus(((3, 1),), fib.infinity_type(9))
    with pytest.raises(LatticeError):
        torsion_rank(trivial_lattice(c, 0), pa=0)


# --- height pairing ---------------------------------------------------------------------


def test_height_pairing_arithmetic():
    assert height_pairing(0, 0, 0, -1) == 1
    assert height_pairing(1, 1, 0, -1, [("C(3,3)", 1, 2)]) == 3 - F(2, 5)
    with pytest.raises(LatticeError):
        height_pairing(0, 0, 0, -1, [("C(3,3)", 5, 5)])


def test_torsion_section_pairs_to_zero():
    # (0, t^2) on y^2 = x^5 + t^4 meets a -3 curve of the affine C(3,3)
    shape = section_self_pairing(4, [(4, 1)], infinity_hit=6)
    assert (shape.po_coef, shape.const) == (4, 0)
    assert shape.value(0) == 0
    assert shape.self_intersection(0) == -1


def test_d3_pairing_shape():
    shape = section_self_pairing(3)
    assert shape.po_coef == 4
    assert shape.const == 4
    # the largest possible correction stays below the constant
    worst = max(
        sum(tabulated_contributions(ft)[0] for ft in combo)
        for combo in [("C(5,1)", "C(5,1)")]
    )
    assert worst < shape.const


def _hit_choices(d, es):
    inf = fib.infinity_type(d)
    at_inf = [IDENTITY] + simple_components(inf)
    affine = [[IDENTITY] + simple_components(fib.classify_e(e)) for e in es]
    for h in at_inf:
        for combo in itertools.product(*affine):
            yield h, list(zip(es, combo))


def test_no_integral_torsion_for_d3_with_two_c51():
    # y^2 = x^5 + t^3 + t^2: r = 1 but every admissible incidence gives <P,P> > 0
    values = [section_self_pairing(3, hits, h).value(0) for h, hits in _hit_choices(3, [2, 2])]
    assert min(values) == F(12, 5)


@pytest.mark.parametrize("d,es", [(2, [2]), (4, [4]), (6, [4, 2, 2])])
def test_torsion_incidences_exist(d, es):
    zeros = [
        section_self_pairing(d, hits, h)
        for h, hits in _hit_choices(d, es)
        if section_self_pairing(d, hits, h).value(0) == 0
    ]
    assert zeros
    assert {z.self_intersection(0) for z in zeros} == {-1}


def test_multiple_component_rejected():
    with pytest.raises(LatticeError):
        section_self_pairing(2, [(2, 1)])  # R1 of C(5,1) has multiplicity 2


# --- sections -------------------------------------------------------------------------------


def test_row6_sections():
    got = section_set(find_sections(eq_of("t^6+t^4")))
    assert got == {
        ("2*t", "t^3+t^2"), ("2*t", "4*t^3+4*t^2"),
        ("3*t", "t^3+4*t^2"), ("3*t", "4*t^3+t^2"),
    }


def test_row7_sections():
    sections = find_sections(eq_of("t^16+t^12+t^8+t^4"))
    assert len(sections) == 12
    w = P("t^5+4*t")
    assert ("t^4", str(w * w)) in section_set(sections)
    for i in range(5):
        x = Poly.from_ints([4 * i**4 + 1, 4 * i**3, 4 * i**2, 4 * i])
        q = w // (P("t") - i)
        assert (str(x), str(q * q)) in section_set(sections)


@pytest.mark.parametrize("text", ["t^3+t^2", "t", "t^3", "t^13+t^11+t^9+t^7"])
def test_no_sections(text):
    res = section_search(eq_of(text), 2)
    assert res.sections == ()


@pytest.mark.parametrize(
    "phi,x,y,ok", [("t^2", "0", "t", True), ("t^4", "0", "t^2", True), ("t^4", "0", "t", False)]
)
def test_verify_section(phi, x, y, ok):
    assert verify_section(eq_of(phi), SectionCandidate(P(x), P(y))) is ok


@settings(max_examples=40)
@given(standard_phis(max_degree=16))
def test_sections_closed_under_sign_and_satisfy_identities(phi):
    eq = normalize(phi)
    sections = find_sections(eq, 2)
    keys = section_set(sections)
    for s in sections:
        assert verify_section(eq, s)
        assert (str(s.x), str(-s.y)) in keys
        k = s.y.k
        assert (s.y * s.y.derivative() * 2) == eq.phi.embed(k).derivative()


def test_sections_over_extension():
    # t^5 + t splits over GF(25); its cube integrates to a row-7 type equation
    from qhyp5.rational import antiderivative

    phi = antiderivative(P("t^5+t") ** 3)
    eq = normalize(phi)
    assert section_search(eq, 1).sections == ()
    res = section_search(eq, 2)
    assert res.complete and res.field == 2
    assert len(res.sections) == 12
    assert all(verify_section(eq, s) for s in res.sections)


def test_section_count_bounded_by_group_order():
    for row in TABLE3:
        if row.equation is None:
            continue
        eq = eq_of(row.equation)
        assert len(find_sections(eq)) <= 5**row.r - 1


def test_max_ext_bounds():
    with pytest.raises(ValueError):
        section_search(eq_of("t^2"), 7)
    with pytest.raises(ValueError):
        section_search(normalize(P("t^4", 4)), 3)  # lcm(4, 3) = 12


# --- oracle agreement ------------------------------------------------------------------------


def _derivative_index(max_deg):
    """All y in GF(5)[t] of degree <= max_deg keyed by 2 y y'."""
    index = defaultdict(list)
    for codes in itertools.product(range(5), repeat=max_deg + 1):
        y = Poly(1, codes)
        if not y.is_zero():
            index[(y * y.derivative() * 2).c].append(y)
    return index


def _oracle(phi, index):
    out = set()
    for y in index.get(phi.derivative().c, ()):
        try:
            out.add((str(fifth_root(y * y - phi)), str(y)))
        except NotFifthPower:
            pass
    return out


def _rational_sections(phi):
    eq = normalize(phi)
    K = splitting_degree(phi.derivative())
    return {(str(s.x), str(s.y)) for s in section_search(eq, K).sections if s.x.k == 1}


def test_search_matches_exhaustive_oracle_degree_4():
    # deg y + deg y' = d - 1 forces deg y <= 3 here
    index = _derivative_index(3)
    for phi in normalized_polys(4):
        assert _rational_sections(phi) == _oracle(phi, index), str(phi)


@pytest.mark.parametrize("text", ["t^2", "t^4", "t^6+t^4", "t^6+2*t^2", "t^3+t^2"])
def test_library_oracle_agrees(text):
    phi = P(text)
    assert section_set(brute_force_sections(phi, 5)) == _rational_sections(phi)
