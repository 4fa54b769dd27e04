import json

import pydot
import pytest
import sympy

from qhyp5 import fibers as fib
from qhyp5.gf import parse_poly
from qhyp5.normal import normalize
from qhyp5.resolve import (
    LOCAL_E,
    M_SYM,
    MU,
    NU,
    artin_from_census,
    artin_invariants,
    canonical_adjunction_defects,
    derive_fiber_graph,
    resolve_infinity,
    resolve_local_germ,
    trace_lines,
)

RESIDUES = (1, 2, 3, 4, 6, 7, 8, 9)
m, mu, nu = M_SYM, MU, NU

MU_NU = {2: (0, 0), 3: (0, 0), 4: (-1, -1), 6: (-1, -1), 7: (-2, -2), 8: (-2, -2), 9: (-2, -2)}

SUBCASES = {
    1: (4 * m + mu, 2 * m - 2 + nu),
    6: (4 * m + 1 + mu, 2 * m - 2 + nu),
    2: (4 * m + mu, 2 * m - 2 + nu),
    7: (4 * m + 2 + mu, 2 * m - 1 + nu),
    3: (4 * m + mu, 2 * m - 2 + nu),
    8: (4 * m + 2 + mu, 2 * m - 1 + nu),
    4: (4 * m + 1 + mu, 2 * m - 1 + nu),
    9: (4 * m + 2 + mu, 2 * m - 2 + nu),
}


# --- local germs ------------------------------------------------------------------


@pytest.mark.parametrize("e", LOCAL_E)
def test_local_fiber_matches_template(e):
    g = derive_fiber_graph(resolve_local_germ(e))
    assert g.isomorphic(fib.template(fib.classify_e(e)))


@pytest.mark.parametrize("e", LOCAL_E)
def test_mu_nu(e):
    loc = resolve_local_germ(e)
    assert (loc.mu, loc.nu) == MU_NU[e]


@pytest.mark.parametrize("e", LOCAL_E)
def test_decomposition(e):
    loc = resolve_local_germ(e)
    for name, a in loc.E_P.items():
        assert a == loc.E1_part.get(name, 0) + 2 * loc.E2_part.get(name, 0)
        assert loc.E1_part.get(name, 0) in (0, 1)


@pytest.mark.parametrize("e", LOCAL_E)
def test_pullback_satisfies_adjunction(e):
    # near an affine fiber K = o_coef (O) + (multiple of F) + pi^*(E_can - E^(2)),
    # and the zero section meets only the identity component
    loc = resolve_local_germ(e)
    o_coef = resolve_infinity(1).fiber.o_coef
    g = fib.template(fib.classify_e(e))
    pb = {int(k[1:]): v for k, v in loc.pullback.items()}
    for c in g.components:
        k_dot = sum(v * g.intersection(j, c.id) for j, v in pb.items()) + o_coef * c.is_identity
        assert k_dot + c.self_int == -2, f"R{c.id}"


def test_e2_data():
    loc = resolve_local_germ(2)
    assert loc.E_P == {"E1": 2, "E2": 4}
    assert loc.E1_part == {}
    assert loc.E2_part == {"E1": 1, "E2": 2}
    assert loc.E_can == {"E1": 1, "E2": 2}


def test_e7_data():
    loc = resolve_local_germ(7)
    assert loc.E_P == {"E1": 5, "E2": 7, "E3": 14}
    assert loc.E1_part == {"E1": 1, "E2": 1}
    assert loc.E2_part == {"E1": 2, "E2": 3, "E3": 7}
    assert loc.E_can == {"E1": 1, "E2": 2, "E3": 4}
    assert loc.pullback == {"R1": -2, "R2": -4, "R3": -3}


def test_e9_pullback():
    pb = resolve_local_germ(9).pullback
    assert pb["R9"] == -18
    # the remaining coefficients except R2, which adjunction fixes at -4
    expected = {1: -2, 3: -6, 4: -8, 5: -10, 6: -12, 7: -14, 8: -16, 10: -9, 11: -11, 12: -4}
    assert {i: pb[f"R{i}"] for i in expected} == expected
    assert pb["R2"] == -4


def test_e8_and_e4_pullbacks():
    assert resolve_local_germ(8).pullback == {
        "R1": -2, "R2": -4, "R3": -6, "R4": -8, "R5": -5, "R6": -2, "R7": -5, "R8": -2
    }
    assert resolve_local_germ(4).pullback == {"R1": -1, "R2": -1}


def test_e6_pullback_symmetric_arms():
    pb = resolve_local_germ(6).pullback
    assert pb["R1"] == -2 and pb["R2"] == -5
    for a, b in [(3, 7), (4, 8), (5, 9), (6, 10)]:
        assert pb[f"R{a}"] == pb[f"R{b}"]
    assert (pb["R3"], pb["R4"], pb["R5"], pb["R6"]) == (-4, -3, -2, -1)


def test_e3_fiber_divisor():
    g = derive_fiber_graph(resolve_local_germ(3))
    mults = sorted(c.mult for c in g.components)
    assert mults == sorted([1, 4, 7, 10, 5, 8, 6, 4, 2])


def test_covering_rules_recorded():
    rules = resolve_local_germ(2).fiber.rules
    assert rules["E0"].startswith("two transverse branch points")
    assert set(rules.values()) <= {
        "two transverse branch points: irreducible",
        "disjoint from B: splits",
        "even contact with B: splits",
        "in B: double of a smooth curve",
    }


@pytest.mark.parametrize("bad", [1, 5, 10])
def test_rejects_bad_germ(bad):
    with pytest.raises(ValueError):
        resolve_local_germ(bad)


def test_trace_is_json_lines():
    lines = trace_lines(resolve_local_germ(7).config).splitlines()
    assert lines
    steps = [json.loads(s) for s in lines]
    assert all(isinstance(s, dict) for s in steps)


# --- the fiber at infinity --------------------------------------------------------------


@pytest.mark.parametrize("r", RESIDUES)
@pytest.mark.parametrize("mm", [0, 1, 2])
def test_infinity_fiber_matches_template(r, mm):
    d = 10 * mm + r
    res = resolve_infinity(d)
    assert res.graph.isomorphic(fib.template(fib.infinity_type(d)))
    assert res.m == mm


@pytest.mark.parametrize("r", RESIDUES)
def test_subcase_constants(r):
    res = resolve_infinity(r)
    pa, kz = SUBCASES[r]
    assert sympy.expand(res.pa_Z - pa) == 0
    assert sympy.expand(res.KZ_sq - kz) == 0


@pytest.mark.parametrize("r", RESIDUES)
@pytest.mark.parametrize("mm", [0, 1, 2])
def test_canonical_divisor_adjunction(r, mm):
    defects = canonical_adjunction_defects(10 * mm + r)
    assert set(defects.values()) == {0}


@pytest.mark.parametrize("r", RESIDUES)
def test_zero_section_square(r):
    for mm in (0, 1, 2):
        assert resolve_infinity(10 * mm + r).fiber.o_square == -(mm + 1)


def test_infinity_dot_parses():
    (parsed,) = pydot.graph_from_dot_data(resolve_infinity(16).graph.to_dot())
    assert len(parsed.get_edges()) == len(resolve_infinity(16).graph.edges)


@pytest.mark.parametrize("d", [0, 5, 15])
def test_infinity_rejects(d):
    with pytest.raises(ValueError):
        resolve_infinity(d)


# --- global invariants through the resolution -------------------------------------


@pytest.mark.parametrize("text,expected", [("t", (0, -4)), ("t^4", (0, -4)), ("t^3", (0, -3))])
def test_artin_examples(text, expected):
    assert artin_invariants(normalize(parse_poly(text))) == expected


def test_artin_sums_local_data():
    res = artin_from_census(16, [4] * 5)
    assert (res.mu, res.nu) == (-5, -5)
    assert res.pa == 0


def test_general_places_ignored():
    assert artin_from_census(9, [1, 1]) == artin_from_census(9, [])
