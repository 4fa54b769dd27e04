import pytest
from hypothesis import given

from conftest import standard_phis
from qhyp5 import fibers as fib
from qhyp5.gf import parse_poly
from qhyp5.invariants import (
    DELTA,
    delta,
    gamma_self_intersection,
    surface_invariants,
)
from qhyp5.normal import normalize
from qhyp5.rational import TABLE3
from qhyp5.resolve import artin_details

ROWS_WITH_EQUATIONS = [row for row in TABLE3 if row.equation is not None]


def inv(text):
    return surface_invariants(normalize(parse_poly(text)))


@pytest.mark.parametrize(
    "text,pa,k2,rho",
    [("t", 0, -4, 14), ("t^13+t^11+t^9+t^7", 0, -2, 12), ("t^3+t^2", 0, -3, 13)],
)
def test_closed_form_examples(text, pa, k2, rho):
    si = inv(text)
    assert (si.pa, si.K_sq, si.rho) == (pa, k2, rho)


def test_census_counts_behind_examples():
    si = inv("t^13+t^11+t^9+t^7")
    assert (si.m, si.census.N(3), si.census.N(6)) == (1, 2, 2)
    si = inv("t^3+t^2")
    assert (si.census.N(6), si.census.N(1)) == (1, 2)


@pytest.mark.parametrize("row", ROWS_WITH_EQUATIONS, ids=lambda r: f"row{r.no}")
class TestTableRows:
    def test_rho(self, row):
        si = inv(row.equation)
        assert si.pa == 0
        assert si.rho == row.rho

    def test_noether(self, row):
        si = inv(row.equation)
        assert 12 * (si.pa + 1) == si.K_sq + si.euler
        assert si.noether_holds()

    def test_resolution_agrees(self, row):
        eq = normalize(parse_poly(row.equation))
        si = surface_invariants(eq)
        art = artin_details(eq)
        assert (si.pa, si.K_sq) == (art.pa, art.K_sq)


@pytest.mark.parametrize(
    "text,value", [("t^4", 2), ("t^16+t^12+t^8+t^4", 2), ("t^13+t^12+4*t^8+4*t^7", -1)]
)
def test_gamma_square(text, value):
    eq = normalize(parse_poly(text))
    assert gamma_self_intersection(eq) == value
    assert surface_invariants(eq).gamma_sq == value


def test_gamma_warning_only_for_the_drawn_configuration():
    assert len(inv("t^4").warnings) == 1
    assert "2" in inv("t^4").warnings[0]
    assert inv("t^4+t^2").warnings == ()
    assert inv("t^16+t^12+t^8+t^4").warnings == ()


@given(standard_phis())
def test_closed_form_matches_resolution(phi):
    eq = normalize(phi)
    si = surface_invariants(eq)
    art = artin_details(eq)
    assert (si.pa, si.K_sq) == (art.pa, art.K_sq)


@given(standard_phis())
def test_noether_on_random_equations(phi):
    si = surface_invariants(normalize(phi))
    assert si.noether_holds()


@given(standard_phis())
def test_picard_bound(phi):
    si = surface_invariants(normalize(phi))
    if si.pa == 0:
        assert si.rho == 10 - si.K_sq
        assert si.rho <= 14
    else:
        assert si.rho is None


def test_delta_table():
    assert set(DELTA) == {1, 2, 3, 4, 6, 7, 8, 9}
    assert [delta(d) for d in (1, 4, 2, 3, 6, 7, 8, 9)] == [2, 2, -1, 0, 3, 7, 7, 7]
    assert delta(21) == delta(1)
    for bad in (5, 10, 25):
        with pytest.raises(ValueError):
            delta(bad)


def test_json_block():
    js = inv("t^2").to_json()
    assert js["pa"] == 0 and js["K_sq"] == -4 and js["rho"] == 14
    assert js["euler_source"].startswith("derived")
    assert js["noether"] is True
    assert js["census"]["infinity"] == fib.infinity_type(2).label
