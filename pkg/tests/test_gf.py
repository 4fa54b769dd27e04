import itertools
import json
import subprocess
import sys

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import elements, polys, small_k
from qhyp5.gf import (
    DEFAULT_MODULI,
    FieldElement,
    FieldError,
    NotFifthPower,
    ParseError,
    Poly,
    SplittingFieldTooLarge,
    derivative,
    factor,
    fifth_root,
    get_field,
    parse_poly,
    roots_with_multiplicity,
    splitting_degree,
    squarefree_decomposition,
)


def P(text, k=1):
    return parse_poly(text, k)


# --- field arithmetic ---------------------------------------------------------


class TestField:
    @given(elements(), st.data())
    def test_ring_axioms(self, a, data):
        b = data.draw(elements(a.k))
        c = data.draw(elements(a.k))
        assert a + b == b + a
        assert a * b == b * a
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == FieldElement(a.k, 0)

    @given(elements())
    def test_inverse(self, a):
        if a:
            assert a * a.inverse() == FieldElement(a.k, 1)

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_frobenius_order_exhaustive(self, k):
        F = get_field(k)
        for code in F.elements():
            a = FieldElement(k, code)
            assert a.frobenius(k) == a
            if k > 1 and a.minimal_degree() == k:
                assert a.frobenius() != a

    @given(elements())
    def test_fifth_root_unique(self, a):
        r = a.fifth_root()
        assert r**5 == a
        # Frobenius is a bijection, so the preimage is unique
        assert sum(1 for c in a.field.elements() if FieldElement(a.k, c) ** 5 == a) == 1

    @pytest.mark.parametrize("k", sorted(DEFAULT_MODULI))
    def test_defining_polynomials_are_primitive(self, k):
        F = get_field(k)
        g = FieldElement(k, F.gen)
        # order of the generator is exactly 5^k - 1
        n = F.q - 1
        assert g**n == FieldElement(k, 1)
        for p in sympy.factorint(n):
            assert g ** (n // p) != FieldElement(k, 1)

    @pytest.mark.parametrize("small,big", [(1, 2), (2, 4), (2, 6), (3, 6), (1, 3)])
    def test_embedding_is_a_ring_homomorphism(self, small, big):
        F = get_field(small)
        for a, b in itertools.islice(itertools.product(F.elements(), repeat=2), 0, None, 7):
            x, y = FieldElement(small, a), FieldElement(small, b)
            assert (x * y).embed(big) == x.embed(big) * y.embed(big)
            assert (x + y).embed(big) == x.embed(big) + y.embed(big)

    def test_mixed_fields_rejected(self):
        with pytest.raises(FieldError):
            FieldElement(1, 1) + FieldElement(2, 1)
        with pytest.raises(FieldError):
            get_field(13)


# --- polynomial ring --------------------------------------------------------


class TestPoly:
    @given(small_k.flatmap(lambda k: st.tuples(polys(k, 6), polys(k, 6), polys(k, 6))))
    def test_ring_laws(self, pqr):
        p, q, r = pqr
        assert p * (q + r) == p * q + p * r
        assert (p * q) * r == p * (q * r)
        assert p - p == Poly.zero(p.k)

    @given(small_k.flatmap(lambda k: st.tuples(polys(k, 7), polys(k, 7))))
    def test_derivative_rules(self, pq):
        p, q = pq
        assert derivative(p + q) == derivative(p) + derivative(q)
        assert derivative(p * q) == derivative(p) * q + p * derivative(q)

    @given(small_k.flatmap(lambda k: st.tuples(polys(k, 9), polys(k, 4))))
    def test_division(self, pq):
        p, q = pq
        if q.is_zero():
            return
        quo, rem = p.divmod(q)
        assert quo * q + rem == p
        assert rem.is_zero() or rem.degree < q.degree

    @given(small_k.flatmap(lambda k: polys(k, 8)))
    def test_fifth_root_of_fifth_power(self, p):
        assert fifth_root(p**5) == p

    def test_fifth_root_exhaustive_small_degree(self):
        for codes in itertools.product(range(5), repeat=4):
            p = Poly(1, codes)
            assert fifth_root(p**5) == p
        for codes in itertools.product(range(25), repeat=2):
            p = Poly(2, codes)
            assert fifth_root(p**5) == p

    @given(small_k.flatmap(lambda k: polys(k, 8)))
    def test_printer_round_trip(self, p):
        assert parse_poly(str(p), p.k) == p

    @given(small_k.flatmap(lambda k: polys(k, 8)))
    def test_factorisation_reconstructs(self, p):
        if p.is_zero():
            return
        prod = Poly.const(p.lc(), p.k)
        for g, m in factor(p):
            assert g.monic() == g
            prod = prod * g**m
        assert prod == p

    @given(polys(1, 10))
    def test_squarefree_parts_are_squarefree(self, p):
        if p.degree < 1:
            return
        for g, _ in squarefree_decomposition(p):
            assert all(m == 1 for _, m in factor(g))

    @settings(max_examples=30)
    @given(small_k.flatmap(lambda k: polys(k, 6)))
    def test_roots_reconstruct_split_polynomial(self, p):
        if p.degree < 1:
            return
        if splitting_degree(p) > 12:
            with pytest.raises(SplittingFieldTooLarge):
                roots_with_multiplicity(p)
            return
        roots = roots_with_multiplicity(p)
        assert sum(m for _, m in roots) == p.degree
        K = roots[0][0].k
        rebuilt = Poly.const(p.lc(), p.k).embed(K) * Poly.from_roots(roots, K)
        assert rebuilt == p.embed(K)


# --- examples ----------------------------------------------------------------


@pytest.mark.parametrize(
    "text,expected",
    [("t^6+t^4", {6: 1, 4: 1}), ("0", {}), ("3*t^2+4", {2: 3, 0: 4})],
)
def test_parse_examples(text, expected):
    assert {e: int(c.code) for e, c in P(text).coeffs.items()} == expected


def test_parse_variants():
    assert P("-t") == P("4*t")
    assert P("  2 t ^ 3 - 1 ") == P("2*t^3+4")
    assert P("g*t", 2) == Poly.monomial(1, FieldElement.generator(2), 2)
    assert P("g^25", 2) == P("g", 2)  # Frobenius^2 fixes GF(25)
    assert P("7") == P("2")


@pytest.mark.parametrize("bad,pos", [("t^^2", 2), ("3*", 2), ("t+x", 2), ("", 0), ("*t", 0)])
def test_parse_errors_report_position(bad, pos):
    with pytest.raises(ParseError) as info:
        P(bad)
    assert info.value.position == pos


def test_parse_rejects_missing_field():
    with pytest.raises(ParseError):
        parse_poly("t", 13)


@pytest.mark.parametrize(
    "text,expected", [("t^5+t", "1"), ("t^6+t^4", "t^5+4*t^3"), ("3", "0")]
)
def test_derivative_examples(text, expected):
    assert derivative(P(text)) == P(expected)


def test_roots_examples():
    assert [(str(r), m) for r, m in roots_with_multiplicity(P("t^5+4*t^3"))] == [
        ("0", 3), ("1", 1), ("4", 1)
    ]
    assert [(str(r), m) for r, m in roots_with_multiplicity(P("t^5+4"))] == [("1", 5)]
    g = FieldElement.generator(2)
    roots = roots_with_multiplicity(Poly.t(2) - Poly.const(g, 2))
    assert roots == [(g, 1)]


def test_roots_ordering_and_errors():
    # t^2 - 2 is irreducible over GF(5): both roots live in GF(25)
    roots = roots_with_multiplicity(P("t^3+3*t"))
    assert roots[0][0].k == 2 and str(roots[0][0]) == "0"
    keys = [r.sort_key() for r, _ in roots]
    assert keys == sorted(keys)
    with pytest.raises(ValueError):
        roots_with_multiplicity(Poly.zero())
    # an irreducible factor of degree 13 needs GF(5^13)
    with pytest.raises(SplittingFieldTooLarge):
        roots_with_multiplicity(_irreducible(13))


def _irreducible(n: int) -> Poly:
    for codes in itertools.product(range(5), repeat=3):
        p = Poly(1, list(codes) + [0] * (n - 3) + [1])
        if p.c[0] and factor(p) == ((p, 1),):
            return p
    raise AssertionError(f"no irreducible polynomial of degree {n} with this shape")


@pytest.mark.parametrize(
    "text,expected", [("4*t^5+1", "4*t+1"), ("t^20", "t^4")]
)
def test_fifth_root_examples(text, expected):
    assert fifth_root(P(text)) == P(expected)


def test_fifth_root_reports_obstruction():
    with pytest.raises(NotFifthPower) as info:
        fifth_root(P("t^6"))
    assert info.value.exponent == 6


def test_field_table_override(tmp_path):
    # another primitive quadratic: t^2 + t + 2
    table = tmp_path / "moduli.json"
    table.write_text(json.dumps({"2": [2, 1, 1]}))
    code = "from qhyp5.gf import get_field; F = get_field(2); print(*F.modulus, F.mul(F.gen, F.gen))"
    run = lambda env: subprocess.run(  # noqa: E731
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    ).stdout.split()
    # g^2 = -g - 2 = 4g + 3, code 3 + 4*5
    assert run({"QHYP5_FIELD_TABLE": str(table)}) == ["2", "1", "1", "23"]
    # default t^2 + 4t + 2: g^2 = g + 3, code 3 + 1*5
    assert run({}) == ["2", "4", "1", "8"]
