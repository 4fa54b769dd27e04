"""Shared hypothesis strategies."""

from __future__ import annotations

import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qhyp5.gf import FieldElement, Poly, get_field

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

small_k = st.sampled_from([1, 2, 3])


@st.composite
def elements(draw, k=None):
    k = draw(small_k) if k is None else k
    return FieldElement(k, draw(st.integers(0, get_field(k).q - 1)))


@st.composite
def polys(draw, k=1, max_degree=8):
    q = get_field(k).q
    codes = draw(st.lists(st.integers(0, q - 1), max_size=max_degree + 1))
    return Poly(k, codes)


@st.composite
def standard_phis(draw, max_degree=19):
    """Nonconstant phi over GF(5) without exponents divisible by 5."""
    d = draw(st.integers(1, max_degree).filter(lambda n: n % 5))
    codes = [0 if i % 5 == 0 else draw(st.integers(0, 4)) for i in range(d)]
    codes.append(draw(st.integers(1, 4)))
    return Poly(1, codes)


@st.composite
def raw_phis(draw, max_degree=14):
    """Arbitrary nonconstant phi over GF(5), fifth-power terms included."""
    d = draw(st.integers(1, max_degree))
    codes = draw(st.lists(st.integers(0, 4), min_size=d, max_size=d))
    codes.append(draw(st.integers(1, 4)))
    return Poly(1, codes)
