"""Standard form for y^2 = x^5 + phi(t) and the critical places of phi.

Two birational moves are used, both recorded in the transform log as
``phi_new = (phi_old - h^5) / g^10``:

* fifth-power strip (``g = 1``): ``x -> x + h`` removes every monomial whose
  exponent is divisible by 5, including the constant term;
* e-drop at the roots of ``g``: ``x -> (x + h)/g^2, y -> y/g^5`` when every root
  of ``g`` has ``phi - phi(alpha)`` vanishing to order at least 10.

Critical places are grouped into Galois orbits over the coefficient field: one
:class:`Place` per monic irreducible factor ``g`` of ``phi'``.  All local data
(Hasse-Taylor coefficients at a root) is computed in ``F[t]/(g)``, so no
splitting field is ever required.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Optional

from .gf import (
    MAX_EXT,
    FieldElement,
    Poly,
    factor,
    fifth_root,
    roots_of_irreducible,
)


class DegenerateEquation(ValueError):
    """phi reduces to a constant: y^2 = x^5 + c is not a genuine fibration."""


class NotCritical(ValueError):
    pass


@dataclass(frozen=True)
class Transform:
    kind: str  # "strip" | "e_drop" | "local_shift"
    g: Poly  # 1 for strips; the orbit's minimal polynomial otherwise
    h: Poly  # phi_new = (phi_old - h^5) / g^10 (local shifts leave phi alone)
    gamma: Optional[FieldElement] = None
    alpha: Optional[FieldElement] = None

    def apply(self, phi: Poly) -> Poly:
        if self.kind == "local_shift":
            return phi
        num = phi - self.h**5
        if self.kind == "strip":
            return num
        q, r = num.divmod(self.g**10)
        if not r.is_zero():
            raise ArithmeticError("logged e-drop does not divide")
        return q

    def to_json(self) -> dict:
        out = {"kind": self.kind, "g": str(self.g), "h": str(self.h)}
        if self.kind == "strip":
            out["substitution"] = f"x -> x + ({self.h})"
        elif self.kind == "e_drop":
            out["substitution"] = f"x -> (x + {self.h})/({self.g})^2, y -> y/({self.g})^5"
        else:
            out["substitution"] = f"x -> x + {self.gamma}*(t - {self.alpha}) (local)"
            out["alpha"] = str(self.alpha)
            out["gamma"] = str(self.gamma)
        return out


@dataclass(frozen=True)
class Place:
    """A Galois orbit of critical points of phi."""

    minpoly: Poly
    degree: int  # number of geometric points in the orbit
    alpha: Optional[FieldElement]  # representative root; see ``root()``
    mult_in_phi_prime: int
    raw_e: int
    effective_e: int
    gamma: Optional[FieldElement] = None  # local shift constant when raw_e == 5

    def root(self) -> Optional[FieldElement]:
        """The representative root, computing it if it was deferred."""
        return self.alpha if self.alpha is not None else orbit_root(self.minpoly)

    def to_json(self) -> dict:
        alpha = self.root()
        return {
            "minpoly": str(self.minpoly),
            "degree": self.degree,
            "alpha": None if alpha is None else str(alpha),
            "alpha_field": None if alpha is None else alpha.k,
            "mult_in_phi_prime": self.mult_in_phi_prime,
            "raw_e": self.raw_e,
            "effective_e": self.effective_e,
        }


@dataclass(frozen=True)
class NormalizedEquation:
    phi: Poly
    original: Poly
    places: tuple[Place, ...]
    transforms: tuple[Transform, ...] = field(default=())

    @property
    def d(self) -> int:
        return self.phi.degree

    @property
    def m(self) -> int:
        return self.d // 10

    @property
    def k(self) -> int:
        return self.phi.k

    def geometric_places(self) -> list[Place]:
        """Each orbit repeated once per geometric point."""
        return [p for p in self.places for _ in range(p.degree)]

    def to_json(self) -> dict:
        return {
            "phi": str(self.phi),
            "field": self.k,
            "d": self.d,
            "m": self.m,
            "places": [p.to_json() for p in self.places],
            "transforms": [t.to_json() for t in self.transforms],
        }


# ---------------------------------------------------------------------------


def strip_fifth_powers(phi: Poly) -> tuple[Poly, Poly]:
    """Split phi = rest + h^5 where rest has no exponent divisible by 5."""
    fifth = Poly(phi.k, (c if i % 5 == 0 else 0 for i, c in enumerate(phi.c)))
    return phi - fifth, fifth_root(fifth)


def taylor_residues(phi: Poly, g: Poly, upto: int) -> list[Poly]:
    """Hasse derivatives phi^[i] mod g for i = 0..upto (Taylor data at a root of g)."""
    return [phi.hasse(i) % g for i in range(upto + 1)]


def _local_exponents(coeffs: list[bool]) -> tuple[int, int]:
    """(raw_e, e') from a nonvanishing pattern of Taylor coefficients."""
    raw = next(i for i in range(1, len(coeffs)) if coeffs[i])
    e = next(i for i in range(1, len(coeffs)) if coeffs[i] and i % 5)
    return raw, e


def _reduce_e(e: int) -> int:
    # local e-drops remove s^10 repeatedly; e is never divisible by 5 here
    return e % 10


def _taylor_span(phi: Poly) -> int:
    # the first non-fifth-power coefficient appears before index deg(phi)+1
    return phi.degree


EAGER_ROOT_EXT = 6  # beyond this, representative roots are computed on request


@functools.lru_cache(maxsize=1024)
def orbit_root(g: Poly) -> Optional[FieldElement]:
    """A representative root of the irreducible g (None above the field cap)."""
    K = g.k * g.degree
    if K > MAX_EXT:
        return None
    return roots_of_irreducible(g, K)[0]


def _place_from_factor(phi: Poly, g: Poly, mult: int) -> Place:
    residues = taylor_residues(phi, g, _taylor_span(phi))
    pattern = [not r.is_zero() for r in residues]
    raw, e = _local_exponents(pattern)
    eager = g.k * g.degree <= EAGER_ROOT_EXT or raw == 5
    alpha = orbit_root(g) if eager else None
    gamma = None
    if raw == 5 and alpha is not None:
        a5 = phi.embed(alpha.k).hasse(5)(alpha)
        gamma = (-a5).fifth_root()
    return Place(
        minpoly=g,
        degree=g.degree,
        alpha=alpha,
        mult_in_phi_prime=mult,
        raw_e=raw,
        effective_e=_reduce_e(e),
        gamma=gamma,
    )


def critical_places(phi: Poly) -> list[Place]:
    dphi = phi.derivative()
    if dphi.is_zero():
        raise DegenerateEquation("phi' vanishes identically")
    places = [_place_from_factor(phi, g, m) for g, m in factor(dphi)]
    return sorted(places, key=lambda p: (p.degree, _sort_alpha(p), tuple(reversed(p.minpoly.c))))


def _sort_alpha(p: Place) -> tuple:
    return p.alpha.sort_key() if p.alpha is not None else ()


def normalize(phi: Poly) -> NormalizedEquation:
    """Reduce phi to standard form and locate its critical places."""
    if phi.is_constant():
        raise DegenerateEquation("phi must be nonconstant")
    original = phi
    log: list[Transform] = []
    one = Poly.one(phi.k)
    while True:
        rest, h = strip_fifth_powers(phi)
        if not h.is_zero():
            log.append(Transform("strip", one, h))
            phi = rest
        if phi.is_zero():
            raise DegenerateEquation(f"{original} is a fifth power up to the reductions")
        dropped = False
        for g, _ in factor(phi.derivative()):
            residues = taylor_residues(phi, g, 9)
            if all(r.is_zero() for r in residues[1:10]):
                r = phi % g**10
                h = fifth_root(r)
                log.append(Transform("e_drop", g, h))
                phi = (phi - r) // g**10
                dropped = True
                break
        if not dropped:
            break
    places = critical_places(phi)
    for p in places:
        if p.gamma is not None:
            log.append(
                Transform(
                    "local_shift",
                    p.minpoly,
                    Poly.zero(phi.k),
                    gamma=p.gamma,
                    alpha=p.alpha,
                )
            )
    return NormalizedEquation(phi=phi, original=original, places=tuple(places), transforms=tuple(log))


def replay(original: Poly, transforms: tuple[Transform, ...]) -> Poly:
    phi = original
    for tr in transforms:
        phi = tr.apply(phi)
    return phi


def effective_e_at_place(phi: Poly, alpha: FieldElement) -> int:
    """Local invariant e at a critical point after the e = 5 shift and e-drops."""
    K = alpha.k
    if K % phi.k:
        raise ValueError("alpha must live in an extension of the coefficient field")
    psi = phi.embed(K)
    coeffs = [bool(psi.hasse(i)(alpha)) for i in range(psi.degree + 1)]
    if coeffs[1]:
        raise NotCritical(f"{alpha} is not a root of phi'")
    if not any(c for i, c in enumerate(coeffs) if i % 5):
        raise DegenerateEquation("phi is locally a fifth power")
    _, e = _local_exponents(coeffs)
    return _reduce_e(e)


def local_shift_constant(phi: Poly, alpha: FieldElement) -> FieldElement:
    """gamma with gamma^5 = -phi_alpha(alpha), where phi - phi(alpha) = (t-alpha)^5 phi_alpha."""
    a5 = phi.embed(alpha.k).hasse(5)(alpha)
    return (-a5).fifth_root()
