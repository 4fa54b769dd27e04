"""Exact arithmetic in GF(5^k) and in the polynomial ring GF(5^k)[t].

Elements of GF(5^k) are coordinate vectors in the power basis of a fixed
primitive defining polynomial.  The default table is a Conway-compatible
system (checked by the test-suite), so the generator ``g`` of GF(5^k) maps to
``g_K^((5^K-1)/(5^k-1))`` under the canonical embedding into GF(5^K).  The
table can be replaced through the ``QHYP5_FIELD_TABLE`` environment variable
(a JSON object mapping ``k`` to the low-to-high coefficient list).

Internally an element is an integer *code* ``sum c_i 5^i``; :class:`FieldElement`
wraps a code together with its extension degree.  Polynomials store a dense
tuple of codes.
"""

from __future__ import annotations

import functools
import json
import math
import os
import random
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence

P = 5
MAX_EXT = 12
_TABLE_LIMIT = 5**6  # log/exp tables are built up to this field size

# Conway polynomials for p = 5, coefficients low -> high (monic).
DEFAULT_MODULI: dict[int, tuple[int, ...]] = {
    1: (3, 1),
    2: (2, 4, 1),
    3: (3, 3, 0, 1),
    4: (2, 4, 4, 0, 1),
    5: (3, 4, 0, 0, 0, 1),
    6: (2, 0, 1, 4, 1, 0, 1),
    7: (3, 3, 0, 0, 0, 0, 0, 1),
    8: (2, 4, 3, 0, 1, 0, 0, 0, 1),
    9: (3, 1, 0, 2, 0, 0, 0, 0, 0, 1),
    10: (2, 1, 4, 2, 3, 3, 0, 0, 0, 0, 1),
    11: (3, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1),
    12: (2, 2, 3, 4, 4, 0, 1, 1, 0, 0, 0, 0, 1),
}


class FieldError(ValueError):
    """Raised for unsupported extension degrees or mixed-field operations."""


class SplittingFieldTooLarge(FieldError):
    """The splitting field exceeds the desk-scale cap ``MAX_EXT``."""


class NotFifthPower(ValueError):
    """``fifth_root`` was given a polynomial with an exponent not divisible by 5."""

    def __init__(self, exponent: int):
        super().__init__(f"not a fifth power: monomial of degree {exponent} obstructs")
        self.exponent = exponent


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _load_moduli() -> dict[int, tuple[int, ...]]:
    moduli = dict(DEFAULT_MODULI)
    path = os.environ.get("QHYP5_FIELD_TABLE")
    if path:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        for key, coeffs in raw.items():
            k = int(key)
            coeffs = tuple(int(c) % P for c in coeffs)
            if len(coeffs) != k + 1 or coeffs[-1] != 1:
                raise FieldError(f"defining polynomial for k={k} must be monic of degree {k}")
            moduli[k] = coeffs
    return moduli


_MODULI = _load_moduli()


def _to_digits(code: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        code, r = divmod(code, P)
        out.append(r)
    return out


def _from_digits(digits: Sequence[int]) -> int:
    code = 0
    for d in reversed(digits):
        code = code * P + d
    return code


class GF:
    """The field GF(5^k) acting on integer codes."""

    def __init__(self, k: int):
        if not 1 <= k <= MAX_EXT:
            raise FieldError(f"extension degree {k} outside 1..{MAX_EXT}")
        self.k = k
        self.q = P**k
        self.modulus = _MODULI[k]
        # generator: the class of x, i.e. a root of the defining polynomial
        self.gen = (-self.modulus[0]) % P if k == 1 else P
        self._exp: list[int] | None = None
        self._log: dict[int, int] | None = None
        if self.q <= _TABLE_LIMIT:
            self._build_tables()

    # -- tables -------------------------------------------------------------
    def _build_tables(self) -> None:
        exp = [1]
        x = 1
        for _ in range(self.q - 2):
            x = self._mul_slow(x, self.gen)
            exp.append(x)
        log = {c: i for i, c in enumerate(exp)}
        if len(log) != self.q - 1:
            raise FieldError(f"defining polynomial for k={self.k} is not primitive")
        self._exp, self._log = exp, log

    # -- basic arithmetic ---------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % P
        out, place = 0, 1
        while a or b:
            a, da = divmod(a, P)
            b, db = divmod(b, P)
            out += ((da + db) % P) * place
            place *= P
        return out

    def neg(self, a: int) -> int:
        if self.k == 1:
            return -a % P
        out, place = 0, 1
        while a:
            a, da = divmod(a, P)
            out += (-da % P) * place
            place *= P
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def scale(self, a: int, c: int) -> int:
        """Multiply by a prime-field scalar ``c``."""
        c %= P
        if c == 0 or a == 0:
            return 0
        if c == 1:
            return a
        if self.k == 1:
            return a * c % P
        return _from_digits([d * c % P for d in _to_digits(a, self.k)])

    def _mul_slow(self, a: int, b: int) -> int:
        k, mod = self.k, self.modulus
        if k == 1:
            return a * b % P
        da, db = _to_digits(a, k), _to_digits(b, k)
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    if y:
                        prod[i + j] += x * y
        for i in range(2 * k - 2, k - 1, -1):
            c = prod[i] % P
            if c:
                for j in range(k):
                    prod[i - k + j] -= c * mod[j]
        return _from_digits([c % P for c in prod[:k]])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.k == 1:
            return a * b % P
        if self._exp is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]
        return self._mul_slow(a, b)

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n == 0:
                return 1
            if n < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 0
        n %= self.q - 1
        if self._exp is not None:
            return self._exp[self._log[a] * n % (self.q - 1)]
        result = 1
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def frobenius(self, a: int, times: int = 1) -> int:
        return self.pow(a, pow(P, times % self.k, self.q - 1)) if a else 0

    def fifth_root(self, a: int) -> int:
        """The unique b with b^5 = a (inverse Frobenius)."""
        return self.frobenius(a, self.k - 1)

    def log(self, a: int) -> int:
        """Discrete logarithm to the base of the generator."""
        if a == 0:
            raise ValueError("log of zero")
        if self._log is not None:
            return self._log[a]
        n = self.q - 1
        m = math.isqrt(n) + 1
        baby = {}
        x = 1
        for j in range(m):
            baby.setdefault(x, j)
            x = self.mul(x, self.gen)
        step = self.inv(self.pow(self.gen, m))
        y = a
        for i in range(m):
            if y in baby:
                return (i * m + baby[y]) % n
            y = self.mul(y, step)
        raise FieldError("discrete log failed")  # pragma: no cover

    def minimal_degree(self, a: int) -> int:
        """Degree of the smallest subfield containing ``a``."""
        for j in sorted(d for d in range(1, self.k + 1) if self.k % d == 0):
            if self.frobenius(a, j) == a:
                return j
        return self.k  # pragma: no cover

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))


@functools.lru_cache(maxsize=None)
def get_field(k: int) -> GF:
    return GF(k)


@dataclass(frozen=True)
class FieldElement:
    """An element of GF(5^k); ``code`` packs the coordinate vector base 5."""

    k: int
    code: int

    @classmethod
    def from_coords(cls, k: int, coords: Sequence[int]) -> "FieldElement":
        if len(coords) > k:
            raise FieldError("too many coordinates")
        return cls(k, _from_digits([int(c) % P for c in coords]))

    @classmethod
    def from_int(cls, k: int, n: int) -> "FieldElement":
        return cls(k, n % P)

    @classmethod
    def generator(cls, k: int) -> "FieldElement":
        return cls(k, get_field(k).gen)

    @property
    def field(self) -> GF:
        return get_field(self.k)

    @property
    def coords(self) -> tuple[int, ...]:
        return tuple(_to_digits(self.code, self.k))

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.k != self.k:
                raise FieldError(f"mixed fields GF(5^{self.k}) and GF(5^{other.k})")
            return other.code
        if isinstance(other, int):
            return other % P
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._other(other)
        return FieldElement(self.k, self.field.add(self.code, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return FieldElement(self.k, self.field.sub(self.code, o))

    def __rsub__(self, other):
        o = self._other(other)
        return FieldElement(self.k, self.field.sub(o, self.code))

    def __neg__(self):
        return FieldElement(self.k, self.field.neg(self.code))

    def __mul__(self, other):
        o = self._other(other)
        return FieldElement(self.k, self.field.mul(self.code, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return FieldElement(self.k, self.field.div(self.code, o))

    def __pow__(self, n: int):
        return FieldElement(self.k, self.field.pow(self.code, n))

    def __bool__(self) -> bool:
        return self.code != 0

    def inverse(self) -> "FieldElement":
        return FieldElement(self.k, self.field.inv(self.code))

    def frobenius(self, times: int = 1) -> "FieldElement":
        return FieldElement(self.k, self.field.frobenius(self.code, times))

    def fifth_root(self) -> "FieldElement":
        return FieldElement(self.k, self.field.fifth_root(self.code))

    def minimal_degree(self) -> int:
        return self.field.minimal_degree(self.code)

    def embed(self, target_k: int) -> "FieldElement":
        return FieldElement(target_k, embed_code(self.code, self.k, target_k))

    def sort_key(self) -> tuple:
        return (self.minimal_degree(), self.coords)

    def __str__(self) -> str:
        return format_coeff(self.code, self.k)

    def __repr__(self) -> str:
        return f"FieldElement(GF(5^{self.k}), {self})"


@functools.lru_cache(maxsize=None)
def _embedding_image(k: int, target_k: int) -> int:
    big = get_field(target_k)
    return big.pow(big.gen, (big.q - 1) // (P**k - 1))


def embed_code(code: int, k: int, target_k: int) -> int:
    """Canonical embedding GF(5^k) -> GF(5^target_k) for k | target_k."""
    if target_k == k:
        return code
    if target_k % k:
        raise FieldError(f"GF(5^{k}) does not embed in GF(5^{target_k})")
    if code < P:  # prime-field elements have the same code everywhere
        return code
    big = get_field(target_k)
    beta = _embedding_image(k, target_k)
    out, power = 0, 1
    for d in _to_digits(code, k):
        if d:
            out = big.add(out, big.scale(power, d))
        power = big.mul(power, beta)
    return out


def format_coeff(code: int, k: int) -> str:
    if code < P:
        return str(code)
    j = get_field(k).log(code)
    return "g" if j == 1 else f"g^{j}"


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


def _trim(c: Iterable[int]) -> tuple[int, ...]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class Poly:
    """A univariate polynomial over GF(5^k) (dense codes, low degree first)."""

    __slots__ = ("k", "c", "_hash")

    def __init__(self, k: int, codes: Iterable[int] = ()):
        self.k = k
        self.c = _trim(codes)
        self._hash = None

    # -- construction ---------------------------------------------------------
    @classmethod
    def zero(cls, k: int = 1) -> "Poly":
        return cls(k, ())

    @classmethod
    def one(cls, k: int = 1) -> "Poly":
        return cls(k, (1,))

    @classmethod
    def t(cls, k: int = 1) -> "Poly":
        return cls(k, (0, 1))

    @classmethod
    def const(cls, value, k: int = 1) -> "Poly":
        return cls(k, (_as_code(value, k),))

    @classmethod
    def monomial(cls, exponent: int, coeff=1, k: int = 1) -> "Poly":
        codes = [0] * (exponent + 1)
        codes[exponent] = _as_code(coeff, k)
        return cls(k, codes)

    @classmethod
    def from_dict(cls, mapping: Mapping[int, object], k: int = 1) -> "Poly":
        if not mapping:
            return cls(k)
        codes = [0] * (max(mapping) + 1)
        for e, v in mapping.items():
            if e < 0:
                raise ValueError("negative exponent")
            codes[e] = get_field(k).add(codes[e], _as_code(v, k))
        return cls(k, codes)

    @classmethod
    def from_ints(cls, coeffs: Sequence[int], k: int = 1) -> "Poly":
        """Prime-field coefficients, low degree first."""
        return cls(k, (int(c) % P for c in coeffs))

    @classmethod
    def from_roots(cls, roots: Iterable[tuple["FieldElement", int]], k: int) -> "Poly":
        out = cls.one(k)
        for r, m in roots:
            out = out * cls(k, (get_field(k).neg(_as_code(r, k)), 1)) ** m
        return out

    # -- accessors ----------------------------------------------------------
    @property
    def field(self) -> GF:
        return get_field(self.k)

    @property
    def degree(self) -> int:
        return len(self.c) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.c

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    def coeff(self, i: int) -> FieldElement:
        return FieldElement(self.k, self.c[i] if 0 <= i < len(self.c) else 0)

    @property
    def coeffs(self) -> dict[int, FieldElement]:
        return {i: FieldElement(self.k, c) for i, c in enumerate(self.c) if c}

    def lc(self) -> FieldElement:
        if not self.c:
            raise ValueError("zero polynomial has no leading coefficient")
        return FieldElement(self.k, self.c[-1])

    def exponents(self) -> list[int]:
        return [i for i, c in enumerate(self.c) if c]

    # -- ring structure -----------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.k != self.k:
                raise FieldError(f"mixed fields GF(5^{self.k}) and GF(5^{other.k})")
            return other
        if isinstance(other, (int, FieldElement)):
            return Poly.const(other, self.k)
        return NotImplemented  # type: ignore[return-value]

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, FieldElement)):
            other = Poly.const(other, self.k)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.k == other.k and self.c == other.c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.k, self.c))
        return self._hash

    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, y in enumerate(b):
            if y:
                out[i] = F.add(out[i], y)
        return Poly(self.k, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return Poly(self.k, (F.neg(x) for x in self.c))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        a, b = self.c, other.c
        if not a or not b:
            return Poly(self.k)
        if self.k == 1:
            out = [0] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        out[i + j] += x * y
            return Poly(1, (v % P for v in out))
        F = self.field
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] = F.add(out[i + j], F.mul(x, y))
        return Poly(self.k, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result, base = Poly.one(self.k), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, coeff) -> "Poly":
        code = _as_code(coeff, self.k)
        F = self.field
        return Poly(self.k, (F.mul(x, code) for x in self.c))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.c)
        db = other.degree
        inv_lc = F.inv(other.c[-1])
        quot = [0] * max(len(rem) - db, 0)
        for i in range(len(rem) - 1, db - 1, -1):
            c = rem[i]
            if not c:
                continue
            f = F.mul(c, inv_lc)
            quot[i - db] = f
            for j, y in enumerate(other.c):
                if y:
                    rem[i - db + j] = F.sub(rem[i - db + j], F.mul(f, y))
        return Poly(self.k, quot), Poly(self.k, rem[:db] if db > 0 else ())

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        F = self.field
        inv = F.inv(self.c[-1])
        return Poly(self.k, (F.mul(x, inv) for x in self.c))

    # -- calculus and evaluation -------------------------------------------------
    def derivative(self) -> "Poly":
        F = self.field
        return Poly(self.k, (F.scale(c, i) for i, c in enumerate(self.c) if i > 0))

    def hasse(self, i: int) -> "Poly":
        """The i-th Hasse derivative: sum binom(j, i) a_j t^(j-i)."""
        F = self.field
        return Poly(
            self.k,
            (F.scale(c, math.comb(j, i) % P) for j, c in enumerate(self.c) if j >= i),
        )

    def __call__(self, x) -> FieldElement:
        code = _as_code(x, self.k)
        F = self.field
        acc = 0
        for c in reversed(self.c):
            acc = F.add(F.mul(acc, code), c)
        return FieldElement(self.k, acc)

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly(self.k)
        for c in reversed(self.c):
            acc = acc * other + Poly(self.k, (c,))
        return acc

    def embed(self, target_k: int) -> "Poly":
        return Poly(target_k, (embed_code(c, self.k, target_k) for c in self.c))

    def frobenius_coeffs(self, times: int = 1) -> "Poly":
        F = self.field
        return Poly(self.k, (F.frobenius(c, times) for c in self.c))

    def without_fifth_power_terms(self) -> "Poly":
        return Poly(self.k, (0 if i % P == 0 else c for i, c in enumerate(self.c)))

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly(GF(5^{self.k}), {format_poly(self)})"


def _as_code(value, k: int) -> int:
    if isinstance(value, FieldElement):
        if value.k != k:
            if k % value.k == 0:
                return embed_code(value.code, value.k, k)
            raise FieldError(f"GF(5^{value.k}) element in GF(5^{k}) context")
        return value.code
    if isinstance(value, int):
        return value % P
    raise TypeError(f"cannot interpret {value!r} as a field element")


def derivative(p: Poly) -> Poly:
    return p.derivative()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def powmod(base: Poly, n: int, mod: Poly) -> Poly:
    result = Poly.one(base.k) % mod
    base = base % mod
    while n:
        if n & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        n >>= 1
    return result


def fifth_root(p: Poly) -> Poly:
    """Return q with q^5 = p, or raise :class:`NotFifthPower`."""
    F = p.field
    out = []
    for i, c in enumerate(p.c):
        if i % P == 0:
            out.append(F.fifth_root(c) if c else 0)
        elif c:
            raise NotFifthPower(i)
    return Poly(p.k, out)


# ---------------------------------------------------------------------------
# factorisation
# ---------------------------------------------------------------------------


def squarefree_decomposition(f: Poly) -> list[tuple[Poly, int]]:
    """Monic squarefree pairwise-coprime factors with multiplicities."""
    if f.is_zero():
        raise ValueError("zero polynomial")
    f = f.monic()
    out: dict[int, Poly] = {}

    def add(g: Poly, m: int) -> None:
        if g.degree > 0:
            out[m] = out[m] * g if m in out else g

    def rec(f: Poly, scale: int) -> None:
        df = f.derivative()
        if df.is_zero():
            if f.degree > 0:
                rec(fifth_root(f).monic(), scale * P)
            return
        c = poly_gcd(f, df)
        w = f // c
        i = 1
        while w.degree > 0:
            y = poly_gcd(w, c)
            add(w // y, i * scale)
            w, c = y, c // y
            i += 1
        if c.degree > 0:
            rec(fifth_root(c).monic(), scale * P)

    rec(f, 1)
    return [(out[m], m) for m in sorted(out)]


def distinct_degree_factorization(f: Poly) -> list[tuple[Poly, int]]:
    """Split a monic squarefree f into products of irreducibles of equal degree."""
    q = f.field.q
    out = []
    x = Poly.t(f.k)
    h = x % f
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = powmod(h, q, f)
        g = poly_gcd(f, h - x)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def equal_degree_factorization(f: Poly, d: int, seed: int = 0) -> list[Poly]:
    """Cantor-Zassenhaus splitting of f (monic, product of degree-d irreducibles)."""
    if f.degree == d:
        return [f]
    if f.degree < d or f.degree % d:
        raise ValueError("degree mismatch in equal-degree factorisation")
    rng = random.Random(seed)
    q = f.field.q
    exponent = (q**d - 1) // 2
    while True:
        a = Poly(f.k, [rng.randrange(q) for _ in range(f.degree)])
        if a.degree < 1:
            continue
        g = poly_gcd(f, a)
        if 0 < g.degree < f.degree:
            break
        g = poly_gcd(f, powmod(a, exponent, f) - Poly.one(f.k))
        if 0 < g.degree < f.degree:
            break
    return equal_degree_factorization(g, d, seed + 1) + equal_degree_factorization(
        f // g, d, seed + 1
    )


def _poly_key(p: Poly) -> tuple:
    return (p.degree, tuple(reversed(p.c)))


@functools.lru_cache(maxsize=4096)
def factor(f: Poly) -> tuple[tuple[Poly, int], ...]:
    """Monic irreducible factors with multiplicities, deterministically ordered."""
    out = []
    for g, m in squarefree_decomposition(f):
        for h, d in distinct_degree_factorization(g):
            for irr in equal_degree_factorization(h, d):
                out.append((irr, m))
    return tuple(sorted(out, key=lambda x: (_poly_key(x[0]), x[1])))


def splitting_degree(f: Poly) -> int:
    degs = [g.degree for g, _ in factor(f)]
    return f.k * (math.lcm(*degs) if degs else 1)


def roots_of_irreducible(g: Poly, target_k: int) -> list[FieldElement]:
    """All roots in GF(5^target_k) of an irreducible g over GF(5^g.k)."""
    G = g.embed(target_k)
    F = get_field(target_k)
    if F.q <= 125:
        return [FieldElement(target_k, a) for a in F.elements() if not G(FieldElement(target_k, a))]
    linear = min(equal_degree_factorization(G.monic(), 1), key=_poly_key)
    root = FieldElement(target_k, F.neg(linear.c[0]))
    roots = [root]
    r = root
    for _ in range(g.degree - 1):
        r = r.frobenius(g.k)
        roots.append(r)
    return roots


def roots_with_multiplicity(p: Poly) -> list[tuple[FieldElement, int]]:
    """All roots of p in its splitting field with multiplicities."""
    if p.is_zero():
        raise ValueError("zero polynomial has no finite root set")
    K = splitting_degree(p)
    if K > MAX_EXT:
        raise SplittingFieldTooLarge(f"splitting field GF(5^{K}) exceeds cap GF(5^{MAX_EXT})")
    out = []
    for g, m in factor(p):
        for r in roots_of_irreducible(g, K):
            out.append((r, m))
    return sorted(out, key=lambda rm: rm[0].sort_key())


# ---------------------------------------------------------------------------
# parsing and printing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(g)|(t)|(\^)|(\*)|(\+)|(-))")


def parse_poly(text: str, k: int = 1) -> Poly:
    """Parse the grammar ``poly := term ('+' term)*`` (see README)."""
    if not 1 <= k <= MAX_EXT:
        raise ParseError(f"coefficient field GF(5^{k}) not available", 0)
    F = get_field(k)
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = ["int", "g", "t", "^", "*", "+", "-"][m.lastindex - 1]
        tokens.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
        pos = m.end()
    if not tokens:
        raise ParseError("empty expression", 0)
    tokens.append(("end", "", len(text)))
    i = 0

    def peek() -> tuple[str, str, int]:
        return tokens[i]

    def take(kind: str) -> tuple[str, str, int]:
        nonlocal i
        tok = tokens[i]
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        i += 1
        return tok

    def uint() -> int:
        return int(take("int")[1])

    def coeff() -> int | None:
        kind = peek()[0]
        if kind == "int":
            return uint() % P
        if kind == "g":
            take("g")
            e = 1
            if peek()[0] == "^":
                take("^")
                e = uint()
            return F.pow(F.gen, e)
        return None

    terms: dict[int, int] = {}
    sign = 1
    if peek()[0] == "-":
        take("-")
        sign = -1
    while True:
        c = coeff()
        exp = 0
        if peek()[0] == "*":
            if c is None:
                raise ParseError("'*' without coefficient", peek()[2])
            take("*")
            if peek()[0] != "t":
                raise ParseError("expected 't' after '*'", peek()[2])
        if peek()[0] == "t":
            take("t")
            exp = 1
            if peek()[0] == "^":
                take("^")
                exp = uint()
        elif c is None:
            raise ParseError("expected a term", peek()[2])
        code = 1 if c is None else c
        if sign < 0:
            code = F.neg(code)
        terms[exp] = F.add(terms.get(exp, 0), code)
        kind = peek()[0]
        if kind == "end":
            break
        if kind == "+":
            take("+")
            sign = 1
            if peek()[0] == "-":
                take("-")
                sign = -1
        elif kind == "-":
            take("-")
            sign = -1
        else:
            raise ParseError(f"unexpected {peek()[1]!r}", peek()[2])
    if not terms:
        return Poly(k)
    codes = [0] * (max(terms) + 1)
    for e, code in terms.items():
        codes[e] = code
    return Poly(k, codes)


def format_poly(p: Poly) -> str:
    """Canonical printer; the output parses back to the same polynomial."""
    if p.is_zero():
        return "0"
    parts = []
    for e in range(p.degree, -1, -1):
        c = p.c[e]
        if not c:
            continue
        cs = format_coeff(c, p.k)
        if e == 0:
            parts.append(cs)
            continue
        var = "t" if e == 1 else f"t^{e}"
        parts.append(var if c == 1 else f"{cs}*{var}")
    return "+".join(parts)
