"""Exact arithmetic in the cyclotomic field Q(zeta_n).

Elements are stored on the power basis 1, zeta, ..., zeta^(phi(n)-1) after
reduction modulo the n-th cyclotomic polynomial, as a tuple of integer
numerators over one positive common denominator.  The pair is kept in lowest
terms, so equality of values is equality of representations.
"""

from __future__ import annotations

import cmath
import math
import os
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import numpy as np

DEFAULT_ORDER_ENV = "QUTRITBRAID_FIELD_ORDER"


class FieldMismatchError(ValueError):
    """Two operands live in cyclotomic fields of different order."""


class FieldTooSmallError(ValueError):
    """A requested constant does not exist in the ambient field."""


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # den is monic; coefficient lists are lowest degree first
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for k in range(len(num) - len(den), -1, -1):
        c = num[k + len(den) - 1]
        q[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    rem = num[: len(den) - 1]
    return q, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError(f"cyclotomic order must be positive, got {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
            assert not any(rem)
    return tuple(poly)


class CyclotomicField:
    """The field Q(zeta_n) with its power basis and reduction data."""

    def __init__(self, n: int):
        self.n = n
        self.modulus = cyclotomic_polynomial(n)
        self.phi = len(self.modulus) - 1
        # zeta^k on the power basis for k = 0..n-1
        rows = []
        vec = [1] + [0] * (self.phi - 1)
        for _ in range(n):
            rows.append(tuple(vec))
            vec = self._times_zeta(vec)
        self._powers = tuple(rows)
        self.powers = np.array(rows, dtype=np.int64)
        self.powers.flags.writeable = False
        # number of roots of unity in the field
        self.unit_count = n if n % 2 == 0 else 2 * n

    def _times_zeta(self, vec: list[int]) -> list[int]:
        top = vec[-1]
        out = [0] + list(vec[:-1])
        if top:
            for j in range(self.phi):
                out[j] -= top * self.modulus[j]
        return out

    def reduce(self, coeffs: list[int]) -> list[int]:
        """Reduce an integer coefficient list of any length modulo Phi_n."""
        phi = self.phi
        c = list(coeffs)
        m = self.modulus
        for t in range(len(c) - 1, phi - 1, -1):
            top = c[t]
            if top:
                base = t - phi
                for j in range(phi):
                    if m[j]:
                        c[base + j] -= top * m[j]
        c = c[:phi]
        if len(c) < phi:
            c.extend([0] * (phi - len(c)))
        return c

    def power_vector(self, k: int) -> tuple[int, ...]:
        return self._powers[k % self.n]

    def contains_order(self, m: int) -> bool:
        """Whether the m-th roots of unity lie in this field."""
        return self.unit_count % m == 0

    def __repr__(self) -> str:
        return f"CyclotomicField({self.n})"

    def __reduce__(self):
        return (cyclotomic_field, (self.n,))


@lru_cache(maxsize=None)
def cyclotomic_field(n: int) -> CyclotomicField:
    return CyclotomicField(n)


def default_order() -> int:
    return int(os.environ.get(DEFAULT_ORDER_ENV, "72"))


def default_field() -> CyclotomicField:
    return cyclotomic_field(default_order())


def _as_field(field) -> CyclotomicField:
    if field is None:
        return default_field()
    if isinstance(field, CyclotomicField):
        return field
    return cyclotomic_field(int(field))


class CyclotomicNumber:
    """An exact element of Q(zeta_n)."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field: CyclotomicField, num, den: int = 1):
        num = tuple(int(c) for c in num)
        if len(num) != field.phi:
            raise ValueError(f"expected {field.phi} coefficients, got {len(num)}")
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num = tuple(-c for c in num)
            den = -den
        g = den
        for c in num:
            if g == 1:
                break
            g = math.gcd(g, c)
        if g > 1:
            num = tuple(c // g for c in num)
            den //= g
        if not any(num):
            den = 1
        self.field = field
        self.num = num
        self.den = den
        self._hash = None

    # constructors

    @classmethod
    def from_rational(cls, value, field=None) -> "CyclotomicNumber":
        field = _as_field(field)
        q = Fraction(value)
        return cls(field, (q.numerator,) + (0,) * (field.phi - 1), q.denominator)

    @classmethod
    def from_coefficients(cls, coeffs, field=None) -> "CyclotomicNumber":
        """Build from rational coefficients on powers of zeta (any length)."""
        field = _as_field(field)
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for q in fr:
            den = den * q.denominator // math.gcd(den, q.denominator)
        ints = [int(q * den) for q in fr]
        return cls(field, field.reduce(ints), den)

    @classmethod
    def zero(cls, field=None) -> "CyclotomicNumber":
        return cls.from_rational(0, field)

    @classmethod
    def one(cls, field=None) -> "CyclotomicNumber":
        return cls.from_rational(1, field)

    # coercion

    def _coerce(self, other) -> "CyclotomicNumber":
        if isinstance(other, CyclotomicNumber):
            if other.field is not self.field and other.field.n != self.field.n:
                raise FieldMismatchError(
                    f"cannot combine Q(zeta_{self.field.n}) with Q(zeta_{other.field.n})"
                )
            return other
        if isinstance(other, (int, Rational)):
            return CyclotomicNumber.from_rational(other, self.field)
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return CyclotomicNumber(self.field, (a + b for a, b in zip(self.num, o.num)), self.den)
        return CyclotomicNumber(
            self.field,
            (a * o.den + b * self.den for a, b in zip(self.num, o.num)),
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.field, (-a for a in self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        phi = self.field.phi
        prod = [0] * (2 * phi - 1)
        for i, a in enumerate(self.num):
            if a:
                for j, b in enumerate(o.num):
                    if b:
                        prod[i + j] += a * b
        return CyclotomicNumber(self.field, self.field.reduce(prod), self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.one(self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "CyclotomicNumber":
        """Complex conjugation, zeta -> zeta^-1."""
        f = self.field
        out = [0] * f.phi
        for k, c in enumerate(self.num):
            if c:
                row = f.power_vector(-k)
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return CyclotomicNumber(f, out, self.den)

    def times_root(self, k: int) -> "CyclotomicNumber":
        """self * zeta^k."""
        f = self.field
        out = [0] * f.phi
        for i, c in enumerate(self.num):
            if c:
                row = f.power_vector(i + k)
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return CyclotomicNumber(f, out, self.den)

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        f = self.field
        s = _poly_inverse_mod([Fraction(c, self.den) for c in self.num],
                              [Fraction(c) for c in f.modulus])
        return CyclotomicNumber.from_coefficients(s, f)

    # predicates

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def is_real(self) -> bool:
        return self == self.conj()

    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.field.n == other.field.n and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Rational)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.n, self.num, self.den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # floats, display only

    def to_complex(self) -> complex:
        n = self.field.n
        total = 0j
        for k, c in enumerate(self.num):
            if c:
                total += c * cmath.exp(2j * math.pi * k / n)
        return total / self.den

    def __complex__(self):
        return self.to_complex()

    # roots of unity

    def as_root_multiple(self) -> tuple[Fraction, int] | None:
        """Return (r, k) with self == r * zeta_n^k, r rational, else None.

        k is chosen in range(n) with r > 0 when possible.
        """
        if self.is_zero():
            return None
        f = self.field
        found = None
        for k in range(f.n):
            y = self.times_root(-k)
            if y.is_rational():
                r = y.rational_value()
                if r > 0:
                    return r, k
                if found is None:
                    found = (r, k)
        return found

    def root_index(self) -> int | None:
        """k with self == zeta_n^k, if self is a root of unity of this form."""
        rm = self.as_root_multiple()
        if rm is None:
            return None
        r, k = rm
        if r == 1:
            return k
        if r == -1 and self.field.n % 2 == 0:
            return (k + self.field.n // 2) % self.field.n
        return None

    # text forms

    def serialize(self) -> str:
        parts = []
        for c in self.num:
            q = Fraction(c, self.den)
            parts.append(str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}")
        return f"cyc({self.field.n})[{', '.join(parts)}]"

    def as_surd_root_multiple(self) -> tuple[Fraction, int, int] | None:
        """(r, m, k) with self == r * sqrt(m) * zeta_n^k, m in (1, 2, 3, 6), else None.

        k is taken in [0, n/2) for even n, the sign going into r.
        """
        if self.is_zero():
            return None
        n = self.field.n
        for m in (1, 2, 3, 6):
            try:
                s = sqrt_constant(m, self.field)
            except FieldTooSmallError:
                continue
            rm = (self / s).as_root_multiple() if m > 1 else self.as_root_multiple()
            if rm is not None:
                r, k = rm
                if n % 2 == 0 and 2 * k >= n:
                    r, k = -r, k - n // 2
                return r, m, k
        return None

    def pretty(self) -> str:
        """`r*sqrt(m)*zeta(n)^k` when possible, otherwise the canonical form."""
        if self.is_zero():
            return "0"
        srm = self.as_surd_root_multiple()
        if srm is None:
            return self.serialize()
        r, m, k = srm
        parts = []
        if abs(r) != 1 or (m == 1 and k == 0):
            parts.append(_fmt_rational(abs(r)))
        if m > 1:
            parts.append(f"sqrt({m})")
        if k:
            parts.append(f"zeta({self.field.n})^{k}")
        return ("-" if r < 0 else "") + "*".join(parts)

    def latex(self) -> str:
        """Phase notation such as ``-e^{4i\\pi/9}`` or ``\\frac{1}{2}\\sqrt{2}e^{i\\pi/3}``."""
        if self.is_zero():
            return "0"
        srm = self.as_surd_root_multiple()
        if srm is None:
            return self.pretty()
        r, m, k = srm
        sign = "-" if r < 0 else ""
        r = abs(r)
        coef = "" if r == 1 else (str(r.numerator) if r.denominator == 1
                                  else f"\\frac{{{r.numerator}}}{{{r.denominator}}}")
        surd = f"\\sqrt{{{m}}}" if m > 1 else ""
        ang = Fraction(2 * k, self.field.n)
        if ang == 0:
            return sign + ((coef + surd) or "1")
        num, den = ang.numerator, ang.denominator
        top = "i\\pi" if num == 1 else f"{num}i\\pi"
        phase = f"e^{{{top}}}" if den == 1 else f"e^{{{top}/{den}}}"
        return sign + coef + surd + phase

    def __repr__(self) -> str:
        return self.serialize()

    def __str__(self) -> str:
        return self.pretty()


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


_CANON_RE = re.compile(r"^cyc\((\d+)\)\[(.*)\]$")
_PRETTY_RE = re.compile(
    r"^(?P<sign>-)?(?:(?P<r>\d+(?:/\d+)?)(?:\*|$))?(?:sqrt\((?P<m>\d+)\)(?:\*|$))?"
    r"(?:zeta\((?P<n>\d+)\)\^(?P<k>-?\d+))?$")


def parse(text: str, field=None) -> CyclotomicNumber:
    """Parse the canonical `cyc(n)[...]` form, `r*sqrt(m)*zeta(n)^k`, or a plain rational."""
    text = text.strip()
    m = _CANON_RE.match(text)
    if m:
        f = cyclotomic_field(int(m.group(1)))
        items = [s.strip() for s in m.group(2).split(",")] if m.group(2).strip() else []
        if len(items) != f.phi:
            raise ValueError(f"expected {f.phi} coefficients in {text!r}")
        return CyclotomicNumber.from_coefficients([Fraction(s) for s in items], f)
    m = _PRETTY_RE.match(text)
    if m and (m.group("m") or m.group("n")):
        f = cyclotomic_field(int(m.group("n"))) if m.group("n") else _as_field(field)
        r = Fraction(m.group("r")) if m.group("r") else Fraction(1)
        out = CyclotomicNumber.from_rational(-r if m.group("sign") else r, f)
        if m.group("m"):
            out = out * sqrt_constant(int(m.group("m")), f)
        if m.group("n"):
            out = out * root_of_unity(int(m.group("k")), f.n, f)
        return out
    try:
        q = Fraction(text)
    except ValueError:
        raise ValueError(f"cannot parse cyclotomic number {text!r}") from None
    return CyclotomicNumber.from_rational(q, field)


# constructors for named constants

def root_of_unity(k: int, n: int | None = None, field=None) -> CyclotomicNumber:
    """zeta_n^k inside the ambient field (n must divide the field's root count)."""
    f = _as_field(field)
    if n is None:
        n = f.n
    if n <= 0:
        raise ValueError("root order must be positive")
    if not f.contains_order(n):
        raise FieldTooSmallError(f"{n}-th roots of unity are not in Q(zeta_{f.n})")
    # zeta_n^k = zeta_N^(k N/n), with N the number of roots of unity in the field
    big = f.unit_count
    e = (k * (big // n)) % big
    if big == f.n:
        return CyclotomicNumber(f, f.power_vector(e))
    # odd n: roots are +-zeta_n^j, and -1 = ... handled via zeta_{2n}^e
    sign = -1 if e % 2 else 1
    j = (e // 2 if e % 2 == 0 else (e + f.n) // 2) % f.n
    return CyclotomicNumber(f, f.power_vector(j)) * sign


def exp_i_pi(num: int, den: int, field=None) -> CyclotomicNumber:
    """e^{i pi num/den} = zeta_{2 den}^num."""
    return root_of_unity(num, 2 * den, field)


def sqrt_constant(m: int, field=None) -> CyclotomicNumber:
    """Positive square root of m in {1, 2, 3, 6}; raises if the field lacks it."""
    f = _as_field(field)
    if m == 1:
        return CyclotomicNumber.one(f)
    if m == 2:
        if f.n % 8:
            raise FieldTooSmallError(f"field too small: sqrt(2) is not in Q(zeta_{f.n})")
        return root_of_unity(1, 8, f) + root_of_unity(-1, 8, f)
    if m == 3:
        if f.n % 12:
            raise FieldTooSmallError(f"field too small: sqrt(3) is not in Q(zeta_{f.n})")
        return root_of_unity(1, 12, f) + root_of_unity(-1, 12, f)
    if m == 6:
        if f.n % 24:
            raise FieldTooSmallError(f"field too small: sqrt(6) is not in Q(zeta_{f.n})")
        return sqrt_constant(2, f) * sqrt_constant(3, f)
    raise ValueError(f"sqrt_constant supports m in (1, 2, 3, 6), got {m}")


def _squarefree_split(k: int) -> tuple[int, int]:
    """k = s^2 * m with m squarefree; returns (s, m)."""
    s, m = 1, 1
    p = 2
    while p * p <= k:
        e = 0
        while k % p == 0:
            k //= p
            e += 1
        s *= p ** (e // 2)
        if e % 2:
            m *= p
        p += 1
    return s, m * k


def sqrt_rational(q, field=None) -> CyclotomicNumber:
    """Exact square root of a rational: positive real for q >= 0, i*sqrt(-q) otherwise."""
    f = _as_field(field)
    q = Fraction(q)
    if q == 0:
        return CyclotomicNumber.zero(f)
    neg = q < 0
    q = abs(q)
    s, m = _squarefree_split(q.numerator * q.denominator)
    if m not in (1, 2, 3, 6):
        raise FieldTooSmallError(f"field too small: sqrt({m}) is not supported in Q(zeta_{f.n})")
    root = sqrt_constant(m, f) * Fraction(s, q.denominator)
    if neg:
        root = root * root_of_unity(1, 4, f)
    return root


def sqrt_exact(x: CyclotomicNumber) -> CyclotomicNumber:
    """Square root of an element known to be (rational) * (square); positive branch.

    Only rational radicands, and rational multiples of 2, 3, 6 squared, are
    handled; anything else is a hard error rather than an approximation.
    """
    if x.is_rational():
        return sqrt_rational(x.rational_value(), x.field)
    raise FieldTooSmallError(f"no supported exact square root for {x.serialize()}")


# polynomial helpers over Q, lowest degree first

def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = _trim(list(a))
    b = _trim(list(b))
    if not a:
        return [], []
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for j, bj in enumerate(b):
            a[shift + j] -= c * bj
        a.pop()
        _trim(a)
    return _trim(q), a


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(c) for c in out])


def _poly_inverse_mod(p: list[Fraction], m: list[Fraction]) -> list[Fraction]:
    # extended Euclid: find s with s*p = 1 mod m
    r0, r1 = _trim(list(m)), _trim(list(p))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        if not r1:
            raise ZeroDivisionError("element is not invertible modulo the cyclotomic polynomial")
    c = r1[0]
    return [x / c for x in s1]
