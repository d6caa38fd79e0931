"""Small dense matrices and state vectors over Q(zeta_n)."""

from __future__ import annotations

import json
import math
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .cyclo import (
    CyclotomicField,
    CyclotomicNumber,
    FieldMismatchError,
    FieldTooSmallError,
    _as_field,
    parse,
    root_of_unity,
)


class SingularMatrixError(ZeroDivisionError):
    pass


def _to_cyc(x, field: CyclotomicField) -> CyclotomicNumber:
    if isinstance(x, CyclotomicNumber):
        if x.field.n != field.n:
            raise FieldMismatchError(f"entry in Q(zeta_{x.field.n}), matrix in Q(zeta_{field.n})")
        return x
    if isinstance(x, (int, Rational)):
        return CyclotomicNumber.from_rational(x, field)
    if isinstance(x, str):
        return parse(x, field)
    raise TypeError(f"cannot use {type(x).__name__} as an exact matrix entry")


def _pack(entries: Sequence[Sequence[CyclotomicNumber]], field: CyclotomicField):
    rows, cols = len(entries), len(entries[0]) if entries else 0
    den = 1
    for row in entries:
        for x in row:
            den = math.lcm(den, int(x.den))
    num = np.zeros((rows, cols, field.phi), dtype=object)
    for i, row in enumerate(entries):
        for j, x in enumerate(row):
            scale = den // x.den
            num[i, j, :] = [c * scale for c in x.num]
    num, dens = _kernels.normalize_batch(num[None], np.array([den], dtype=object))
    num, dens = _kernels.compact(num, dens)
    return num[0], int(dens[0])


class ExactMatrix:
    """Immutable matrix over Q(zeta_n), packed as integer numerators over one denominator."""

    __slots__ = ("field", "num", "den", "_key", "_hash")

    def __init__(self, field: CyclotomicField, num: np.ndarray, den: int):
        num = np.ascontiguousarray(num)
        if num.ndim != 3 or num.shape[2] != field.phi:
            raise ValueError("packed array must have shape (rows, cols, phi)")
        num, dens = _kernels.normalize_batch(num[None], np.array([den], dtype=num.dtype))
        num, dens = _kernels.compact(num, dens)
        self.field = field
        self.num = num[0]
        self.num.flags.writeable = False
        self.den = int(dens[0])
        self._key = None
        self._hash = None

    # construction

    @classmethod
    def from_entries(cls, rows: Iterable[Iterable], field=None) -> "ExactMatrix":
        f = _as_field(field)
        entries = [[_to_cyc(x, f) for x in row] for row in rows]
        widths = {len(r) for r in entries}
        if len(widths) != 1:
            raise ValueError("ragged matrix rows")
        num, den = _pack(entries, f)
        return cls(f, num, den)

    @classmethod
    def identity(cls, dim: int, field=None) -> "ExactMatrix":
        f = _as_field(field)
        num = np.zeros((dim, dim, f.phi), dtype=np.int64)
        for i in range(dim):
            num[i, i, 0] = 1
        return cls(f, num, 1)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, field=None) -> "ExactMatrix":
        f = _as_field(field)
        return cls(f, np.zeros((rows, rows if cols is None else cols, f.phi), dtype=np.int64), 1)

    @classmethod
    def diag(cls, values: Sequence, field=None) -> "ExactMatrix":
        f = _as_field(field)
        vals = [_to_cyc(v, f) for v in values]
        zero = CyclotomicNumber.zero(f)
        return cls.from_entries([[vals[i] if i == j else zero for j in range(len(vals))]
                                 for i in range(len(vals))], f)

    # shape and entries

    @property
    def shape(self) -> tuple[int, int]:
        return self.num.shape[0], self.num.shape[1]

    @property
    def dim(self) -> int:
        r, c = self.shape
        if r != c:
            raise ValueError("matrix is not square")
        return r

    def entry(self, i: int, j: int) -> CyclotomicNumber:
        return CyclotomicNumber(self.field, self.num[i, j].tolist(), self.den)

    def __getitem__(self, ij) -> CyclotomicNumber:
        return self.entry(*ij)

    def entries(self) -> list[list[CyclotomicNumber]]:
        r, c = self.shape
        return [[self.entry(i, j) for j in range(c)] for i in range(r)]

    # identity and hashing

    @property
    def key(self) -> bytes:
        if self._key is None:
            self._key = bytes([self.num.shape[0], self.num.shape[1]]) + _kernels.keys_for(
                self.num[None], [self.den])[0]
        return self._key

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.field.n == other.field.n and self.key == other.key

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.n, self.key))
        return self._hash

    def _check(self, other: "ExactMatrix"):
        if other.field.n != self.field.n:
            raise FieldMismatchError(f"Q(zeta_{self.field.n}) vs Q(zeta_{other.field.n})")

    # arithmetic

    def __matmul__(self, other):
        if isinstance(other, StateVector):
            return mat_apply(self, other)
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check(other)
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"dimension mismatch: {self.shape} @ {other.shape}")
        num, den = _kernels.matmul_batch(self.num[None], [self.den], other.num[None], [other.den],
                                         self.field.modulus)
        return ExactMatrix(self.field, num[0], int(den[0]))

    def _scaled_nums(self, other: "ExactMatrix"):
        a = self.num.astype(object) * other.den
        b = other.num.astype(object) * self.den
        return a, b, self.den * other.den

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check(other)
        if self.shape != other.shape:
            raise ValueError("dimension mismatch")
        a, b, den = self._scaled_nums(other)
        return ExactMatrix(self.field, a + b, den)

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return ExactMatrix(self.field, -self.num, self.den)

    def scale(self, c) -> "ExactMatrix":
        c = _to_cyc(c, self.field)
        return ExactMatrix.from_entries([[c * x for x in row] for row in self.entries()], self.field)

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def times_root(self, k: int) -> "ExactMatrix":
        """Multiply every entry by zeta_n^k (cheap: a fixed integer map)."""
        return ExactMatrix(self.field, _kernels.linear_map_batch(self.num, _root_table(self.field, k)),
                           self.den)

    def __pow__(self, k: int) -> "ExactMatrix":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ExactMatrix.identity(self.dim, self.field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.field, self.num.transpose(1, 0, 2), self.den)

    @property
    def T(self) -> "ExactMatrix":
        return self.transpose()

    def conj(self) -> "ExactMatrix":
        return ExactMatrix(self.field, _kernels.linear_map_batch(self.num, _conj_table(self.field)),
                           self.den)

    def dagger(self) -> "ExactMatrix":
        return self.conj().transpose()

    def trace(self) -> CyclotomicNumber:
        total = CyclotomicNumber.zero(self.field)
        for i in range(self.dim):
            total = total + self.entry(i, i)
        return total

    def determinant(self) -> CyclotomicNumber:
        return determinant(self)

    def inverse(self) -> "ExactMatrix":
        return mat_inverse(self)

    # predicates

    def is_identity(self) -> bool:
        r, c = self.shape
        return r == c and self == ExactMatrix.identity(r, self.field)

    def is_unitary(self) -> bool:
        return (self @ self.dagger()).is_identity()

    def is_diagonal(self) -> bool:
        r, c = self.shape
        return all(not self.num[i, j].any() for i in range(r) for j in range(c) if i != j)

    def is_zero(self) -> bool:
        return not self.num.any()

    # output

    def to_complex(self) -> np.ndarray:
        r, c = self.shape
        return np.array([[self.entry(i, j).to_complex() for j in range(c)] for i in range(r)])

    def to_json(self) -> list[list[str]]:
        return [[x.serialize() for x in row] for row in self.entries()]

    @classmethod
    def from_json(cls, data, field=None) -> "ExactMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_entries([[parse(s, field) for s in row] for row in data], field)

    def latex(self) -> str:
        rows = [" & ".join(x.latex() for x in row) for row in self.entries()]
        return "\\begin{pmatrix} " + " \\\\ ".join(rows) + " \\end{pmatrix}"

    def pretty(self) -> str:
        cells = [[x.latex() for x in row] for row in self.entries()]
        width = max((len(c) for row in cells for c in row), default=1)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)

    def __repr__(self) -> str:
        return f"ExactMatrix({self.to_json()})"


_ROOT_TABLES: dict[tuple[int, int], np.ndarray] = {}


def _root_table(field: CyclotomicField, k: int) -> np.ndarray:
    key = (field.n, k % field.n)
    tab = _ROOT_TABLES.get(key)
    if tab is None:
        tab = np.array([field.power_vector(i + k) for i in range(field.phi)], dtype=np.int64)
        tab.flags.writeable = False
        _ROOT_TABLES[key] = tab
    return tab


def _conj_table(field: CyclotomicField) -> np.ndarray:
    key = (field.n, "conj")
    tab = _ROOT_TABLES.get(key)
    if tab is None:
        tab = np.array([field.power_vector(-i) for i in range(field.phi)], dtype=np.int64)
        tab.flags.writeable = False
        _ROOT_TABLES[key] = tab
    return tab


class StateVector:
    """Exact coordinates of a state in a declared basis."""

    __slots__ = ("field", "entries")

    def __init__(self, entries: Sequence, field=None):
        f = _as_field(field if field is not None else next(
            (x.field for x in entries if isinstance(x, CyclotomicNumber)), None))
        self.field = f
        self.entries = tuple(_to_cyc(x, f) for x in entries)

    @classmethod
    def basis(cls, dim: int, index: int, field=None) -> "StateVector":
        return cls([1 if i == index else 0 for i in range(dim)], field)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __getitem__(self, i) -> CyclotomicNumber:
        return self.entries[i]

    def __len__(self):
        return len(self.entries)

    def __add__(self, other: "StateVector") -> "StateVector":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return StateVector([a + b for a, b in zip(self.entries, other.entries)], self.field)

    def __sub__(self, other: "StateVector") -> "StateVector":
        return self + other.scale(-1)

    def scale(self, c) -> "StateVector":
        c = _to_cyc(c, self.field)
        return StateVector([c * x for x in self.entries], self.field)

    __mul__ = scale
    __rmul__ = scale

    def inner(self, other: "StateVector") -> CyclotomicNumber:
        """<self|other>, antilinear in the first slot."""
        total = CyclotomicNumber.zero(self.field)
        for a, b in zip(self.entries, other.entries):
            total = total + a.conj() * b
        return total

    def norm_squared(self) -> CyclotomicNumber:
        return self.inner(self)

    def __eq__(self, other):
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def to_json(self) -> list[str]:
        return [x.serialize() for x in self.entries]

    def to_complex(self) -> np.ndarray:
        return np.array([x.to_complex() for x in self.entries])

    def __repr__(self) -> str:
        return f"StateVector({[x.pretty() for x in self.entries]})"


# free-function surface

def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a @ b


def mat_apply(a: ExactMatrix, v: StateVector) -> StateVector:
    r, c = a.shape
    if c != v.dim:
        raise ValueError(f"dimension mismatch: {a.shape} applied to length {v.dim}")
    if a.field.n != v.field.n:
        raise FieldMismatchError("matrix and state live in different fields")
    out = []
    for i in range(r):
        total = CyclotomicNumber.zero(a.field)
        for j in range(c):
            if v.entries[j] and a.num[i, j].any():
                total = total + a.entry(i, j) * v.entries[j]
        out.append(total)
    return StateVector(out, a.field)


def dagger(a: ExactMatrix) -> ExactMatrix:
    return a.dagger()


def determinant(a: ExactMatrix) -> CyclotomicNumber:
    n = a.dim
    e = a.entries()
    if n == 1:
        return e[0][0]
    if n == 2:
        return e[0][0] * e[1][1] - e[0][1] * e[1][0]
    if n == 3:
        return (e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
                - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
                + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]))
    # exact Gaussian elimination
    det = CyclotomicNumber.one(a.field)
    m = [row[:] for row in e]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return CyclotomicNumber.zero(a.field)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det = det * p
        pinv = p.inverse()
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * pinv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def mat_inverse(a: ExactMatrix) -> ExactMatrix:
    n = a.dim
    d = a.dagger()
    if (a @ d).is_identity():
        return d
    m = [row[:] + [CyclotomicNumber.from_rational(1 if i == j else 0, a.field) for j in range(n)]
         for i, row in enumerate(a.entries())]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        pinv = m[col][col].inverse()
        m[col] = [x * pinv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return ExactMatrix.from_entries([row[n:] for row in m], a.field)


def scalar_multiple_of(a: ExactMatrix, b: ExactMatrix) -> CyclotomicNumber | None:
    """lambda with a == lambda * b, or None."""
    if a.shape != b.shape:
        raise ValueError("dimension mismatch")
    r, c = b.shape
    for i in range(r):
        for j in range(c):
            if b.num[i, j].any():
                if not a.num[i, j].any():
                    return None
                lam = a.entry(i, j) / b.entry(i, j)
                return lam if b.scale(lam) == a else None
    return CyclotomicNumber.one(a.field) if a.is_zero() else None


def _scalar_exponents(field: CyclotomicField, scalars: str, dim: int) -> list[int]:
    """Powers k of zeta_n allowed as projective rescalings."""
    n = field.n
    if n % 2:
        raise ValueError("projective forms require an even field order")
    if scalars in ("center", "center_of_SU3"):
        if n % dim:
            raise FieldTooSmallError(f"the center of SU({dim}) is not in Q(zeta_{n})")
        step = n // dim
        return [step * j for j in range(dim)]
    if scalars in ("all_units", "units"):
        return list(range(n))
    raise ValueError(f"unknown scalar set {scalars!r}")


def canonical_projective_form(a: ExactMatrix, scalars: str = "center") -> ExactMatrix:
    """Lexicographically least element of {lambda * a} over the allowed scalar set."""
    if a.is_zero():
        raise ValueError("zero matrix has no projective class")
    ks = _scalar_exponents(a.field, scalars, a.shape[0])
    cands = np.stack([_kernels.linear_map_batch(a.num, _root_table(a.field, k)) for k in ks])
    best = min(range(len(ks)), key=lambda t: cands[t].ravel().tolist())
    return ExactMatrix(a.field, cands[best], a.den)


def su_normalize(a: ExactMatrix) -> ExactMatrix:
    """Rescale a unitary by a root of unity to determinant 1 (least such rescaling)."""
    d = a.dim
    det = determinant(a)
    k = det.root_index()
    if k is None:
        raise ValueError("determinant is not a root of unity in the field")
    n = a.field.n
    valid = [j for j in range(n) if (d * j + k) % n == 0]
    if not valid:
        raise FieldTooSmallError("phase outside field: no root of unity rescales det to 1")
    cands = [a.times_root(j) for j in valid]
    return min(cands, key=lambda m: m.num.ravel().tolist())
