"""SU(2) level 4 anyon data from Temperley-Lieb recoupling (Kauffman-Lins), exact.

Charges are integers 0..4 (twice the spin), 0 the vacuum.  Quantum integers,
theta nets and tetrahedral networks follow Kauffman-Lins at a primitive 24th
root of unity A with loop value d = -A^2 - A^-2.  F-symbols are brought to the
unitary gauge by normalizing each trivalent vertex, then a fixed sign gauge
(see ``QUTRIT_GAUGE``) is applied so the braid matrices agree with the qutrit
and qubit matrices used throughout the package.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclo import (
    CyclotomicField,
    CyclotomicNumber,
    _as_field,
    root_of_unity,
    sqrt_constant,
    sqrt_rational,
)
from .exact_linalg import ExactMatrix, scalar_multiple_of

LEVEL = 4
CHARGES = tuple(range(LEVEL + 1))

# Vertex signs u(a, b; c), symmetric in a, b and trivial on vacuum legs.  With
# these, the strand-2 braid on 2222 and the centre braid on 2211 reproduce the
# qutrit/qubit matrices exactly up to a global phase, and every F-move with a
# vacuum leg (external or total) stays the 1x1 identity.
QUTRIT_GAUGE = {
    (2, 2, 0): -1,
    (2, 2, 4): -1,
    (1, 1, 2): -1,
    (1, 3, 2): -1,
    (3, 3, 2): -1,
}


class InadmissibleError(ValueError):
    pass


class ConsistencyError(AssertionError):
    pass


def check_charge(a: int) -> int:
    if not isinstance(a, int) or a not in CHARGES:
        raise ValueError(f"charge must be an integer in 0..{LEVEL}, got {a!r}")
    return a


def fusion_allowed(a: int, b: int, c: int, level: int = LEVEL) -> bool:
    """Truncated Clebsch-Gordan rule |a-b| <= c <= min(a+b, 2k-a-b), a+b+c even."""
    for x in (a, b, c):
        if not 0 <= x <= level:
            return False
    return (a + b + c) % 2 == 0 and abs(a - b) <= c <= min(a + b, 2 * level - a - b)


def fusion_channels(a: int, b: int) -> list[int]:
    return [c for c in CHARGES if fusion_allowed(a, b, c)]


def _real_sign(x: CyclotomicNumber) -> int:
    """Exact sign of a real element of Q(sqrt 3)."""
    if x.is_zero():
        return 0
    if x.is_rational():
        return 1 if x.rational_value() > 0 else -1
    s3 = sqrt_constant(3, x.field)
    idx = next(i for i in range(1, x.field.phi) if s3.num[i])
    q = Fraction(x.num[idx], x.den) / Fraction(s3.num[idx], s3.den)
    rest = x - s3 * q
    if not rest.is_rational():
        raise ValueError(f"{x.serialize()} is not in Q(sqrt 3)")
    p = rest.rational_value()
    if p >= 0 and q >= 0:
        return 1
    if p <= 0 and q <= 0:
        return -1
    return (1 if p > 0 else -1) if p * p > 3 * q * q else (1 if q > 0 else -1)


@dataclass(frozen=True)
class FMatrix:
    """F-move on leaves (a, b, c) with total d: ((ab)_e c)_d -> (a (bc)_f)_d."""

    labels: tuple[int, int, int, int]
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    matrix: ExactMatrix

    def symbol(self, e: int, f: int) -> CyclotomicNumber:
        if e in self.rows and f in self.cols:
            return self.matrix.entry(self.rows.index(e), self.cols.index(f))
        return CyclotomicNumber.zero(self.matrix.field)


class SU2Level4:
    """Category data for the Kauffman-Jones SU(2) level 4 theory.

    A is fixed to the primitive 24th root for which the strand-1 braid on four
    charge-2 anyons is proportional to the diagonal qutrit matrix G1; both
    candidates e^{-+i pi/12} are tried.
    """

    def __init__(self, field=None, gauge: str = "qutrit", A_exponent: int | None = None):
        self.field: CyclotomicField = _as_field(field)
        if self.field.n % 24:
            raise ValueError(f"level-4 data needs 24 | n, got Q(zeta_{self.field.n})")
        if gauge not in ("qutrit", "kl"):
            raise ValueError("gauge must be 'qutrit' or 'kl'")
        self.gauge = gauge
        self.level = LEVEL
        if A_exponent is None:
            A_exponent = self._select_A()
        self.A_exponent = A_exponent
        self.A = root_of_unity(A_exponent, 24, self.field)
        self.d = -(self.A ** 2) - self.A ** -2
        self._f_cache: dict[tuple[int, int, int, int], FMatrix] = {}

    def _select_A(self) -> int:
        from .groups import catalog_matrix

        target = catalog_matrix("G1", self.field)
        for k in (-1, 1):
            A = root_of_unity(k, 24, self.field)
            diag = [_r_formula(A, 2, 2, c) for c in (0, 2, 4)]
            if scalar_multiple_of(ExactMatrix.diag(diag, self.field), target) is not None:
                return k
        raise ConsistencyError("neither primitive 24th root e^{+-i pi/12} reproduces G1")

    # quantum numbers

    @lru_cache(maxsize=None)
    def delta(self, n: int) -> CyclotomicNumber:
        """Loop value of the n-th Jones-Wenzl projector (Chebyshev in d)."""
        if n == 0:
            return CyclotomicNumber.one(self.field)
        if n == 1:
            return self.d
        return self.d * self.delta(n - 1) - self.delta(n - 2)

    def qint(self, n: int) -> CyclotomicNumber:
        return self.delta(n - 1) * (-1) ** (n - 1)

    @lru_cache(maxsize=None)
    def qfact(self, n: int) -> CyclotomicNumber:
        out = CyclotomicNumber.one(self.field)
        for k in range(1, n + 1):
            out = out * self.qint(k)
        return out

    def quantum_dimension(self, a: int) -> CyclotomicNumber:
        check_charge(a)
        return self.delta(a) * (-1) ** a

    # braiding

    def r_symbol(self, a: int, b: int, c: int) -> CyclotomicNumber:
        if not fusion_allowed(a, b, c):
            raise InadmissibleError(f"({a},{b};{c}) is not an admissible fusion")
        return _r_formula(self.A, a, b, c)

    def twist(self, a: int) -> CyclotomicNumber:
        check_charge(a)
        return self.A ** (a * (a + 2)) * (-1) ** a

    # recoupling

    @lru_cache(maxsize=None)
    def theta_net(self, a: int, b: int, c: int) -> CyclotomicNumber:
        """Kauffman-Lins theta evaluation (isotopy normalization)."""
        if not fusion_allowed(a, b, c):
            raise InadmissibleError(f"theta({a},{b},{c}) is not admissible")
        m, n, p = (a + b - c) // 2, (b + c - a) // 2, (a + c - b) // 2
        num = self.qfact(m + n + p + 1) * self.qfact(m) * self.qfact(n) * self.qfact(p)
        den = self.qfact(m + n) * self.qfact(n + p) * self.qfact(m + p)
        return num / den * (-1) ** (m + n + p)

    def theta_symbol(self, a: int, b: int, c: int) -> CyclotomicNumber:
        """Unitary theta symbol sqrt(d_a d_b d_c)."""
        if not fusion_allowed(a, b, c):
            raise InadmissibleError(f"theta({a},{b},{c}) is not admissible")
        prod = self.quantum_dimension(a) * self.quantum_dimension(b) * self.quantum_dimension(c)
        if not prod.is_rational():
            raise ConsistencyError(f"d_{a} d_{b} d_{c} is not rational")
        return sqrt_rational(prod.rational_value(), self.field)

    @lru_cache(maxsize=None)
    def tet(self, A: int, B: int, E: int, C: int, D: int, F: int) -> CyclotomicNumber:
        """Tetrahedral network with faces (A,D,E), (B,C,E), (A,B,F), (C,D,F)."""
        a = [(A + D + E) // 2, (B + C + E) // 2, (A + B + F) // 2, (C + D + F) // 2]
        b = [(B + D + E + F) // 2, (A + C + E + F) // 2, (A + B + C + D) // 2]
        pref = CyclotomicNumber.one(self.field)
        for i in a:
            for j in b:
                pref = pref * self.qfact(j - i)
        for x in (A, B, C, D, E, F):
            pref = pref / self.qfact(x)
        total = CyclotomicNumber.zero(self.field)
        for s in range(max(a), min(b) + 1):
            top = self.qfact(s + 1)
            if top.is_zero():
                continue
            den = CyclotomicNumber.one(self.field)
            for i in a:
                den = den * self.qfact(s - i)
            for j in b:
                den = den * self.qfact(j - s)
            total = total + top / den * (-1) ** s
        return pref * total

    def vertex_gauge(self, a: int, b: int, c: int) -> int:
        if self.gauge == "kl" or a == 0 or b == 0:
            return 1
        return QUTRIT_GAUGE.get((min(a, b), max(a, b), c), 1)

    def _vertex_norm(self, a, b, e, c, d) -> CyclotomicNumber:
        return self.theta_net(a, b, e) * self.theta_net(e, c, d) / self.delta(e)

    def f_matrix(self, a: int, b: int, c: int, d: int) -> FMatrix:
        key = (a, b, c, d)
        if key in self._f_cache:
            return self._f_cache[key]
        for x in key:
            check_charge(x)
        rows = tuple(e for e in CHARGES if fusion_allowed(a, b, e) and fusion_allowed(e, c, d))
        cols = tuple(f for f in CHARGES if fusion_allowed(b, c, f) and fusion_allowed(a, f, d))
        if not rows:
            raise InadmissibleError(f"no fusion channel for leaves {a},{b},{c} -> {d}")
        entries = []
        for e in rows:
            n_e = self._vertex_norm(a, b, e, c, d)
            row = []
            for f in cols:
                n_f = self._vertex_norm(b, c, f, a, d)
                # isotopy-normalized coefficient, then rescale both bases to unit norm
                t = self.tet(a, d, e, c, b, f) * self.delta(f) / (
                    self.theta_net(b, c, f) * self.theta_net(a, f, d))
                ratio = n_f / n_e
                sq = t * t * ratio * _real_sign(ratio)
                if not sq.is_rational():
                    raise ConsistencyError(f"F^{{{a}{b}{c}}}_{d}[{e},{f}]^2 is not rational")
                val = sqrt_rational(sq.rational_value(), self.field) * _real_sign(t)
                u = (self.vertex_gauge(a, b, e) * self.vertex_gauge(e, c, d)
                     * self.vertex_gauge(b, c, f) * self.vertex_gauge(a, f, d))
                row.append(val * u)
            entries.append(row)
        fm = FMatrix(key, rows, cols, ExactMatrix.from_entries(entries, self.field))
        self._f_cache[key] = fm
        return fm

    def f_symbol(self, a, b, c, d, e, f) -> CyclotomicNumber:
        try:
            fm = self.f_matrix(a, b, c, d)
        except InadmissibleError:
            return CyclotomicNumber.zero(self.field)
        return fm.symbol(e, f)

    def _r_or_zero(self, a, b, c, inverse=False) -> CyclotomicNumber:
        if not fusion_allowed(a, b, c):
            return CyclotomicNumber.zero(self.field)
        r = self.r_symbol(a, b, c)
        return r.inverse() if inverse else r

    # verification

    def consistency_check(self) -> dict:
        """Exhaustive pentagon/hexagon/unitarity/ribbon checks; raises on the first failure."""
        zero = CyclotomicNumber.zero(self.field)
        L = CHARGES
        report = {"unitary": 0, "vacuum_identity": 0, "pentagon": 0, "hexagon": 0,
                  "hexagon_inverse": 0, "ribbon": 0, "fusion_dimension": 0}
        for key in itertools.product(L, repeat=4):
            try:
                fm = self.f_matrix(*key)
            except InadmissibleError:
                continue
            if not fm.matrix.is_unitary():
                raise ConsistencyError(f"F{key} is not unitary")
            report["unitary"] += 1
            if 0 in key:
                if fm.matrix.shape != (1, 1) or not fm.matrix.is_identity():
                    raise ConsistencyError(f"F{key} with a vacuum leg is not the identity")
                report["vacuum_identity"] += 1
        F = self.f_symbol
        for a, b, c, d, e, f, g, k, l in itertools.product(L, repeat=9):
            if not (fusion_allowed(a, b, f) and fusion_allowed(f, c, g) and fusion_allowed(g, d, e)
                    and fusion_allowed(c, d, l) and fusion_allowed(b, l, k) and fusion_allowed(a, k, e)):
                continue
            lhs = F(f, c, d, e, g, l) * F(a, b, l, e, f, k)
            rhs = zero
            for h in L:
                x = F(a, b, c, g, f, h)
                if x:
                    rhs = rhs + x * F(a, h, d, e, g, k) * F(b, c, d, k, h, l)
            if lhs != rhs:
                raise ConsistencyError(f"pentagon fails at {(a, b, c, d, e, f, g, k, l)}")
            report["pentagon"] += 1
        for inverse, name in ((False, "hexagon"), (True, "hexagon_inverse")):
            R = lambda x, y, z: self._r_or_zero(x, y, z, inverse)  # noqa: E731
            for a, b, c, d, e, g in itertools.product(L, repeat=6):
                if not (fusion_allowed(c, a, e) and fusion_allowed(e, b, d)
                        and fusion_allowed(c, b, g) and fusion_allowed(a, g, d)):
                    continue
                lhs = R(c, a, e) * F(a, c, b, d, e, g) * R(c, b, g)
                rhs = zero
                for f in L:
                    x = F(c, a, b, d, e, f)
                    if x:
                        rhs = rhs + x * R(c, f, d) * F(a, b, c, d, f, g)
                if lhs != rhs:
                    raise ConsistencyError(f"{name} fails at {(a, b, c, d, e, g)}")
                report[name] += 1
        for a, b, c in itertools.product(L, repeat=3):
            if fusion_allowed(a, b, c):
                mono = self.r_symbol(a, b, c) * self.r_symbol(b, a, c)
                if mono != self.twist(c) / (self.twist(a) * self.twist(b)):
                    raise ConsistencyError(f"ribbon relation fails at {(a, b, c)}")
                report["ribbon"] += 1
        for a, b in itertools.product(L, repeat=2):
            lhs = self.quantum_dimension(a) * self.quantum_dimension(b)
            rhs = zero
            for c in fusion_channels(a, b):
                rhs = rhs + self.quantum_dimension(c)
            if lhs != rhs:
                raise ConsistencyError(f"d_{a} d_{b} != sum of fusion channels")
            report["fusion_dimension"] += 1
        return report

    def dump(self) -> dict:
        """All tables as JSON-ready text (canonical cyclotomic forms)."""
        out = {
            "level": self.level,
            "field_order": self.field.n,
            "gauge": self.gauge,
            "A": self.A.serialize(),
            "A_pretty": self.A.pretty(),
            "loop_value": self.d.serialize(),
            "quantum_dimensions": {str(a): self.quantum_dimension(a).serialize() for a in CHARGES},
            "twists": {str(a): self.twist(a).serialize() for a in CHARGES},
            "r_symbols": {},
            "theta_u": {},
            "f_matrices": {},
        }
        for a, b, c in itertools.product(CHARGES, repeat=3):
            if fusion_allowed(a, b, c):
                out["r_symbols"][f"{a},{b},{c}"] = self.r_symbol(a, b, c).serialize()
                out["theta_u"][f"{a},{b},{c}"] = self.theta_symbol(a, b, c).serialize()
        for key in itertools.product(CHARGES, repeat=4):
            try:
                fm = self.f_matrix(*key)
            except InadmissibleError:
                continue
            out["f_matrices"][",".join(map(str, key))] = {
                "rows": list(fm.rows), "cols": list(fm.cols), "matrix": fm.matrix.to_json()}
        return out


def _r_formula(A: CyclotomicNumber, a: int, b: int, c: int) -> CyclotomicNumber:
    sign = (-1) ** ((a + b - c) // 2)
    return A ** ((c * (c + 2) - a * (a + 2) - b * (b + 2)) // 2) * sign


@lru_cache(maxsize=None)
def default_theory(field_order: int | None = None, gauge: str = "qutrit") -> SU2Level4:
    return SU2Level4(field_order, gauge=gauge)
