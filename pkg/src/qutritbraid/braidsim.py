"""Fusion-tree state spaces and exact braid matrices for SU(2) level 4 anyons.

A space is an ordered leaf sequence a1..an with total charge; its basis is the
left-associated caterpillar tree, labelled by x_k = charge of the first k
leaves for k = 2..n-1 (x_1 = a1, x_n = total), in lexicographic order.
Braiding strands i, i+1 swaps the two leaves, so operators carry a source and
a target space and refuse to compose when these do not line up.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cyclo import CyclotomicNumber, sqrt_rational
from .exact_linalg import ExactMatrix, StateVector, scalar_multiple_of
from .tqft import SU2Level4, check_charge, default_theory, fusion_allowed


@dataclass(frozen=True)
class FusionSpace:
    leaves: tuple[int, ...]
    total: int
    basis: tuple[tuple[int, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def labels(self, index: int) -> tuple[int, ...]:
        """Full label path (x_1, ..., x_n) of a basis vector."""
        return (self.leaves[0],) + self.basis[index] + (self.total,)

    def index(self, internal: Sequence[int]) -> int:
        return self.basis.index(tuple(internal))

    def describe(self) -> str:
        return f"({','.join(map(str, self.leaves))} -> {self.total})"


def enumerate_basis(leaves: Sequence[int], total: int) -> FusionSpace:
    leaves = tuple(check_charge(a) for a in leaves)
    check_charge(total)
    if not leaves:
        raise ValueError("at least one leaf is required")
    n = len(leaves)
    paths: list[tuple[int, ...]] = [(leaves[0],)]
    for k in range(1, n):
        paths = [p + (c,) for p in paths for c in range(5) if fusion_allowed(p[-1], leaves[k], c)]
    basis = sorted(p[1:-1] for p in paths if p[-1] == total)
    return FusionSpace(leaves, total, tuple(basis))


@dataclass(frozen=True)
class BraidOperator:
    """Exact map between two fusion spaces (columns: source basis, rows: target basis)."""

    source: FusionSpace
    target: FusionSpace
    matrix: ExactMatrix

    def __matmul__(self, other):
        if isinstance(other, BraidOperator):
            if other.target != self.source:
                raise TypeError(f"cannot compose: {other.target.describe()} feeds "
                                f"{self.source.describe()}")
            return BraidOperator(other.source, self.target, self.matrix @ other.matrix)
        if isinstance(other, StateVector):
            if other.dim != self.source.dim:
                raise ValueError("state dimension does not match the source space")
            return self.matrix @ other
        return NotImplemented

    def inverse(self) -> "BraidOperator":
        return BraidOperator(self.target, self.source, self.matrix.inverse())

    def is_unitary(self) -> bool:
        return self.matrix.is_unitary()


BraidLetter = tuple[int, int]

_LETTER = re.compile(r"^s(\d+):([+-]?1)$")


def parse_braid_word(text: str) -> list[BraidLetter]:
    """Comma-separated letters ``s<i>:<+-1>``; empty text is the empty word."""
    out = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        m = _LETTER.match(tok)
        if not m:
            raise ValueError(f"bad braid letter {tok!r}; expected s<i>:<+-1>")
        out.append((int(m.group(1)), int(m.group(2))))
    return out


def format_braid_word(word: Sequence[BraidLetter]) -> str:
    return ",".join(f"s{i}:{s:+d}".replace("+", "") for i, s in word)


def _swap(leaves: tuple[int, ...], i: int) -> tuple[int, ...]:
    l = list(leaves)
    l[i - 1], l[i] = l[i], l[i - 1]
    return tuple(l)


def sigma_matrix(space: FusionSpace, i: int, sign: int = 1,
                 theory: SU2Level4 | None = None) -> BraidOperator:
    """Braid generator sigma_i^{sign} exchanging leaves i and i+1 (1-based)."""
    th = theory or default_theory()
    n = len(space.leaves)
    if not 1 <= i < n:
        raise IndexError(f"strand index {i} out of range for {n} leaves")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a, b = space.leaves[i - 1], space.leaves[i]
    target = enumerate_basis(_swap(space.leaves, i), space.total)
    zero = CyclotomicNumber.zero(th.field)

    def r(f):
        return th.r_symbol(a, b, f) if sign == 1 else th.r_symbol(b, a, f).inverse()

    rows = [[zero] * space.dim for _ in range(target.dim)]
    for col in range(space.dim):
        x = space.labels(col)
        for row in range(target.dim):
            y = target.labels(row)
            if any(x[k] != y[k] for k in range(n) if k != i - 1):
                continue
            if i == 1:
                # both leaves fuse directly into x_2
                if x[1] == y[1]:
                    rows[row][col] = r(x[1])
                continue
            left, mid, right = x[i - 2], x[i - 1], x[i]
            acc = zero
            for f in range(5):
                if not (fusion_allowed(a, b, f) and fusion_allowed(left, f, right)):
                    continue
                u = th.f_symbol(left, a, b, right, mid, f)
                if not u:
                    continue
                v = th.f_symbol(left, b, a, right, y[i - 1], f)
                if v:
                    acc = acc + u * r(f) * v.conj()
            rows[row][col] = acc
    return BraidOperator(space, target, ExactMatrix.from_entries(rows, th.field))


def word_operator(space: FusionSpace, word: Sequence[BraidLetter],
                  theory: SU2Level4 | None = None) -> BraidOperator:
    """Product of the letters, first letter applied first."""
    op = BraidOperator(space, space, ExactMatrix.identity(space.dim, (theory or default_theory()).field))
    for i, s in word:
        op = sigma_matrix(op.target, i, s, theory) @ op
    return op


def apply_word(space: FusionSpace, word: Sequence[BraidLetter], state: StateVector,
               theory: SU2Level4 | None = None) -> tuple[StateVector, tuple[int, ...]]:
    if state.dim != space.dim:
        raise ValueError(f"state has dimension {state.dim}, space {space.describe()} has {space.dim}")
    op = word_operator(space, word, theory)
    return op @ state, op.target.leaves


def full_twist(space: FusionSpace, i: int, theory: SU2Level4 | None = None) -> BraidOperator:
    """sigma_i twice: leaves i and i+1 go around each other and return."""
    return word_operator(space, [(i, 1), (i, 1)], theory)


def project_internal(space: FusionSpace, edge: int, charge: int,
                     state: StateVector) -> tuple[StateVector, CyclotomicNumber]:
    """Keep components whose label x_edge (charge of the first ``edge`` leaves) is ``charge``."""
    n = len(space.leaves)
    if not 1 <= edge <= n:
        raise IndexError(f"edge must be in 1..{n}")
    if state.dim != space.dim:
        raise ValueError("state dimension does not match the space")
    zero = CyclotomicNumber.zero(state.field)
    kept = [state[k] if space.labels(k)[edge - 1] == charge else zero for k in range(space.dim)]
    out = StateVector(kept, state.field)
    return out, out.norm_squared()


# named constructions

def qutrit_space() -> FusionSpace:
    return enumerate_basis((2, 2, 2, 2), 0)


def middle_braid_2211(theory: SU2Level4 | None = None) -> BraidOperator:
    """sigma_2 on (2,2,1,1 -> 0): basis (|0>, |2>) to the (2,1,2,1) basis (|1>, |3>)."""
    return sigma_matrix(enumerate_basis((2, 2, 1, 1), 0), 2, 1, theory)


def middle_braid_phase(first: int, theory: SU2Level4 | None = None) -> CyclotomicNumber:
    """The scalar by which sigma_2 acts on the line (first,2,2,2 -> 0), x_2 = 2."""
    space = enumerate_basis((first, 2, 2, 2), 0)
    if space.dim != 1 or space.basis[0][0] != 2:
        raise ValueError(f"{space.describe()} is not the expected one-dimensional line")
    return sigma_matrix(space, 2, 1, theory).matrix.entry(0, 0)


def change_basis_qutrit(m: ExactMatrix, basis: str = "e") -> ExactMatrix:
    """Rewrite a qutrit matrix from (|0>,|2>,|4>) to e1, e2, e3 ("e") or via O^T M O ("O")."""
    from .groups import catalog_matrix

    if m.shape != (3, 3):
        raise ValueError("change_basis_qutrit expects a 3x3 matrix")
    if basis == "e":
        P = catalog_matrix("P", m.field)
        return P @ m @ P
    if basis == "O":
        O = catalog_matrix("O", m.field)
        return O.transpose() @ m @ O
    raise ValueError("basis must be 'e' or 'O'")


def fusion_operation_matrix(field=None) -> ExactMatrix:
    """The fusion gate swapping |0> and |4> (up to phase), on (|0>, |2>, |4>)."""
    from .groups import GeneratorCatalog

    return GeneratorCatalog(field)["FUM"]


@dataclass
class AncillaResult:
    target: str
    start: str
    state: StateVector
    leaves: tuple[int, ...]
    word: list[BraidLetter]
    reachable: list[CyclotomicNumber]
    achieved: bool
    after_middle: StateVector

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "start": self.start,
            "word": format_braid_word(self.word),
            "leaves": list(self.leaves),
            "state": self.state.to_json(),
            "state_pretty": [x.pretty() for x in self.state.entries],
            "after_middle_braid": [x.pretty() for x in self.after_middle.entries],
            "moduli_squared": [str((x * x.conj()).rational_value()) for x in self.state.entries],
            "reachable_relative_phases": sorted(x.pretty() for x in self.reachable),
            "achieved": self.achieved,
        }


def _relative_phase(v: StateVector) -> CyclotomicNumber:
    return v[1] / v[0]


def ancilla_protocol(target: str = "plus", theory: SU2Level4 | None = None,
                     max_power: int | None = None) -> AncillaResult:
    """Prepare (|1> +- |3>)/sqrt2 on the 1221 qubit from a 2211 state.

    Start in |0> (plus) or |2> (minus) of (2,2,1,1 -> 0), braid the middle
    pair once, then apply sigma_1^k with k odd so the leaves end as (1,2,2,1).
    sigma_1 is diagonal there, so k only moves the relative phase of |1> and |3>.
    Every k up to twice the order of that phase step is tried, smallest |k|
    first and negative before positive; all phases met are reported.
    """
    th = theory or default_theory()
    if target not in ("plus", "minus"):
        raise ValueError("target must be 'plus' or 'minus'")
    start = 0 if target == "plus" else 2
    space = enumerate_basis((2, 2, 1, 1), 0)
    mid = middle_braid_2211(th)
    psi = mid @ StateVector.basis(2, space.index((start, 1)), th.field)
    want = CyclotomicNumber.one(th.field) * (1 if target == "plus" else -1)
    s21 = mid.target
    step = sigma_matrix(s21, 1, 1, th).matrix
    ratio_step = step.entry(1, 1) / step.entry(0, 0)
    order = _unit_order(ratio_step)
    bound = max_power or 2 * order + 1
    reachable: dict[CyclotomicNumber, None] = {}
    best = None
    for k in sorted(range(-bound, bound + 1), key=lambda k: (abs(k), k)):
        word = [(1, 1 if k > 0 else -1)] * abs(k)
        op = word_operator(s21, word, th)
        out = op @ psi
        rel = _relative_phase(out)
        reachable.setdefault(rel, None)
        # only odd powers end on the (1,2,2,1) qubit
        if best is None and k % 2 and rel == want:
            best = (word, out, op.target.leaves)
    if best is None:
        word, out, leaves = [], psi, s21.leaves
    else:
        word, out, leaves = best
    return AncillaResult(target, f"|{start}>", out, leaves, [(2, 1)] + word,
                         list(reachable), best is not None, psi)


def _unit_order(z: CyclotomicNumber, cap: int = 10_000) -> int:
    p = z
    for k in range(1, cap + 1):
        if p == 1:
            return k
        p = p * z
    raise ValueError("not a root of unity of small order")


def certify_ancilla(result: AncillaResult) -> bool:
    """Both moduli are exactly 1/sqrt2 and the state is a phase times (|1> +- |3>)/sqrt2."""
    f = result.state.field
    half = Fraction(1, 2)
    mods = [(x * x.conj()) for x in result.state.entries]
    if not all(m == half for m in mods):
        return False
    s = sqrt_rational(half, f)
    sign = 1 if result.target == "plus" else -1
    ideal = ExactMatrix.from_entries([[s], [s * sign]], f)
    got = ExactMatrix.from_entries([[x] for x in result.state.entries], f)
    lam = scalar_multiple_of(got, ideal)
    return lam is not None and lam * lam.conj() == 1


def protocol_space() -> FusionSpace:
    """The six-anyon space (2,2,2,2,1,1 -> 0) on which the qutrit protocol runs."""
    return enumerate_basis((2, 2, 2, 2, 1, 1), 0)


def all_braid_relations(space: FusionSpace, theory: SU2Level4 | None = None) -> dict[str, bool]:
    """Far commutation and Yang-Baxter relations of the braid group on this space."""
    n = len(space.leaves)
    out = {}
    for i, j in itertools.combinations(range(1, n), 2):
        if j - i >= 2:
            a = word_operator(space, [(i, 1), (j, 1)], theory)
            b = word_operator(space, [(j, 1), (i, 1)], theory)
            out[f"s{i}s{j}=s{j}s{i}"] = a.target == b.target and a.matrix == b.matrix
        elif j == i + 1:
            a = word_operator(space, [(i, 1), (j, 1), (i, 1)], theory)
            b = word_operator(space, [(j, 1), (i, 1), (j, 1)], theory)
            out[f"s{i}s{j}s{i}=s{j}s{i}s{j}"] = a.target == b.target and a.matrix == b.matrix
    return out
