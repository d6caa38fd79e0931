"""Named qutrit matrices, exact finite group closure, and structural invariants.

All catalog matrices are written with determinant 1 in the basis where they
are conventionally written: G1, G2 and FUM on (|0>, |2>, |4>); the tilde forms,
N, the Blichfeld generators and everything derived from them on
e1 = (|0>+|4>)/sqrt2, e2 = |2>, e3 = (|0>-|4>)/sqrt2.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .cyclo import CyclotomicField, _as_field, exp_i_pi, sqrt_constant
from .exact_linalg import ExactMatrix, _root_table, mat_inverse

DEFAULT_CAP = 10_000


class ClosureCapExceeded(RuntimeError):
    pass


class OrderCapExceeded(RuntimeError):
    pass


# catalog

def _base_matrices(field: CyclotomicField) -> dict[str, ExactMatrix]:
    f = field
    e = lambda num, den: exp_i_pi(num, den, f)  # noqa: E731
    rho, omega, z3 = e(7, 9), e(4, 9), e(2, 3)
    half = sqrt_constant(2, f) / 2  # 1/sqrt2
    M = lambda rows: ExactMatrix.from_entries(rows, f)  # noqa: E731
    D = lambda vals: ExactMatrix.diag(vals, f)  # noqa: E731
    out = {
        "G1": D([rho, -omega, -rho]),
        "G2": M([[-omega / 2, rho * half, omega / 2],
                 [rho * half, 0, rho * half],
                 [omega / 2, rho * half, -omega / 2]]),
        "G1t": M([[0, 0, rho], [0, -omega, 0], [rho, 0, 0]]),
        "G2t": M([[0, rho, 0], [rho, 0, 0], [0, 0, -omega]]),
        "FUMt": D([-z3, -z3, z3]),
        "N": D([-e(-1, 9), -e(-1, 9), e(2, 9)]),
        "F18": D([e(1, 9), e(1, 9), e(-2, 9)]),
        # built on the same family pattern as F(18,1,1)
        "F9": D([e(2, 9), e(2, 9), e(-4, 9)]),
        "E": M([[0, 1, 0], [0, 0, 1], [1, 0, 0]]),
        "Btilde": M([[-1, 0, 0], [0, 0, -1], [0, -1, 0]]),
        "O": M([[half, 0, -half], [0, 1, 0], [half, 0, half]]),
        # change of basis (|0>,|2>,|4>) -> (e1,e2,e3); symmetric and an involution
        "P": M([[half, 0, half], [0, 1, 0], [half, 0, -half]]),
        "J": M([[0, 0, 1], [0, 1, 0], [1, 0, 0]]),
    }
    return out


def _auxiliary(field: CyclotomicField) -> dict[str, ExactMatrix]:
    """Intermediate matrices of the identity chain, for cross-checks."""
    f = field
    e = lambda num, den: exp_i_pi(num, den, f)  # noqa: E731
    D = lambda vals: ExactMatrix.diag(vals, f)  # noqa: E731
    M = lambda rows: ExactMatrix.from_entries(rows, f)  # noqa: E731
    return {
        "KleinA": D([-1, -1, 1]),
        "KleinB": D([1, -1, -1]),
        "G1t^2": D([e(-4, 9), e(8, 9), e(-4, 9)]),
        "N(alt)": D([e(8, 9), e(8, 9), e(2, 9)]),
        "N^2*G1t^2": D([e(4, 3), e(2, 3), 1]),
        "(N^2*G1t^2)^2": D([e(2, 3), e(4, 3), 1]),
        "t3": M([[0, 0, -1], [0, -1, 0], [-1, 0, 0]]),
        "t1": M([[0, -1, 0], [-1, 0, 0], [0, 0, -1]]),
        "t2": M([[-1, 0, 0], [0, 0, -1], [0, -1, 0]]),
        "FUMt(PU3)": D([-1, -1, 1]),
    }


DISPLAYED_NAMES = ("G1", "G2", "G1t", "G2t", "FUMt", "N", "F18", "F9", "E", "Btilde", "O", "P", "J")
DERIVED_NAMES = ("FUM", "x6", "x18", "t1", "t2", "t3", "c1", "c2", "KleinA", "KleinB")


def catalog_matrix(name: str, field=None) -> ExactMatrix:
    return _base_cached(_as_field(field).n)[name]


@lru_cache(maxsize=None)
def _base_cached(n: int) -> dict[str, ExactMatrix]:
    return _base_matrices(_as_field(n))


class GeneratorCatalog(Mapping):
    """Named matrices; derived names are recomputed from the base ones.

    ``overrides`` replaces base matrices before derivation, which is how a
    deliberately corrupted catalog is built for negative controls.
    """

    def __init__(self, field=None, overrides: Mapping[str, ExactMatrix] | None = None):
        self.field = _as_field(field)
        base = dict(_base_cached(self.field.n))
        for k, v in (overrides or {}).items():
            if k not in base:
                raise KeyError(f"unknown base matrix {k!r}")
            base[k] = v
        self.auxiliary = _auxiliary(self.field)
        m = dict(base)
        P = m["P"]
        m["FUM"] = P @ m["FUMt"] @ P
        kA = m["FUMt"] ** 3
        g1i = m["G1t"].inverse()
        kB = m["G1t"] @ kA @ g1i
        m["KleinA"], m["KleinB"] = kA, kB
        m["x6"] = m["N"] ** 2 @ m["G1t"] ** 2 @ kA
        m["x18"] = m["N"] @ kB
        m["t1"] = m["G2t"] ** 9
        m["t3"] = m["G1t"] ** 9
        m["t2"] = m["G2t"] @ m["G1t"] @ m["G2t"]
        m["c1"] = m["G1t"] ** 9 @ m["G2t"] ** 9
        m["c2"] = m["G2t"] ** 9 @ m["G1t"] ** 9
        self._m = m

    def __getitem__(self, name: str) -> ExactMatrix:
        try:
            return self._m[name]
        except KeyError:
            raise KeyError(f"unknown catalog matrix {name!r}; known: {', '.join(self._m)}") from None

    def __iter__(self):
        return iter(self._m)

    def __len__(self):
        return len(self._m)

    def resolve(self, names: str | Sequence[str]) -> list[tuple[str, ExactMatrix]]:
        if isinstance(names, str):
            names = [s.strip() for s in names.split(",") if s.strip()]
        return [(n, self[n]) for n in names]


# closure

def _pack(mats: Sequence[ExactMatrix]):
    nums = [m.num for m in mats]
    if any(a.dtype == object for a in nums):
        nums = [a.astype(object) for a in nums]
    return np.stack(nums), np.array([m.den for m in mats], dtype=object if nums[0].dtype == object else np.int64)


class _Keyer:
    """Canonical hash keys per mode; mod_center keys are the least over the Z_d scalars."""

    def __init__(self, field: CyclotomicField, dim: int, mode: str):
        if mode not in ("exact", "mod_center"):
            raise ValueError("mode must be 'exact' or 'mod_center'")
        self.mode = mode
        self.field = field
        if mode == "mod_center":
            if field.n % dim:
                raise ValueError(f"the center of SU({dim}) is not in Q(zeta_{field.n})")
            self.tables = [_root_table(field, field.n // dim * j) for j in range(dim)]

    def canonical(self, num: np.ndarray, den) -> tuple[np.ndarray, list[bytes]]:
        """Representatives and keys for a batch."""
        if self.mode == "exact":
            return num, _kernels.keys_for(num, den)
        cands = [_kernels.linear_map_batch(num, t) for t in self.tables]
        reps, keys = [], []
        cand_keys = [_kernels.keys_for(c, den) for c in cands]
        for t in range(num.shape[0]):
            j = min(range(len(cands)), key=lambda j: cand_keys[j][t])
            reps.append(cands[j][t])
            keys.append(cand_keys[j][t])
        return np.stack(reps) if reps else num, keys


@dataclass
class GroupClosure:
    """A finite matrix group with per-element provenance words."""

    field: CyclotomicField
    generators: list[ExactMatrix]
    generator_names: list[str]
    mode: str
    elements: list[ExactMatrix]
    words: list[tuple[int, ...]]
    keys: list[bytes]
    _index: dict[bytes, int] = dc_field(default_factory=dict, repr=False)
    _orders: list[int] | None = dc_field(default=None, repr=False)

    def __post_init__(self):
        if not self._index:
            self._index = {k: i for i, k in enumerate(self.keys)}
        self._keyer = _Keyer(self.field, self.dim, self.mode)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    @property
    def dim(self) -> int:
        return self.generators[0].dim if self.generators else self.elements[0].dim

    def key_of(self, m: ExactMatrix) -> bytes:
        _, keys = self._keyer.canonical(m.num[None], [m.den])
        return keys[0]

    def contains(self, m: ExactMatrix) -> bool:
        if m.shape != (self.dim, self.dim):
            raise ValueError("dimension mismatch")
        return self.key_of(m) in self._index

    __contains__ = contains

    def index_of(self, m: ExactMatrix) -> int | None:
        return self._index.get(self.key_of(m))

    def word(self, i: int) -> str:
        return format_word(self.words[i], self.generator_names)

    def evaluate_word(self, word: Sequence[int]) -> ExactMatrix:
        out = ExactMatrix.identity(self.dim, self.field)
        for g in word:
            out = out @ self.generators[g]
        return out

    def equal_as_sets(self, other: "GroupClosure") -> bool:
        if self.mode != other.mode or self.dim != other.dim:
            raise ValueError("can only compare closures of the same mode and dimension")
        return set(self.keys) == set(other.keys)

    def element_orders(self) -> list[int]:
        if self._orders is None:
            self._orders = _batch_orders(self.elements, self._keyer, max(self.order, 1))
        return self._orders

    def subset(self, indices: Sequence[int]) -> "GroupClosure":
        return GroupClosure(self.field, self.generators, self.generator_names, self.mode,
                            [self.elements[i] for i in indices], [self.words[i] for i in indices],
                            [self.keys[i] for i in indices])

    def to_json(self, include_fingerprint: bool = True) -> dict:
        orders = self.element_orders()
        out = {
            "order": self.order,
            "mode": self.mode,
            "field_order": self.field.n,
            "generators": [{"name": n, "matrix": g.to_json()}
                           for n, g in zip(self.generator_names, self.generators)],
            "elements": [{"matrix": m.to_json(), "word": self.word(i), "order": orders[i]}
                         for i, m in enumerate(self.elements)],
        }
        if include_fingerprint:
            out["fingerprint"] = fingerprint(self).to_json()
        return out


def format_word(word: Sequence[int], names: Sequence[str]) -> str:
    if not word:
        return "I"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        n = names[word[i]]
        parts.append(n if j - i == 1 else f"{n}^{j - i}")
        i = j
    return "*".join(parts)


def closure(generators, mode: str = "exact", cap: int = DEFAULT_CAP,
            names: Sequence[str] | None = None) -> GroupClosure:
    """Breadth-first closure under right multiplication by the generators.

    Frontier elements are expanded in insertion order and products in generator
    order, so the element list and the (shortest) provenance words are
    deterministic.  Generators must be unitary; then the closure of a finite
    group is reached without adding inverses explicitly.
    """
    if isinstance(generators, Mapping):
        names = list(generators)
        generators = list(generators.values())
    gens = list(generators)
    if not gens:
        raise ValueError("at least one generator is required")
    if names is None:
        names = [f"g{i + 1}" for i in range(len(gens))]
    names = list(names)
    fld = gens[0].field
    dim = gens[0].dim
    for g in gens:
        if g.shape != (dim, dim) or g.field.n != fld.n:
            raise ValueError("generators must be square matrices of one size over one field")
        if not g.is_unitary():
            raise ValueError("generators must be unitary")
    keyer = _Keyer(fld, dim, mode)
    ident = ExactMatrix.identity(dim, fld)
    rep, keys = keyer.canonical(ident.num[None], [ident.den])
    elements = [ExactMatrix(fld, rep[0], 1)]
    words: list[tuple[int, ...]] = [()]
    index = {keys[0]: 0}
    key_list = [keys[0]]
    gnum, gden = _pack(gens)
    frontier = [0]
    while frontier:
        fnum, fden = _pack([elements[i] for i in frontier])
        pnum, pden = _kernels.matmul_outer(fnum, fden, gnum, gden, fld.modulus)
        reps, pkeys = keyer.canonical(pnum, pden)
        nxt = []
        for t, k in enumerate(pkeys):
            if k in index:
                continue
            if len(elements) >= cap:
                raise ClosureCapExceeded(
                    f"closure exceeded {cap} elements: group may be infinite or cap too small")
            i, g = divmod(t, len(gens))
            index[k] = len(elements)
            key_list.append(k)
            elements.append(ExactMatrix(fld, reps[t], int(pden[t])))
            words.append(words[frontier[i]] + (g,))
            nxt.append(len(elements) - 1)
        frontier = nxt
    return GroupClosure(fld, gens, names, mode, elements, words, key_list, index)


def _batch_orders(elements: Sequence[ExactMatrix], keyer: _Keyer, cap: int) -> list[int]:
    fld = elements[0].field
    dim = elements[0].dim
    ident = ExactMatrix.identity(dim, fld)
    _, ik = keyer.canonical(ident.num[None], [ident.den])
    idkey = ik[0]
    enum, eden = _pack(elements)
    cur, cden = enum, eden
    orders = [0] * len(elements)
    pending = list(range(len(elements)))
    for k in range(1, cap + 1):
        _, keys = keyer.canonical(cur, cden)
        still = []
        for pos, t in enumerate(pending):
            if keys[pos] == idkey:
                orders[t] = k
            else:
                still.append(pos)
        if not still:
            return orders
        pending = [pending[p] for p in still]
        cur, cden = cur[still], np.asarray(cden)[still]
        cur, cden = _kernels.matmul_batch(cur, cden, enum[pending], np.asarray(eden)[pending], fld.modulus)
    raise OrderCapExceeded(f"element order exceeds {cap}")


def element_order(m: ExactMatrix, cap: int = 10_000, mode: str = "exact") -> int:
    """Least k >= 1 with m^k = I (up to the center in mod_center mode)."""
    return _batch_orders([m], _Keyer(m.field, m.dim, mode), cap)[0]


def center(group: GroupClosure) -> GroupClosure:
    """Elements commuting with every generator (up to the center in mod_center mode)."""
    keep = []
    fld = group.field
    enum, eden = _pack(group.elements)
    ok = np.ones(group.order, dtype=bool)
    for g in group.generators:
        gn, gd = _pack([g] * group.order)
        left, ld = _kernels.matmul_batch(gn, gd, enum, eden, fld.modulus)
        right, rd = _kernels.matmul_batch(enum, eden, gn, gd, fld.modulus)
        _, lk = group._keyer.canonical(left, ld)
        _, rk = group._keyer.canonical(right, rd)
        ok &= np.array([a == b for a, b in zip(lk, rk)])
    keep = [i for i in range(group.order) if ok[i]]
    return group.subset(keep)


def conjugate_group(group: GroupClosure, P: ExactMatrix, transpose: bool = False) -> GroupClosure:
    """Image under M -> P^-1 M P, or P^T M P when ``transpose`` (P orthogonal)."""
    left = P.transpose() if transpose else mat_inverse(P)
    fld = group.field
    k = group.order
    ln, ld = _pack([left] * k)
    pn, pd = _pack([P] * k)
    en, ed = _pack(group.elements)
    a, ad = _kernels.matmul_batch(ln, ld, en, ed, fld.modulus)
    b, bd = _kernels.matmul_batch(a, ad, pn, pd, fld.modulus)
    reps, keys = group._keyer.canonical(b, bd)
    elements = [ExactMatrix(fld, reps[t], int(bd[t])) for t in range(k)]
    gens = [left @ g @ P for g in group.generators]
    return GroupClosure(fld, gens, list(group.generator_names), group.mode, elements,
                        list(group.words), keys)


def _conjugation_perms(group: GroupClosure) -> list[list[int]]:
    fld = group.field
    en, ed = _pack(group.elements)
    perms = []
    for g in group.generators:
        gi = g.inverse()
        gn, gd = _pack([g] * group.order)
        gin, gid = _pack([gi] * group.order)
        a, ad = _kernels.matmul_batch(gin, gid, en, ed, fld.modulus)
        b, bd = _kernels.matmul_batch(a, ad, gn, gd, fld.modulus)
        _, keys = group._keyer.canonical(b, bd)
        perms.append([group._index[k] for k in keys])
    return perms


def conjugacy_classes(group: GroupClosure) -> list[list[int]]:
    """Orbits of conjugation by the generators, as sorted index lists."""
    perms = _conjugation_perms(group)
    seen = [False] * group.order
    classes = []
    for start in range(group.order):
        if seen[start]:
            continue
        orbit, stack = [], [start]
        seen[start] = True
        while stack:
            x = stack.pop()
            orbit.append(x)
            for p in perms:
                y = p[x]
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        classes.append(sorted(orbit))
    return classes


def derived_subgroup(group: GroupClosure) -> GroupClosure:
    """Normal closure of the generator commutators."""
    gens = group.generators
    comms = []
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            comms.append(a.inverse() @ b.inverse() @ a @ b)
    seeds: dict[bytes, ExactMatrix] = {}
    for c in comms:
        for x in group.elements:
            y = x.inverse() @ c @ x
            seeds.setdefault(group.key_of(y), y)
    ident = ExactMatrix.identity(group.dim, group.field)
    mats = [m for k, m in sorted(seeds.items())] or [ident]
    return closure(mats, mode=group.mode, cap=group.order + 1)


@dataclass(frozen=True)
class Fingerprint:
    order: int
    center_order: int
    order_histogram: tuple[tuple[int, int], ...]
    class_count: int
    derived_order: int

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "center_order": self.center_order,
            "element_orders": {str(k): v for k, v in self.order_histogram},
            "conjugacy_classes": self.class_count,
            "derived_subgroup_order": self.derived_order,
        }


def fingerprint(group: GroupClosure) -> Fingerprint:
    hist = Counter(group.element_orders())
    return Fingerprint(
        order=group.order,
        center_order=center(group).order,
        order_histogram=tuple(sorted(hist.items())),
        class_count=len(conjugacy_classes(group)),
        derived_order=derived_subgroup(group).order,
    )


def cyclic_subgroup_keys(m: ExactMatrix, cap: int = 10_000) -> set[bytes]:
    out = set()
    p = ExactMatrix.identity(m.dim, m.field)
    for _ in range(cap):
        out.add(p.key)
        p = p @ m
        if p.is_identity():
            return out
    raise OrderCapExceeded(f"element order exceeds {cap}")


# named groups

@lru_cache(maxsize=None)
def gamma_tilde(field_order: int | None = None, mode: str = "exact") -> GroupClosure:
    """<G1t, G2t, FUMt> on the e-basis."""
    cat = GeneratorCatalog(field_order)
    return closure([cat["G1t"], cat["G2t"], cat["FUMt"]], mode=mode, names=["G1t", "G2t", "FUMt"])


@lru_cache(maxsize=None)
def freedman_group(field_order: int | None = None, mode: str = "exact") -> GroupClosure:
    """<G1, G2, FUM> on (|0>, |2>, |4>)."""
    cat = GeneratorCatalog(field_order)
    return closure([cat["G1"], cat["G2"], cat["FUM"]], mode=mode, names=["G1", "G2", "FUM"])


@lru_cache(maxsize=None)
def blichfeld_group(field_order: int | None = None, mode: str = "exact") -> GroupClosure:
    cat = GeneratorCatalog(field_order)
    return closure([cat["F18"], cat["E"], cat["Btilde"]], mode=mode, names=["F18", "E", "Btilde"])


@lru_cache(maxsize=None)
def braid_group_image(field_order: int | None = None, mode: str = "exact") -> GroupClosure:
    """<G1, G2>: the image of the four-strand braid group on the qutrit."""
    cat = GeneratorCatalog(field_order)
    return closure([cat["G1"], cat["G2"]], mode=mode, names=["G1", "G2"])


# identity suite

@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "detail": self.detail}


def _eq(name: str, a: ExactMatrix, b: ExactMatrix) -> Check:
    ok = a == b
    return Check(name, ok, "" if ok else f"lhs={a.pretty()} rhs={b.pretty()}")


def identity_suite(catalog: GeneratorCatalog | None = None, with_closures: bool = True) -> list[Check]:
    """Every catalog matrix identity of the qutrit group, checked exactly."""
    from .presentations import gamma648_presentation, check_relations

    c = catalog or GeneratorCatalog()
    aux = c.auxiliary
    G1t, G2t, FUMt, N = c["G1t"], c["G2t"], c["FUMt"], c["N"]
    I3 = ExactMatrix.identity(3, c.field)
    out: list[Check] = []
    P = c["P"]
    out += [
        _eq("P*G1*P = G1t", P @ c["G1"] @ P, G1t),
        _eq("P*G2*P = G2t", P @ c["G2"] @ P, G2t),
        _eq("P^2 = I", P @ P, I3),
    ]
    # G2 action on the qutrit basis
    s = sqrt_constant(2, c.field) / 2
    rho = exp_i_pi(7, 9, c.field)
    omega = exp_i_pi(4, 9, c.field)
    G2 = c["G2"]
    v2 = ExactMatrix.from_entries([[0], [1], [0]], c.field)
    vp = ExactMatrix.from_entries([[s], [0], [s]], c.field)
    vm = ExactMatrix.from_entries([[s], [0], [-s]], c.field)
    out += [
        _eq("G2|2> = e^{7i pi/9}(|0>+|4>)/sqrt2", G2 @ v2, vp.scale(rho)),
        _eq("G2(|0>+|4>)/sqrt2 = e^{7i pi/9}|2>", G2 @ vp, v2.scale(rho)),
        _eq("G2(|0>-|4>)/sqrt2 = -e^{4i pi/9}(|0>-|4>)/sqrt2", G2 @ vm, vm.scale(-omega)),
    ]
    kA, kB = c["KleinA"], c["KleinB"]
    out += [
        _eq("FUMt^3 = diag(-1,-1,1)", kA, aux["KleinA"]),
        _eq("G1t*FUMt^3*G1t^-1 = diag(1,-1,-1)", kB, aux["KleinB"]),
        Check("Klein pair: involutions that commute",
              element_order(kA) == 2 and element_order(kB) == 2 and kA @ kB == kB @ kA),
        Check("Klein pair generates 4 elements", closure([kA, kB]).order == 4),
        _eq("FUMt = diag(-1,-1,1) in PU(3)", _proj(FUMt), _proj(aux["FUMt(PU3)"])),
        _eq("G1t^2 matches table", G1t ** 2, aux["G1t^2"]),
        _eq("N = diag(e^{8i pi/9}, e^{8i pi/9}, e^{2i pi/9})", N, aux["N(alt)"]),
        _eq("N^2*G1t^2 matches table", N ** 2 @ G1t ** 2, aux["N^2*G1t^2"]),
        _eq("(N^2*G1t^2)^2 matches table", (N ** 2 @ G1t ** 2) ** 2, aux["(N^2*G1t^2)^2"]),
    ]
    a_keys = cyclic_subgroup_keys(N ** 2 @ G1t ** 2)
    n_keys = cyclic_subgroup_keys(N)
    k_keys = {m.key for m in (I3, kA, kB, kA @ kB)}
    out += [
        Check("<N^2*G1t^2> meets <N> trivially", a_keys & n_keys == {I3.key}),
        Check("<N^2*G1t^2> meets the Klein group trivially", a_keys & k_keys == {I3.key}),
        Check("<N> meets the Klein group trivially", n_keys & k_keys == {I3.key}),
    ]
    for name, want in (("N", 9), ("G1t", 18), ("G1t^2", 9), ("x6", 6), ("x18", 18)):
        m = G1t ** 2 if name == "G1t^2" else c[name]
        got = element_order(m)
        out.append(Check(f"order({name}) = {want}", got == want, f"got {got}"))
    out += [
        _eq("t3 = G1t^9 matches table", c["t3"], aux["t3"]),
        _eq("t1 = G2t^9 matches table", c["t1"], aux["t1"]),
        _eq("t2 = G2t*G1t*G2t matches table", c["t2"], aux["t2"]),
        _eq("G1t = N^-10 (N^2 G1t^2)^5 G1t^9", N ** -10 @ (N ** 2 @ G1t ** 2) ** 5 @ G1t ** 9, G1t),
        _eq("FUMt^4 = N^3", FUMt ** 4, N ** 3),
        _eq("FUMt = N^3 FUMt^-3", N ** 3 @ FUMt ** -3, FUMt),
        _eq("N^2 G2t^2 = FUMt^2", N ** 2 @ G2t ** 2, FUMt ** 2),
        _eq("G2t^2 = N^-2 FUMt^2", G2t ** 2, N ** -2 @ FUMt ** 2),
        _eq("G2t = (G2t^2)^5 G2t^9", (G2t ** 2) ** 5 @ G2t ** 9, G2t),
        _eq("F18 = FUMt^3 N^-1", c["F18"], FUMt ** 3 @ N ** -1),
        _eq("E = G2t^9 G1t^9", c["E"], G2t ** 9 @ G1t ** 9),
        _eq("Btilde = G2t G1t G2t", c["Btilde"], G2t @ G1t @ G2t),
        _eq("N = F9^4", N, c["F9"] ** 4),
        _eq("F9 = G2t^8", c["F9"], G2t ** 8),
        _eq("F9^-1 = G2t t1", c["F9"].inverse(), G2t @ c["t1"]),
        _eq("N = G2t^-4", N, G2t ** -4),
    ]
    s3 = [I3, c["t1"], c["t2"], c["t3"], c["c1"], c["c2"]]
    s3_keys = {m.key for m in s3}
    closed = all((a @ b).key in s3_keys for a in s3 for b in s3)
    out += [
        Check("{I,t1,t2,t3,c1,c2} has six elements and is closed", closed and len(s3_keys) == 6),
        Check("c1, c2 are the 3-cycle permutation matrices",
              _is_permutation(c["c1"]) and _is_permutation(c["c2"])
              and element_order(c["c1"]) == 3 and c["c2"] == c["c1"].inverse()),
    ]
    rep = check_relations(gamma648_presentation(), {n: c[n] for n in ("x6", "x18", "t1", "t2")})
    for name, ok in rep.items():
        out.append(Check(f"relator {name}", ok))
    if with_closures:
        gt = closure([G1t, G2t, FUMt, N], names=["G1t", "G2t", "FUMt", "N"])
        diag = sum(1 for m in gt.elements if m.is_diagonal())
        out.append(Check("|<G1t,G2t,FUMt,N>| = 648", gt.order == 648, f"got {gt.order}"))
        out.append(Check("diagonal subgroup has 108 elements", diag == 108, f"got {diag}"))
    return out


def _proj(m: ExactMatrix) -> ExactMatrix:
    from .exact_linalg import canonical_projective_form

    return canonical_projective_form(m, "center")


def _is_permutation(m: ExactMatrix) -> bool:
    ents = m.entries()
    return all(sorted(x == 1 for x in row) == [False] * (len(row) - 1) + [True]
               and all(x == 0 or x == 1 for x in row) for row in ents)


def suite_json(checks: Sequence[Check]) -> str:
    return json.dumps([c.to_json() for c in checks], indent=2, sort_keys=True)
