"""Finitely presented groups: relator checks against matrices and coset enumeration.

Words are lists of nonzero integers: generator i (0-based) is ``i + 1`` and its
inverse ``-(i + 1)``.  Text form is ``x6^3*t1*x18^-13``; ``1`` or an empty
string is the empty word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .exact_linalg import ExactMatrix

DEFAULT_COSET_LIMIT = 100_000

Word = tuple[int, ...]


class CosetLimitExceeded(RuntimeError):
    """Enumeration ran out of room; says nothing about the group."""


def free_reduce(word: Sequence[int]) -> Word:
    out: list[int] = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word: Sequence[int]) -> Word:
    w = list(free_reduce(word))
    while len(w) > 1 and w[0] == -w[-1]:
        w = w[1:-1]
    return tuple(w)


def invert(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def parse_word(text: str, gens: Sequence[str]) -> Word:
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    lookup = {g: i + 1 for i, g in enumerate(gens)}
    out: list[int] = []
    for tok in text.split("*"):
        tok = tok.strip()
        m = _TOKEN.match(tok)
        if not m:
            raise ValueError(f"malformed word factor {tok!r}")
        name, exp = m.group(1), int(m.group(2)) if m.group(2) else 1
        if name not in lookup:
            raise ValueError(f"unknown generator {name!r}")
        g = lookup[name]
        out.extend([g if exp > 0 else -g] * abs(exp))
    return free_reduce(out)


def format_word(word: Sequence[int], gens: Sequence[str]) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        x = word[i]
        e = (j - i) * (1 if x > 0 else -1)
        name = gens[abs(x) - 1]
        parts.append(name if e == 1 else f"{name}^{e}")
        i = j
    return "*".join(parts)


@dataclass(frozen=True)
class GroupPresentation:
    generators: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("generator names must be unique")
        object.__setattr__(self, "relators", tuple(free_reduce(r) for r in self.relators))

    @classmethod
    def from_strings(cls, gens: Sequence[str], rels: Sequence[str]) -> "GroupPresentation":
        gens = tuple(g.strip() for g in gens)
        return cls(gens, tuple(parse_word(r, gens) for r in rels))

    def relator_strings(self) -> list[str]:
        return [format_word(r, self.generators) for r in self.relators]

    def to_text(self) -> str:
        return f"gens: {', '.join(self.generators)}\nrels: {', '.join(self.relator_strings())}\n"


def _split_top(text: str) -> list[str]:
    return [s.strip() for s in text.split(",") if s.strip()]


def parse_presentation(text: str) -> GroupPresentation:
    """Read ``gens: a, b`` / ``rels: a^2, b^3`` (lines may continue; # comments)."""
    gens: list[str] = []
    rels: list[str] = []
    current = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("gens:"):
            current, line = gens, line[5:]
        elif low.startswith("rels:"):
            current, line = rels, line[5:]
        elif current is None:
            raise ValueError(f"expected 'gens:' or 'rels:', got {raw!r}")
        current.extend(_split_top(line))
    if not gens:
        raise ValueError("presentation has no generators")
    return GroupPresentation.from_strings(gens, rels)


def load_presentation(path: str | Path) -> GroupPresentation:
    return parse_presentation(Path(path).read_text())


def gamma648_presentation() -> GroupPresentation:
    text = resources.files("qutritbraid").joinpath("data/gamma648.pres").read_text()
    return parse_presentation(text)


def evaluate(word: Sequence[int], assign: Sequence[ExactMatrix], inverses: Sequence[ExactMatrix],
             dim: int, field) -> ExactMatrix:
    out = ExactMatrix.identity(dim, field)
    for x in word:
        out = out @ (assign[x - 1] if x > 0 else inverses[-x - 1])
    return out


def check_relations(p: GroupPresentation, assign: Mapping[str, ExactMatrix]) -> dict[str, bool]:
    """Evaluate every relator on the matrices; True where it is exactly the identity."""
    missing = [g for g in p.generators if g not in assign]
    if missing:
        raise KeyError(f"unassigned generators: {', '.join(missing)}")
    mats = [assign[g] for g in p.generators]
    if not mats:
        return {}
    invs = [m.inverse() for m in mats]
    dim, field = mats[0].dim, mats[0].field
    return {format_word(r, p.generators): evaluate(r, mats, invs, dim, field).is_identity()
            for r in p.relators}


class CosetTable:
    """Coset table with columns for each generator and its inverse, plus coincidence handling."""

    def __init__(self, ngens: int, limit: int):
        self.ngens = ngens
        self.limit = limit
        self.cols = 2 * ngens
        self.table: list[list[int]] = [[-1] * self.cols]
        self.parent = [0]  # union-find for coincidences; live iff parent[c] == c
        self.deductions: list[tuple[int, int]] = []

    @staticmethod
    def col(x: int) -> int:
        return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1

    @staticmethod
    def inv_col(c: int) -> int:
        return c ^ 1

    def live(self, c: int) -> bool:
        return self.parent[c] == c

    def define(self, c: int, col: int) -> int:
        if len(self.table) >= self.limit:
            raise CosetLimitExceeded(f"coset limit {self.limit} exceeded")
        d = len(self.table)
        self.table.append([-1] * self.cols)
        self.parent.append(d)
        self.table[c][col] = d
        self.table[d][self.inv_col(col)] = c
        self.deductions.append((c, col))
        return d

    def find(self, c: int) -> int:
        root = c
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[c] != root:
            self.parent[c], c = root, self.parent[c]
        return root

    def _merge(self, a: int, b: int, queue: list[int]):
        a, b = self.find(a), self.find(b)
        if a == b:
            return
        if a > b:
            a, b = b, a
        self.parent[b] = a
        queue.append(b)

    def coincidence(self, a: int, b: int):
        queue: list[int] = []
        self._merge(a, b, queue)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            for col in range(self.cols):
                f = self.table[e][col]
                if f < 0:
                    continue
                ic = self.inv_col(col)
                if self.table[f][ic] == e:
                    self.table[f][ic] = -1
                e1, f1 = self.find(e), self.find(f)
                if self.table[e1][col] >= 0:
                    self._merge(f1, self.table[e1][col], queue)
                elif self.table[f1][ic] >= 0:
                    self._merge(e1, self.table[f1][ic], queue)
                else:
                    self.table[e1][col] = f1
                    self.table[f1][ic] = e1
                    self.deductions.append((e1, col))

    def scan_and_fill(self, c: int, word: Sequence[int], fill: bool = True) -> None:
        """Trace word from c forwards and backwards; define cosets to close the gap if fill."""
        n = len(word)
        if n == 0:
            return
        cols = [self.col(x) for x in word]
        f, b = c, c
        i, j = 0, n - 1
        while True:
            while i <= j and self.table[f][cols[i]] >= 0:
                f = self.table[f][cols[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and self.table[b][self.inv_col(cols[j])] >= 0:
                b = self.table[b][self.inv_col(cols[j])]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                # deduction
                self.table[f][cols[i]] = b
                self.table[b][self.inv_col(cols[i])] = f
                self.deductions.append((f, cols[i]))
                return
            if not fill:
                return
            self.define(f, cols[i])

    def process_deductions(self, relators: Sequence[Word]):
        while self.deductions:
            c, col = self.deductions.pop()
            for start in (c, self.table[c][col]):
                start = self.find(start) if start >= 0 else -1
                if start < 0:
                    continue
                for r in relators:
                    self.scan_and_fill(start, r, fill=False)
                    if not self.live(start):
                        break

    def live_count(self) -> int:
        return sum(1 for c in range(len(self.table)) if self.parent[c] == c)

    def complete(self) -> bool:
        return all(self.table[c][k] >= 0 for c in range(len(self.table)) if self.live(c)
                   for k in range(self.cols))


def _prepare(p: GroupPresentation) -> tuple[list[Word], int]:
    rels = [cyclic_reduce(r) for r in p.relators]
    return [r for r in rels if r], len(p.generators)


def _conjugates(rels: Sequence[Word]) -> list[Word]:
    """All cyclic rotations of each relator and its inverse, without repeats."""
    seen: dict[Word, None] = {}
    for r in rels:
        for w in (r, invert(r)):
            for k in range(len(w)):
                seen.setdefault(w[k:] + w[:k], None)
    return list(seen)


def todd_coxeter(p: GroupPresentation, subgroup: Sequence[Word] = (),
                 limit: int = DEFAULT_COSET_LIMIT, strategy: str = "hlt") -> int:
    """Index of the subgroup generated by ``subgroup`` words (group order if empty).

    ``strategy`` is "hlt" (relator-based definitions, with a lookahead pass of
    deduction-only scans whenever the table fills up) or "felsch" (fill the
    first empty entry, then process all deductions before the next definition).
    """
    rels, n = _prepare(p)
    if n == 0:
        return 1
    tab = CosetTable(n, limit)
    for w in subgroup:
        tab.scan_and_fill(0, free_reduce(w))
    if strategy == "hlt":
        _hlt(tab, rels)
    elif strategy == "felsch":
        _felsch(tab, _conjugates(rels), subgroup)
    else:
        raise ValueError("strategy must be 'hlt' or 'felsch'")
    return tab.live_count()


def _lookahead(tab: CosetTable, rels: Sequence[Word]):
    """Deduction-only scans of every relator at every coset, repeated until stable."""
    while True:
        before = (tab.live_count(), sum(v >= 0 for row in tab.table for v in row))
        for c in range(len(tab.table)):
            if tab.live(c):
                for r in rels:
                    tab.scan_and_fill(c, r, fill=False)
                    if not tab.live(c):
                        break
        tab.process_deductions(rels)
        if (tab.live_count(), sum(v >= 0 for row in tab.table for v in row)) == before:
            return


def _hlt(tab: CosetTable, rels: Sequence[Word]):
    c = 0
    while c < len(tab.table):
        if tab.live(c):
            for r in rels:
                if not tab.live(c):
                    break
                try:
                    tab.scan_and_fill(c, r)
                except CosetLimitExceeded:
                    before = tab.live_count()
                    _lookahead(tab, rels)
                    _compact(tab)
                    if tab.live_count() >= before or len(tab.table) >= tab.limit:
                        raise
                    c = 0
                    break
            else:
                if tab.live(c):
                    for k in range(tab.cols):
                        if tab.table[c][k] < 0:
                            tab.define(c, k)
        c += 1
    _lookahead(tab, rels)


def _felsch(tab: CosetTable, rels: Sequence[Word], subgroup: Sequence[Word]):
    tab.process_deductions(rels)
    c = 0
    while c < len(tab.table):
        if tab.live(c):
            k = 0
            while k < tab.cols and tab.live(c):
                if tab.table[c][k] < 0:
                    tab.define(c, k)
                    tab.process_deductions(rels)
                    for w in subgroup:
                        tab.scan_and_fill(0, free_reduce(w), fill=False)
                    tab.process_deductions(rels)
                k += 1
        c += 1
    # a final full scan confirms every relator closes at every coset
    _lookahead(tab, rels)


def _compact(tab: CosetTable):
    """Renumber live cosets consecutively, dropping dead rows."""
    live = [c for c in range(len(tab.table)) if tab.live(c)]
    new = {c: i for i, c in enumerate(live)}
    table = []
    for c in live:
        row = []
        for v in tab.table[c]:
            row.append(new[tab.find(v)] if v >= 0 else -1)
        table.append(row)
    tab.table = table
    tab.parent = list(range(len(table)))
    tab.deductions = []
