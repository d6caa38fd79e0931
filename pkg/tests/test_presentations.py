import math

import pytest
from hypothesis import given, settings, strategies as st

from qutritbraid.groups import GeneratorCatalog
from qutritbraid.presentations import (
    CosetLimitExceeded,
    GroupPresentation,
    check_relations,
    cyclic_reduce,
    free_reduce,
    invert,
    gamma648_presentation,
    parse_presentation,
    parse_word,
    todd_coxeter,
)

SMALL = {
    "S3": ("a,b", ["a^2", "b^3", "a*b*a*b"], 6),
    "A5": ("a,b", ["a^2", "b^3", "(ab)^5"], 60),
    "Q8": ("a,b", ["a^4", "a^2*b^-2", "b^-1*a*b*a"], 8),
    "D10": ("r,s", ["r^5", "s^2", "s*r*s*r"], 10),
    "C2xC2": ("a,b", ["a^2", "b^2", "a*b*a^-1*b^-1"], 4),
}


def pres(gens, rels):
    rels = ["a*b*a*b*a*b*a*b*a*b" if r == "(ab)^5" else r for r in rels]
    return GroupPresentation.from_strings(gens.split(","), rels)


@pytest.mark.parametrize("name", sorted(SMALL))
@pytest.mark.parametrize("strategy", ["hlt", "felsch"])
def test_small_groups(name, strategy):
    gens, rels, order = SMALL[name]
    assert todd_coxeter(pres(gens, rels), strategy=strategy) == order


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.integers(1, 40))
def test_cyclic_quotients(m, n):
    # <a | a^m, a^n> is cyclic of order gcd(m, n)
    p = GroupPresentation.from_strings(["a"], [f"a^{m}", f"a^{n}"])
    assert todd_coxeter(p) == math.gcd(m, n)


@settings(max_examples=10, deadline=None)
@given(st.permutations(["a^2", "b^3", "a*b*a*b*a*b*a*b*a*b"]))
def test_relator_order_irrelevant(rels):
    assert todd_coxeter(GroupPresentation.from_strings(["a", "b"], rels)) == 60


def test_subgroup_index():
    a5 = pres("a,b", ["a^2", "b^3", "(ab)^5"])
    assert todd_coxeter(a5, subgroup=[parse_word("a", ["a", "b"])]) == 30
    assert todd_coxeter(a5, subgroup=[parse_word("b", ["a", "b"])]) == 20
    s3 = pres("a,b", ["a^2", "b^3", "a*b*a*b"])
    assert todd_coxeter(s3, subgroup=[parse_word("b", ["a", "b"])], strategy="felsch") == 2


def test_limit_exceeded_on_infinite_group():
    free = GroupPresentation.from_strings(["a", "b"], ["a*b*a^-1*b^-1"])
    with pytest.raises(CosetLimitExceeded):
        todd_coxeter(free, limit=500)


def test_unknown_strategy():
    with pytest.raises(ValueError):
        todd_coxeter(pres("a,b", ["a^2"]), strategy="random")


def test_word_utilities():
    assert free_reduce((1, -1, 2, 2, -2)) == (2,)
    assert cyclic_reduce((-1, 2, 1)) == (2,)
    assert invert((1, 2, -3)) == (3, -2, -1)
    assert parse_word("a^-2*b", ["a", "b"]) == (-1, -1, 2)
    assert parse_word("", ["a"]) == ()
    for bad in ("c", "a^", "(a*b)^2"):
        with pytest.raises(ValueError):
            parse_word(bad, ["a", "b"])


def test_presentation_file_round_trip():
    p = gamma648_presentation()
    assert list(p.generators) == ["x6", "x18", "t1", "t2"]
    assert len(p.relators) == 10
    q = parse_presentation(p.to_text())
    assert q.relator_strings() == p.relator_strings()


def test_file_format_comments_and_continuations():
    text = "# a comment\ngens: a, b\nrels: a^2, b^3,\n  a*b*a*b  # trailing\n"
    p = parse_presentation(text)
    assert todd_coxeter(p) == 6
    with pytest.raises(ValueError):
        parse_presentation("rels: a^2\n")


def test_order648_relations_hold():
    res = check_relations(gamma648_presentation(), GeneratorCatalog())
    assert len(res) == 10 and all(res.values())


def test_check_relations_detects_wrong_assignment():
    cat = GeneratorCatalog()
    assign = {"x6": cat["x6"], "x18": cat["x18"], "t1": cat["t2"], "t2": cat["t1"]}
    assert not all(check_relations(gamma648_presentation(), assign).values())
    with pytest.raises(KeyError):
        check_relations(gamma648_presentation(), {"x6": cat["x6"]})


@pytest.mark.parametrize("strategy", ["hlt", "felsch"])
def test_order648_order(strategy):
    assert todd_coxeter(gamma648_presentation(), strategy=strategy) == 648
