from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from qutritbraid.cyclo import root_of_unity
from qutritbraid.exact_linalg import ExactMatrix, SingularMatrixError
from qutritbraid.groups import (
    DERIVED_NAMES,
    DISPLAYED_NAMES,
    ClosureCapExceeded,
    GeneratorCatalog,
    blichfeld_group,
    braid_group_image,
    center,
    closure,
    conjugacy_classes,
    conjugate_group,
    derived_subgroup,
    element_order,
    fingerprint,
    freedman_group,
    gamma_tilde,
    identity_suite,
    catalog_matrix,
)

CAT = GeneratorCatalog()


@pytest.fixture(scope="module")
def gt():
    return gamma_tilde()


def test_catalog_names():
    assert set(DISPLAYED_NAMES) | set(DERIVED_NAMES) <= set(CAT)
    with pytest.raises(KeyError):
        CAT["nope"]
    with pytest.raises(KeyError):
        GeneratorCatalog(overrides={"nope": CAT["G1"]})
    assert [n for n, _ in CAT.resolve("G1t, N")] == ["G1t", "N"]


@pytest.mark.parametrize("name", sorted(set(DISPLAYED_NAMES) | set(DERIVED_NAMES)))
def test_catalog_unitary(name):
    assert CAT[name].is_unitary()


def test_orders(gt):
    assert gt.order == 648
    assert CAT["N"] in gt
    assert braid_group_image().order == 162
    assert freedman_group().order == 648


@pytest.mark.parametrize("name,order", [("N", 9), ("G1t", 18), ("x6", 6), ("x18", 18),
                                        ("G1", 18), ("FUMt", 6), ("J", 2)])
def test_element_orders(name, order):
    assert element_order(CAT[name]) == order


def test_element_order_cap():
    with pytest.raises(Exception):
        element_order(ExactMatrix.diag([root_of_unity(1), 1, 1]), cap=10)


def test_words_evaluate_to_elements(gt):
    for i in range(0, gt.order, 37):
        assert gt.evaluate_word(gt.words[i]) == gt.elements[i]
    assert gt.word(0) == "I"


def test_words_are_shortest_prefix_closed(gt):
    lengths = Counter(len(w) for w in gt.words)
    assert lengths[0] == 1 and lengths[1] == 3


@settings(max_examples=6, deadline=None)
@given(st.permutations(["G1t", "G2t", "FUMt"]))
def test_closure_independent_of_generator_order(names):
    g = closure([CAT[n] for n in names], names=names)
    assert set(g.keys) == set(gamma_tilde().keys)


def test_closure_is_deterministic():
    a = closure([CAT["G1"], CAT["G2"]])
    b = closure([CAT["G1"], CAT["G2"]])
    assert a.keys == b.keys and a.words == b.words


def test_cap_exceeded():
    with pytest.raises(ClosureCapExceeded):
        closure([CAT["G1t"], CAT["G2t"], CAT["FUMt"]], cap=100)


def test_mapping_input():
    g = closure({"G1": CAT["G1"], "G2": CAT["G2"]})
    assert g.generator_names == ["G1", "G2"]


def test_mod_center_counts():
    assert gamma_tilde(mode="mod_center").order == 216
    assert braid_group_image(mode="mod_center").order == 54


def test_center(gt):
    z = center(gt)
    assert z.order == 3
    assert all(m.is_diagonal() for m in z.elements)
    assert ExactMatrix.identity(3).scale(root_of_unity(1, 3)) in braid_group_image()


def test_blichfeld_identity(gt):
    assert blichfeld_group().equal_as_sets(gt)


def test_conjugation(gt):
    fr = freedman_group()
    assert conjugate_group(fr, CAT["O"], transpose=True).equal_as_sets(gt)
    assert conjugate_group(fr, CAT["J"]).equal_as_sets(fr)
    with pytest.raises(SingularMatrixError):
        conjugate_group(fr, ExactMatrix.zeros(3))


def test_fingerprints(gt):
    f = fingerprint(gt)
    assert f == fingerprint(freedman_group())
    assert f.center_order == 3
    assert dict(f.order_histogram) == {1: 1, 2: 21, 3: 224, 4: 18, 6: 60, 9: 18, 12: 36, 18: 162, 36: 108}
    assert f.class_count == 49 and f.derived_order == 108
    b = fingerprint(braid_group_image())
    assert (b.class_count, b.derived_order) == (22, 27)
    assert dict(b.order_histogram) == {1: 1, 2: 9, 3: 62, 6: 18, 9: 18, 18: 54}


def test_class_equation(gt):
    classes = conjugacy_classes(gt)
    assert sum(len(c) for c in classes) == gt.order
    assert all(gt.order % len(c) == 0 for c in classes)
    assert derived_subgroup(gt).order * 6 == gt.order


def test_identity_suite_passes():
    checks = identity_suite()
    failed = [c.name for c in checks if not c.passed]
    assert not failed
    assert len(checks) > 20


def test_identity_suite_detects_corruption():
    bad = GeneratorCatalog(overrides={"G2t": -CAT["G2t"]})
    checks = identity_suite(bad, with_closures=False)
    assert any(not c.passed for c in checks)


def test_to_json_schema():
    g = braid_group_image()
    js = g.to_json()
    assert set(js) >= {"order", "generators", "elements", "fingerprint"}
    assert set(js["elements"][0]) == {"matrix", "word", "order"}
