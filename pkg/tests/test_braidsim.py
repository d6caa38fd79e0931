import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qutritbraid.braidsim import (
    BraidOperator,
    all_braid_relations,
    ancilla_protocol,
    apply_word,
    certify_ancilla,
    change_basis_qutrit,
    enumerate_basis,
    format_braid_word,
    full_twist,
    middle_braid_2211,
    middle_braid_phase,
    parse_braid_word,
    project_internal,
    protocol_space,
    qutrit_space,
    sigma_matrix,
    word_operator,
)
from qutritbraid.cyclo import exp_i_pi, root_of_unity, sqrt_constant, sqrt_rational
from qutritbraid.exact_linalg import ExactMatrix, StateVector, scalar_multiple_of
from qutritbraid.groups import GeneratorCatalog, catalog_matrix
from qutritbraid.tqft import fusion_allowed

H = Fraction(1, 2)


def fusion_dim(leaves, total):
    n = [np.array([[1 if fusion_allowed(a, x, b) else 0 for b in range(5)] for a in range(5)])
         for x in range(5)]
    v = np.zeros(5, dtype=int)
    v[leaves[0]] = 1
    for x in leaves[1:]:
        v = v @ n[x]
    return int(v[total])


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 4), min_size=1, max_size=6), st.integers(0, 4))
def test_basis_dimension_matches_fusion_matrices(leaves, total):
    assert enumerate_basis(leaves, total).dim == fusion_dim(leaves, total)


def test_named_spaces():
    assert qutrit_space().basis == ((0, 2), (2, 2), (4, 2))
    assert enumerate_basis((1, 2, 2, 1), 0).basis == ((1, 1), (3, 1))
    assert protocol_space().dim == fusion_dim((2, 2, 2, 2, 1, 1), 0) == 8
    assert qutrit_space().labels(1) == (2, 2, 2, 0)


def test_braid_word_grammar():
    assert parse_braid_word("s1:1, s2:-1,s3:+1") == [(1, 1), (2, -1), (3, 1)]
    assert parse_braid_word("") == []
    assert format_braid_word([(1, 1), (2, -1)]) == "s1:1,s2:-1"
    for bad in ("s1", "s1:2", "t1:1", "s:1"):
        with pytest.raises(ValueError):
            parse_braid_word(bad)


def test_qutrit_generators_reproduce_catalog():
    phase = root_of_unity(68)
    assert phase == exp_i_pi(-1, 9)
    s1 = sigma_matrix(qutrit_space(), 1).matrix
    s2 = sigma_matrix(qutrit_space(), 2).matrix
    assert scalar_multiple_of(s1, catalog_matrix("G1")) == phase
    assert scalar_multiple_of(s2, catalog_matrix("G2")) == phase
    assert sigma_matrix(qutrit_space(), 3).matrix == s1


def test_inverse_letters():
    sp = qutrit_space()
    op = word_operator(sp, [(2, 1), (2, -1)])
    assert op.matrix.is_identity()
    assert sigma_matrix(sp, 2, -1).matrix == sigma_matrix(sp, 2).matrix.inverse()


def test_gate_powers():
    g2t = change_basis_qutrit(catalog_matrix("G2"))
    assert g2t == catalog_matrix("G2t")
    assert catalog_matrix("N") == catalog_matrix("G2t") ** -4
    assert (catalog_matrix("G2t") ** 8) == catalog_matrix("F9")


@pytest.mark.parametrize("leaves", [(2, 2, 2, 2), (2, 2, 2, 2, 1, 1), (1, 2, 2, 1), (2, 2, 1, 1)])
def test_braid_relations(leaves):
    rel = all_braid_relations(enumerate_basis(leaves, 0))
    assert rel and all(rel.values())


@pytest.mark.parametrize("leaves", [(2, 2, 2, 2), (2, 2, 2, 2, 1, 1), (2, 1, 2, 1, 3)])
def test_generators_unitary(leaves):
    total = 0 if sum(leaves) % 2 == 0 else 1
    sp = enumerate_basis(leaves, total)
    for i in range(1, len(leaves)):
        for s in (1, -1):
            assert sigma_matrix(sp, i, s).is_unitary()


def test_composition_requires_matching_spaces():
    a = sigma_matrix(enumerate_basis((2, 2, 1, 1), 0), 2)
    with pytest.raises(TypeError):
        a @ a
    b = sigma_matrix(a.target, 2)
    assert (b @ a).target.leaves == (2, 2, 1, 1)


def test_strand_range():
    with pytest.raises(IndexError):
        sigma_matrix(qutrit_space(), 4)
    with pytest.raises(ValueError):
        sigma_matrix(qutrit_space(), 1, 2)


def test_qubit_1221_middle_braid():
    s = sqrt_constant(3) / 2 * root_of_unity(18)
    expected = ExactMatrix.from_entries([[-H, s], [s, -H]])
    sp = enumerate_basis((1, 2, 2, 1), 0)
    lam = scalar_multiple_of(sigma_matrix(sp, 2, -1).matrix, expected)
    assert lam == 1
    assert scalar_multiple_of(sigma_matrix(sp, 2, 1).matrix, expected) is None


def test_middle_braid_2211_matches_reference():
    r = sqrt_rational(H)
    expected = ExactMatrix.from_entries([
        [r * exp_i_pi(2, 3), r],
        [r * exp_i_pi(-5, 6), -r * root_of_unity(18)],
    ])
    op = middle_braid_2211()
    assert op.source.basis == ((0, 1), (2, 1))
    assert op.target.leaves == (2, 1, 2, 1)
    assert scalar_multiple_of(op.matrix, expected) == 1


def test_full_twist_swaps_0_and_2():
    op = full_twist(enumerate_basis((2, 2, 1, 1), 0), 2)
    w = exp_i_pi(2, 3)
    assert op.matrix == ExactMatrix.from_entries([[0, w], [w, 0]])
    assert full_twist(qutrit_space(), 1).matrix.is_diagonal()


def test_middle_braid_phases():
    assert middle_braid_phase(4) == middle_braid_phase(0) == exp_i_pi(4, 3)
    with pytest.raises(ValueError):
        middle_braid_phase(2)


def test_apply_word_tracks_leaves():
    sp = enumerate_basis((2, 2, 1, 1), 0)
    state, leaves = apply_word(sp, parse_braid_word("s2:1,s1:-1"), StateVector.basis(2, 0))
    assert leaves == (1, 2, 2, 1)
    assert all(x * x.conj() == H for x in state.entries)
    with pytest.raises(ValueError):
        apply_word(sp, [], StateVector.basis(3, 0))


def test_project_internal():
    sp = qutrit_space()
    v = StateVector([1, 1, 0])
    kept, p = project_internal(sp, 2, 0, v)
    assert kept == StateVector([1, 0, 0]) and p == 1
    kept, p = project_internal(sp, 4, 0, v)
    assert kept == v and p == 2
    with pytest.raises(IndexError):
        project_internal(sp, 0, 0, v)


@pytest.mark.parametrize("target,start", [("plus", "|0>"), ("minus", "|2>")])
def test_ancilla(target, start):
    res = ancilla_protocol(target)
    assert res.start == start
    assert res.achieved and certify_ancilla(res)
    assert res.leaves == (1, 2, 2, 1)
    assert res.word[0] == (2, 1) and len(res.word) % 2 == 0
    assert set(res.reachable) == {root_of_unity(k, 4) for k in range(4)}
    assert all(x * x.conj() == H for x in res.after_middle.entries)
    js = res.to_json()
    assert js["moduli_squared"] == ["1/2", "1/2"]


def test_ancilla_rejects_unknown_target():
    with pytest.raises(ValueError):
        ancilla_protocol("zero")


def test_fusion_operation_in_original_basis():
    cat = GeneratorCatalog()
    fum = cat["FUM"]
    assert fum == -exp_i_pi(2, 3) * catalog_matrix("J")
    assert change_basis_qutrit(fum) == catalog_matrix("FUMt")


def test_change_basis_o():
    o = change_basis_qutrit(catalog_matrix("G1"), "O")
    assert o.is_unitary()
    with pytest.raises(ValueError):
        change_basis_qutrit(catalog_matrix("G1"), "x")
