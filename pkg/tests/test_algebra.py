import random

import pytest

from steinhom.abgroup import FgAbelianGroup
from steinhom.algebra import (AlgebraError, Bimodule, FinDimAlgebra, SkewLaurent, _chain_add, _tensor,
                              algebra_from_matrices, hochschild_complex, kappa_check, kappa_defect, kappa_nor,
                              matrix_algebra, mu_comparison, normalize, random_skew_element,
                              relative_hochschild_module, skew_b, steinberg_algebra, trace_comparison,
                              twisted_steinberg)
from steinhom.groupoid import (Cocycle2, cyclic_group, cyclic_nerve_complex, disjoint_union, pair_groupoid, point,
                               symmetric_group)
from steinhom.suites import kappa_instances


def test_steinberg_algebra_is_associative_with_unit():
    A = steinberg_algebra(pair_groupoid(2))
    assert A.is_associative()
    assert A.unit() == {0: 1, 1: 1}


def test_pair_groupoid_algebra_is_matrix_algebra():
    A = steinberg_algebra(pair_groupoid(2))
    H = hochschild_complex(A, N=3).homologies()
    assert H == [FgAbelianGroup(1), FgAbelianGroup(), FgAbelianGroup()]


def test_non_associative_table_is_rejected():
    data = {"basis": ["a", "b"], "ring": "Z", "table": [["a", "a", "b", "1"], ["b", "a", "a", "1"],
                                                        ["a", "b", "a", "1"]]}
    with pytest.raises(AlgebraError):
        FinDimAlgebra.from_json(data)


def test_json_roundtrip_of_twisted_algebra():
    G = cyclic_group(2)
    A = twisted_steinberg(G, Cocycle2(G, {(1, 1): -1}))
    B = FinDimAlgebra.from_json(A.to_json())
    assert B.table == A.table


def test_regular_bimodule_axioms():
    A = steinberg_algebra(symmetric_group(3))
    assert Bimodule.regular(A).axiom_failures() == []


def test_broken_bimodule_is_detected():
    A = steinberg_algebra(cyclic_group(3))
    M = Bimodule(A, A.labels, lambda a, m: {(m + 1) % 3: 1}, lambda m, a: A.mul_basis(m, a))
    assert M.axiom_failures()


@pytest.mark.parametrize("G", [point(), pair_groupoid(2), pair_groupoid(3), cyclic_group(2), cyclic_group(3),
                               symmetric_group(3), disjoint_union(point(), pair_groupoid(2))],
                         ids=lambda G: G.name)
def test_mu_is_an_isomorphism_of_semicyclic_modules(G):
    cert = mu_comparison(G, 3)
    assert cert.ok


def test_relative_module_matches_cyclic_nerve_ranks():
    G = symmetric_group(3)
    R = relative_hochschild_module(steinberg_algebra(G), 2)
    C = cyclic_nerve_complex(G, 2)
    assert R.ranks == C.ranks
    assert R.validate().ok


def test_gaussian_integers_hochschild():
    G = cyclic_group(2)
    A = twisted_steinberg(G, Cocycle2(G, {(1, 1): -1}))
    assert hochschild_complex(A, N=3).homologies() == [FgAbelianGroup(2), FgAbelianGroup(0, (2, 2)),
                                                       FgAbelianGroup()]


def test_trace_map_is_quasi_isomorphism():
    A = steinberg_algebra(cyclic_group(2))
    res = trace_comparison(A, 2, N=2)
    assert res["iso"]


def test_matrix_algebra_dimension():
    A = matrix_algebra(steinberg_algebra(cyclic_group(2)), 2)
    assert A.dim == 8 and A.is_associative()


@pytest.mark.parametrize("name", [k for k, _, _ in kappa_instances()])
def test_kappa_identity(name):
    _, R, psi = next(x for x in kappa_instances() if x[0] == name)
    res = kappa_check(R, psi, samples=40, N=3, seed=7)
    assert res["ok"], res


def test_kappa_identity_detects_a_wrong_right_hand_side():
    """With psi~ replaced by the identity the defect is visible for a nontrivial automorphism."""
    _, R, psi = next(x for x in kappa_instances() if x[0] == "QxQ/swap")
    S = SkewLaurent(R, psi)
    rng = random.Random(1)
    seen = False
    for _ in range(20):
        chain = _tensor([random_skew_element(S, rng) for _ in range(2)])
        assert not kappa_defect(S, chain)
        wrong = {}
        _chain_add(wrong, skew_b(S, kappa_nor(S, chain)))
        _chain_add(wrong, kappa_nor(S, skew_b(S, chain)))
        _chain_add(wrong, chain, -1)
        _chain_add(wrong, chain)
        seen = seen or bool(normalize(S, wrong))
    assert seen


def test_non_multiplicative_psi_is_rejected():
    _, R, _ = next(x for x in kappa_instances() if x[0] == "QxQ/id")
    with pytest.raises(AlgebraError):
        SkewLaurent(R, [{0: 1}, {0: 1}])


def test_algebra_from_matrices_rejects_non_closed_span():
    with pytest.raises(AlgebraError):
        algebra_from_matrices([[[1, 0], [0, 1]], [[0, 1], [0, 0]], [[0, 0], [1, 0]]])
