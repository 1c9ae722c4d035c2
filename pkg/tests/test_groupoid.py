
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinhom.abgroup import FgAbelianGroup
from steinhom.groupoid import (Cocycle2, FiniteGroupoid, GroupoidError, burghelea, cyclic_group, cyclic_module,
                               cyclic_nerve_complex, disjoint_union, gamma_units_iso, graded_burghelea,
                               group_groupoid, groupoid_homology, invariant_subset_split, pair_groupoid, point,
                               product_groupoid, symmetric_group, twisted_cyclic_nerve_complex, weight_submodule)

Z, Z2 = FgAbelianGroup(1), FgAbelianGroup(0, (2,))


def dihedral4():
    rot = (1, 2, 3, 0)
    ref = (0, 3, 2, 1)

    def mul(p, q):
        return tuple(p[q[i]] for i in range(4))

    elems = {tuple(range(4))}
    frontier = list(elems)
    while frontier:
        new = []
        for a in frontier:
            for g in (rot, ref):
                b = mul(a, g)
                if b not in elems:
                    elems.add(b)
                    new.append(b)
        frontier = new
    return group_groupoid(sorted(elems), mul, tuple(range(4)), name="D4", label=lambda p: "".join(map(str, p)))


def small_groups():
    out = [cyclic_group(n) for n in range(1, 9)]
    out += [product_groupoid(cyclic_group(2), cyclic_group(2)), product_groupoid(cyclic_group(2), cyclic_group(4)),
            symmetric_group(3), dihedral4()]
    return out


GROUPS = small_groups()


@settings(max_examples=12, deadline=None)
@given(st.sampled_from(range(len(GROUPS))))
def test_group_modules_are_semicyclic(k):
    G = GROUPS[k]
    N = 3 if len(G) <= 4 else 2
    assert cyclic_module(G, N).validate().ok
    assert cyclic_nerve_complex(G, N).validate().ok


@pytest.mark.parametrize("G", [pair_groupoid(2), pair_groupoid(3), pair_groupoid(4),
                               disjoint_union(point(), cyclic_group(2)),
                               disjoint_union(pair_groupoid(2), cyclic_group(3))], ids=lambda G: G.name)
def test_other_groupoid_modules_are_semicyclic(G):
    N = 2 if len(G) > 9 else 3
    assert cyclic_module(G, N).validate().ok
    assert cyclic_nerve_complex(G, N).validate().ok


def test_group_homology_values():
    assert groupoid_homology(cyclic_group(2), 4) == [Z, Z2, FgAbelianGroup(), Z2]
    assert groupoid_homology(symmetric_group(3), 4) == [Z, Z2, FgAbelianGroup(), FgAbelianGroup(0, (6,))]
    assert groupoid_homology(cyclic_group(3), 3)[1] == FgAbelianGroup(0, (3,))


def test_principal_groupoids_have_trivial_higher_homology():
    for n in (2, 3):
        G = pair_groupoid(n)
        assert G.is_principal()
        assert groupoid_homology(G, 4) == [Z, FgAbelianGroup(), FgAbelianGroup(), FgAbelianGroup()]


@pytest.mark.parametrize("G", [point(), pair_groupoid(2), cyclic_group(2), cyclic_group(3), symmetric_group(3),
                               disjoint_union(point(), pair_groupoid(2)),
                               product_groupoid(pair_groupoid(2), cyclic_group(2))], ids=lambda G: G.name)
def test_burghelea_decomposition(G):
    res = burghelea(G, 4)
    assert res["equal"], (res["lhs"], res["rhs"])


def test_burghelea_z2_degree_one():
    res = burghelea(cyclic_group(2), 4)
    assert res["lhs"][1] == FgAbelianGroup(0, (2, 2))
    assert res["lhs"][0] == FgAbelianGroup(2)
    assert res["lhs"][3] == FgAbelianGroup(0, (2, 2))


def test_graded_decomposition_and_weight_preservation():
    G = pair_groupoid(3, grading=True)
    for m in (-1, 0, 1):
        assert graded_burghelea(G, m, 3)["equal"]
    M = cyclic_nerve_complex(G, 3)
    total = sum(weight_submodule(G, M, m, 3).ranks[2] for m in range(-6, 7))
    assert total == M.ranks[2]


def test_units_piece_is_the_nerve_module():
    for G in (cyclic_group(2), symmetric_group(3), pair_groupoid(2)):
        _, ok = gamma_units_iso(G, 3)
        assert ok


def test_invariant_subset_split_needs_invariance():
    G = symmetric_group(3)
    transposition = G.index["102"]
    with pytest.raises(GroupoidError):
        invariant_subset_split(G, [transposition], 2)


def test_groupoid_validation_rejects_bad_tables():
    G = cyclic_group(2)
    data = G.to_json()
    data["compose"] = [[a, b, "0"] for a, b, _ in data["compose"]]
    with pytest.raises(GroupoidError):
        FiniteGroupoid.from_json(data)


def test_json_roundtrip():
    G = pair_groupoid(3, grading=True)
    H = FiniteGroupoid.from_json(G.to_json())
    assert H.names == G.names and H.comp == G.comp and H.grading == G.grading


def test_cocycle_validation():
    G = cyclic_group(2)
    Cocycle2(G, {(1, 1): -1}).validate()
    G3 = cyclic_group(3)
    with pytest.raises(GroupoidError):
        Cocycle2(G3, {(1, 1): -1}).validate()


def test_twisted_cyclic_nerve_of_gaussian_cocycle():
    G = cyclic_group(2)
    H = twisted_cyclic_nerve_complex(G, Cocycle2(G, {(1, 1): -1}), 3).homologies()
    assert H == [FgAbelianGroup(2), FgAbelianGroup(0, (2, 2)), FgAbelianGroup()]


def test_nerve_counts():
    G = pair_groupoid(3)
    for n in range(4):
        assert len(G.nerve(n)) == 3 ** (n + 1)
        assert len(G.cyclic_nerve(n)) == 3 ** (n + 1)
    S = symmetric_group(3)
    assert len(S.nerve(2)) == 36 and len(S.cyclic_nerve(2)) == 216
    assert sorted(len(c) for c in S.conjugacy_classes(0)) == [1, 2, 3]
