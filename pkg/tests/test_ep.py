import copy
import json

import pytest

from steinhom import corpus
from steinhom.abgroup import FgAbelianGroup
from steinhom.ep import (EPError, EPTuple, HypothesisRefused, UnitsPresentation, build_sigma_m, build_tau,
                         cohn_tuple, compute_Iv, ep_groupoid_homology, graded_hochschild_L, is_pseudo_free,
                         jhat_closed, jhat_iterated, k0, k1_pieces, kh_sequence_Z, strongly_fixed_paths)
from steinhom.graph import bowen_franks

Z, Q = FgAbelianGroup(1), FgAbelianGroup(1)
ZERO = FgAbelianGroup()


def load(name):
    return EPTuple.from_json(corpus.load("ep", name))


# -- validation --------------------------------------------------------

@pytest.mark.parametrize("patch,message", [
    (lambda d: d["action"].__setitem__("0", {"e1": "e2", "e2": "e1"}), "identity acts"),
    (lambda d: d["c"]["1"].__setitem__("e1", "-1"), "c\\(gh,e\\)"),
    (lambda d: d["action"].__setitem__("1", {"e1": "e1", "e2": "e1"}), "permutation"),
])
def test_broken_tuples_are_rejected(patch, message):
    data = copy.deepcopy(corpus.load("ep", "z2_swap"))
    patch(data)
    with pytest.raises(EPError, match=message):
        EPTuple.from_json(data)


@pytest.mark.parametrize("name", corpus.names("ep"))
def test_corpus_tuples_roundtrip_through_json(name):
    T = load(name)
    U = EPTuple.from_json(json.loads(json.dumps(T.to_json())))
    assert U.E.edges == T.E.edges
    assert str(is_pseudo_free(U)) == str(is_pseudo_free(T))


def test_extension_to_paths():
    swap, selfsim, signed = load("z2_swap"), load("z2_selfsimilar"), load("z2_swap_signed")
    assert swap.extend_to_path(1, (0, 1)) == ((1, 1), 0, 1)
    assert selfsim.extend_to_path(1, (0, 1)) == ((0, 1), 1, 1)
    assert signed.extend_to_path(1, (0, 1)) == ((1, 1), 0, -1)


def test_cohn_tuple_doubles_regular_vertices():
    T = cohn_tuple(load("z2_swap"))
    assert T.E.vertices == ["v", "v'"]
    assert len(T.E.edges) == 4
    assert is_pseudo_free(T).pseudo_free


# -- pseudo-freeness ----------------------------------------------------

@pytest.mark.parametrize("name", corpus.names("ep"))
def test_pseudo_freeness_agrees_with_brute_force(name):
    T = load(name)
    els = [g for g in range(-6, 7) if g] if T.is_Z else None
    brute = strongly_fixed_paths(T, 5, elements=els)
    assert is_pseudo_free(T).pseudo_free == (not brute)


def test_witness_for_fixed_edge():
    dec = is_pseudo_free(load("z2_fixed"))
    assert dec.witness() == {"g": "1", "path": ["e1"]}
    assert "strongly fixes" in str(dec)


def test_integer_witness():
    dec = is_pseudo_free(load("z_trivial_embedding"))
    assert dec.witness() == {"g": "x", "path": ["e1"]}


def test_refusal_carries_witness():
    with pytest.raises(HypothesisRefused) as info:
        ep_groupoid_homology(load("s3_permute_fixed"))
    assert info.value.witness is not None


# -- the ideals I_v ---------------------------------------------------

@pytest.mark.parametrize("name", ["s2_parallel", "s3_parallel", "z2_selfsimilar", "two_vertex_z2",
                                  "cohn_z2_swap"])
def test_iterated_and_closed_j_agree(name):
    T = load(name)
    for v in T.E.regular:
        for n in range(3):
            assert jhat_iterated(T, v, n) == jhat_closed(T, v, n)


@pytest.mark.parametrize("name,dim", [("s2_parallel", 0), ("s3_parallel", 1), ("s4_parallel", 14)])
@pytest.mark.parametrize("n", [1, 2, 3])
def test_ideal_dimensions(name, dim, n):
    assert compute_Iv(load(name), "v", n, "Q").dim == dim


def test_ideal_over_integers_matches_rationals():
    assert compute_Iv(load("s3_parallel"), "v", 3, "Z").dim == 1


def test_sign_element_lies_in_the_ideal():
    T = load("s3_parallel")
    data = compute_Iv(T, "v", 1, "Q")
    sgn = {}
    for g in T.elements:
        perm = [T.act(g, e) for e in T.E.out[0]]
        inversions = sum(perm[i] > perm[j] for i in range(len(perm)) for j in range(i + 1, len(perm)))
        sgn[g] = (-1) ** inversions
    assert data.dim == 1
    vec = data.basis[0]
    ratio = {vec[T.glabel(g)] * sgn[g] for g in T.elements}
    assert len(ratio) == 1


def test_sinks_have_zero_ideal():
    assert compute_Iv(load("s3_parallel"), "w", 2, "Q").dim == 0


# -- sigma_m, tau, graded Hochschild homology ----------------------------

def test_sigma_zero_on_rose_multiplies_by_out_degree():
    _, sig = build_sigma_m(load("rose2_trivial"), 0, 2, "Z")
    assert sig.f[0].to_rows() == [[2]]


def test_sigma_one_on_rose_is_identity_in_degree_zero():
    _, sig = build_sigma_m(load("rose2_trivial"), 1, 2, "Z")
    assert sig.f[0].to_rows() == [[1, 0], [0, 1]]


def test_sigma_zero_kills_nontrivial_group_elements_for_swap():
    _, sig = build_sigma_m(load("z2_swap"), 0, 2, "Z")
    assert sig.f[0].to_rows() == [[2, 0], [0, 0]]
    _, sig = build_sigma_m(load("z2_selfsimilar"), 0, 2, "Z")
    assert sig.f[0].to_rows() == [[2, 0], [0, 2]]


@pytest.mark.parametrize("name", ["z2_swap_signed", "z2_selfsimilar_signed", "two_vertex_z2"])
@pytest.mark.parametrize("m", [-1, 0, 1])
def test_sigma_is_a_chain_map(name, m):
    build_sigma_m(load(name), m, 3, "Z")


def test_graded_hochschild_of_rose1():
    T = load("rose1_trivial")
    for m in (-2, -1, 0, 1, 2):
        assert graded_hochschild_L(T, m, 2) == [Q, Q]


def test_graded_hochschild_of_cohn_rose1():
    T = load("cohn_rose1_trivial")
    assert graded_hochschild_L(T, 0, 2) == [Q, ZERO]
    assert graded_hochschild_L(T, 1, 2) == [Q, Q]
    assert graded_hochschild_L(T, -1, 2) == [Q, Q]


def test_graded_hochschild_of_rose2_weight_zero():
    assert graded_hochschild_L(load("rose2_trivial"), 0, 2) == [ZERO, ZERO]


@pytest.mark.parametrize("name", ["rose3_trivial", "two_vertex_trivial", "z2_swap", "s3_permute_self",
                                  "cohn_z2_selfsimilar"])
def test_tau_homology_in_degree_zero_is_bowen_franks(name):
    T = load(name)
    build_tau(T, 2)
    assert ep_groupoid_homology(T, 2)[0] == bowen_franks(T.E)


def test_integer_group_homology():
    assert ep_groupoid_homology(load("katsura_2_1_signed")) == [ZERO, Z]
    assert ep_groupoid_homology(load("katsura_1_1")) == [Z, FgAbelianGroup(2)]


# -- K-theory --------------------------------------------------------------

def test_k_groups_of_roses():
    U = UnitsPresentation.from_json(corpus.load("units", "z2_plus_z"))
    assert k0(load("rose2_trivial")) == ZERO
    assert k1_pieces(load("rose2_trivial")) == (ZERO, ZERO)
    assert k0(load("rose3_trivial")) == FgAbelianGroup(0, (2,))
    assert k1_pieces(load("rose3_trivial"), U) == (FgAbelianGroup(0, (2, 2)), ZERO)
    assert k1_pieces(load("rose1_trivial"), U) == (FgAbelianGroup(1, (2,)), Z)


def test_units_presentation_roundtrip():
    data = corpus.load("units", "z2_plus_z")
    U = UnitsPresentation.from_json(data)
    V = UnitsPresentation.from_json(U.to_json())
    assert V.coords(-2) == U.coords(-2)


KZ = {0: Z, 1: FgAbelianGroup(0, (2,))}


def test_kh_sequence_for_signed_katsura():
    seq = kh_sequence_Z(load("katsura_2_1_signed"), KZ)
    assert seq[0]["coker"] == Z and seq[0]["ker"] is None
    assert seq[1]["coker"] == FgAbelianGroup(0, (2,))
    assert seq[1]["ker"] == Z


def test_kh_sequence_with_identity_blocks_keeps_everything():
    seq = kh_sequence_Z(load("katsura_1_1"), KZ)
    assert seq[0]["coker"] == FgAbelianGroup(2)
    assert seq[1]["coker"] == FgAbelianGroup(0, (2, 2))
    assert seq[1]["ker"] == FgAbelianGroup(2)


def test_kh_sequence_refuses_nonzero_c_block():
    with pytest.raises(HypothesisRefused) as info:
        kh_sequence_Z(load("katsura_2_1"), KZ)
    assert info.value.witness["C"] == "-1"


def test_kh_sequence_needs_integer_group():
    with pytest.raises(EPError):
        kh_sequence_Z(load("rose2_trivial"), KZ)
