import pytest

from steinhom.abgroup import FgAbelianGroup, IntMatrix
from steinhom.chain import (ChainComplex, ChainMap, SemicyclicModule, WindowError, cc_bicomplex, cone,
                            direct_sum, hc, hc_closed_form)
from steinhom.groupoid import (bar_cyclic_module, cyclic_group, cyclic_module, cyclic_nerve_complex,
                               groupoid_homology, point)


def circle():
    """Z <- Z with zero boundary, complete: homology of a circle."""
    return ChainComplex([1, 1], [IntMatrix(1, 1)], complete=True)


def test_boundary_square_is_checked():
    d1 = IntMatrix.from_rows([[1]])
    d2 = IntMatrix.from_rows([[1]])
    with pytest.raises(ValueError, match="d_1 d_2"):
        ChainComplex([1, 1, 1], [d1, d2])


def test_shapes_are_checked():
    with pytest.raises(ValueError, match="shape"):
        ChainComplex([1, 2], [IntMatrix(1, 1)])


def test_window_is_enforced():
    C = ChainComplex([1, 1, 1], [IntMatrix(1, 1), IntMatrix(1, 1)])
    assert C.reliable == 1
    with pytest.raises(WindowError):
        C.homology(2)
    assert circle().homology(1) == FgAbelianGroup(1)


def test_rational_homology_forgets_torsion():
    d = IntMatrix.from_rows([[2]])
    assert ChainComplex([1, 1], [d], "Z", complete=True).homology(0) == FgAbelianGroup(0, (2,))
    assert ChainComplex([1, 1], [d], "Q", complete=True).homology(0) == FgAbelianGroup()


def test_cone_of_identity_is_acyclic():
    C = circle()
    f = ChainMap(C, C, [IntMatrix.identity(1), IntMatrix.identity(1)])
    K = cone(f)
    assert all(K.homology(n).is_trivial() for n in range(K.reliable + 1))


def test_cone_of_zero_map_splits():
    C = circle()
    f = ChainMap(C, C, [IntMatrix(1, 1), IntMatrix(1, 1)])
    K = cone(f)
    assert [K.homology(n) for n in range(3)] == [FgAbelianGroup(1), FgAbelianGroup(2), FgAbelianGroup(1)]


def test_chain_map_check_finds_bad_square():
    src = ChainComplex([1, 1], [IntMatrix.from_rows([[2]])], complete=True)
    tgt = ChainComplex([1, 1], [IntMatrix.from_rows([[1]])], complete=True)
    with pytest.raises(ValueError, match="degree 1"):
        ChainMap(src, tgt, [IntMatrix.identity(1), IntMatrix.identity(1)])


def test_direct_sum_adds_homology():
    C = circle()
    S = direct_sum([C, C])
    assert S.homology(0) == FgAbelianGroup(2) and S.homology(1) == FgAbelianGroup(2)


@pytest.mark.parametrize("build", [cyclic_module, cyclic_nerve_complex, bar_cyclic_module])
def test_groupoid_modules_are_semicyclic(build):
    rep = build(cyclic_group(3), 3).validate()
    assert rep.ok, str(rep)


def test_fault_injection_in_a_face_is_caught():
    M = cyclic_module(cyclic_group(2), 3)
    d = M.faces[2][1]
    bump = IntMatrix.from_entries(d.rows, d.cols, [(0, 0, 1)])
    faces = [list(f) for f in M.faces]
    faces[2][1] = d + bump
    broken = SemicyclicModule(M.ranks, faces, M.t, M.ring)
    rep = broken.validate()
    assert not rep.ok and rep.failure[1] in (2, 3)
    with pytest.raises(ValueError):
        cc_bicomplex(broken)


def test_fault_injection_in_cyclic_operator_is_caught():
    M = cyclic_module(cyclic_group(2), 2)
    ts = list(M.t)
    ts[1] = -ts[1]
    rep = SemicyclicModule(M.ranks, M.faces, ts, M.ring).validate()
    assert not rep.ok


def test_cc_bicomplex_grid_for_z2():
    M = cyclic_module(cyclic_group(2), 3)
    B = cc_bicomplex(M)
    assert B.anticommutes()
    assert [M.ranks[n] for n in range(4)] == [1, 2, 4, 8]


def test_hc_of_point_is_periodic():
    M = cyclic_module(point(), 5)
    assert [hc(M, n) for n in range(4)] == [FgAbelianGroup(1), FgAbelianGroup(), FgAbelianGroup(1), FgAbelianGroup()]


def test_hc_of_z2_matches_closed_form():
    G = cyclic_group(2)
    M = cyclic_module(G, 4)
    H = groupoid_homology(G, 4)
    for n in range(4):
        assert hc(M, n) == hc_closed_form(H, n)
    assert hc(M, 3) == FgAbelianGroup(0, (2, 2))
