"""Verification suites over the bundled corpus.

Each suite returns a list of :class:`Check` records: an instance name, a
verdict and a short deterministic description of what was compared.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import corpus
from .abgroup import FgAbelianGroup, IntMatrix, rank
from .algebra import (FinDimAlgebra, algebra_from_matrices, hochschild_complex, kappa_check, mu_comparison,
                      twisted_steinberg)
from .chain import hc, hc_closed_form
from .ep import (EPTuple, UnitsPresentation, build_sigma_m, build_tau, compute_Iv, ep_groupoid_homology,
                 graded_hochschild_L, is_pseudo_free, jhat_closed, jhat_iterated, k0, k1_pieces,
                 strongly_fixed_paths)
from .graph import Graph, bowen_franks, relabel
from .groupoid import (Cocycle2, FiniteGroupoid, burghelea, cyclic_module, cyclic_nerve_complex,
                       groupoid_homology, twisted_cyclic_nerve_complex)


@dataclass(frozen=True)
class Check:
    suite: str
    instance: str
    ok: bool
    detail: str

    def line(self):
        return f"{self.suite:<11} {self.instance:<24} {'PASS' if self.ok else 'FAIL'}  {self.detail}"


def _fmt(groups, ring="Z"):
    return "[" + ", ".join(g.format(ring) for g in groups) + "]"


def corpus_groupoids(graded=True):
    out = []
    for name in corpus.names("groupoids"):
        data = corpus.load("groupoids", name)
        if "cocycle" in data:
            continue
        if not graded and "grading" in data:
            continue
        out.append((name, FiniteGroupoid.from_json(data)))
    return out


def corpus_tuples(finite=None):
    out = []
    for name in corpus.names("ep"):
        T = EPTuple.from_json(corpus.load("ep", name))
        if finite is None or finite != T.is_Z:
            out.append((name, T))
    return out


# ---------------------------------------------------------------------
# groupoid suites
# ---------------------------------------------------------------------

def suite_semicyclic():
    out = []
    for name, G in corpus_groupoids():
        for label, M in (("H", cyclic_module(G, 3)), ("Hcyc", cyclic_nerve_complex(G, 3))):
            rep = M.validate()
            out.append(Check("semicyclic", f"{name}/{label}", rep.ok, str(rep)))
    return out


def suite_mu():
    out = []
    for name, G in corpus_groupoids():
        cert = mu_comparison(G, 3)
        out.append(Check("mu", name, cert.ok,
                         f"bijective={all(cert.bijective)} faces={cert.faces_commute} "
                         f"cyclic={cert.cyclic_commute} (degrees 0..3)"))
    return out


def suite_burghelea():
    out = []
    for name, G in corpus_groupoids():
        res = burghelea(G, 4)
        out.append(Check("burghelea", name, res["equal"],
                         f"cyclic nerve {_fmt(res['lhs'])} vs centralizer sum {_fmt(res['rhs'])}"))
    return out


def suite_hc():
    out = []
    for name, G in corpus_groupoids():
        M = cyclic_module(G, 4)
        H = groupoid_homology(G, 4)
        lhs = [hc(M, n) for n in range(4)]
        rhs = [hc_closed_form(H, n) for n in range(4)]
        out.append(Check("hc", name, lhs == rhs, f"CC bicomplex {_fmt(lhs)} vs sum of H_(n-2i) {_fmt(rhs)}"))
    return out


def suite_principal():
    out = []
    for name, G in corpus_groupoids():
        if not G.is_principal():
            continue
        ranks_equal = all(len(G.nerve(n)) == len(G.cyclic_nerve(n)) for n in range(4))
        H = cyclic_nerve_complex(G, 4).hochschild_complex().homologies()
        expected = [FgAbelianGroup(len(G.orbits()))] + [FgAbelianGroup()] * 3
        out.append(Check("principal", name, ranks_equal and H == expected,
                         f"ranks equal={ranks_equal}, Hcyc homology {_fmt(H)}"))
    return out


def suite_twisted():
    data = corpus.load("groupoids", "Z2_twisted")
    G = FiniteGroupoid.from_json(data)
    omega = Cocycle2.from_json(G, data["cocycle"])
    A = twisted_steinberg(G, omega)
    lhs = hochschild_complex(A, N=3).homologies()
    rhs = twisted_cyclic_nerve_complex(G, omega, 3).homologies()
    frozen = [FgAbelianGroup(2), FgAbelianGroup(0, (2, 2)), FgAbelianGroup()]
    return [Check("twisted", "Z2_twisted", lhs == rhs == frozen,
                  f"Hochschild of twisted algebra {_fmt(lhs)} vs twisted cyclic nerve {_fmt(rhs)}")]


# ---------------------------------------------------------------------
# graph and EP suites
# ---------------------------------------------------------------------

def suite_bf():
    out = []
    for name in corpus.names("graphs"):
        E = Graph.from_json(corpus.load("graphs", name))
        bf = bowen_franks(E)
        vperm = list(reversed(range(len(E.vertices))))
        eperm = list(reversed(range(len(E.edges))))
        same = bowen_franks(relabel(E, vperm, eperm)) == bf
        ok = same
        detail = f"BF = {bf}, relabeling invariant={same}"
        if name.startswith("rose"):
            n = int(name[4:])
            expect = FgAbelianGroup(1) if n == 1 else FgAbelianGroup.from_orders(0, [n - 1])
            ok = ok and bf == expect
            detail += f", expected {expect}"
        out.append(Check("bf", name, ok, detail))
    return out


def suite_pseudofree():
    out = []
    for name, T in corpus_tuples():
        dec = is_pseudo_free(T)
        els = [g for g in range(-6, 7) if g] if T.is_Z else None
        brute = strongly_fixed_paths(T, 6 if len(T.E.edges) <= 3 else 4, elements=els)
        ok = dec.pseudo_free == (not brute)
        if dec.status == "not_pseudo_free":
            g = next(h for h in ([x for x in range(-6, 7)] if T.is_Z else T.elements) if T.glabel(h) == dec.group_element)
            path = tuple(T.E.eindex[e] for e in dec.path)
            img, h, _ = T.extend_to_path(g, path)
            ok = ok and img == path and h == 0
        out.append(Check("pseudofree", name, ok, f"{dec}; brute force found {len(brute)} strongly fixed pairs"))
    return out


def suite_sigma():
    out = []
    for name, T in corpus_tuples(finite=True):
        ring = "Z" if T.units_ok_over("Z") else "Q"
        N = 3 if len(T.G.names) <= 6 else 2
        for m in (-1, 0, 1):
            try:
                build_sigma_m(T, m, N, ring)
                out.append(Check("sigma", f"{name}/m={m}", True, "sigma_m and inclusion commute with boundaries"))
            except ValueError as exc:
                out.append(Check("sigma", f"{name}/m={m}", False, str(exc)))
        try:
            build_tau(T, N, ring)
            out.append(Check("sigma", f"{name}/tau", True, "tau commutes with boundaries"))
        except ValueError as exc:
            out.append(Check("sigma", f"{name}/tau", False, str(exc)))
    return out


def suite_h0():
    out = []
    for name, T in corpus_tuples(finite=True):
        if not is_pseudo_free(T).pseudo_free:
            continue
        H = ep_groupoid_homology(T, 2, "Z")
        bf = bowen_franks(T.E)
        out.append(Check("h0", name, H[0] == bf, f"H_0 of cone(inc - tau) = {H[0]}, SNF of I - A^t gives {bf}"))
    return out


def suite_grading():
    out = []
    for name, T in corpus_tuples(finite=True):
        if len(T.G.names) != 1:
            continue
        for m in (1, 2):
            a = graded_hochschild_L(T, m, 2, "Q")
            b = graded_hochschild_L(T, -m, 2, "Q")
            out.append(Check("grading", f"{name}/m={m}", a == b,
                             f"weight {m}: {_fmt(a, 'Q')}, weight {-m}: {_fmt(b, 'Q')}"))
    return out


def permutation_span_rank(T: EPTuple, v):
    """Rank of the span of the permutation matrices of G on the edges out of v (independent oracle)."""
    edges = T.E.out[v]
    pos = {e: k for k, e in enumerate(edges)}
    cols = []
    for g in T.elements:
        cols.append({pos[T.act(g, e)] * len(edges) + pos[e]: 1 for e in edges})
    return rank(IntMatrix(len(edges) ** 2, len(cols), cols))


def suite_iv():
    out = []
    for name, T in corpus_tuples(finite=True):
        for v in T.E.regular:
            same = all(jhat_iterated(T, v, n) == jhat_closed(T, v, n) for n in range(3))
            detail = f"vertex {T.E.vertices[v]}: iterated j = closed form (n <= 2): {same}"
            ok = same
            trivial_phi = all(T.phi(g, e) == 0 for g in T.elements for e in range(len(T.E.edges)))
            sinks_only = all(not T.E.out[T.E.r[e]] for e in T.E.out[v])
            if trivial_phi and sinks_only:
                d = compute_Iv(T, v, 1, "Q").dim
                oracle = len(T.G.names) - permutation_span_rank(T, v)
                ok = ok and d == oracle
                detail += f"; dim I_v = {d}, |G| - rank(permutation span) = {oracle}"
            out.append(Check("iv", f"{name}@{T.E.vertices[v]}", ok, detail))
        for w in T.E.sinks:
            d = compute_Iv(T, w, 2, "Q").dim
            out.append(Check("iv", f"{name}@{T.E.vertices[w]}", d == 0, f"sink: dim I_v = {d}"))
    return out


def suite_ktheory():
    out = []
    U2 = UnitsPresentation.from_json(corpus.load("units", "z2_plus_z"))
    cases = [("rose2_trivial", None, FgAbelianGroup(), (FgAbelianGroup(), FgAbelianGroup())),
             ("rose3_trivial", U2, FgAbelianGroup.from_orders(0, [2]),
              (FgAbelianGroup(0, (2, 2)), FgAbelianGroup())),
             ("rose1_trivial", U2, FgAbelianGroup(1), (FgAbelianGroup(1, (2,)), FgAbelianGroup(1)))]
    for name, U, ek0, epieces in cases:
        T = EPTuple.from_json(corpus.load("ep", name))
        got0, pieces = k0(T), k1_pieces(T, U)
        out.append(Check("ktheory", name, got0 == ek0 and pieces == epieces,
                         f"K0 = {got0}, K1 pieces = ({pieces[0]}, {pieces[1]})"))
    return out


# ---------------------------------------------------------------------
# the kappa identity on skew Laurent algebras
# ---------------------------------------------------------------------

def kappa_instances():
    """(name, R, psi) with the unit of R as basis element 0."""
    Q = FinDimAlgebra(["1"], {(0, 0): {0: 1}}, "Q", name="Q")
    I2 = [[1, 0], [0, 1]]
    QQ = algebra_from_matrices([I2, [[1, 0], [0, 0]]], name="QxQ")
    M2 = algebra_from_matrices([I2, [[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]]], name="M2(Q)")

    def conj(A, P, Pinv):
        def mm(a, b):
            return [[sum(Fraction(a[i][t]) * b[t][j] for t in range(2)) for j in range(2)] for i in range(2)]
        return [A.coords(mm(mm(P, m), Pinv)) for m in A.matrices]

    swap = [[0, 1], [1, 0]]
    shear, shear_inv = [[1, 1], [0, 1]], [[1, -1], [0, 1]]
    return [("Q/id", Q, [{0: 1}]),
            ("QxQ/id", QQ, [{0: 1}, {1: 1}]),
            ("QxQ/swap", QQ, [{0: 1}, {0: 1, 1: -1}]),
            ("M2(Q)/swap", M2, conj(M2, swap, swap)),
            ("M2(Q)/shear", M2, conj(M2, shear, shear_inv))]


def suite_kappa(samples=100):
    out = []
    for name, R, psi in kappa_instances():
        res = kappa_check(R, psi, samples=samples, N=3, seed=0)
        out.append(Check("kappa", name, res["ok"],
                         f"b kappa + kappa b = 1 - psi~ on {res['checked']} random chains of degree <= 3"))
    return out


SUITES = {
    "bf": suite_bf,
    "semicyclic": suite_semicyclic,
    "mu": suite_mu,
    "burghelea": suite_burghelea,
    "hc": suite_hc,
    "principal": suite_principal,
    "twisted": suite_twisted,
    "pseudofree": suite_pseudofree,
    "sigma": suite_sigma,
    "h0": suite_h0,
    "grading": suite_grading,
    "iv": suite_iv,
    "ktheory": suite_ktheory,
    "kappa": suite_kappa,
}


def run(name):
    if name == "all":
        out = []
        for key in SUITES:
            out += SUITES[key]()
        return out
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name]()
