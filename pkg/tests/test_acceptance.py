"""Acceptance checks, one per criterion.

Each test prints a line ``criterion k: PASS|FAIL  <detail>`` to the terminal
(also when pytest captures output) and then asserts the verdict.  Running the
file directly prints the twelve lines without pytest.
"""
import io
import sys
from contextlib import redirect_stdout

import pytest

from steinhom import corpus
from steinhom.abgroup import FgAbelianGroup
from steinhom.algebra import hochschild_complex, kappa_check, mu_comparison, twisted_steinberg
from steinhom.chain import hc, hc_closed_form
from steinhom.cli import main
from steinhom.ep import (EPTuple, build_tau, compute_Iv, ep_groupoid_homology, graded_hochschild_L,
                         is_pseudo_free, k0, strongly_fixed_paths, trivial_tuple)
from steinhom.graph import bowen_franks, rose
from steinhom.groupoid import (Cocycle2, FiniteGroupoid, burghelea, cyclic_module, cyclic_nerve_complex,
                               groupoid_homology, twisted_cyclic_nerve_complex)
from steinhom.suites import corpus_groupoids, corpus_tuples, kappa_instances

Z, ZERO = FgAbelianGroup(1), FgAbelianGroup()
RESULTS = {}


def report(k, ok, detail, request=None):
    line = f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[k] = line
    if request is not None:
        capman = request.config.pluginmanager.getplugin("capturemanager")
        with capman.global_and_fixture_disabled():
            print("\n" + line)
    else:
        print(line)
    return ok


def fmt(gs, ring="Z"):
    return "[" + ", ".join(g.format(ring) for g in gs) + "]"


def criterion_1():
    got = {n: k0(trivial_tuple(rose(n))) for n in range(1, 7)}
    expect = {n: Z if n == 1 else FgAbelianGroup.from_orders(0, [n - 1]) for n in range(1, 7)}
    same = all(got[n] == expect[n] == bowen_franks(rose(n)) for n in got)
    return same, "K0 of rose_n, n=1..6: " + ", ".join(g.format() for g in got.values())


def criterion_2():
    names = ["point", "pair2", "pair3", "Z2", "Z3", "S3", "point_plus_pair2"]
    bad = [n for n in names if not mu_comparison(FiniteGroupoid.from_json(corpus.load("groupoids", n)), 3).ok]
    return not bad, f"mu certificate degrees 0..3 on {len(names)} groupoids; failures: {bad or 'none'}"


def criterion_3():
    bad = []
    for name, G in corpus_groupoids():
        if not burghelea(G, 4)["equal"]:
            bad.append(name)
    res = burghelea(FiniteGroupoid.from_json(corpus.load("groupoids", "Z2")), 4)
    target = FgAbelianGroup(0, (2, 2))
    ok = not bad and res["lhs"][1] == res["rhs"][1] == target
    return ok, f"all corpus groupoids agree in degrees <= 3 (failures: {bad or 'none'}); Z/2 degree 1: " \
               f"{res['lhs'][1]} vs {res['rhs'][1]}"


def criterion_4():
    bad = []
    for name, G in corpus_groupoids():
        M, H = cyclic_module(G, 4), groupoid_homology(G, 4)
        if [hc(M, n) for n in range(4)] != [hc_closed_form(H, n) for n in range(4)]:
            bad.append(name)
    P = FiniteGroupoid.from_json(corpus.load("groupoids", "point"))
    pt = [hc(cyclic_module(P, 4), n) for n in range(4)]
    ok = not bad and pt == [Z, ZERO, Z, ZERO]
    return ok, f"HC_n = sum of H_(n-2i) for n <= 3 (failures: {bad or 'none'}); point: {fmt(pt)}"


def criterion_5():
    details, ok = [], True
    for name in ("pair2", "pair3"):
        G = FiniteGroupoid.from_json(corpus.load("groupoids", name))
        ranks = all(len(G.nerve(n)) == len(G.cyclic_nerve(n)) for n in range(4))
        H = cyclic_nerve_complex(G, 4).hochschild_complex().homologies()
        ok = ok and ranks and H == [Z, ZERO, ZERO, ZERO]
        details.append(f"{name}: ranks equal={ranks}, homology {fmt(H)}")
    return ok, "; ".join(details)


def criterion_6():
    T = EPTuple.from_json(corpus.load("ep", "cohn_rose1_trivial"))
    pieces = {m: graded_hochschild_L(T, m, 3, "Q") for m in (-2, -1, 0, 1, 2)}
    Q, ZQ = FgAbelianGroup(1), FgAbelianGroup()
    ok = pieces[0] == [Q, ZQ, ZQ] and all(pieces[m] == [Q, Q, ZQ] for m in (-2, -1, 1, 2))
    return ok, "Cohn(rose1) over Q: " + ", ".join(f"m={m}: {fmt(p, 'Q')}" for m, p in pieces.items())


def criterion_7():
    count, bad = 0, []
    for name, T in corpus_tuples(finite=True):
        if not is_pseudo_free(T).pseudo_free:
            continue
        count += 1
        build_tau(T, 2)
        if ep_groupoid_homology(T, 2)[0] != bowen_franks(T.E):
            bad.append(name)
    return count >= 10 and not bad, f"{count} pseudo-free tuples, H_0 = coker(I - A^t); failures: {bad or 'none'}"


def criterion_8():
    fixed = is_pseudo_free(EPTuple.from_json(corpus.load("ep", "z2_fixed")))
    swap = is_pseudo_free(EPTuple.from_json(corpus.load("ep", "z2_swap")))
    rejected = fixed.status == "not_pseudo_free" and fixed.witness() == {"g": "1", "path": ["e1"]}
    bad = []
    for name, T in corpus_tuples():
        els = [g for g in range(-6, 7) if g] if T.is_Z else None
        brute = strongly_fixed_paths(T, 6, elements=els)
        if is_pseudo_free(T).pseudo_free != (not brute):
            bad.append(name)
    ok = rejected and swap.pseudo_free and not bad
    return ok, f"z2_fixed: {fixed}; z2_swap: {swap}; brute force to length 6 disagrees on: {bad or 'none'}"


def criterion_9():
    s4 = compute_Iv(EPTuple.from_json(corpus.load("ep", "s4_parallel")), "v", 1, "Q").dim
    s3 = compute_Iv(EPTuple.from_json(corpus.load("ep", "s3_parallel")), "v", 1, "Q").dim
    return s4 == 14 and s3 == 0, f"dim I_v for S4 = {s4} (expected 14), for S3 = {s3} (expected 0)"


def criterion_10():
    results = []
    for name, R, psi in kappa_instances():
        res = kappa_check(R, psi, samples=100, N=3, seed=0)
        results.append((name, res["ok"], res["checked"]))
    ok = all(r[1] for r in results)
    return ok, "; ".join(f"{n}: {'ok' if o else 'defect'} on {c} chains" for n, o, c in results)


def criterion_11():
    data = corpus.load("groupoids", "Z2_twisted")
    G = FiniteGroupoid.from_json(data)
    omega = Cocycle2.from_json(G, data["cocycle"])
    lhs = hochschild_complex(twisted_steinberg(G, omega), N=3).homologies()
    rhs = twisted_cyclic_nerve_complex(G, omega, 3).homologies()
    frozen = [FgAbelianGroup(2), FgAbelianGroup(0, (2, 2)), ZERO]
    return lhs == rhs == frozen, f"twisted algebra {fmt(lhs)}, twisted cyclic nerve {fmt(rhs)}, frozen {fmt(frozen)}"


def criterion_12():
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = main(["verify", "all"])
        outs.append((code, buf.getvalue()))
    same = outs[0] == outs[1]
    return same, f"two runs of 'verify all': identical={same}, {len(outs[0][1].splitlines())} lines, exit {outs[0][0]}"


CRITERIA = {k: globals()[f"criterion_{k}"] for k in range(1, 13)}


@pytest.mark.parametrize("k", list(CRITERIA))
def test_criterion(k, request):
    ok, detail = CRITERIA[k]()
    assert report(k, ok, detail, request), detail


if __name__ == "__main__":
    verdicts = [report(k, *CRITERIA[k]()) for k in CRITERIA]
    sys.exit(0 if all(verdicts) else 1)
