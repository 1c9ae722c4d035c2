"""Command-line front end.

    steinhom <bf|homology|hochschild|cyclic|ktheory|verify> <file or suite> [options]

Instance files are JSON with a ``kind`` field (groupoid, graph, ep_tuple,
algebra).  A bundled instance can be named as ``corpus:<kind>/<name>``, for
example ``corpus:ep/z2_swap``.

Exit codes: 0 on success, 1 on malformed input or a failed check, 2 when a
hypothesis of the requested computation fails (the witness is printed).
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus, suites
from .abgroup import FgAbelianGroup, parse_group
from .algebra import AlgebraError, FinDimAlgebra, hochschild_complex, twisted_steinberg
from .chain import WindowError, hc, hc_closed_form
from .ep import (EPError, EPTuple, HypothesisRefused, UnitsPresentation, ep_groupoid_homology,
                 graded_hochschild_L, is_pseudo_free, k0, k1_pieces, kh_sequence_Z)
from .graph import Graph, GraphError, bf_matrix, bowen_franks
from .groupoid import (Cocycle2, FiniteGroupoid, GroupoidError, burghelea, cyclic_module,
                       cyclic_nerve_complex, groupoid_homology, twisted_cyclic_nerve_complex,
                       weight_submodule)


class InputError(Exception):
    pass


class Report:
    """Deterministic record of one command: echo, assumptions, results with their sources."""

    def __init__(self, command, target, options):
        self.command = command
        self.target = target
        self.options = options
        self.assumptions = []
        self.results = []
        self.status = "ok"
        self.witness = None
        self.message = ""

    def add(self, name, value, source):
        if isinstance(value, FgAbelianGroup):
            value = value.format(self.options.get("ring", "Z"))
        self.results.append({"name": name, "value": str(value), "source": source})

    def to_json(self):
        data = {"command": self.command, "input": self.target, "options": self.options,
                "status": self.status, "assumptions": self.assumptions, "results": self.results}
        if self.witness is not None:
            data["witness"] = self.witness
        if self.message:
            data["message"] = self.message
        return data

    def render(self, fmt):
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=False)
        opts = " ".join(f"--{k} {v}" for k, v in self.options.items())
        lines = [f"steinhom {self.command} {self.target}" + (f" {opts}" if opts else "")]
        for a in self.assumptions:
            lines.append(f"assume: {a}")
        width = max((len(r["name"]) for r in self.results), default=0)
        for r in self.results:
            lines.append(f"{r['name']:<{width}} = {r['value']}    [{r['source']}]")
        if self.message:
            lines.append(self.message)
        if self.witness is not None:
            lines.append("witness: " + json.dumps(self.witness, sort_keys=True))
        lines.append(f"status: {self.status}")
        return "\n".join(lines)


# ---------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------

def load_instance(ref):
    if ref.startswith("corpus:"):
        kind, _, name = ref[len("corpus:"):].partition("/")
        if kind not in corpus.KINDS or name not in corpus.names(kind):
            raise InputError(f"{ref}: no such bundled instance")
        return corpus.load(kind, name)
    path = Path(ref)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{ref}: cannot read file ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{ref}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{ref}: top level must be a JSON object")
    return data


def _kind(data, ref):
    kind = data.get("kind")
    if kind is None:
        if "arrows" in data:
            kind = "groupoid"
        elif "group" in data:
            kind = "ep_tuple"
        elif "edges" in data:
            kind = "graph"
        elif "table" in data:
            kind = "algebra"
    if kind not in ("groupoid", "graph", "ep_tuple", "algebra"):
        raise InputError(f"{ref}: unknown instance kind {kind!r}")
    return kind


def _groupoid(data):
    G = FiniteGroupoid.from_json(data)
    omega = Cocycle2.from_json(G, data["cocycle"]) if "cocycle" in data else None
    if omega is not None:
        omega.validate()
    return G, omega


# ---------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------

def cmd_bf(data, kind, rep, args):
    if kind == "ep_tuple":
        E = EPTuple.from_json(data).E
    elif kind == "graph":
        E = Graph.from_json(data)
    else:
        raise InputError("bf needs a graph or an EP tuple")
    M = bf_matrix(E)
    rep.add("BF(E)", bowen_franks(E), "Smith normal form of I - A^t")
    rep.add("regular vertices", len(E.regular), "graph")
    rep.add("I - A^t", M.to_rows(), "reduced incidence matrix")


def cmd_homology(data, kind, rep, args):
    N = args.window
    if kind == "groupoid":
        G, _ = _groupoid(data)
        for n, h in enumerate(groupoid_homology(G, N, args.ring)):
            rep.add(f"H_{n}", h, "nerve complex, Smith normal form")
        return
    if kind != "ep_tuple":
        raise InputError("homology needs a groupoid or an EP tuple")
    T = EPTuple.from_json(data)
    rep.assumptions.append("coefficient ring l = k")
    pf = is_pseudo_free(T)
    rep.add("pseudo-freeness", str(pf), f"decision by {pf.method}")
    H = ep_groupoid_homology(T, N, args.ring)
    source = ("cone of inc - tau on H_0(Z) and H_1(Z) (A^t and B^t)" if T.is_Z
              else "cone of inc - tau on bar chains of G")
    for n, h in enumerate(H):
        rep.add(f"H_{n}", h, source)
    rep.add("BF(E) (x) k", bowen_franks(T.E), "Smith normal form of I - A^t")


def cmd_hochschild(data, kind, rep, args):
    N = args.window
    if kind == "algebra":
        A = FinDimAlgebra.from_json(data)
        for n, h in enumerate(hochschild_complex(A, N=N).homologies()):
            rep.add(f"HH_{n}", h, "Hochschild complex of the structure constants")
        return
    if kind == "groupoid":
        G, omega = _groupoid(data)
        if omega is not None:
            for n, h in enumerate(twisted_cyclic_nerve_complex(G, omega, N, args.ring).homologies()):
                rep.add(f"HH_{n}", h, "twisted cyclic nerve complex")
            A = twisted_steinberg(G, omega, args.ring)
            for n, h in enumerate(hochschild_complex(A, N=N).homologies()):
                rep.add(f"HH_{n} (algebra)", h, "Hochschild complex of the twisted Steinberg algebra")
            return
        M = cyclic_nerve_complex(G, N, args.ring)
        if args.weight is not None:
            if G.grading is None:
                raise InputError("--weight needs a graded groupoid")
            M = weight_submodule(G, M, args.weight, N)
        for n, h in enumerate(M.hochschild_complex().homologies()):
            rep.add(f"HH_{n}", h, "cyclic nerve complex")
        if args.weight is None:
            res = burghelea(G, N, args.ring)
            for n, h in enumerate(res["rhs"]):
                rep.add(f"HH_{n} (decomposition)", h, "groupoid homology plus centralizer homologies")
        return
    if kind != "ep_tuple":
        raise InputError("hochschild needs an algebra, a groupoid or an EP tuple")
    T = EPTuple.from_json(data)
    rep.assumptions.append("coefficient ring l = k")
    m = args.weight if args.weight is not None else 0
    for n, h in enumerate(graded_hochschild_L(T, m, N, args.ring)):
        rep.add(f"HH_{n} weight {m}", h, "cone of inc - sigma_m on Hochschild chains of k[G] with S_m")


def cmd_cyclic(data, kind, rep, args):
    if kind != "groupoid":
        raise InputError("cyclic needs a groupoid")
    G, _ = _groupoid(data)
    N = args.window
    M = cyclic_module(G, N, args.ring)
    H = groupoid_homology(G, N, args.ring)
    for n in range(N):
        rep.add(f"HC_{n}", hc(M, n), "truncated CC bicomplex of H(G)")
    for n in range(N):
        rep.add(f"HC_{n} (closed form)", hc_closed_form(H, n), "sum of H_(n-2i)")


def cmd_ktheory(data, kind, rep, args):
    if kind != "ep_tuple":
        raise InputError("ktheory needs an EP tuple")
    T = EPTuple.from_json(data)
    U = UnitsPresentation.from_json(load_instance(args.units)) if args.units else UnitsPresentation.default()
    rep.assumptions.append(f"units of k presented as {U.name or 'user supplied'} "
                           f"({U.presentation.group()})")
    rep.assumptions.append("torsion-freeness and regularity hypotheses on G are the user's responsibility")
    rep.add("K_0", k0(T), "Bowen-Franks group, Smith normal form of I - A^t")
    coker, ker = k1_pieces(T, U)
    rep.add("K_1 sub (coker(I - D^t))", coker, "presentation reduction of I - D^t")
    rep.add("K_1 quotient (ker(I - A^t))", ker, "Smith normal form of I - A^t")
    if T.is_Z:
        coeffs = {n: parse_group(x.strip()) for n, x in enumerate(args.coefficients.split(","))}
        rep.assumptions.append("K_n of the coefficient ring: " +
                               ", ".join(f"K_{n} = {g}" for n, g in coeffs.items()))
        seq = kh_sequence_Z(T, coeffs)
        for n, x in seq.items():
            rep.add(f"KH_{n} sub", x["coker"], "coker of I - D^t blockwise (A^t and B^t blocks)")
            if x["ker"] is not None:
                rep.add(f"KH_{n} quotient", x["ker"], "ker of I - D^t on the degree below")


def cmd_verify(name, rep, args):
    try:
        checks = suites.run(name)
    except KeyError:
        raise InputError(f"unknown suite {name!r}; choose from all, " + ", ".join(suites.SUITES)) from None
    for c in checks:
        rep.results.append({"name": f"{c.suite} {c.instance}", "value": "PASS" if c.ok else "FAIL",
                            "source": c.detail})
    failed = sum(not c.ok for c in checks)
    rep.message = f"{len(checks) - failed} passed, {failed} failed"
    if failed:
        rep.status = "failed"


COMMANDS = {"bf": cmd_bf, "homology": cmd_homology, "hochschild": cmd_hochschild,
            "cyclic": cmd_cyclic, "ktheory": cmd_ktheory}


def build_parser():
    p = argparse.ArgumentParser(prog="steinhom", description="Homology and K-theory of Steinberg and "
                                "Exel-Pardo algebras on finite instances.")
    p.add_argument("command", choices=sorted(COMMANDS) + ["verify"])
    p.add_argument("target", help="instance file, corpus:<kind>/<name>, or a suite name for verify")
    p.add_argument("--ring", choices=["Z", "Q"], default="Z")
    p.add_argument("--window", type=int, default=4, help="top chain degree N; homology is exact below it")
    p.add_argument("--weight", type=int, default=None)
    p.add_argument("--units", default=None, help="units file (kind 'units') for ktheory")
    p.add_argument("--coefficients", default="Z,Z/2",
                   help="comma-separated K_0, K_1, ... of the coefficient ring (G = Z tuples)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    options = {"ring": args.ring}
    if args.command in ("homology", "hochschild", "cyclic"):
        options["window"] = args.window
    if args.weight is not None:
        options["weight"] = args.weight
    if args.units:
        options["units"] = args.units
    rep = Report(args.command, args.target, options if args.command != "verify" else {})
    code = 0
    try:
        if args.window < 1:
            raise InputError("--window must be at least 1")
        if args.command == "verify":
            cmd_verify(args.target, rep, args)
            code = 1 if rep.status == "failed" else 0
        else:
            data = load_instance(args.target)
            COMMANDS[args.command](data, _kind(data, args.target), rep, args)
    except HypothesisRefused as exc:
        rep.status = "refused"
        rep.message = str(exc)
        rep.witness = exc.witness
        code = 2
    except (InputError, EPError, GraphError, GroupoidError, AlgebraError, WindowError,
            KeyError, ValueError) as exc:
        rep.status = "invalid"
        rep.message = f"error: {exc}"
        code = 1
    print(rep.render(args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
