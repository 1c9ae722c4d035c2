"""Finite directed graphs: paths, incidence matrices, Bowen-Franks groups, Cohn graphs.

Paths are written left to right: e_1 e_2 ... e_n with r(e_i) = s(e_{i+1}).
Vertices are the paths of length 0.
"""
from __future__ import annotations

from dataclasses import dataclass

from .abgroup import FgAbelianGroup, IntMatrix, cokernel


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Path:
    edges: tuple
    source: int
    range: int

    def __len__(self):
        return len(self.edges)


class Graph:
    def __init__(self, vertices, edges, name=""):
        """``edges`` is a list of (name, source name, range name)."""
        self.vertices = list(vertices)
        self.vindex = {v: k for k, v in enumerate(self.vertices)}
        if len(self.vindex) != len(self.vertices):
            raise GraphError("vertex names must be distinct")
        self.edges = []
        self.s, self.r = [], []
        for e, a, b in edges:
            if a not in self.vindex or b not in self.vindex:
                raise GraphError(f"edge {e} has an unknown endpoint")
            self.edges.append(e)
            self.s.append(self.vindex[a])
            self.r.append(self.vindex[b])
        self.eindex = {e: k for k, e in enumerate(self.edges)}
        if len(self.eindex) != len(self.edges):
            raise GraphError("edge names must be distinct")
        self.name = name
        self.out = [[e for e in range(len(self.edges)) if self.s[e] == v] for v in range(len(self.vertices))]

    @property
    def regular(self):
        """Vertices emitting at least one edge (the graph is finite)."""
        return [v for v in range(len(self.vertices)) if self.out[v]]

    @property
    def sinks(self):
        return [v for v in range(len(self.vertices)) if not self.out[v]]

    @property
    def sources(self):
        hit = set(self.r)
        return [v for v in range(len(self.vertices)) if v not in hit]

    def full_incidence(self):
        n = len(self.vertices)
        return IntMatrix.from_entries(n, n, [(self.s[e], self.r[e], 1) for e in range(len(self.edges))])

    def edges_between(self, v, w):
        return [e for e in self.out[v] if self.r[e] == w]

    def paths(self, v=None, n=1):
        """All paths of length n (starting at v if given), lexicographic in edge indices."""
        if n == 0:
            vs = range(len(self.vertices)) if v is None else [v]
            return [Path((), x, x) for x in vs]
        starts = self.out[v] if v is not None else range(len(self.edges))
        out = [(e,) for e in starts]
        for _ in range(n - 1):
            out = [p + (f,) for p in out for f in self.out[self.r[p[-1]]]]
        return [Path(p, self.s[p[0]], self.r[p[-1]]) for p in out]

    def closed_paths(self, m, v=None):
        """CP_m: paths of length m >= 1 with s = r."""
        return [p for p in self.paths(v, m) if p.source == p.range]

    def path_name(self, p: Path):
        return " ".join(self.edges[e] for e in p.edges) if p.edges else self.vertices[p.source]

    def to_json(self):
        return {"kind": "graph", "name": self.name, "vertices": self.vertices,
                "edges": [{"name": e, "s": self.vertices[self.s[k]], "r": self.vertices[self.r[k]]}
                          for k, e in enumerate(self.edges)]}

    @classmethod
    def from_json(cls, data):
        try:
            edges = [(e["name"], e["s"], e["r"]) for e in data["edges"]]
            return cls(data["vertices"], edges, name=data.get("name", ""))
        except KeyError as exc:
            raise GraphError(f"graph block is missing {exc}") from None


def incidence(E: Graph):
    """(A_E over reg x E0, I over E0 x reg)."""
    reg = E.regular
    nv = len(E.vertices)
    A = IntMatrix.from_entries(len(reg), nv,
                               [(k, E.r[e], 1) for k, v in enumerate(reg) for e in E.out[v]])
    I = IntMatrix.from_entries(nv, len(reg), [(v, k, 1) for k, v in enumerate(reg)])
    return A, I


def bf_matrix(E: Graph):
    """I - A^t : Z^reg -> Z^E0."""
    A, I = incidence(E)
    return I - A.T


def bowen_franks(E: Graph) -> FgAbelianGroup:
    return cokernel(bf_matrix(E))


def rose(n, name=None):
    return Graph(["v"], [(f"e{k + 1}", "v", "v") for k in range(n)], name=name or f"rose{n}")


def cohn_graph(E: Graph) -> Graph:
    """Add a vertex v' for each regular v and an edge e' (s(e), r(e)') for each e with r(e) regular."""
    reg = set(E.regular)
    verts = list(E.vertices) + [E.vertices[v] + "'" for v in E.regular]
    edges = [(E.edges[e], E.vertices[E.s[e]], E.vertices[E.r[e]]) for e in range(len(E.edges))]
    for e in range(len(E.edges)):
        if E.r[e] in reg:
            edges.append((E.edges[e] + "'", E.vertices[E.s[e]], E.vertices[E.r[e]] + "'"))
    return Graph(verts, edges, name=f"Cohn({E.name})")


def relabel(E: Graph, vperm, eperm):
    """Same graph with vertices and edges listed in permuted order."""
    verts = [E.vertices[v] for v in vperm]
    edges = [(E.edges[e], E.vertices[E.s[e]], E.vertices[E.r[e]]) for e in eperm]
    return Graph(verts, edges, name=E.name)
