"""Regenerate the bundled instance files under src/steinhom/corpus."""
import json
from pathlib import Path

from steinhom.algebra import twisted_steinberg
from steinhom.ep import EPTuple, cohn_tuple
from steinhom.graph import cohn_graph, rose
from steinhom.groupoid import (Cocycle2, cyclic_group, disjoint_union, pair_groupoid, point,
                               product_groupoid, symmetric_group)

ROOT = Path(__file__).resolve().parents[1] / "src" / "steinhom" / "corpus"


def write(sub, name, data):
    d = ROOT / sub
    d.mkdir(parents=True, exist_ok=True)
    data = dict(data)
    data["name"] = name
    (d / f"{name}.json").write_text(json.dumps(data, indent=1) + "\n")


def graph(vertices, edges):
    return {"vertices": vertices, "edges": [{"name": e, "s": s, "r": r} for e, s, r in edges]}


def loops(n, v="v"):
    return graph([v], [(f"e{i}", v, v) for i in range(1, n + 1)])


def parallel(n):
    return graph(["v", "w"], [(f"e{i}", "v", "w") for i in range(1, n + 1)])


TWO_VERTEX = graph(["v", "w"], [("e1", "v", "v"), ("e2", "v", "w"), ("e3", "v", "w"), ("f", "w", "v")])
V_TO_W = graph(["v", "w"], [("e", "v", "w")])


def main():
    # groupoids
    gpds = {"point": point(), "pair2": pair_groupoid(2), "pair3": pair_groupoid(3),
            "Z2": cyclic_group(2), "Z3": cyclic_group(3), "S3": symmetric_group(3),
            "point_plus_pair2": disjoint_union(point(), pair_groupoid(2)),
            "pair2_times_Z2": product_groupoid(pair_groupoid(2), cyclic_group(2)),
            "pair3_graded": pair_groupoid(3, grading=True)}
    for name, G in gpds.items():
        write("groupoids", name, G.to_json())
    Z2 = cyclic_group(2)
    data = Z2.to_json()
    data["cocycle"] = [["1", "1", -1]]
    write("groupoids", "Z2_twisted", data)
    omega = Cocycle2(Z2, {(1, 1): -1})
    write("algebras", "gaussian_integers", twisted_steinberg(Z2, omega).to_json())

    # graphs
    for n in range(1, 7):
        write("graphs", f"rose{n}", {"kind": "graph", **loops(n)})
    for n in (1, 2):
        write("graphs", f"cohn_rose{n}", cohn_graph(rose(n)).to_json())
    write("graphs", "v_to_w", {"kind": "graph", **V_TO_W})
    write("graphs", "two_vertex", {"kind": "graph", **TWO_VERTEX})
    write("graphs", "parallel4", {"kind": "graph", **parallel(4)})

    # EP tuples with finite groups
    ep = {}
    for n in (1, 2, 3):
        ep[f"rose{n}_trivial"] = {"graph": loops(n), "group": "1"}
    ep["cohn_rose1_trivial"] = {"graph": cohn_graph(rose(1)).to_json(), "group": "1"}
    ep["two_vertex_trivial"] = {"graph": TWO_VERTEX, "group": "1"}
    ep["v_to_w_trivial"] = {"graph": V_TO_W, "group": "1"}
    swap = {"1": {"e1": "e2", "e2": "e1"}}
    ep["z2_swap"] = {"graph": loops(2), "group": "Z/2", "action": swap, "phi": "one"}
    ep["z2_swap_signed"] = {"graph": loops(2), "group": "Z/2", "action": swap, "phi": "one",
                            "c": {"1": {"e1": -1, "e2": -1}}}
    ep["z2_selfsimilar"] = {"graph": loops(2), "group": "Z/2", "action": "trivial", "phi": "self"}
    ep["z2_selfsimilar_signed"] = {"graph": loops(2), "group": "Z/2", "action": "trivial", "phi": "self",
                                   "c": {"1": {"e1": -1, "e2": -1}}}
    ep["s3_permute_self"] = {"graph": loops(3), "group": "S3", "action": {"permute": ["e1", "e2", "e3"]},
                             "phi": "self"}
    ep["z3_rotate"] = {"graph": loops(3), "group": "Z/3", "action": {"rotate": ["e1", "e2", "e3"]},
                       "phi": "one"}
    ep["s2_parallel"] = {"graph": parallel(2), "group": "S2", "action": {"permute": ["e1", "e2"]},
                         "phi": "one"}
    ep["two_vertex_z2"] = {"graph": TWO_VERTEX, "group": "Z/2", "action": {"1": {"e2": "e3", "e3": "e2"}},
                           "phi": "self"}
    # not pseudo-free
    ep["z2_fixed"] = {"graph": loops(2), "group": "Z/2", "action": "trivial", "phi": "one"}
    ep["s3_permute_fixed"] = {"graph": loops(3), "group": "S3", "action": {"permute": ["e1", "e2", "e3"]},
                              "phi": "one"}
    ep["s3_parallel"] = {"graph": parallel(3), "group": "S3", "action": {"permute": ["e1", "e2", "e3"]},
                         "phi": "one"}
    ep["s4_parallel"] = {"graph": parallel(4), "group": "S4",
                         "action": {"permute": ["e1", "e2", "e3", "e4"]}, "phi": "one"}
    for name, d in ep.items():
        T = EPTuple.from_json({"kind": "ep_tuple", **d, "name": name})
        write("ep", name, T.to_json())
    for base in ("z2_swap", "z2_selfsimilar"):
        T = EPTuple.from_json({"kind": "ep_tuple", **ep[base], "name": base})
        write("ep", f"cohn_{base}", cohn_tuple(T).to_json())

    # EP tuples over the infinite cyclic group
    kat = {"e0": "e1", "e1": "e0"}
    zt = {
        "katsura_2_1": {"graph": graph(["v"], [("e0", "v", "v"), ("e1", "v", "v")]), "action": kat,
                        "phi": {"e0": 0, "e1": 1}},
        "katsura_2_1_signed": {"graph": graph(["v"], [("e0", "v", "v"), ("e1", "v", "v")]), "action": kat,
                               "phi": {"e0": 0, "e1": 1}, "c": {"e1": "-1"}},
        "katsura_1_1": {"graph": graph(["v"], [("e0", "v", "v")]), "phi": {"e0": 1}},
        "z_trivial_embedding": {"graph": loops(2), "phi": {"e1": 0, "e2": 0}},
    }
    for name, d in zt.items():
        T = EPTuple.from_json({"kind": "ep_tuple", "group": "Z", **d, "name": name})
        write("ep", name, T.to_json())

    # unit groups
    write("units", "z_units", {"kind": "units", "generators": ["-1"], "relations": [[2]],
                               "values": {"1": [0], "-1": [1]}})
    write("units", "z2_plus_z", {"kind": "units", "generators": ["-1", "2"], "relations": [[2, 0]],
                                 "values": {"1": [0, 0], "-1": [1, 0], "2": [0, 1], "-2": [1, 1]}})


if __name__ == "__main__":
    main()
