"""Smoke test for the hardpaths_py extension.

Build the extension first, either with maturin (`maturin develop -m
crates/py/Cargo.toml`) or with cargo:

    cargo build --release -p hardpaths-py
    cp target/release/libhardpaths_py.so python/hardpaths_py.so

If the module is not importable, this script performs the cargo copy
itself when the library has already been built.
"""

import json
import os
import shutil
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)


def load():
    try:
        import hardpaths_py  # noqa: F401
    except ImportError:
        built = os.path.join(ROOT, "target", "release", "libhardpaths_py.so")
        if not os.path.exists(built):
            sys.exit("build the extension first: cargo build --release -p hardpaths-py")
        shutil.copy(built, os.path.join(HERE, "hardpaths_py.so"))
        sys.path.insert(0, HERE)
    import hardpaths_py

    return hardpaths_py


def main():
    hp = load()

    f = hp.Formula.from_dimacs("p cnf 3 3\n1 2 3 0\n-1 2 -3 0\n1 -2 3 0\n")
    assert f.num_vars == 3 and len(f.clauses) == 3
    assert f.is_satisfiable()
    assignment = f.satisfying_assignments()[0]

    und = hp.compile_undirected(f)
    stats = und.stats()
    assert (stats["q"], stats["p"]) == (74, 450), stats
    assert stats["demands"] == [6, 897] and stats["lic_cells"] == 9, stats
    structure = und.structure()
    assert structure["odd_set_matches"] and structure["problems"] == [], structure["problems"]
    inst = und.instance()
    witness = und.witness(assignment)
    report = inst.validate(witness)
    assert report["violations"] == [], report
    print(f"undirected: {inst.vertex_count} vertices, {inst.edge_count} edges, witness valid")

    back = hp.Instance.from_json(inst.to_json())
    assert (back.vertex_count, back.edge_count) == (inst.vertex_count, inst.edge_count)

    tiny = hp.Formula(1, [[1], [-1, 1]])
    d = hp.compile_directed(tiny)
    full = d.instance()
    assert full.directed
    res = full.solve(mode="decide", engine="sat", budget=10**6)
    assert res["status"] == "SAT", res
    assert full.validate(d.witness([True]))["violations"] == []
    unsat = hp.compile_directed(hp.Formula(1, [[1], [-1]]))
    for form in (unsat.instance(), unsat.identified(), unsat.corollary()):
        assert form.solve(mode="decide", engine="sat")["status"] == "UNSAT"
    print("directed: tiny satisfiable and unsatisfiable formulas decided correctly")

    xch = hp.gadget_dot("XCH")
    assert xch.count("penwidth=3") == 4

    summary = hp.verify(["C2_routers", "C3_vv", "FIG2_crossing"], profile="fast")
    assert all(c["outcome"] == "pass" for c in summary["cases"]), json.dumps(summary, indent=2)
    print("harness:", ", ".join(c["id"] for c in summary["cases"]), "pass")
    print("smoke test passed")


if __name__ == "__main__":
    main()
