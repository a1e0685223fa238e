"""Smoke test for the qpc_py extension module.

Build with `cargo build -p qpc-py --release`, then run
`python3 python/smoke_test.py`. The script looks for the built library
under target/ when qpc_py is not already importable.
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parents[1]


def load():
    try:
        import qpc_py

        return qpc_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libqpc_py.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("qpc_py", str(lib))
            spec = importlib.util.spec_from_file_location("qpc_py", lib, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("qpc_py not found; run `cargo build -p qpc-py --release` first")


def main():
    qpc = load()

    q = qpc.Quiver(3, 1, [("a", 1, 3), ("b", 2, 1)])
    mu = q.mutate(1)
    assert sorted(mu.arrows) == [("a*", 3, 1), ("b*", 1, 2)], mu.arrows
    assert mu.b_matrix() == [[0], [1], [-1]]
    assert json.loads(q.to_json()) == json.loads(qpc.Quiver.from_json(q.to_json()).to_json())

    rows = qpc.lg_potentials([1, 2, 1])
    assert [r[0] for r in rows] == [3, 2]
    for ell, chart, fpoly, paths in rows:
        assert chart == fpoly == paths, (ell, chart, fpoly, paths)
    assert rows[0][1] == "X_3^{-1}", rows[0][1]
    assert rows[1][1] == "X_2^{-1} + X_1^{-1}X_2^{-1}", rows[1][1]

    for method in ("gp", "fpoly", "sigma"):
        assert qpc.string_cone([1, 2, 1], method) == [[0, 0, 1], [0, 1, -1], [1, 0, 0]]

    qp = qpc.gamma_qp([1, 2, 1, 3, 2, 1])
    ell = qpc.frozen_vertices([1, 2, 1, 3, 2, 1])[0]
    p = qp.projective(ell)
    cur, rep = qp, p
    for k in (1, 2, 1):
        cur, rep = rep.mutate(cur, k)
    assert rep.is_isomorphic(cur.quiver, cur.projective(ell))
    assert len(p.thin_quotients(qp.quiver)) >= 2

    try:
        qpc.string_cone([1, 1, 2])
    except ValueError:
        pass
    else:
        raise AssertionError("non-reduced word accepted")

    print(qpc.wiring([1, 2, 1]))
    print("smoke test ok")


if __name__ == "__main__":
    main()
