#!/usr/bin/env python3
"""Writes the JSON fixtures under data/. Deterministic; rerun after format changes."""

import json
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "data"


def mat(m):
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def ket(i, d=2):
    v = np.zeros((d, 1), dtype=complex)
    v[i] = 1
    return v


def dump(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=2) + "\n")


def seq(id_, inputs, outputs, outcomes):
    return {"id": id_, "kind": "sequential", "inputs": inputs, "outputs": outputs,
            "outcomes": [{"label": l, "kraus": [mat(k) for k in ks]} for l, ks in outcomes]}


def wire(a, b, s="identity"):
    return {"a": {"node": a[0], "port": a[1]}, "b": {"node": b[0], "port": b[1]},
            "s": s if isinstance(s, str) else mat(s)}


def born():
    return {
        "version": "1",
        "systems": [{"id": "q", "dim": 2}],
        "nodes": [
            seq("prep", [], ["q"], [("0", [ket(0)])]),
            seq("meas", ["q"], [], [("0", [ket(0).T]), ("1", [ket(1).T])]),
        ],
        "wires": [wire(("prep", "q"), ("meas", "q"))],
        "selections": ["meas"],
    }


def phi_plus(d=2):
    v = sum(np.kron(ket(i, d), ket(i, d)) for i in range(d)) / np.sqrt(d)
    return v @ v.conj().T


def permute(m, dims, order):
    """New factor k is old factor order[k]."""
    n = len(dims)
    t = m.reshape(dims + dims)
    t = t.transpose(list(order) + [n + o for o in order])
    nd = [dims[o] for o in order]
    return t.reshape(int(np.prod(nd)), int(np.prod(nd)))


def alice_bob_w():
    rho = ket(0) @ ket(0).T
    mixed = np.eye(2) / 2
    first = np.kron(np.kron(rho, phi_plus()), mixed)           # A1 B2 C1 D2
    second = np.kron(np.kron(rho, phi_plus()), mixed)          # C1 D2 A1 B2
    second = permute(second, [2, 2, 2, 2], [2, 3, 0, 1])
    return (first + second) / 2, first


def process_doc(w):
    return {
        "version": "1",
        "kind": "process_operator",
        "parties": [
            {"node": "alice", "ports": [{"id": "A1", "dim": 2}, {"id": "B2", "dim": 2}]},
            {"node": "bob", "ports": [{"id": "C1", "dim": 2}, {"id": "D2", "dim": 2}]},
        ],
        "w": mat(w),
    }


def measure_release(k, d=2):
    # Boundary form on (in, out) with S = I: d |i><i| (x) |k><k|.
    return [{"label": str(i),
             "matrix": mat(d * np.kron(ket(i, d) @ ket(i, d).T, ket(k, d) @ ket(k, d).T))}
            for i in range(d)]


def families():
    fam = [{"name": "release%d" % k, "outcomes": measure_release(k)} for k in range(2)]
    return {"version": "1", "families": {"alice": fam, "bob": fam}}


def alice_bob_network(w):
    ring = 16 * w.T
    release = lambda k: [(str(i), [ket(k) @ ket(i).T]) for i in range(2)]
    return {
        "version": "1",
        "systems": [{"id": s, "dim": 2} for s in ("A1", "B2", "C1", "D2")],
        "nodes": [
            {"id": "ring", "kind": "boundary", "ports": ["A1", "B2", "C1", "D2"],
             "outcomes": [{"label": "0", "matrix": mat(ring)}]},
            seq("alice", ["A1"], ["B2"], release(0)),
            seq("bob", ["C1"], ["D2"], release(1)),
        ],
        "wires": [wire(("ring", p), (party, p))
                  for p, party in (("A1", "alice"), ("B2", "alice"), ("C1", "bob"), ("D2", "bob"))],
        "selections": ["alice", "bob"],
    }


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def chain3():
    rng = np.random.default_rng(20260415)
    # Random pure-state ensemble for the preparation, normalized jointly.
    states = [rng.normal(size=(2, 1)) + 1j * rng.normal(size=(2, 1)) for _ in range(2)]
    total = sum(np.vdot(s, s).real for s in states)
    states = [s / np.sqrt(total) for s in states]
    # Two-outcome instrument from a random isometry 2 -> 2x2.
    v = random_unitary(rng, 4)[:, :2]
    k0, k1 = v[:2, :], v[2:, :]
    # Random two-outcome POVM.
    u = random_unitary(rng, 2)
    e0 = u @ np.diag([0.8, 0.3]) @ u.conj().T
    e1 = np.eye(2) - e0
    rows = lambda m: [m[r:r + 1, :] for r in range(m.shape[0])]
    sqrt_psd = lambda m: (lambda w, q: q @ np.diag(np.sqrt(np.clip(w, 0, None))) @ q.conj().T)(*np.linalg.eigh(m))
    return {
        "version": "1",
        "systems": [{"id": "a", "dim": 2}, {"id": "b", "dim": 2}],
        "nodes": [
            seq("prep", [], ["a"], [("x", [states[0]]), ("y", [states[1]])]),
            seq("mid", ["a"], ["b"], [("0", [k0]), ("1", [k1])]),
            seq("meas", ["b"], [], [("0", rows(sqrt_psd(e0))), ("1", rows(sqrt_psd(e1)))]),
        ],
        "wires": [wire(("prep", "a"), ("mid", "a"), random_unitary(rng, 2)),
                  wire(("mid", "b"), ("meas", "b"), random_unitary(rng, 2))],
    }


def main():
    OUT.mkdir(exist_ok=True)
    doc = born()
    dump("born.json", doc)

    bad = born()
    bad["nodes"][1]["outcomes"][0]["kraus"] = [mat(1.2 * ket(0).T)]
    dump("corrupt_trace.json", bad)

    bad = born()
    bad["nodes"][1]["outcomes"][1]["kraus"][0][0][1] = ["one", 0.0]
    dump("malformed.json", bad)

    incompatible = born()
    incompatible["nodes"][1]["outcomes"] = [{"label": "1", "kraus": [mat(np.sqrt(2) * ket(1).T)]}]
    dump("incompatible.json", incompatible)

    w, alice_first = alice_bob_w()
    dump("alice_bob.json", alice_bob_network(w))
    dump("alice_bob_process.json", process_doc(w))
    dump("fixed_order_process.json", process_doc(alice_first))
    rho = ket(0) @ ket(0).T
    dump("product_process.json",
         process_doc(np.kron(np.kron(rho, np.eye(2) / 2), np.kron(rho, np.eye(2) / 2))))
    dump("families.json", families())

    dump("chain3.json", chain3())

    dump("cyclic.json", {
        "version": "1",
        "systems": [{"id": "x", "dim": 2}, {"id": "y", "dim": 2}],
        "nodes": [seq("c1", ["x"], ["y"], [("0", [np.eye(2)])]),
                  seq("c2", ["y"], ["x"], [("0", [np.eye(2)])])],
        "wires": [wire(("c1", "y"), ("c2", "y")), wire(("c2", "x"), ("c1", "x"))],
    })


if __name__ == "__main__":
    main()
