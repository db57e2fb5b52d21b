"""Small named instances used by the tests, the CLI and the bundled documents."""

from __future__ import annotations

import numpy as np

from .affgebra import Affgebra, BiAffineMap, abelian_affgebra
from .lie import make_action_bracket, make_commutator_bracket, make_sigma_bracket
from .module import AffineMap, CoordinateModule, TableModule
from .scalars import GF, Ring, Zmod

COSET = (1, 4, 7)


def coordinate_module(ring: Ring, dim: int) -> CoordinateModule:
    return CoordinateModule(ring, dim)


def matrix_affgebra(ring: Ring, n: int = 2) -> Affgebra:
    """n×n matrices, points stored row-major, with the matrix product."""
    A = CoordinateModule(ring, n * n)

    def mul(x, y):
        X = x.reshape(x.shape[:-1] + (n, n))
        Y = y.reshape(y.shape[:-1] + (n, n))
        return ring.reduce(X @ Y).reshape(x.shape)

    return Affgebra(A, BiAffineMap.from_function(A, mul))


def upper_triangular_affgebra(ring: Ring) -> Affgebra:
    """[[a, b], [0, d]] stored as (a, b, d)."""
    A = CoordinateModule(ring, 3)

    def mul(x, y):
        a, b, d = x[..., 0], x[..., 1], x[..., 2]
        p, q, s = y[..., 0], y[..., 1], y[..., 2]
        return ring.reduce(np.stack([a * p, a * q + b * s, d * s], axis=-1))

    return Affgebra(A, BiAffineMap.from_function(A, mul))


def coset_module() -> TableModule:
    """The coset {1, 4, 7} of 3ℤ/9ℤ as an affine GF(3)-module (index i ↔ 1 + 3i)."""
    vals = np.array(COSET)
    idx = {v: i for i, v in enumerate(COSET)}
    n = len(COSET)
    op = np.empty((n, n, n), dtype=np.int64)
    for a, b, c in np.ndindex(n, n, n):
        op[a, b, c] = idx[(vals[a] - vals[b] + vals[c]) % 9]
    action = np.empty((3, n, n), dtype=np.int64)
    for s, a, b in np.ndindex(3, n, n):
        action[s, a, b] = idx[(s * (vals[b] - vals[a]) + vals[a]) % 9]
    return TableModule(op, GF(3), action)


def coset_truss() -> Affgebra:
    """{1, 4, 7} with integer multiplication mod 9."""
    A = coset_module()
    idx = {v: i for i, v in enumerate(COSET)}
    table = [[idx[(x * y) % 9] for y in COSET] for x in COSET]
    return Affgebra(A, BiAffineMap.from_table(A, table))


def coset_value(i) -> int:
    return COSET[int(i)]


def corrupted_heap_table() -> np.ndarray:
    """ℤ/3 heap table with one entry changed (breaks the Mal'cev law)."""
    op = np.array([[[(a - b + c) % 3 for c in range(3)] for b in range(3)] for a in range(3)])
    op[0, 1, 1] = 1
    return op


def zmod_heap(n: int) -> CoordinateModule:
    return CoordinateModule(Zmod(n), 1)


def m2_gf2():
    return matrix_affgebra(GF(2), 2)


def m2_gf2_commutator():
    return make_commutator_bracket(m2_gf2())


def upper_gf3_commutator():
    return make_commutator_bracket(upper_triangular_affgebra(GF(3)))


def action_lie(ring: Ring, dim: int, zeta):
    return make_action_bracket(CoordinateModule(ring, dim), zeta)


def sigma_lie(ring: Ring, dim: int, M, t):
    A = CoordinateModule(ring, dim)
    return make_sigma_bracket(A, AffineMap.chart(A, A, M, t))


def abelian(ring: Ring, dim: int, o=None) -> Affgebra:
    A = CoordinateModule(ring, dim)
    return abelian_affgebra(A, A.origin if o is None else o)


def scalar_maps(A: CoordinateModule, n: int):
    """N(x) = λx + μ·1 on n×n matrices (1 the identity matrix), λ, μ over a finite ring."""
    ring = A.ring
    eye = np.eye(n, dtype=np.int64).reshape(-1)
    out = []
    for lam in range(ring.size):
        for mu in range(ring.size):
            out.append(AffineMap.chart(A, A, lam * np.eye(n * n, dtype=np.int64), mu * eye))
    return out



# -- bundled instance documents --------------------------------------------

def bundled_documents() -> dict:
    """Name -> instance document, as shipped in the package's data directory."""
    from .document import to_document

    docs = {}
    G = m2_gf2()
    A = G.module
    docs["m2_gf2_commutator"] = to_document(
        A, G.mul, {"construction": "commutator"},
        maps={"N": scalar_maps(A, 2)[3], "zero": AffineMap.constant(A, A, A.origin)},
        tasks=["heap.axioms", "affine.axioms", "mul.associativity", "mul.truss", "lie.antisymmetry", "lie.jacobi",
               "lie.idempotent", "nijenhuis.condition:N", "nijenhuis.condition:zero"])
    U = upper_triangular_affgebra(GF(3))
    docs["upper_gf3_commutator"] = to_document(
        U.module, U.mul, {"construction": "commutator"},
        tasks=["mul.associativity", "lie.antisymmetry", "lie.jacobi", "lie.idempotent"])
    for p, dim, zeta in ((3, 1, 1), (3, 1, 2), (3, 2, 2), (5, 1, 2)):
        B = CoordinateModule(GF(p), dim)
        docs[f"action_gf{p}_dim{dim}_zeta{zeta}"] = to_document(
            B, None, {"construction": "action", "zeta": str(zeta)},
            maps={"N": AffineMap.chart(B, B, 2 * np.eye(dim, dtype=np.int64), np.ones(dim, dtype=np.int64))},
            tasks=["lie.antisymmetry", "lie.jacobi", "lie.idempotent", "nijenhuis.condition:N"])
    B = CoordinateModule(GF(5), 1)
    docs["sigma_gf5"] = to_document(
        B, None, {"construction": "sigma", "map": "sigma"},
        maps={"sigma": AffineMap.chart(B, B, [[2]], [0]), "N": AffineMap.chart(B, B, [[3]], [0]),
              "N_shift": AffineMap.chart(B, B, [[1]], [1]), "N_bad": AffineMap.chart(B, B, [[2]], [1])},
        tasks=["lie.antisymmetry", "lie.jacobi", "nijenhuis.condition:N", "nijenhuis.condition:N_shift"])
    T = coset_truss()
    docs["coset_truss"] = to_document(T.module, T.mul,
                                      tasks=["heap.axioms", "affine.axioms", "mul.associativity", "mul.truss"])
    docs["zmod7_heap"] = to_document(zmod_heap(7), tasks=["heap.axioms", "affine.axioms"])
    ab = abelian(GF(3), 1)
    docs["abelian_gf3"] = to_document(ab.module, ab.mul, maps={"id": AffineMap.identity(ab.module)},
                                      tasks=["mul.associativity", "sigma.compat:id", "derivation:id:id"])
    return docs


def write_bundled(directory) -> list:
    from pathlib import Path

    from .document import dumps

    directory = Path(directory)
    written = []
    for name, doc in bundled_documents().items():
        path = directory / f"{name}.json"
        path.write_text(dumps(doc), encoding="utf-8")
        written.append(path)
    return written


def data_path(name: str):
    from importlib.resources import files

    return files("lieaff") / "data" / f"{name}.json"
