import itertools

import numpy as np
import pytest

from lieaff import catalog, engine
from lieaff.affgebra import (
    Affgebra,
    BiAffineMap,
    abelian_affgebra,
    check_associative,
    check_bi_affine,
    check_sigma_compat,
    check_truss,
    derivation_bracket,
    derivations,
    endo_compose,
    endomorphism_affgebra,
    is_derivation_along,
    multiply,
    retract_algebra,
)
from lieaff.errors import DomainError
from lieaff.lie import adjoint_map, derivation_algebra
from lieaff.module import AffineMap, CoordinateModule, act_on_maps, enumerate_affine_maps
from lieaff.scalars import GF, QQ, ZZ

from conftest import line_map, mat


def matmul2(a, b, p):
    # plain-Python oracle for 2×2 products stored row-major
    A = [[int(a[0]), int(a[1])], [int(a[2]), int(a[3])]]
    B = [[int(b[0]), int(b[1])], [int(b[2]), int(b[3])]]
    return [sum(A[i][k] * B[k][j] for k in range(2)) % p for i in range(2) for j in range(2)]


def test_multiply_m2(m2):
    assert multiply(m2, mat(1, 1, 0, 1), mat(1, 0, 1, 1)).tolist() == [0, 1, 1, 1]
    one = mat(1, 0, 0, 1)
    for b in m2.module.elements():
        assert multiply(m2, one, b).tolist() == b.tolist()


def test_multiply_matches_oracle(m2):
    pts = m2.module.elements()
    a = np.repeat(pts, 16, axis=0)
    b = np.tile(pts, (16, 1))
    got = multiply(m2, a, b)
    assert all(got[i].tolist() == matmul2(a[i], b[i], 2) for i in range(256))


def test_coset_truss_product():
    T = catalog.coset_truss()
    assert catalog.coset_value(multiply(T, 1, 2)) == 28 % 9


def test_host_mismatch(m2):
    with pytest.raises(DomainError):
        multiply(m2, mat(1, 0, 0), mat(1, 0, 0))


def test_m2_associative_and_truss(m2):
    assert check_associative(m2).passed and check_truss(m2).passed
    assert check_associative(m2, strategy="exhaustive").count == 4096


def perturbed(G, pos, delta=1):
    mul = G.mul
    B = mul.B.copy()
    B[pos] = (B[pos] + delta) % G.ring.size
    return Affgebra(G.module, BiAffineMap.chart(G.module, B, mul.P, mul.Q, mul.r))


def test_perturbed_product_breaks_associativity(m2):
    bad = perturbed(m2, (0, 0, 0))
    v = check_associative(bad)
    assert not v.passed
    w = v.witness["slots"]
    assert set(w) == {"a", "b", "c"}
    assert check_associative(bad, strategy="exhaustive").result == "fail"
    assert check_truss(bad).passed
    assert check_bi_affine(bad.mul, strategy="exhaustive").passed


@pytest.mark.parametrize("ring", [ZZ, QQ])
def test_truss_over_infinite_rings(ring):
    G = catalog.matrix_affgebra(ring, 2)
    assert check_truss(G).passed and check_associative(G).passed


def test_from_function_interpolation_matches(m2):
    B = m2.mul.B
    # (XY)_ij = Σ_k X_ik Y_kj: coordinate (i,j) ← (i,k) × (k,j)
    expected = np.zeros((4, 4, 4), dtype=np.int64)
    for i, j, k in itertools.product(range(2), repeat=3):
        expected[2 * i + j, 2 * i + k, 2 * k + j] = 1
    assert np.array_equal(B, expected)
    assert not m2.mul.P.any() and not m2.mul.Q.any() and not m2.mul.r.any()


def test_endo_compose():
    A = CoordinateModule(GF(5), 1)
    assert endo_compose(line_map(A, 2, 1), line_map(A, 3, 4)) == line_map(A, 1, 4)
    f = line_map(A, 2, 3)
    assert endo_compose(f, AffineMap.identity(A)) == f


def test_aff_gf3_line_associative():
    E = endomorphism_affgebra(CoordinateModule(GF(3), 1))
    assert E.module.size == 9
    v = check_associative(E, strategy="exhaustive")
    assert v.passed and v.count == 729


def test_aff_of_table_module():
    E = endomorphism_affgebra(catalog.coset_module())
    assert E.module.size == 9
    assert check_associative(E).passed


def test_composition_distributes_over_heap_of_maps():
    E = endomorphism_affgebra(CoordinateModule(GF(3), 1))
    assert check_truss(E, strategy="exhaustive").passed


def test_retract_algebra_at_zero(m2):
    R = retract_algebra(m2, mat(0, 0, 0, 0))
    pts = m2.module.elements()
    a = np.repeat(pts, 16, axis=0)
    b = np.tile(pts, (16, 1))
    assert np.array_equal(R.product(a, b), m2.mul(a, b))
    assert engine.check_all("r", R.laws(), "exhaustive").passed


def test_retract_algebra_coset():
    T = catalog.coset_truss()
    R = retract_algebra(T, 0)
    # ⟨4·7, 4·1, 1·1, 1·7, 1⟩ mod 9
    expected = (28 - 4 + 1 - 7 + 1) % 9
    assert catalog.coset_value(R.product(1, 2)) == expected == 1
    assert all(R.product(a, 0) == 0 for a in range(3))


def test_retracted_product_absorbs_origin(m2):
    o = mat(1, 1, 0, 1)
    R = retract_algebra(m2, o)
    for a in m2.module.elements():
        assert R.product(a, o).tolist() == o.tolist() == R.product(o, a).tolist()


def test_sigma_compat_examples(m2):
    ab = abelian_affgebra(CoordinateModule(GF(3), 1), [0])
    assert check_sigma_compat(ab, AffineMap.identity(ab.module)).passed
    assert check_sigma_compat(m2, AffineMap.identity(m2.module)).passed
    c = AffineMap.constant(m2.module, m2.module, mat(1, 0, 0, 0))
    v = check_sigma_compat(m2, c)
    assert not v.passed


def test_sigma_compat_retracted_form(m2):
    # cross-check against 2σ(ab) = σ(a)b + aσ(b) computed directly
    A = m2.module
    for s in [AffineMap.identity(A), AffineMap.constant(A, A, mat(1, 0, 0, 0))]:
        pts = A.elements()
        a, b = np.repeat(pts, 16, axis=0), np.tile(pts, (16, 1))
        lhs = (2 * s(m2.mul(a, b))) % 2
        rhs = (m2.mul(s(a), b) + m2.mul(a, s(b))) % 2
        assert check_sigma_compat(m2, s, strategy="exhaustive").passed == bool(np.all(lhs == rhs))


def test_sigma_is_derivation_along_itself(m2):
    s = AffineMap.identity(m2.module)
    assert is_derivation_along(s, s, m2).passed


def test_adjoint_maps_are_derivations(m2_lie):
    A = m2_lie.module
    G = Affgebra(A, m2_lie.bracket_map)
    for a in A.elements():
        assert is_derivation_along(adjoint_map(m2_lie, a), AffineMap.identity(A), G, "exhaustive").passed


def test_abelian_derivations_are_linear_fixing_origin():
    A = CoordinateModule(GF(3), 1)
    ab = abelian_affgebra(A, [0])
    ders = derivations(ab, AffineMap.identity(A))
    assert ders == [line_map(A, m, 0) for m in range(3)]
    # brute-force oracle
    brute = [X for X in enumerate_affine_maps(A) if is_derivation_along(X, AffineMap.identity(A), ab, "exhaustive")]
    assert brute == ders


def test_m2_derivations_along_identity(m2):
    ders = derivations(m2, AffineMap.identity(m2.module))
    assert len(ders) == 8
    I = AffineMap.identity(m2.module)
    for X in ders:
        assert is_derivation_along(X, I, m2, "exhaustive").passed
        # X − id is a classical derivation: it kills the identity matrix
        assert X(mat(1, 0, 0, 1)).tolist() == [1, 0, 0, 1]


def test_derivation_bracket():
    A = CoordinateModule(GF(5), 1)
    s = line_map(A, 2, 0)
    X = line_map(A, 3, 0)
    assert derivation_bracket(X, X, s) == s
    ab = abelian_affgebra(CoordinateModule(GF(3), 2), [0, 0])
    B = ab.module
    X = AffineMap.linear(B, [[1, 2], [0, 1]])
    Y = AffineMap.linear(B, [[0, 1], [1, 0]])
    I = AffineMap.identity(B)
    expected = AffineMap.linear(B, (X.M @ Y.M - Y.M @ X.M + np.eye(2, dtype=np.int64)) % 3)
    assert derivation_bracket(X, Y, I) == expected


def test_commutator_derivation_brackets(m2_lie):
    A = m2_lie.module
    G = Affgebra(A, m2_lie.bracket_map)
    I = AffineMap.identity(A)
    pts = A.elements()
    for a, b in [(pts[3], pts[9]), (pts[5], pts[14])]:
        Z = derivation_bracket(adjoint_map(m2_lie, a), adjoint_map(m2_lie, b), I)
        v = is_derivation_along(Z, I, G, "exhaustive")
        assert v.passed and v.details[1].count == 256


def test_derivations_closed_under_action(m2):
    I = AffineMap.identity(m2.module)
    D = derivation_algebra(m2, I)
    for X, Y in itertools.product(D.maps[:4], D.maps[4:]):
        assert act_on_maps(1, X, Y) in D.maps
        assert D.bracket(X, Y) in D.maps


def test_non_commuting_leibniz_map_breaks_jacobi():
    A = CoordinateModule(GF(3), 1)
    ab = abelian_affgebra(A, [0])
    s = line_map(A, 1, 1)
    leibniz = derivations(ab, s, require_commuting=False)
    assert leibniz == [line_map(A, m, 1) for m in range(3)]
    assert derivations(ab, s) == [line_map(A, 1, 1)]
    X = line_map(A, 2, 1)
    assert not is_derivation_along(X, s, ab).passed
    D = derivation_algebra(ab, s, maps=[X, s])
    assert D.check_lie().result == "fail"
