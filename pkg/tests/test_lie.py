import itertools

import numpy as np
import pytest

from lieaff import catalog, engine
from lieaff.affgebra import Affgebra, BiAffineMap, retract_algebra
from lieaff.errors import LawViolation, NotAUnitError
from lieaff.lie import (
    RIGHT,
    LieAffgebra,
    adjoint_map,
    are_isomorphic_small,
    check_antisymmetry,
    check_intertwining,
    check_jacobi,
    check_jacobi_variants,
    check_lie,
    check_pre_lie,
    from_vector_valued,
    make_action_bracket,
    make_commutator_bracket,
    make_pre_lie_bracket,
    make_sigma_bracket,
    retract_lie,
    to_vector_valued,
)
from lieaff.module import AffineMap, CoordinateModule
from lieaff.scalars import GF, QQ, ZZ

from conftest import line_map, mat


def test_commutator_bracket_value(m2_lie):
    assert m2_lie.bracket(mat(1, 1, 0, 1), mat(1, 0, 1, 1)).tolist() == [0, 0, 1, 0]


def test_action_bracket_value():
    L = make_action_bracket(CoordinateModule(GF(5), 1), 2)
    assert L.bracket(np.array([1]), np.array([3])).tolist() == [0]


@pytest.mark.parametrize("zeta,expect", [(0, "a"), (1, "b")])
def test_action_bracket_extremes(zeta, expect):
    A = CoordinateModule(GF(3), 2)
    L = make_action_bracket(A, zeta)
    pts = A.elements()
    a, b = np.repeat(pts, 9, axis=0), np.tile(pts, (9, 1))
    assert np.array_equal(L.bracket(a, b), a if expect == "a" else b)


def test_sigma_bracket(sigma_lie):
    for b in range(5):
        assert sigma_lie.bracket(np.array([3]), np.array([b])).tolist() == [1]
    A = CoordinateModule(GF(3), 1)
    L = make_sigma_bracket(A, AffineMap.constant(A, A, [2]))
    assert L.bracket(np.array([0]), np.array([1])).tolist() == [2]


def test_commutative_commutator_is_right_projection():
    L = make_commutator_bracket(catalog.abelian(GF(3), 2))
    pts = L.module.elements()
    a, b = np.repeat(pts, 9, axis=0), np.tile(pts, (9, 1))
    assert np.array_equal(L.bracket(a, b), b)


def test_m2_commutator_counts(m2_lie):
    anti = check_antisymmetry(m2_lie, "exhaustive")
    assert anti.passed and anti.details[0].count == 256
    jac = check_jacobi(m2_lie, "exhaustive")
    assert jac.passed and jac.count == 4096
    assert m2_lie.is_idempotent


def test_upper_triangular_certifies(upper_lie):
    assert upper_lie.module.size == 27
    assert check_lie(upper_lie, "exhaustive").passed


def test_product_as_bracket_fails_antisymmetry(m2):
    L = LieAffgebra(m2.module, m2.mul, certify=False)
    v = check_antisymmetry(L, "exhaustive", alt=False)
    assert not v.passed
    w = v.witness
    a, b = (np.array(w["slots"][k], dtype=np.int64) for k in ("a", "b"))
    # re-evaluate ⟨ab, aa, ba⟩ against bb by hand
    lhs = (m2.mul(a, b) - m2.mul(a, a) + m2.mul(b, a)) % 2
    assert lhs.tolist() != m2.mul(b, b).tolist()
    with pytest.raises(LawViolation):
        LieAffgebra(m2.module, m2.mul)


def test_non_associative_commutator_rejected(m2):
    B = m2.mul.B.copy()
    B[0, 0, 0] ^= 1
    bad = Affgebra(m2.module, BiAffineMap.chart(m2.module, B, m2.mul.P, m2.mul.Q, m2.mul.r))
    with pytest.raises(LawViolation):
        make_commutator_bracket(bad)


@pytest.mark.parametrize("zeta", range(3))
def test_action_brackets_gf3_plane(zeta):
    L = make_action_bracket(CoordinateModule(GF(3), 2), zeta)
    v = check_jacobi(L, "exhaustive")
    assert v.passed and v.count == 729
    assert L.is_idempotent


@pytest.mark.parametrize("ring", [ZZ, QQ])
def test_brackets_over_infinite_rings(ring):
    A = CoordinateModule(ring, 2)
    assert check_lie(make_action_bracket(A, 5)).passed
    assert check_lie(make_commutator_bracket(catalog.matrix_affgebra(ring, 2))).passed


def test_remark_equivalences(m2_lie, upper_lie):
    for L in (m2_lie, upper_lie):
        variants = check_jacobi_variants(L, "exhaustive")
        assert len(variants) == 6 and all(v.passed for v in variants)
    # a broken bracket fails every ordering and both antisymmetry forms
    A = m2_lie.module
    B = m2_lie.bracket_map
    bad = LieAffgebra(A, BiAffineMap.chart(A, B.B, B.P, B.Q, (B.r + np.array([1, 0, 0, 0])) % 2), certify=False)
    results = {v.result for v in check_jacobi_variants(bad, "exhaustive")}
    anti = check_antisymmetry(bad, "exhaustive")
    assert len(results) == 1
    assert anti.details[0].result == anti.details[1].result


def test_right_chirality_checks(m2_lie):
    A = m2_lie.module
    # ⟨ab, ba, a⟩ is the mirror image of the commutator bracket
    mirror = BiAffineMap.from_function(A, lambda a, b: m2_lie.bracket(b, a))
    R = LieAffgebra(A, mirror, RIGHT)
    assert check_jacobi(R, "exhaustive").passed
    assert not check_jacobi(m2_lie, "exhaustive", chirality=RIGHT).passed


def test_pre_lie_associative(m2):
    assert check_pre_lie(m2).passed and check_pre_lie(m2, RIGHT).passed
    assert make_pre_lie_bracket(m2).same_bracket(make_commutator_bracket(m2))


def test_pre_lie_perturbed():
    G = catalog.upper_triangular_affgebra(GF(3))
    B = G.mul.B.copy()
    B[1, 0, 0] = (B[1, 0, 0] + 1) % 3
    bad = Affgebra(G.module, BiAffineMap.chart(G.module, B, G.mul.P, G.mul.Q, G.mul.r))
    v = check_pre_lie(bad, RIGHT, "exhaustive")
    assert not v.passed and v.witness is not None
    with pytest.raises(LawViolation):
        make_pre_lie_bracket(bad, RIGHT)


def test_vector_valued_commutator(m2_lie, m2):
    o = mat(0, 0, 0, 0)
    V = to_vector_valued(m2_lie, o)
    for a, b in itertools.product(m2.module.elements()[::5], repeat=2):
        assert V(a, b).tolist() == ((m2.mul(a, b) - m2.mul(b, a)) % 2).tolist()
    assert V.check("exhaustive").passed


@pytest.mark.parametrize("zeta", range(5))
def test_vector_valued_action(zeta):
    L = make_action_bracket(CoordinateModule(GF(5), 1), zeta)
    V = to_vector_valued(L, [0])
    for a, b in itertools.product(range(5), repeat=2):
        # ζb − ζa + a − b
        assert V(np.array([a]), np.array([b])).tolist() == [(zeta - 1) * (b - a) % 5]


def test_vector_valued_round_trip(upper_lie):
    for o in ([0, 0, 0], [1, 2, 0]):
        V = to_vector_valued(upper_lie, o)
        assert V.check("exhaustive").passed
        assert from_vector_valued(V).same_bracket(upper_lie)


def test_vector_valued_refusals(m2_lie, sigma_lie):
    with pytest.raises(NotAUnitError):
        from_vector_valued(to_vector_valued(m2_lie, mat(0, 0, 0, 0)))
    with pytest.raises(LawViolation):
        to_vector_valued(sigma_lie, [0])


def test_adjoint_maps(m2_lie):
    for a in m2_lie.module.elements():
        X = adjoint_map(m2_lie, a)
        assert X(a).tolist() == a.tolist()
    L = make_action_bracket(CoordinateModule(GF(5), 1), 2)
    X = adjoint_map(L, [1])
    assert X == line_map(L.module, 2, 4)


def test_retract_commutator_at_zero(m2_lie, m2):
    o = mat(0, 0, 0, 0)
    V = retract_lie(m2_lie, o)
    R = retract_algebra(m2, o)
    pts = m2.module.elements()
    a, b = np.repeat(pts, 16, axis=0), np.tile(pts, (16, 1))
    assert np.array_equal(V.bracket(a, b), (R.product(a, b) - R.product(b, a)) % 2)


def test_retract_every_origin_m2(m2_lie, m2):
    pts = m2.module.elements()
    a, b = np.repeat(pts, 16, axis=0), np.tile(pts, (16, 1))
    for o in pts:
        V = retract_lie(m2_lie, o)
        assert V.check("exhaustive").passed
        # identity a•b − b•a in the retract
        R = retract_algebra(m2, o)
        Ro = R.retract
        assert np.array_equal(V.bracket(a, b), Ro.sub(R.product(a, b), R.product(b, a)))
    assert check_intertwining(m2_lie, "exhaustive").passed


@pytest.mark.parametrize("fixture", ["m2_lie", "upper_lie"])
def test_retraction_is_linear_part_of_vector_valued(fixture, request):
    L = request.getfixturevalue(fixture)
    A = L.module
    pts = A.elements()
    n = len(pts)
    a, b = np.repeat(pts, n, axis=0), np.tile(pts, (n, 1))
    for o in pts:
        V = retract_lie(L, o)
        vv = to_vector_valued(L, o)
        O = A.batch(o, len(a))
        Ro = V.retract
        assert np.array_equal(V.bracket(a, b), Ro.combination([vv(a, b)], [vv(a, O), vv(O, b)]))


def test_vector_valued_difference_is_not_the_retraction(upper_lie):
    # [a,b]_v − [b,a]_v is twice [a,b]_v, so it cannot equal [a,b]_o in general
    A = upper_lie.module
    o = A.origin
    V = retract_lie(upper_lie, o)
    vv = to_vector_valued(upper_lie, o)
    a, b = np.array([1, 0, 0]), np.array([0, 1, 0])
    assert V.bracket(a, b).tolist() == [0, 1, 0]
    assert V.retract.sub(vv(a, b), vv(b, a)).tolist() == [0, 2, 0]


@pytest.mark.parametrize("zeta", range(5))
def test_action_retracts_to_zero(zeta):
    A = CoordinateModule(GF(5), 1)
    L = make_action_bracket(A, zeta)
    for o in range(5):
        V = retract_lie(L, [o])
        assert not np.any(np.array(V.structure_constants(), dtype=np.int64))
        assert all(V.bracket(np.array([a]), np.array([b])).tolist() == [o]
                   for a, b in itertools.product(range(5), repeat=2))


def test_sigma_retracts_to_zero(sigma_lie):
    V = retract_lie(sigma_lie, [2])
    assert V.check("exhaustive").passed
    assert not np.any(np.array(V.structure_constants(), dtype=np.int64))


def test_isomorphism_action_brackets():
    A = CoordinateModule(GF(3), 1)
    res = are_isomorphic_small(make_action_bracket(A, 1), make_action_bracket(A, 2))
    assert not res and res.candidates == 6
    same = are_isomorphic_small(make_action_bracket(A, 2), make_action_bracket(A, 2))
    assert same and same.witness == AffineMap.identity(A)


def test_isomorphism_conjugate_sigma():
    A = CoordinateModule(GF(5), 1)
    s1 = line_map(A, 2, 0)
    f = line_map(A, 1, 1)
    finv = line_map(A, 1, 4)
    s2 = f.compose(s1).compose(finv)
    assert s2 == line_map(A, 2, 4)
    res = are_isomorphic_small(make_sigma_bracket(A, s1), make_sigma_bracket(A, s2))
    assert res
    g = res.witness
    for a in range(5):
        x = np.array([a])
        assert g(s1(x)).tolist() == s2(g(x)).tolist()
