import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lieaff import catalog, engine
from lieaff.errors import DomainError, LawViolation
from lieaff.module import (
    AffineMap,
    CoordinateModule,
    TableModule,
    act_on_maps,
    apply_map,
    check_affine_axioms,
    enumerate_affine_maps,
    heap_of_maps,
    is_affine_hom,
    linearise,
    retract_module,
    retracted_module_laws,
    translate,
)
from lieaff.scalars import GF, QQ, ZZ, Zmod

from conftest import line_map

F5 = CoordinateModule(GF(5), 1)


def p(*v):
    return np.array(v, dtype=np.int64)


@pytest.mark.parametrize("alpha, a, b, expected", [(2, 1, 3, 0), (0, 1, 3, 1), (1, 1, 3, 3), (4, 2, 2, 2)])
def test_action(alpha, a, b, expected):
    assert F5.act(alpha, p(a), p(b))[0] == expected


@pytest.mark.parametrize("A", [CoordinateModule(GF(3), 2), CoordinateModule(Zmod(4), 1), catalog.coset_module()])
def test_affine_axioms_pass(A):
    v = check_affine_axioms(A)
    assert v.passed and v.strategy == "exhaustive"


def test_affine_axioms_frame_over_infinite_rings():
    for ring in (ZZ, QQ):
        assert check_affine_axioms(CoordinateModule(ring, 2), strategy="frame").passed


def test_corrupted_action_table():
    A = catalog.coset_module()
    action = A.action.copy()
    action[2, 0, 1] = 0
    with pytest.raises(LawViolation) as err:
        TableModule(A.op, A.ring, action)
    assert err.value.verdict.failing().witness is not None


def test_translate():
    Z5 = CoordinateModule(Zmod(5), 1)
    assert translate(Z5, p(0), p(2), p(3))[0] == 0
    assert translate(Z5, p(4), p(4), p(3))[0] == 3


def test_translation_intertwines_actions():
    o, u = p(1), p(3)
    for alpha, a in itertools.product(range(5), range(5)):
        lhs = translate(F5, o, u, F5.act(alpha, o, p(a)))
        assert lhs == F5.act(alpha, u, translate(F5, o, u, p(a)))


def test_retract_module():
    R = retract_module(F5, [0])
    assert R.add(p(2), p(4))[0] == 1
    assert R.smul(3, R.zero)[0] == 0
    assert R.arrow(p(3), p(3))[0] == 0
    laws = retracted_module_laws(retract_module(CoordinateModule(GF(3), 2), [1, 2]))
    assert engine.check_all("retract", laws, "exhaustive").passed


def test_apply_map_and_hom():
    f = line_map(F5, 2, 1)
    assert apply_map(f, p(3))[0] == 2
    assert is_affine_hom(AffineMap.identity(F5)).passed


def test_table_map_perturbed():
    A = catalog.coset_module()
    f = AffineMap.from_table(A, A, [1, 2, 0])
    assert is_affine_hom(f).passed
    with pytest.raises(LawViolation):
        AffineMap.from_table(A, A, [1, 2, 2])


def test_linearise():
    assert linearise(line_map(F5, 2, 1), p(0), p(0)) == line_map(F5, 2, 0)
    assert linearise(AffineMap.constant(F5, F5, [4]), p(2), p(0)) == line_map(F5, 0, 0)
    A = CoordinateModule(GF(3), 2)
    I = AffineMap.identity(A)
    assert linearise(I, A.point([1, 2]), A.point([1, 2])) == I


def test_heap_of_maps():
    f, g, h = line_map(F5, 2, 1), line_map(F5, 1, 0), line_map(F5, 3, 2)
    assert heap_of_maps(f, g, h) == line_map(F5, 4, 3)
    assert heap_of_maps(f, g, g) == f
    assert heap_of_maps(f, g, h) == heap_of_maps(h, g, f)


def test_act_on_maps():
    f, g = line_map(F5, 1, 0), line_map(F5, 2, 1)
    assert act_on_maps(2, f, g) == line_map(F5, 3, 2)
    assert act_on_maps(0, f, g) == f and act_on_maps(1, f, g) == g
    assert act_on_maps(3, g, g) == g
    assert is_affine_hom(act_on_maps(4, f, g)).passed


def test_signature_mismatch():
    with pytest.raises(DomainError):
        heap_of_maps(line_map(F5, 1, 0), AffineMap.identity(CoordinateModule(GF(5), 2)), line_map(F5, 1, 0))


def test_enumerate_affine_maps_order():
    maps = list(enumerate_affine_maps(CoordinateModule(GF(3), 1)))
    assert [(int(f.M[0, 0]), int(f.t[0])) for f in maps] == list(itertools.product(range(3), range(3)))
    A = catalog.coset_module()
    assert len(list(enumerate_affine_maps(A))) == 9


def test_inverse():
    f = line_map(F5, 2, 1)
    assert f.inverse() == line_map(F5, 3, 2)
    assert f.compose(f.inverse()) == AffineMap.identity(F5)


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_chart_maps_preserve_action(m, t, alpha, a, b):
    f = line_map(F5, m, t)
    assert f(F5.act(alpha, p(a), p(b)))[0] == F5.act(alpha, f(p(a)), f(p(b)))[0]
