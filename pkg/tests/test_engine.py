import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lieaff import catalog, engine
from lieaff.affgebra import BiAffineMap
from lieaff.errors import BudgetExceededError, UnsupportedError
from lieaff.heap import check_heap_axioms, heap_laws
from lieaff.lie import LieAffgebra, antisymmetry_law, jacobi_law, make_action_bracket
from lieaff.module import AffineMap, CoordinateModule
from lieaff.nijenhuis import nijenhuis_law
from lieaff.scalars import GF, ZZ


def test_action_jacobi_frame_count():
    L = make_action_bracket(CoordinateModule(GF(5), 1), 2)
    law = jacobi_law(L.module, L.bracket_map)
    f, e = engine.frame_check(law), engine.exhaustive_check(law)
    assert (f.result, f.count) == ("pass", 8)
    assert (e.result, e.count) == ("pass", 125)


def test_nijenhuis_frame_count():
    A = CoordinateModule(GF(3), 2)
    L = make_action_bracket(A, 2)
    N = AffineMap.chart(A, A, [[1, 1], [0, 2]], [1, 0])
    assert engine.frame_size(nijenhuis_law(L, N)) == 9
    assert engine.frame_check(nijenhuis_law(L, N)).count == 9


def test_diagonal_degree_sets_frame(m2, m2_lie):
    # ab − ba + b has an affine diagonal; ab alone is quadratic there
    law = antisymmetry_law(m2_lie.module, m2_lie.bracket_map)
    assert law.degrees == (1, 1) and engine.frame_size(law) == 25
    law = antisymmetry_law(m2.module, m2.mul)
    assert law.degrees == (2, 2) and engine.frame_size(law) == 15 * 15


def test_heap_counts_zmod7():
    v = check_heap_axioms(CoordinateModule(catalog.zmod_heap(7).ring, 1))
    counts = {d.law: d.count for d in v.details}
    assert v.passed
    assert counts == {"heap.para_associativity": 16807, "heap.symmetry": 343, "heap.malcev_left": 49,
                      "heap.malcev_right": 49}


def test_corrupted_table_witness_is_deterministic():
    op = catalog.corrupted_heap_table()
    from lieaff.heap import TableHeap

    h = TableHeap(op, verify=False)
    first = check_heap_axioms(h)
    second = check_heap_axioms(h, jobs=4)
    assert not first.passed and first.to_record() == second.to_record()
    w = first.failing()
    assert w.law == "heap.para_associativity"
    slots = [int(x) for x in w.witness["slots"].values()]
    law = {l.name: l for l in heap_laws(h)}[w.law]
    assert not law.holds_at(*slots)


def test_budget_error():
    law = jacobi_law(catalog.m2_gf2_commutator().module, catalog.m2_gf2_commutator().bracket_map)
    with pytest.raises(BudgetExceededError) as exc:
        engine.exhaustive_check(law, budget=100)
    assert exc.value.required == 4096 and exc.value.budget == 100


def test_frame_refused_without_degrees():
    A = CoordinateModule(GF(3), 1)
    law = engine.Law("free", (A,), lambda a: (a, a), A)
    with pytest.raises(UnsupportedError):
        engine.frame_check(law)
    assert engine.check(law).strategy == engine.EXHAUSTIVE


def test_frame_refused_on_infinite_ring_without_degrees():
    A = CoordinateModule(ZZ, 1)
    law = engine.Law("free", (A,), lambda a: (a, a), A)
    assert not engine.supports_frame(law)


def test_jobs_do_not_change_reports(m2_lie):
    law = jacobi_law(m2_lie.module, m2_lie.bracket_map)
    a = engine.exhaustive_check(law, chunk=256)
    b = engine.exhaustive_check(law, jobs=4, chunk=256)
    assert a.to_record() == b.to_record()
    bad = BiAffineMap.chart(m2_lie.module, m2_lie.bracket_map.B, m2_lie.bracket_map.P, m2_lie.bracket_map.Q,
                            np.array([0, 0, 1, 0]))
    law = jacobi_law(m2_lie.module, bad)
    a = engine.exhaustive_check(law, chunk=64)
    b = engine.exhaustive_check(law, jobs=8, chunk=64)
    assert a.result == "fail" and a.to_record() == b.to_record()


def random_chart(draw, p, d):
    ints = st.integers(0, p - 1)
    B = draw(st.lists(ints, min_size=d ** 3, max_size=d ** 3))
    P = draw(st.lists(ints, min_size=d * d, max_size=d * d))
    Q = draw(st.lists(ints, min_size=d * d, max_size=d * d))
    r = draw(st.lists(ints, min_size=d, max_size=d))
    A = CoordinateModule(GF(p), d)
    return BiAffineMap.chart(A, np.reshape(B, (d, d, d)), np.reshape(P, (d, d)), np.reshape(Q, (d, d)), r)


@st.composite
def charts(draw):
    p, d = draw(st.sampled_from([(2, 1), (2, 2), (3, 1), (3, 2), (5, 1)]))
    return random_chart(draw, p, d)


@settings(max_examples=60, deadline=None)
@given(charts())
def test_frame_agrees_with_exhaustive(br):
    A = br.module
    for law in (antisymmetry_law(A, br), antisymmetry_law(A, br, alt=True), jacobi_law(A, br),
                jacobi_law(A, br, "right")):
        f = engine.frame_check(law)
        e = engine.exhaustive_check(law)
        assert f.result == e.result
        if not f.passed:
            assert not law.holds_at(*f.raw)


@settings(max_examples=40, deadline=None)
@given(charts(), st.data())
def test_frame_agrees_on_nijenhuis(br, data):
    A = br.module
    p, d = A.ring.size, A.dim
    M = data.draw(st.lists(st.integers(0, p - 1), min_size=d * d, max_size=d * d))
    t = data.draw(st.lists(st.integers(0, p - 1), min_size=d, max_size=d))
    L = LieAffgebra(A, br, certify=False)
    law = nijenhuis_law(L, AffineMap.chart(A, A, np.reshape(M, (d, d)), t))
    assert engine.frame_check(law).result == engine.exhaustive_check(law).result
