import numpy as np
import pytest
from hypothesis import given

from impcomp.errors import NotImplicative, StructuralError
from impcomp.order import ImplicativeStructure, Lattice, derive_heyting, validate_implicative_structure
from impcomp.corpus import chain, diamond, square

from conftest import closure_lattices, distributive_lattices, o_heyting, o_join, o_meet


B2 = chain(["0", "1"])
H3 = chain(["0", "h", "1"])


def test_meet_examples():
    assert B2.meet([]) == B2.idx("1")
    assert B2.meet([0, 1]) == B2.idx("0")
    assert H3.name(H3.meet([H3.idx("h"), H3.idx("1")])) == "h"


def test_join_examples():
    assert B2.join([]) == B2.idx("0")
    assert B2.join([0, 1]) == B2.idx("1")
    assert H3.name(H3.join([H3.idx("0"), H3.idx("h")])) == "h"


def test_order_closure_is_transitive():
    L = chain(["a", "b", "c", "d"])
    assert L.le(L.idx("a"), L.idx("d"))
    assert not L.le(L.idx("d"), L.idx("a"))


def test_non_lattice_and_cycles_rejected():
    with pytest.raises(StructuralError):
        Lattice(["a", "b"], [])  # no top
    with pytest.raises(StructuralError):
        Lattice(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(StructuralError):
        Lattice(["a", "a"])
    with pytest.raises(StructuralError):
        B2.idx("nope")


@given(closure_lattices())
def test_meet_join_tables_match_bound_scans(L):
    for a in range(L.n):
        for b in range(L.n):
            assert L.meet([a, b]) == o_meet(L, [a, b])
            assert L.join([a, b]) == o_join(L, [a, b])


def test_b2_is_classical():
    A = derive_heyting(B2)
    table = {(B2.name(a), B2.name(b)): B2.name(A.imp[a, b]) for a in range(2) for b in range(2)}
    assert table == {("0", "0"): "1", ("0", "1"): "1", ("1", "0"): "0", ("1", "1"): "1"}


def test_h3_implication():
    A = derive_heyting(H3)
    for a in range(3):
        for b in range(3):
            assert A.imp[a, b] == (H3.top if H3.le(a, b) else b)


def test_m3_rejected():
    with pytest.raises(NotImplicative) as e:
        derive_heyting(diamond())
    assert any(v.kind == "adjunction" for v in e.value.violations)


@given(distributive_lattices())
def test_heyting_matches_oracle_and_validates(L):
    A = derive_heyting(L)
    assert validate_implicative_structure(A) == []
    for a in range(L.n):
        for b in range(L.n):
            assert A.imp[a, b] == o_heyting(L, a, b)


def _distributive(L):
    r = range(L.n)
    return all(L.meet([a, L.join([b, c])]) == L.join([L.meet([a, b]), L.meet([a, c])]) for a in r for b in r for c in r)


@given(closure_lattices())
def test_heyting_derivable_iff_distributive(L):
    if _distributive(L):
        derive_heyting(L)
    else:
        with pytest.raises(NotImplicative):
            derive_heyting(L)


def test_validation_of_good_structures():
    assert validate_implicative_structure(derive_heyting(B2)) == []
    assert validate_implicative_structure(derive_heyting(H3)) == []
    assert validate_implicative_structure(derive_heyting(square())) == []


def test_constant_bottom_breaks_meet_distribution():
    A = ImplicativeStructure(B2, np.zeros((2, 2), dtype=np.int64))
    bad = validate_implicative_structure(A)
    assert bad and {v.kind for v in bad} == {"meet-distribution"}
    # a -> top must be top: the empty meet is the witness
    assert any(tuple(v.witness[1]) == () for v in bad)


def test_variance_violation_detected():
    # swapping the classical table's rows breaks antitonicity in the antecedent
    A = ImplicativeStructure(B2, np.array([[0, 1], [1, 1]]))
    assert any(v.kind == "variance" for v in validate_implicative_structure(A))


def test_from_rows_checks_totality():
    rows = [("0", "0", "1"), ("0", "1", "1"), ("1", "0", "0")]
    with pytest.raises(StructuralError):
        ImplicativeStructure.from_rows(B2, rows)
    A = ImplicativeStructure.from_rows(B2, rows + [("1", "1", "1")])
    assert np.array_equal(A.imp, derive_heyting(B2).imp)


def test_application_and_encoded_meet_tables(corpus):
    from conftest import o_app, o_emeet
    for name in corpus.NAMES:
        A = corpus.get(name).structure
        for a in range(A.n):
            for b in range(A.n):
                assert A.app(a, b) == o_app(A, a, b)
                assert A.emeet(a, b) == o_emeet(A, a, b)
