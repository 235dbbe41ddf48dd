import itertools

import pytest
from hypothesis import given

from impcomp.algebra import (Family, ImplicativeAlgebra, Separator, Valuation, compatible_with_joins, e_exists,
                             e_exists_valuation, encoded_meet, fam_entails, fam_iso, validate_separator)
from impcomp.corpus import chain
from impcomp.errors import StructuralError
from impcomp.order import derive_heyting, validate_implicative_structure

from conftest import distributive_lattices, o_entails, o_exists, o_join, o_meet, subsets


def B2(members):
    H = derive_heyting(chain(["0", "1"]))
    return ImplicativeAlgebra(H, Separator(H.lattice, members), "B2")


def test_corpus_validates(corpus):
    for name in corpus.NAMES:
        A = corpus.get(name)
        assert validate_implicative_structure(A.structure) == [], name
        assert validate_separator(A) == [], name


def test_separator_examples():
    assert validate_separator(B2(["1"])) == []
    assert validate_separator(B2(["0", "1"])) == []
    H = derive_heyting(chain(["0", "h", "1"]))
    bad = validate_separator(ImplicativeAlgebra(H, Separator(H.lattice, ["h"])))
    assert "upward-closure" in {v.kind for v in bad}


def test_generators_close_upward():
    H = derive_heyting(chain(["0", "h", "1"]))
    S = Separator.from_generators(H.lattice, ["h"])
    assert sorted(H.lattice.names(S)) == ["1", "h"]


def test_encoded_meet_examples():
    A = B2(["1"])
    one, zero = A["1"], A["0"]
    assert encoded_meet(one, zero, A) == zero
    assert encoded_meet(one, one, A) == one


@given(distributive_lattices())
def test_encoded_meet_is_meet_in_heyting(L):
    A = ImplicativeAlgebra(derive_heyting(L), Separator(L, [L.top]))
    for a in range(L.n):
        for b in range(L.n):
            assert encoded_meet(a, b, A) == o_meet(L, [a, b])


def test_existence_examples():
    A = B2(["1"])
    assert e_exists([], A) == A["0"]
    assert e_exists([A["0"], A["1"]], A) == A["1"]


@pytest.mark.parametrize("name", ["B2", "H3", "C4", "SQ", "CA1", "TW", "NJ3", "JC4"])
def test_existence_matches_definition(corpus, name):
    A = corpus.get(name)
    for U in subsets(range(A.n)):
        assert e_exists(U, A) == o_exists(A, U)


def test_joins_compatibility(corpus):
    for name in corpus.NAMES:
        ok, _ = compatible_with_joins(corpus.get(name))
        assert ok == (name not in corpus.NON_JOINS), name


def _s_iso(A, a, b):
    return A.in_sep(A.implies(a, b)) and A.in_sep(A.implies(b, a))


def test_joins_compatible_existence_is_join_on_heyting_members(corpus):
    for name in corpus.HEYTING:
        A = corpus.get(name)
        assert compatible_with_joins(A)[0]
        for U in subsets(range(A.n)):
            assert e_exists(U, A) == o_join(A.lattice, U), (name, U)


def test_joins_compatible_non_heyting_agrees_only_up_to_iso(corpus):
    # JC4 is compatible with joins, yet existence and join differ as elements
    A = corpus.get("JC4")
    assert compatible_with_joins(A)[0]
    differ = [U for U in subsets(range(A.n)) if e_exists(U, A) != o_join(A.lattice, U)]
    assert differ
    assert e_exists((), A) == A["a"]
    for U in subsets(range(A.n)):
        assert _s_iso(A, e_exists(U, A), o_join(A.lattice, U))
    for a in range(A.n):
        for b in range(A.n):
            assert _s_iso(A, encoded_meet(a, b, A), A.lattice.meet([a, b]))
    assert encoded_meet(A["0"], A["0"], A) != A["0"]


def test_non_joins_witness(corpus):
    A = corpus.get("TW")
    ok, (U, b) = compatible_with_joins(A)
    assert not ok
    assert o_meet(A.lattice, [A.imp[a, b] for a in U]) != A.imp[o_join(A.lattice, U), b]


def test_family_entailment_examples():
    A = B2(["1"])
    idx = ("x", "y")
    zero, one = Family(idx, [A["0"]] * 2), Family(idx, [A["1"]] * 2)
    u = Family(idx, [A["1"], A["0"]])
    ok, w = fam_entails(u, u, A)
    assert ok and A.le(A.interp("I"), w)
    assert fam_entails(zero, u, A)[0]
    ok, w = fam_entails(one, zero, A)
    assert not ok and w == A["0"]


@pytest.mark.parametrize("name", ["H3", "SQ", "TW", "NJ3"])
def test_entailment_witness_is_meet_of_implications(corpus, name):
    A = corpus.get(name)
    for vals in itertools.product(range(A.n), repeat=2):
        for wals in itertools.product(range(A.n), repeat=2):
            u, v = Family(("a", "b"), vals), Family(("a", "b"), wals)
            ok, w = fam_entails(u, v, A)
            assert w == o_entails(A, zip(vals, wals)) and ok == A.in_sep(w)


def test_family_reindex_and_mismatch():
    A = B2(["1"])
    u = Family(("x", "y"), [A["1"], A["0"]])
    assert u.reindex(lambda z: "x", ("p", "q")).values == (A["1"], A["1"])
    with pytest.raises(StructuralError):
        fam_entails(u, Family(("x",), [A["1"]]), A)
    assert fam_iso(u, Family(("y", "x"), [A["0"], A["1"]]), A)


def test_valuation_families(corpus):
    B = corpus.get("B2")
    nu = Valuation(("x", "y"), [{B["1"]}, {B["1"]}])
    assert e_exists_valuation(nu, B).values == (B["1"], B["1"])
    assert e_exists_valuation(Valuation((), ()), B).values == ()
    with pytest.raises(StructuralError):
        Valuation(("x",), [set()])
    CA = corpus.get("CA1")
    p = CA["{p}"]
    # the trivial valuation U -> {{m} | m in U}: existence gives U back
    for U in ([p],):
        nu = Valuation(("U",), [set(U)])
        assert e_exists_valuation(nu, CA).values == (CA.lattice.join(U),)
