import itertools

import pytest

from impcomp.algebra import Family, Valuation, fam_entails
from impcomp.assemblies import (
    KERNEL_PAIR_TRACKERS, FBAR_TRACKER, Assembly, AsmMorphism, all_maps, check_cone_universal, delta,
    diagonal_fillers, enumerate_assemblies, equalizer, generic_object_check, identity, image_factorization,
    induced_valuation, is_iso, is_mono, is_pre_embedding, is_projective, is_regular_epi, is_tracked, isomorphic,
    kernel_pair, product, pullback, terminal, valuation_cover, xi, xi_inv,
)
from impcomp.errors import NotTracked, StructuralError

from conftest import o_emeet, o_entails, o_exists


def asm(A, **ex):
    return Assembly(A, list(ex), list(ex.values()))


def test_existence_must_lie_in_separator(corpus):
    with pytest.raises(StructuralError):
        asm(corpus.get("B2"), x="0")


def test_identity_and_top_targets_are_tracked(corpus):
    A = corpus.get("H3h")
    X = asm(A, a="h", b="1")
    f = identity(X)
    assert f.tracked and A.le(A.interp("I"), f.tracker)
    T = asm(A, t="1")
    assert AsmMorphism(X, T, {"a": "t", "b": "t"}).tracked


def test_untracked_example(corpus):
    # over H3 with S = {1} the target existence h lies outside S, so the target is built unchecked
    A = corpus.get("H3")
    X = asm(A, x="1")
    Y = Assembly(A, ["y"], ["h"], check=False)
    f = AsmMorphism(X, Y, [0])
    assert A.name_of(f.tracker) == "h" and not f.tracked
    with pytest.raises(NotTracked):
        kernel_pair(f)


def test_every_map_between_corpus_assemblies_is_tracked(corpus):
    # separators of finite algebras are principal, so s -> t lies in S for all s, t in S
    for name in corpus.NAMES:
        A = corpus.get(name)
        S = sorted(A.separator.members)
        assert all(A.in_sep(A.implies(a, b)) for a in S for b in S), name


def test_tracked_iff_family_entailment(corpus):
    for name in ("H3h", "C4b", "SQx", "NJ3"):
        A = corpus.get(name)
        for n in (1, 2):
            for X in enumerate_assemblies(A, n):
                for Y in enumerate_assemblies(A, 2, prefix="q"):
                    for f in all_maps(X, Y, tracked_only=False):
                        pulled = Family(X.carrier, [Y.exist[j] for j in f.map])
                        assert is_tracked(f, X, Y)[0] == fam_entails(xi(X), pulled, A)[0]
                        assert f.tracker == o_entails(A, zip(X.exist, pulled.values))


def test_xi_round_trip(corpus):
    A = corpus.get("H3h")
    for X in enumerate_assemblies(A, 2):
        assert xi_inv(xi(X), A) == X
    B = corpus.get("B2")
    assert xi(asm(B, a="1", b="1")).values == (B["1"], B["1"])
    assert xi_inv(Family(("x",), [A["h"]]), A).exist == (A["h"],)


def test_kernel_pair(corpus):
    A = corpus.get("H3h")
    X = asm(A, a="1", b="h")
    inj = identity(X)
    P, p0, p1 = kernel_pair(inj)
    assert len(P) == 2 and p0.map == p1.map
    const = AsmMorphism(X, asm(A, t="1"), {"a": "t", "b": "t"})
    P, p0, p1 = kernel_pair(const)
    assert len(P) == 4
    assert A.le(A.interp(KERNEL_PAIR_TRACKERS[0]), p0.tracker)
    assert A.le(A.interp(KERNEL_PAIR_TRACKERS[1]), p1.tracker)


def test_product_existence_is_encoded_meet(corpus):
    A = corpus.get("NJ3")
    X, Y = asm(A, a="a", b="1"), asm(A, u="1")
    P, _, _ = product(X, Y)
    assert P.exist == tuple(o_emeet(A, e, A["1"]) for e in X.exist)


def test_small_limits(corpus):
    A = corpus.get("H3h")
    tests = [T for n in (1, 2) for T in enumerate_assemblies(A, n, prefix="t")]
    X = asm(A, a="1", b="h")
    P, p0, p1 = product(X, terminal(A))
    assert isomorphic(P, X)
    assert check_cone_universal([p0, p1], [], tests).ok
    f = AsmMorphism(X, X, {"a": "a", "b": "a"})
    E, e = equalizer(f, f)
    assert E == X and e.map == (0, 1)
    pt = terminal(A)
    g = AsmMorphism(X, pt, [0, 0])
    PB, q0, q1 = pullback(g, g)
    PR, _, _ = product(X, X)
    assert PB.carrier == PR.carrier and PB.exist == PR.exist
    assert check_cone_universal([q0, q1], [(0, 1, g, g)], tests).ok


def test_image_factorization_examples(corpus):
    B = corpus.get("B2")
    X = asm(B, a="1", b="1")
    const = AsmMorphism(X, asm(B, t="1"), [0, 0])
    fac = image_factorization(const)
    assert len(fac.image) == 1 and fac.image.exist == (B["1"],)
    A = corpus.get("H3h")
    Y = asm(A, a="1", b="h")
    iso = AsmMorphism(Y, Y, [0, 1])
    fac = image_factorization(iso)
    assert fac.classes == ((0,), (1,)) and is_iso(fac.iota)


@pytest.mark.parametrize("name", ["H3h", "SQx", "NJ3", "TW", "JC4"])
def test_image_factorization_laws(corpus, name):
    A = corpus.get(name)
    for X in enumerate_assemblies(A, 2):
        for Y in enumerate_assemblies(A, 2, prefix="q"):
            for f in all_maps(X, Y):
                fac = image_factorization(f)
                assert fac.fbar.then(fac.iota) == f
                assert is_mono(fac.iota) and fac.iota.tracked
                assert is_regular_epi(fac.fbar)
                nu = induced_valuation(f)
                assert fac.image.exist == tuple(o_exists(A, v) for v in nu.values)
                assert A.le(A.interp(FBAR_TRACKER), fac.fbar.tracker)


def test_regular_epi_and_mono_examples(corpus):
    A = corpus.get("C4b")
    X = asm(A, a="1", b="b")
    assert is_regular_epi(identity(X)) and is_mono(identity(X))
    sub = asm(A, a="1")
    inc = AsmMorphism(sub, X, [0])
    assert is_mono(inc) and not is_regular_epi(inc)


def test_induced_valuation_examples(corpus):
    A = corpus.get("H3h")
    X = asm(A, a="1", b="h")
    assert all(len(v) == 1 for v in induced_valuation(identity(X)).values)
    const = AsmMorphism(X, asm(A, t="1"), [0, 0])
    assert induced_valuation(const).values == (frozenset({A["1"], A["h"]}),)


@pytest.mark.parametrize("name", ["H3h", "SQx", "CA1", "NJ3"])
def test_valuation_cover(corpus, name):
    A = corpus.get(name)
    S = sorted(A.separator.members)
    for vals in itertools.product([frozenset(c) for k in (1, 2) for c in itertools.combinations(S, k)], repeat=2):
        nu = Valuation(("x", "y"), vals)
        cover = valuation_cover(nu, A, S[0])
        assert cover.iso
        if all(len(v) == 1 for v in vals):
            assert len(cover.hat) == 2
    const = Valuation(("x", "y"), [{S[0]}, {S[0]}])
    cov = valuation_cover(const, A, S[0])
    assert cov.hat.exist == cov.check.exist


def test_pre_embeddings(corpus):
    for name in ("H3h", "SQx", "TW"):
        A = corpus.get(name)
        Xs = [X for n in (1, 2) for X in enumerate_assemblies(A, n)]
        assert generic_object_check(Xs).ok
        for X in Xs:
            assert is_pre_embedding(identity(X))
    # every tracked map is a pre-embedding when the separator is principal, the collapse map included
    A = corpus.get("H3h")
    X = asm(A, a="1", b="h")
    collapse = AsmMorphism(X, asm(A, t="1"), [0, 0])
    assert is_pre_embedding(collapse)


def test_delta_is_chaotic(corpus):
    A = corpus.get("H3h")
    X = asm(A, a="h")
    assert delta(X).exist == (A.top,)


def test_projectivity(corpus):
    A = corpus.get("CA1")
    assert is_projective(asm(A, x="{p}"), bound=2).ok
    H = corpus.get("H3")
    j = Assembly(H, ["x"], [H.exists({H["1"]})])
    assert is_projective(j, bound=2).ok


def _orthogonality_squares(A, limit):
    """Commuting squares ``v . e = m . u`` with ``e`` a regular epi and ``m`` a mono."""
    out = []
    asms = [X for n in (1, 2) for X in enumerate_assemblies(A, n)]
    for Xa in asms:
        for B in asms:
            for e in all_maps(Xa, B):
                if not is_regular_epi(e):
                    continue
                for C in asms:
                    for D in asms:
                        for m in all_maps(C, D):
                            if not is_mono(m):
                                continue
                            for u in all_maps(Xa, C):
                                for v in all_maps(B, D):
                                    if e.then(v).map == u.then(m).map:
                                        out.append((e, m, u, v))
                                        if len(out) >= limit:
                                            return out
    return out


@pytest.mark.parametrize("name", ["H3h", "SQx", "NJ3"])
def test_unique_diagonal_fill_in(corpus, name):
    squares = _orthogonality_squares(corpus.get(name), 40)
    assert len(squares) >= 20
    for e, m, u, v in squares:
        fills = [d for d in diagonal_fillers(e, m, u, v) if d.tracked]
        assert len(fills) == 1
