"""Acceptance suite: one PASS/FAIL line per criterion.

Each criterion records its parts in ``RESULTS``; the terminal summary hook in
``conftest.py`` prints the lines.  A criterion reads PASS only if every part
holds.  Parts that cannot hold on the finite corpus are strict xfail tests,
so the suite stays green while the line reads FAIL.
"""
import itertools
import random

import pytest

from impcomp.algebra import Family, compatible_with_joins, e_exists, encoded_meet, fam_entails, validate_separator
from impcomp.assemblies import (
    all_maps, diagonal_fillers, enumerate_assemblies, image_factorization, induced_valuation, is_mono,
    is_regular_epi, is_tracked, xi, xi_inv,
)
from impcomp.corpus import diamond
from impcomp.errors import NotImplicative, StructuralError
from impcomp.excomp import check_composition, check_homotopy_equivalence, corpus_groupoids, quiver_morphisms
from impcomp.order import derive_heyting, validate_implicative_structure
from impcomp.regcomp import (
    check_U_equivalence, essential_surjectivity, is_algebraic, is_compact, is_dense, is_generator,
    lifting_report, per_family_density,
)
from impcomp.seta import (
    K_relation, check_K_faithful_full, check_tracker_terms, ghost_partition, hat_groupoid, implicative_sets,
    internal_injective, internal_surjective, surjectivity_harness,
)

from conftest import o_exists, o_join, o_meet, subsets

TITLES = {
    1: "foundations",
    2: "encoding laws",
    3: "assemblies as families",
    4: "image factorization",
    5: "density triple agreement",
    6: "compactness vs lifting",
    7: "one-point CA generator",
    8: "ex/lex homotopy and composition",
    9: "K-functor suite",
    10: "Set+ equivalence",
    11: "negative-witness harness",
}
RESULTS = {n: {} for n in TITLES}


def record(n, part, ok, note=""):
    RESULTS[n][part] = (bool(ok), note)
    return bool(ok)


def lines():
    out = []
    for n, title in TITLES.items():
        parts = RESULTS[n]
        if not parts:
            continue
        ok = all(v for v, _ in parts.values())
        notes = "; ".join(f"{p}: {note}" for p, (v, note) in parts.items() if note)
        out.append(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f" ({notes})" if notes else ""))
    return out


def _s_iso(A, a, b):
    return A.in_sep(A.implies(a, b)) and A.in_sep(A.implies(b, a))


def _sep(A):
    return sorted(A.separator.members)


# -- 1 ---------------------------------------------------------------------

def test_c1_foundations(corpus):
    required = {"B2", "H3", "C4", "SQ", "CA1"}
    bad = [n for n in corpus.NAMES
           if validate_implicative_structure(corpus.get(n).structure) or validate_separator(corpus.get(n))]
    try:
        derive_heyting(diamond())
        rejected = False
    except (NotImplicative, StructuralError):
        rejected = True
    ok = required <= set(corpus.NAMES) and not bad and rejected
    assert record(1, "all", ok, f"{len(corpus.NAMES)} algebras"), bad


# -- 2 ---------------------------------------------------------------------

def _encoding_mismatches(A):
    L = A.lattice
    out = [("meet", a, b) for a in range(A.n) for b in range(A.n) if encoded_meet(a, b, A) != o_meet(L, [a, b])]
    out += [("exists", U) for U in subsets(range(A.n)) if e_exists(U, A) != o_join(L, U)]
    return out


def test_c2_encoding_laws_heyting(corpus):
    bad = {n: _encoding_mismatches(corpus.get(n)) for n in corpus.HEYTING}
    assert record(2, "heyting members", not any(bad.values())), bad


def test_c2_encoding_laws_up_to_iso(corpus):
    # on every joins-compatible algebra the laws hold up to S-iso
    for n in corpus.NAMES:
        A = corpus.get(n)
        if not compatible_with_joins(A)[0]:
            continue
        L = A.lattice
        assert all(_s_iso(A, encoded_meet(a, b, A), o_meet(L, [a, b])) for a in range(A.n) for b in range(A.n))
        assert all(_s_iso(A, e_exists(U, A), o_join(L, U)) for U in subsets(range(A.n)))


@pytest.mark.xfail(strict=True, reason="JC4 is joins-compatible but its encoded meet and existence differ from meet and join")
def test_c2_encoding_laws_all_joins_compatible(corpus):
    bad = {}
    for n in corpus.NAMES:
        A = corpus.get(n)
        if compatible_with_joins(A)[0]:
            m = _encoding_mismatches(A)
            if m:
                bad[n] = len(m)
    record(2, "all joins-compatible", not bad, f"exact equality fails on {bad}" if bad else "")
    assert not bad


# -- 3 ---------------------------------------------------------------------

def test_c3_xi_iso(corpus):
    checked = 0
    for n in ("B2", "H3h", "C4b", "SQx", "CA1", "NJ3", "JC4"):
        A = corpus.get(n)
        for k in (1, 2, 3):
            for X in enumerate_assemblies(A, k):
                assert xi_inv(xi(X), A) == X
        small = [X for k in (1, 2, 3) for X in enumerate_assemblies(A, k, _sep(A)[:2])]
        for X in small:
            for Y in small[:12]:
                for f in all_maps(X, Y, tracked_only=False):
                    pulled = Family(X.carrier, [Y.exist[j] for j in f.map])
                    assert is_tracked(f, X, Y)[0] == fam_entails(xi(X), pulled, A)[0]
                    checked += 1
    assert record(3, "all", checked > 0, f"{checked} candidates")


# -- 4 ---------------------------------------------------------------------

def _squares(A, limit):
    asms = [X for n in (1, 2) for X in enumerate_assemblies(A, n)]
    out = []
    for Xa, B, C, D in itertools.product(asms, repeat=4):
        for e in all_maps(Xa, B):
            if not is_regular_epi(e):
                continue
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


def test_c4_image_factorization(corpus):
    for n in ("H3h", "SQx", "NJ3", "TW", "JC4"):
        A = corpus.get(n)
        for X in enumerate_assemblies(A, 2):
            for Y in enumerate_assemblies(A, 2, prefix="q"):
                for f in all_maps(X, Y):
                    fac = image_factorization(f)
                    assert fac.fbar.then(fac.iota) == f
                    assert is_mono(fac.iota) and is_regular_epi(fac.fbar)
                    assert fac.image.exist == tuple(o_exists(A, v) for v in induced_valuation(f).values)
    squares = _squares(corpus.get("SQx"), 30) + _squares(corpus.get("NJ3"), 10)
    unique = all(len([d for d in diagonal_fillers(*sq) if d.tracked]) == 1 for sq in squares)
    assert record(4, "all", len(squares) >= 20 and unique, f"{len(squares)} squares")


# -- 5 ---------------------------------------------------------------------

def _pairs(corpus):
    for n in corpus.NAMES:
        A = corpus.get(n)
        S = _sep(A)
        for k in range(1, len(S) + 1):
            for M in itertools.combinations(S, k):
                yield n, A, list(M)


def test_c5_density_agreement(corpus):
    verdicts = set()
    count = 0
    for n, A, M in _pairs(corpus):
        d = is_dense(M, A).verdict
        assert d == per_family_density(M, A, 3).verdict == essential_surjectivity(M, A, 3).verdict, (n, M)
        verdicts.add(d)
        count += 1
    record(5, "agreement", True, f"{count} pairs agree")
    assert verdicts == {"pass"}


@pytest.mark.xfail(strict=True, reason="finite separators are principal, so every M is dense")
def test_c5_non_dense_instance(corpus):
    found = any(not is_dense(M, A).ok for _, A, M in _pairs(corpus))
    record(5, "non-dense M", found, "" if found else "no non-dense M exists")
    assert found


# -- 6 ---------------------------------------------------------------------

def test_c6_compactness_lifting(corpus):
    count = 0
    for n, A, M in _pairs(corpus):
        assert is_compact(M, A, 2).verdict == lifting_report(M, A, 2).verdict, (n, M)
        count += 1
    assert record(6, "all", True, f"{count} pairs")


# -- 7 ---------------------------------------------------------------------

def test_c7_one_point_ca(corpus):
    A = corpus.get("CA1")
    M = ["{p}"]
    ok = (is_algebraic(M, A) and is_dense(M, A).ok and is_compact(M, A, 2).ok
          and is_generator(M, A, 2).ok and check_U_equivalence(M, A, 3, 2).ok)
    assert record(7, "all", ok)


# -- 8 ---------------------------------------------------------------------

def test_c8_exlex(corpus):
    rng = random.Random(0)
    pairs = triples = 0
    for n in ("B2", "H3h", "NJ3"):
        A = corpus.get(n)
        gs = corpus_groupoids(A, _sep(A), max_vertices=2, max_edges=3)
        top = corpus_groupoids(A, [A.top], max_vertices=2, max_edges=3)
        todo = list(itertools.product(top, repeat=2))
        everything = list(itertools.product(gs, repeat=2))
        todo += everything if len(everything) <= 300 else rng.sample(everything, 300)
        for X, Y in todo:
            assert check_homotopy_equivalence(X, Y).ok
            pairs += 1
        for _ in range(20):
            X, Y, Z, W = (rng.choice(gs) for _ in range(4))
            assert check_composition(X, Y, Z, W).ok
            triples += 1
    assert record(8, "all", True, f"{pairs} pairs, {triples} samples")


# -- 9 ---------------------------------------------------------------------

def test_c9_k_functor(corpus):
    checks = violations = 0
    for n in ("B2", "H3h", "SQx", "TW", "NJ3"):
        A = corpus.get(n)
        gs = corpus_groupoids(A, _sep(A))[:6]
        for G in gs:
            assert all(c.ok for c in check_tracker_terms(G, "groupoid"))
            checks += 1
        for X, Y in itertools.product(gs[:4], repeat=2):
            for f in quiver_morphisms(X, Y):
                assert all(c.ok for c in check_tracker_terms(f, "morphism"))
                checks += 1
            r = check_K_faithful_full(X, Y)
            assert r.ok
            violations += r.details["theorem_violations"]
    for n in ("B2", "H3", "H3h", "SQx", "CA1", "TW"):
        A = corpus.get(n)
        for size in (1, 2):
            for E in implicative_sets(A, size):
                try:
                    G = hat_groupoid(E, _sep(A))
                except StructuralError:
                    continue
                for c in check_tracker_terms(G, "hat"):
                    if c.side_data_valid:
                        assert c.ok, (n, E, c)
                        checks += 1
    assert record(9, "all", violations == 0, f"{checks} tracker checks where side data are valid")


# -- 10 --------------------------------------------------------------------

def _harmless(A, E):
    return all(A.in_sep(int(v)) or A.in_sep(A.implies(int(v), A.bottom)) for v in E.eq.ravel())


def _k_iso(A, E):
    R = K_relation(hat_groupoid(E, _sep(A)))
    return internal_injective(R).ok and internal_surjective(R).ok


def test_c10_restricted_class(corpus):
    for n in corpus.NAMES:
        A = corpus.get(n)
        if not is_algebraic(_sep(A), A):
            continue
        for size in (1, 2):
            for E in implicative_sets(A, size):
                if not ghost_partition(E).ghosts and _harmless(A, E):
                    assert _k_iso(A, E), (n, E)
    for n in corpus.HEYTING:
        A = corpus.get(n)
        for size in (1, 2):
            for E in implicative_sets(A, size):
                if ghost_partition(E).ghosts and _harmless(A, E):
                    assert internal_surjective(K_relation(hat_groupoid(E, _sep(A)))).ok, (n, E)


@pytest.mark.xfail(strict=True, reason="ghostless sets with values outside S whose negation is outside S break K")
def test_c10_full_claim(corpus):
    bad = []
    for n in corpus.NAMES:
        A = corpus.get(n)
        if not is_algebraic(_sep(A), A):
            continue
        joins = compatible_with_joins(A)[0]
        for size in (1, 2):
            for E in implicative_sets(A, size):
                if not ghost_partition(E).ghosts:
                    if not _k_iso(A, E):
                        bad.append(n)
                elif joins and not internal_surjective(K_relation(hat_groupoid(E, _sep(A)))).ok:
                    bad.append(n)
    counts = {n: bad.count(n) for n in sorted(set(bad))}
    record(10, "full claim", not bad, f"counterexamples {counts}" if bad else "")
    assert not bad


# -- 11 --------------------------------------------------------------------

def test_c11_harness(corpus):
    algebras = [corpus.get(n) for n in corpus.NAMES if not compatible_with_joins(corpus.get(n))[0]]
    r = surjectivity_harness(algebras, _sep, 2)
    record(11, "report", r.ok, f"found {r.details['found']} of {r.details['examined']}")
    assert r.ok
