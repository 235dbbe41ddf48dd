"""Shared oracles and hypothesis strategies.

The oracles recompute lattice operations and the derived connectives
straight from their defining formulas with plain loops, independent of the
table code under test.
"""
import itertools

import pytest
from hypothesis import settings, strategies as st

from impcomp.order import Lattice

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


# -- oracles ----------------------------------------------------------------

def o_meet(L, items):
    items = list(items)
    lower = [c for c in range(L.n) if all(L.leq[c, x] for x in items)]
    return next(c for c in lower if all(L.leq[d, c] for d in lower))


def o_join(L, items):
    items = list(items)
    upper = [c for c in range(L.n) if all(L.leq[x, c] for x in items)]
    return next(c for c in upper if all(L.leq[c, d] for d in upper))


def o_heyting(L, a, b):
    return o_join(L, [c for c in range(L.n) if L.leq[o_meet(L, [c, a]), b]])


def o_app(A, a, b):
    L = A.lattice
    return o_meet(L, [c for c in range(L.n) if L.leq[a, A.imp[b, c]]])


def o_emeet(A, a, b):
    L, imp = A.lattice, A.imp
    return o_meet(L, [imp[imp[a, imp[b, c]], c] for c in range(L.n)])


def o_exists(A, U):
    L, imp = A.lattice, A.imp
    return o_meet(L, [imp[o_meet(L, [imp[u, c] for u in U]), c] for c in range(L.n)])


def o_entails(A, pairs):
    return o_meet(A.lattice, [A.imp[a, b] for a, b in pairs])


def subsets(xs):
    xs = list(xs)
    return itertools.chain.from_iterable(itertools.combinations(xs, k) for k in range(len(xs) + 1))


# -- strategies -------------------------------------------------------------

@st.composite
def posets(draw, max_size=4):
    n = draw(st.integers(1, max_size))
    rel = {(i, j) for i in range(n) for j in range(i + 1, n) if draw(st.booleans())}
    return n, rel


def downset_lattice(n, rel):
    """The distributive lattice of down-sets of a poset on ``range(n)``."""
    def below(j):
        return {i for i in range(n) if (i, j) in rel or i == j}

    closure = {i: below(i) for i in range(n)}
    changed = True
    while changed:
        changed = False
        for i in range(n):
            new = set().union(*(closure[j] for j in closure[i]))
            if new != closure[i]:
                closure[i], changed = new, True
    downs = []
    for mask in range(1 << n):
        s = {i for i in range(n) if mask >> i & 1}
        if all(closure[i] <= s for i in s):
            downs.append(frozenset(s))
    name = lambda s: "d" + "".join(map(str, sorted(s)))  # noqa: E731
    order = [(name(a), name(b)) for a in downs for b in downs if a < b]
    return Lattice([name(d) for d in downs], order)


@st.composite
def distributive_lattices(draw, max_size=4):
    n, rel = draw(posets(max_size))
    return downset_lattice(n, rel)


@st.composite
def closure_lattices(draw, points=3):
    """Intersection-closed families of subsets: arbitrary finite lattices, distributive or not."""
    full = (1 << points) - 1
    fam = {full} | set(draw(st.lists(st.integers(0, full), max_size=5)))
    changed = True
    while changed:
        changed = False
        for a, b in itertools.combinations(list(fam), 2):
            if a & b not in fam:
                fam.add(a & b)
                changed = True
    fam = sorted(fam)
    order = [(f"s{a}", f"s{b}") for a in fam for b in fam if a != b and a & b == a]
    return Lattice([f"s{a}" for a in fam], order)


@pytest.fixture(scope="session")
def corpus():
    from impcomp import corpus as c
    return c


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None:
        return
    out = mod.lines()
    if out:
        terminalreporter.section("acceptance")
        for line in out:
            terminalreporter.write_line(line)
