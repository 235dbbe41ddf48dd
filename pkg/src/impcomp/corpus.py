"""A small frozen corpus of finite implicative algebras.

The non-Heyting members come from an exhaustive search over implicative
structures of the form ``a -> b = join {c | c * a <= b}`` with ``*``
join-preserving on the left and monotone on the right.
"""
from functools import lru_cache

import numpy as np

from .algebra import ImplicativeAlgebra, Separator
from .order import ImplicativeStructure, Lattice, derive_heyting


def chain(names):
    return Lattice(names, list(zip(names, names[1:])))


def square():
    return Lattice(["0", "x", "y", "1"], [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")])


def diamond():
    """M3: three pairwise incomparable atoms; not distributive."""
    return Lattice(["0", "a", "b", "c", "1"],
                   [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")])


def from_application(L, star):
    """The implicative structure whose application is ``star`` (rows: left argument)."""
    n = L.n
    star = np.asarray(star)
    imp = np.array([[L.join(c for c in range(n) if L.leq[star[c, a], b]) for b in range(n)]
                    for a in range(n)], dtype=np.int64)
    return ImplicativeStructure(L, imp)


@lru_cache(maxsize=None)
def get(name):
    """Corpus algebra by name (see :data:`NAMES`)."""
    if name == "B2":
        H = derive_heyting(chain(["0", "1"]))
        return ImplicativeAlgebra.build(H, ["1"], name)
    if name == "H3":
        return ImplicativeAlgebra.build(derive_heyting(chain(["0", "h", "1"])), ["1"], name)
    if name == "H3h":
        return ImplicativeAlgebra.build(_h3(), ["h"], name)
    if name == "C4":
        return ImplicativeAlgebra.build(derive_heyting(chain(["0", "a", "b", "1"])), ["1"], name)
    if name == "C4b":
        return ImplicativeAlgebra.build(derive_heyting(chain(["0", "a", "b", "1"])), ["b"], name)
    if name == "SQ":
        return ImplicativeAlgebra.build(derive_heyting(square()), ["1"], name)
    if name == "SQx":
        return ImplicativeAlgebra.build(derive_heyting(square()), ["x"], name)
    if name == "CA1":
        # subsets of the one-point combinatory algebra {p}, with p . p = p
        L = Lattice(["{}", "{p}"], [("{}", "{p}")])
        H = ImplicativeStructure.from_rows(L, [
            ("{}", "{}", "{p}"), ("{}", "{p}", "{p}"), ("{p}", "{}", "{}"), ("{p}", "{p}", "{p}")])
        return ImplicativeAlgebra(H, Separator(L, ["{p}"]), name)
    if name == "TW":
        # square with a -> b = phi(a) => b, phi collapsing everything below top
        L = square()
        imp = np.array([[L.top if a != L.top else b for b in range(4)] for a in range(4)])
        return ImplicativeAlgebra.build(ImplicativeStructure(L, imp), ["1"], name)
    if name == "NJ3":
        L = chain(["0", "a", "1"])
        H = from_application(L, [[0, 0, 0], [0, 1, 1], [1, 1, 1]])
        return ImplicativeAlgebra.build(H, ["a"], name)
    if name == "JC4":
        # joins-compatible but not Heyting: c * a = c /\ a on {b, 1}, bottom elsewhere
        L = chain(["0", "a", "b", "1"])
        H = from_application(L, [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 2, 2], [0, 0, 2, 2]])
        return ImplicativeAlgebra.build(H, ["b"], name)
    raise KeyError(name)


@lru_cache(maxsize=None)
def _h3():
    return derive_heyting(chain(["0", "h", "1"]))


NAMES = ("B2", "H3", "H3h", "C4", "C4b", "SQ", "SQx", "CA1", "TW", "NJ3", "JC4")
HEYTING = ("B2", "H3", "H3h", "C4", "C4b", "SQ", "SQx", "CA1")
NON_JOINS = ("TW", "NJ3")


def all_algebras():
    return [get(n) for n in NAMES]
