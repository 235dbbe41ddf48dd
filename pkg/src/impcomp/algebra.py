"""Separators, implicative algebras and the encoded connectives.

``/\\`` between elements always means the second-order encoded meet
``meet_c ((a -> b -> c) -> c)``, never the lattice meet, and implicative
existence is ``meet_c ((meet_{u in U} (u -> c)) -> c)``.
"""
from dataclasses import dataclass
from functools import cached_property
import logging

import numpy as np

from . import kernels
from .errors import StructuralError
from .interp import interpreter
from .order import Violation, _bits

log = logging.getLogger(__name__)

JOINS_EXHAUSTIVE_LIMIT = 12


class Separator:
    """A set of "true" elements, stored as a frozenset of element indices."""

    def __init__(self, lattice, members):
        self.lattice = lattice
        self.members = frozenset(lattice.idx(m) for m in members)
        mask = np.zeros(lattice.n, dtype=bool)
        mask[list(self.members)] = True
        mask.setflags(write=False)
        self.mask = mask

    @classmethod
    def from_generators(cls, lattice, generators):
        """Upward closure of ``generators``."""
        gens = [lattice.idx(g) for g in generators]
        return cls(lattice, {b for g in gens for b in range(lattice.n) if lattice.leq[g, b]})

    def __contains__(self, a):
        return bool(self.mask[a])

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self):
        return len(self.members)

    def __repr__(self):
        return f"Separator({self.lattice.names(sorted(self.members))})"


class ImplicativeAlgebra:
    """An implicative structure together with a separator."""

    def __init__(self, structure, separator, name=None):
        if separator.lattice is not structure.lattice:
            raise StructuralError("separator and structure live on different lattices")
        self.structure = structure
        self.separator = separator
        self.name = name

    @classmethod
    def build(cls, structure, generators, name=None):
        return cls(structure, Separator.from_generators(structure.lattice, generators), name)

    # delegation to the structure
    @property
    def lattice(self):
        return self.structure.lattice

    @property
    def n(self):
        return self.structure.n

    @property
    def imp(self):
        return self.structure.imp

    @property
    def top(self):
        return self.structure.top

    @property
    def bottom(self):
        return self.structure.bottom

    def __getitem__(self, name):
        return self.lattice.idx(name)

    def name_of(self, a):
        return self.lattice.name(a)

    def le(self, a, b):
        return bool(self.lattice.leq[a, b])

    def meet(self, items):
        return self.lattice.meet(items)

    def join(self, items):
        return self.lattice.join(items)

    def implies(self, a, b):
        return int(self.structure.imp[a, b])

    def app(self, a, b):
        return self.structure.app(a, b)

    def emeet(self, *items):
        return self.structure.emeet(*items)

    def in_sep(self, a):
        return bool(self.separator.mask[a])

    def interp(self, t, env=None):
        return interpreter(self.structure).interp(t, env)

    def combinator(self, name):
        return interpreter(self.structure).combinator(name)

    @cached_property
    def _exists_cache(self):
        return {}

    def exists(self, U):
        """Implicative existence of the subset ``U`` (element indices)."""
        key = frozenset(U)
        cache = self._exists_cache
        if key not in cache:
            imp = self.structure.imp
            L = self.lattice
            acc = L.top
            for c in range(L.n):
                ante = L.meet(imp[u, c] for u in key)
                acc = L.meet_table[acc, imp[ante, c]]
            cache[key] = int(acc)
        return cache[key]

    @cached_property
    def exists_table(self):
        """``exists`` of every subset, indexed by bitmask (at most 16 elements)."""
        L = self.lattice
        if not L.exhaustive:
            raise StructuralError("subset tables are only built for lattices of at most 16 elements")
        return kernels.exists_all(self.structure.imp, L.meet_table, L.top, L.n)

    def entails_all(self, pairs):
        """``meet (a -> b)`` over ``pairs``: the uniform witness of a family of implications."""
        imp = self.structure.imp
        return self.lattice.meet(int(imp[a, b]) for a, b in pairs)

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"ImplicativeAlgebra({label}{list(self.lattice.elements)}, S={self.lattice.names(sorted(self.separator.members))})"


def validate_separator(A):
    """Violations of upward closure, application closure and K, S membership."""
    L = A.lattice
    S = A.separator
    out = []
    for a in sorted(S.members):
        for b in range(L.n):
            if L.leq[a, b] and b not in S:
                out.append(Violation("upward-closure", f"{L.name(a)} is in S but {L.name(b)} above it is not", (a, b)))
    app = A.structure.app_table
    for a in sorted(S.members):
        for b in sorted(S.members):
            c = int(app[a, b])
            if c not in S:
                out.append(Violation("application-closure", f"{L.name(a)} {L.name(b)} = {L.name(c)} is not in S", (a, b, c)))
    for comb in ("K", "S"):
        v = A.combinator(comb)
        if v not in S:
            out.append(Violation("combinator", f"{comb} = {L.name(v)} is not in S", (v,)))
    if len(S) == L.n:
        log.warning("separator is the whole carrier; every check is trivially true")
    return out


def encoded_meet(a, b, A):
    """``a /\\ b`` as the second-order encoding ``meet_c ((a -> b -> c) -> c)``."""
    return int(A.structure.emeet_table[a, b])


def e_exists(U, A):
    """Implicative existence ``meet_c ((meet_{u in U} (u -> c)) -> c)``."""
    return A.exists(U)


@dataclass(frozen=True)
class Family:
    """An element of the fibre over a finite index set: ``x -> values[x]``."""

    index: tuple
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "index", tuple(self.index))
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.index) != len(self.values):
            raise StructuralError("family index and values differ in length")

    @classmethod
    def from_map(cls, mapping, index=None):
        index = tuple(mapping) if index is None else tuple(index)
        return cls(index, tuple(mapping[x] for x in index))

    def __getitem__(self, x):
        return self.values[self.index.index(x)]

    def as_dict(self):
        return dict(zip(self.index, self.values))

    def reindex(self, f, index):
        """``f^* self``: the family ``y -> self[f(y)]`` over ``index``."""
        d = self.as_dict()
        return Family(index, tuple(d[f(y)] for y in index))


def fam_entails(u, v, A):
    """``(w in S, w)`` with ``w = meet_x (u_x -> v_x)``."""
    if tuple(u.index) != tuple(v.index):
        if set(u.index) != set(v.index) or len(u.index) != len(v.index):
            raise StructuralError("families are indexed by different sets")
        v = Family.from_map(v.as_dict(), u.index)
    w = A.entails_all(zip(u.values, v.values))
    return A.in_sep(w), w


def fam_iso(u, v, A):
    return fam_entails(u, v, A)[0] and fam_entails(v, u, A)[0]


@dataclass(frozen=True)
class Valuation:
    """``x -> subset of M``.  Partial valuations allow empty values."""

    index: tuple
    values: tuple
    partial: bool = False

    def __post_init__(self):
        object.__setattr__(self, "index", tuple(self.index))
        object.__setattr__(self, "values", tuple(frozenset(v) for v in self.values))
        if len(self.index) != len(self.values):
            raise StructuralError("valuation index and values differ in length")
        if not self.partial:
            for x, v in zip(self.index, self.values):
                if not v:
                    raise StructuralError(f"valuation is empty at {x!r}")

    @classmethod
    def from_map(cls, mapping, index=None, partial=False):
        index = tuple(mapping) if index is None else tuple(index)
        return cls(index, tuple(mapping[x] for x in index), partial)

    def __getitem__(self, x):
        return self.values[self.index.index(x)]

    def as_dict(self):
        return dict(zip(self.index, self.values))

    def within(self, M):
        M = frozenset(M)
        return all(v <= M for v in self.values)


def e_exists_valuation(nu, A):
    """The family ``x -> exists(nu(x))``."""
    return Family(nu.index, tuple(A.exists(v) for v in nu.values))


def compatible_with_joins(A, size_cap=3):
    """``(True, None)`` or ``(False, (subset, b))`` for the first failure of
    ``meet_{a in U} (a -> b) = (join U) -> b``.

    All subsets are checked up to 12 elements; above that only subsets of
    at most ``size_cap`` elements.
    """
    L = A.lattice
    imp = A.structure.imp
    if L.n <= JOINS_EXHAUSTIVE_LIMIT:
        bad = kernels.joins_violations(imp, L.meet_table, L.subset_joins, L.n, L.top)
        if len(bad):
            mask, b = bad[0]
            return False, (tuple(_bits(int(mask))), int(b))
        return True, None
    from itertools import combinations

    for k in range(size_cap + 1):
        for U in combinations(range(L.n), k):
            j = L.join(U)
            for b in range(L.n):
                if L.meet(imp[a, b] for a in U) != imp[j, b]:
                    return False, (U, b)
    return True, None
