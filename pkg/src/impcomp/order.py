"""Finite complete lattices and implicative structures.

Elements are addressed by opaque string ids at the boundary and by their
position ``0..n-1`` everywhere else.  Every table is an immutable numpy array.
"""
from dataclasses import dataclass, field
from functools import cached_property
import logging

import numpy as np

from . import kernels
from .errors import NotImplicative, StructuralError

log = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 16
SAMPLE_SUBSETS = 4096


def _frozen(arr):
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    witness: tuple = field(default=(), compare=False)

    def __str__(self):
        return f"{self.kind}: {self.message}"


class Lattice:
    """A finite complete lattice given by generator pairs of its order.

    ``order`` pairs ``(a, b)`` mean ``a <= b``; the reflexive-transitive
    closure is taken at construction.  Antisymmetry and completeness are
    checked, and a non-lattice raises :class:`StructuralError`.
    """

    def __init__(self, elements, order=(), seed=0):
        elements = tuple(str(e) for e in elements)
        if len(set(elements)) != len(elements):
            raise StructuralError("duplicate element ids")
        if not elements:
            raise StructuralError("a lattice needs at least one element")
        self.elements = elements
        self.index = {e: i for i, e in enumerate(elements)}
        n = self.n = len(elements)
        leq = np.eye(n, dtype=bool)
        for a, b in order:
            leq[self.idx(a), self.idx(b)] = True
        for k in range(n):
            leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            a, b = np.argwhere(both)[0]
            raise StructuralError(
                f"order is not antisymmetric: {elements[a]} <= {elements[b]} <= {elements[a]}"
            )
        self.leq = _frozen(leq)
        self.down = tuple(int(sum(1 << j for j in range(n) if leq[j, i])) for i in range(n))
        self.up = tuple(int(sum(1 << j for j in range(n) if leq[i, j])) for i in range(n))
        self.exhaustive = n <= EXHAUSTIVE_LIMIT
        self._check_complete(seed)
        by_down = {m: i for i, m in enumerate(self.down)}
        by_up = {m: i for i, m in enumerate(self.up)}
        full = (1 << n) - 1
        self.top = by_down[full]
        self.bottom = by_up[full]
        meet = np.empty((n, n), dtype=np.int64)
        join = np.empty((n, n), dtype=np.int64)
        for a in range(n):
            for b in range(n):
                meet[a, b] = by_down[self.down[a] & self.down[b]]
                join[a, b] = by_up[self.up[a] & self.up[b]]
        self.meet_table = _frozen(meet)
        self.join_table = _frozen(join)

    def _check_complete(self, seed):
        n = self.n
        for masks, name in ((self.down, "greatest lower bound"), (self.up, "least upper bound")):
            principal = set(masks)
            if self.exhaustive:
                bounds = kernels.subset_and(np.array(masks, dtype=np.uint64), n)
                for subset, b in enumerate(bounds.tolist()):
                    if b not in principal:
                        raise StructuralError(
                            f"not a complete lattice: {self.names(_bits(subset))} has no {name}"
                        )
            else:
                # sampled check, plus every pair and the empty set
                rng = np.random.default_rng(seed)
                samples = [0] + [(1 << i) | (1 << j) for i in range(n) for j in range(i, n)]
                samples += [int(s) for s in rng.integers(0, 1 << n, SAMPLE_SUBSETS, dtype=np.uint64)]
                full = (1 << n) - 1
                for subset in samples:
                    b = full
                    for i in _bits(subset):
                        b &= masks[i]
                    if b not in principal:
                        raise StructuralError(
                            f"not a complete lattice: {self.names(_bits(subset))} has no {name}"
                        )
                log.info("completeness of %d-element lattice checked on %d sampled subsets", n, len(samples))

    # -- element ids ------------------------------------------------------
    def idx(self, name):
        if isinstance(name, (int, np.integer)) and not isinstance(name, bool):
            if 0 <= name < self.n:
                return int(name)
            raise StructuralError(f"element index {name} out of range")
        try:
            return self.index[str(name)]
        except KeyError:
            raise StructuralError(f"unknown element id {name!r}") from None

    def __getitem__(self, name):
        return self.idx(name)

    def name(self, i):
        return self.elements[i]

    def names(self, items):
        return [self.elements[i] for i in items]

    def __len__(self):
        return self.n

    def __iter__(self):
        return iter(range(self.n))

    def __repr__(self):
        return f"Lattice({list(self.elements)})"

    # -- order operations on indices --------------------------------------
    def le(self, a, b):
        return bool(self.leq[a, b])

    def meet(self, items):
        acc = self.top
        for i in items:
            acc = self.meet_table[acc, i]
        return int(acc)

    def join(self, items):
        acc = self.bottom
        for i in items:
            acc = self.join_table[acc, i]
        return int(acc)

    @cached_property
    def subset_meets(self):
        if not self.exhaustive:
            raise StructuralError("subset tables are only built for lattices of at most 16 elements")
        return _frozen(kernels.subset_folds(self.meet_table, self.top, self.n))

    @cached_property
    def subset_joins(self):
        if not self.exhaustive:
            raise StructuralError("subset tables are only built for lattices of at most 16 elements")
        return _frozen(kernels.subset_folds(self.join_table, self.bottom, self.n))


def _bits(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def meet(S, L):
    """Greatest lower bound of the element ids ``S``; ``meet(set(), L)`` is top."""
    return L.name(L.meet(L.idx(s) for s in S))


def join(S, L):
    """Least upper bound of the element ids ``S``; ``join(set(), L)`` is bottom."""
    return L.name(L.join(L.idx(s) for s in S))


class ImplicativeStructure:
    """A complete lattice with an implication table ``imp[a, b] = a -> b``.

    Construction does not validate; call
    :func:`validate_implicative_structure` (or use :func:`derive_heyting`).
    The application and encoded-meet tables are derived lazily.
    """

    def __init__(self, lattice, imp):
        imp = np.asarray(imp, dtype=np.int64)
        n = lattice.n
        if imp.shape != (n, n):
            raise StructuralError(f"implication table must be {n}x{n}, got {imp.shape}")
        if imp.min() < 0 or imp.max() >= n:
            raise StructuralError("implication table refers to unknown elements")
        self.lattice = lattice
        self.imp = _frozen(imp)

    @classmethod
    def from_rows(cls, lattice, rows):
        """Build from ``(a, b, c)`` id triples meaning ``a -> b = c``; every pair must appear."""
        n = lattice.n
        imp = np.full((n, n), -1, dtype=np.int64)
        for a, b, c in rows:
            i, j = lattice.idx(a), lattice.idx(b)
            if imp[i, j] >= 0 and imp[i, j] != lattice.idx(c):
                raise StructuralError(f"conflicting rows for {a} -> {b}")
            imp[i, j] = lattice.idx(c)
        missing = np.argwhere(imp < 0)
        if len(missing):
            a, b = missing[0]
            raise StructuralError(
                f"implication table is missing {lattice.name(a)} -> {lattice.name(b)}"
            )
        return cls(lattice, imp)

    @property
    def n(self):
        return self.lattice.n

    @property
    def top(self):
        return self.lattice.top

    @property
    def bottom(self):
        return self.lattice.bottom

    def implies(self, a, b):
        return int(self.imp[a, b])

    @cached_property
    def app_table(self):
        """``app[a, b]`` is the meet of all ``c`` with ``a <= b -> c``."""
        L = self.lattice
        return _frozen(kernels.app_table(L.leq, self.imp, L.meet_table, L.top))

    @cached_property
    def emeet_table(self):
        """Second-order pairing: ``meet_c ((a -> b -> c) -> c)``."""
        return _frozen(kernels.encoded_meet_table(self.imp, self.lattice.meet_table, self.top))

    def app(self, a, b):
        return int(self.app_table[a, b])

    def emeet(self, *items):
        """Right-nested encoded meet ``a /\\ (b /\\ (...))``; the empty tuple gives top."""
        if not items:
            return self.top
        acc = items[-1]
        for x in reversed(items[:-1]):
            acc = int(self.emeet_table[x, acc])
        return int(acc)

    def __repr__(self):
        return f"ImplicativeStructure({list(self.lattice.elements)})"


def derive_heyting(L):
    """Heyting implication ``a -> b = join{c | c /\\ a <= b}`` on ``L``.

    Raises :class:`NotImplicative` when the candidate fails variance, meet
    distribution or the residuation ``c /\\ a <= b  iff  c <= a -> b``.  On a
    finite lattice the last one fails exactly when the lattice is not
    distributive (on M3 the candidate is implicative but not residuated).
    """
    n = L.n
    imp = np.empty((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            imp[a, b] = L.join(c for c in range(n) if L.leq[L.meet_table[c, a], b])
    A = ImplicativeStructure(L, imp)
    report = validate_implicative_structure(A) + heyting_adjunction_violations(A)
    if report:
        raise NotImplicative(
            f"derived implication is not an implicative structure ({len(report)} violations, first: {report[0]})",
            report,
        )
    return A


def validate_implicative_structure(A, seed=0):
    """Every violated instance of variance and meet distribution.

    Meet distribution is checked on all ``2**n`` subsets up to 16 elements,
    and on a seeded sample of subsets above that.
    """
    L = A.lattice
    n = L.n
    imp = A.imp
    leq = L.leq
    out = []
    # variance: a' <= a and b <= b' imply (a -> b) <= (a' -> b')
    target = leq[imp[:, :, None, None], imp[None, None, :, :]]  # [a, b, a', b']
    ok = target | ~(leq.T[:, None, :, None] & leq[None, :, None, :])
    for a, b, a2, b2 in np.argwhere(~ok):
        out.append(Violation(
            "variance",
            f"{L.name(a2)} <= {L.name(a)} and {L.name(b)} <= {L.name(b2)} but "
            f"({L.name(a)} -> {L.name(b)}) = {L.name(imp[a, b])} is not below "
            f"({L.name(a2)} -> {L.name(b2)}) = {L.name(imp[a2, b2])}",
            (int(a), int(b), int(a2), int(b2)),
        ))
    if L.exhaustive:
        bad = kernels.meet_distribution_violations(imp, L.meet_table, L.subset_meets, n)
        pairs = [(int(a), _bits(int(m))) for a, m in bad]
    else:
        rng = np.random.default_rng(seed)
        pairs = []
        subsets = [[]] + [[i, j] for i in range(n) for j in range(i + 1, n)]
        subsets += [list(np.flatnonzero(rng.random(n) < 0.5)) for _ in range(SAMPLE_SUBSETS)]
        for a in range(n):
            for B in subsets:
                lhs = imp[a, L.meet(B)]
                rhs = L.meet(imp[a, b] for b in B)
                if lhs != rhs:
                    pairs.append((a, [int(b) for b in B]))
    for a, B in pairs:
        lhs = int(imp[a, L.meet(B)])
        rhs = L.meet(int(imp[a, b]) for b in B)
        out.append(Violation(
            "meet-distribution",
            f"{L.name(a)} -> meet{L.names(B)} = {L.name(lhs)} but the meet of the "
            f"implications is {L.name(rhs)}",
            (a, tuple(B)),
        ))
    return out


def heyting_adjunction_violations(A):
    L = A.lattice
    n = L.n
    out = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                lhs = L.le(L.meet_table[c, a], b)
                rhs = L.le(c, A.imp[a, b])
                if lhs != rhs:
                    out.append(Violation(
                        "adjunction",
                        f"{L.name(c)} /\\ {L.name(a)} <= {L.name(b)} is {lhs} but "
                        f"{L.name(c)} <= ({L.name(a)} -> {L.name(b)}) is {rhs}",
                        (c, a, b),
                    ))
    return out
