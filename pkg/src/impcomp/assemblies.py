"""Assemblies over a finite implicative algebra and their tracked maps.

Carriers are tuples of string labels; a map is stored as the tuple of
target positions, one per source point.
"""
from dataclasses import dataclass
from functools import cached_property
import itertools

import numpy as np

from . import kernels
from .algebra import Family, Valuation, fam_iso
from .errors import NotTracked, StructuralError
from .report import Report, verdict


class Assembly:
    """A finite carrier with an existence predicate valued in the separator."""

    def __init__(self, A, carrier, exist, name=None, check=True):
        carrier = tuple(str(x) for x in carrier)
        if len(set(carrier)) != len(carrier):
            raise StructuralError("duplicate carrier labels")
        L = A.lattice
        exist = tuple(L.idx(e) for e in exist)
        if len(exist) != len(carrier):
            raise StructuralError("existence predicate must cover the carrier")
        if check:
            for x, e in zip(carrier, exist):
                if not A.in_sep(e):
                    raise StructuralError(f"existence of {x} is {L.name(e)}, outside the separator")
        self.A = A
        self.carrier = carrier
        self.exist = exist
        self.name = name
        self.pos = {x: i for i, x in enumerate(carrier)}

    @classmethod
    def from_map(cls, A, mapping, name=None, check=True):
        return cls(A, list(mapping), list(mapping.values()), name, check)

    def __len__(self):
        return len(self.carrier)

    def e(self, x):
        return self.exist[self.pos[x] if isinstance(x, str) else x]

    def is_M(self, M):
        M = {self.A.lattice.idx(m) for m in M}
        return all(e in M for e in self.exist)

    def key(self):
        return (self.carrier, self.exist)

    def __eq__(self, other):
        return isinstance(other, Assembly) and other.A is self.A and other.key() == self.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        L = self.A.lattice
        body = ", ".join(f"{x}:{L.name(e)}" for x, e in zip(self.carrier, self.exist))
        return f"Assembly({self.name + ': ' if self.name else ''}{body})"


class AsmMorphism:
    """A set map between assemblies; ``tracker`` is the uniform witness."""

    def __init__(self, source, target, mapping, name=None):
        if source.A is not target.A:
            raise StructuralError("assemblies over different algebras")
        if isinstance(mapping, dict):
            try:
                mapping = [target.pos[str(mapping[x])] for x in source.carrier]
            except KeyError as e:
                raise StructuralError(f"map is not total or leaves the target: {e}") from None
        mapping = tuple(int(i) for i in mapping)
        if len(mapping) != len(source) or any(not 0 <= i < len(target) for i in mapping):
            raise StructuralError("map is not a total function between the carriers")
        self.source = source
        self.target = target
        self.map = mapping
        self.name = name

    @cached_property
    def tracker(self):
        A = self.source.A
        return A.entails_all((self.source.exist[i], self.target.exist[j]) for i, j in enumerate(self.map))

    @property
    def tracked(self):
        return self.source.A.in_sep(self.tracker)

    def __call__(self, x):
        i = self.source.pos[x] if isinstance(x, str) else x
        return self.map[i]

    def label(self, x):
        return self.target.carrier[self(x)]

    def as_dict(self):
        return {x: self.target.carrier[j] for x, j in zip(self.source.carrier, self.map)}

    def then(self, g):
        """``g . self``."""
        if g.source != self.target:
            raise StructuralError("morphisms are not composable")
        return AsmMorphism(self.source, g.target, [g.map[j] for j in self.map])

    def __eq__(self, other):
        return (isinstance(other, AsmMorphism) and self.source == other.source
                and self.target == other.target and self.map == other.map)

    def __hash__(self):
        return hash((self.source, self.target, self.map))

    def __repr__(self):
        return f"AsmMorphism({self.as_dict()})"


def identity(X):
    return AsmMorphism(X, X, range(len(X)))


def is_tracked(f, X, Y):
    """``(tracked?, witness)`` for a set map given as a dict or position sequence."""
    m = f if isinstance(f, AsmMorphism) else AsmMorphism(X, Y, f)
    return m.tracked, m.tracker


def require_tracked(f):
    if not f.tracked:
        raise NotTracked(f"{f!r} is not tracked (witness {f.source.A.name_of(f.tracker)})")
    return f


# -- the families view ------------------------------------------------------

def xi(X):
    return Family(X.carrier, X.exist)


def xi_inv(u, A, name=None):
    """The assembly with carrier ``u.index`` and existence ``u``."""
    return Assembly(A, u.index, u.values, name)


# -- enumeration of tracked maps -------------------------------------------

def all_maps(X, Y, tracked_only=True):
    """Every (tracked) map ``X -> Y``, in lexicographic order of target positions."""
    A = X.A
    if len(X) == 0:
        yield AsmMorphism(X, Y, ())
        return
    if len(Y) == 0:
        return
    w = A.imp[np.array(X.exist)[:, None], np.array(Y.exist)[None, :]]
    wit = kernels.map_witnesses(np.ascontiguousarray(w, dtype=np.int64), A.lattice.meet_table, A.top)
    mask = A.separator.mask
    for code, (t) in enumerate(wit.tolist()):
        if tracked_only and not mask[t]:
            continue
        yield AsmMorphism(X, Y, _digits(code, len(Y), len(X)))


def _digits(code, base, width):
    out = [0] * width
    for i in range(width - 1, -1, -1):
        code, out[i] = divmod(code, base)
    return out


def enumerate_assemblies(A, size, values=None, prefix="p"):
    """All assemblies on carrier ``p0..p{size-1}`` with existence drawn from ``values``."""
    values = sorted(A.separator.members) if values is None else sorted(A.lattice.idx(v) for v in values)
    carrier = [f"{prefix}{i}" for i in range(size)]
    for ex in itertools.combinations_with_replacement(values, size):
        yield Assembly(A, carrier, ex)


# -- finite limits ----------------------------------------------------------

def _pair_label(a, b):
    return f"({a},{b})"


def terminal(A):
    return Assembly(A, ["*"], [A.top], name="1")


def product(X, Y):
    """``(P, p0, p1)`` with existence the encoded meet of the components."""
    A = X.A
    carrier, exist, p0, p1 = [], [], [], []
    for i, x in enumerate(X.carrier):
        for j, y in enumerate(Y.carrier):
            carrier.append(_pair_label(x, y))
            exist.append(A.emeet(X.exist[i], Y.exist[j]))
            p0.append(i)
            p1.append(j)
    P = Assembly(A, carrier, exist)
    return P, AsmMorphism(P, X, p0), AsmMorphism(P, Y, p1)


def pullback(f, g):
    """Pullback of ``f: X -> Z`` and ``g: Y -> Z``: the matching pairs, with product existence."""
    if f.target != g.target:
        raise StructuralError("pullback needs a common codomain")
    X, Y = f.source, g.source
    A = X.A
    carrier, exist, p0, p1 = [], [], [], []
    for i, x in enumerate(X.carrier):
        for j, y in enumerate(Y.carrier):
            if f.map[i] == g.map[j]:
                carrier.append(_pair_label(x, y))
                exist.append(A.emeet(X.exist[i], Y.exist[j]))
                p0.append(i)
                p1.append(j)
    P = Assembly(A, carrier, exist)
    return P, AsmMorphism(P, X, p0), AsmMorphism(P, Y, p1)


def equalizer(f, g):
    """The subassembly where ``f`` and ``g`` agree, with its inclusion."""
    if f.source != g.source or f.target != g.target:
        raise StructuralError("equalizer needs parallel morphisms")
    X = f.source
    keep = [i for i in range(len(X)) if f.map[i] == g.map[i]]
    E = Assembly(X.A, [X.carrier[i] for i in keep], [X.exist[i] for i in keep])
    return E, AsmMorphism(E, X, keep)


def kernel_pair(f):
    require_tracked(f)
    return pullback(f, f)


# projection trackers of a kernel pair
KERNEL_PAIR_TRACKERS = ("lam z . z (lam x y . x)", "lam z . z (lam x y . y)")


def check_cone_universal(legs, base_maps, tests):
    """Exhaustive universal-property check for a limit cone.

    ``legs`` are the cone's projections out of its apex; ``base_maps`` is a
    list of ``(i, j, f_i, f_j)`` constraints ``f_i . leg_i == f_j . leg_j``
    that every competing cone must satisfy.  For every test assembly and
    every compatible family of tracked maps into the legs' targets there must
    be exactly one tracked mediating map.  Returns a :class:`Report`.
    """
    P = legs[0].source
    failures = []
    cases = 0
    for T in tests:
        choices = [list(all_maps(T, leg.target)) for leg in legs]
        for cone in itertools.product(*choices):
            if any(tuple(fi.map[x] for x in cone[i].map) != tuple(fj.map[x] for x in cone[j].map)
                   for i, j, fi, fj in base_maps):
                continue
            cases += 1
            mediators = [m for m in all_maps(T, P)
                         if all(m.then(leg).map == c.map for leg, c in zip(legs, cone))]
            if len(mediators) != 1:
                failures.append((T, [c.as_dict() for c in cone], len(mediators)))
    return Report("limit", verdict(not failures), bound=max((len(T) for T in tests), default=0),
                  violations=[f"test cone from {T!r} {c} has {k} mediating maps" for T, c, k in failures],
                  details={"cones": cases})


# -- image factorization ----------------------------------------------------

@dataclass
class ImageFactorization:
    image: Assembly
    fbar: AsmMorphism
    iota: AsmMorphism
    classes: tuple  # source positions in each class


# tracker of the canonical projection onto the image
FBAR_TRACKER = "lam x z . z x"


def image_factorization(f):
    """``f = iota . fbar`` through the image ``Im(f)``.

    Classes are the fibres ``f^-1(f(x))`` in order of first occurrence, and
    ``e([x]) = exists {e(x') | x' in [x]}``.
    """
    require_tracked(f)
    X = f.source
    A = X.A
    order = []
    fibres = {}
    for i, y in enumerate(f.map):
        if y not in fibres:
            fibres[y] = []
            order.append(y)
        fibres[y].append(i)
    classes = tuple(tuple(fibres[y]) for y in order)
    labels = ["[" + ",".join(X.carrier[i] for i in c) + "]" for c in classes]
    exist = [A.exists({X.exist[i] for i in c}) for c in classes]
    Im = Assembly(A, labels, exist)
    which = {i: k for k, c in enumerate(classes) for i in c}
    fbar = AsmMorphism(X, Im, [which[i] for i in range(len(X))])
    iota = AsmMorphism(Im, f.target, order)
    return ImageFactorization(Im, fbar, iota, classes)


def induced_valuation(f):
    """``[x] -> {e(x') | x' in [x]}`` over the carrier of ``Im(f)``."""
    fac = image_factorization(f)
    X = f.source
    return Valuation(fac.image.carrier, [{X.exist[i] for i in c} for c in fac.classes])


def is_mono(f):
    return len(set(f.map)) == len(f.map)


def is_surjective(f):
    return set(f.map) == set(range(len(f.target)))


def inverse(f):
    if not (is_mono(f) and is_surjective(f)):
        return None
    inv = [0] * len(f.map)
    for i, j in enumerate(f.map):
        inv[j] = i
    return AsmMorphism(f.target, f.source, inv)


def is_iso(f):
    g = inverse(f)
    return g is not None and f.tracked and g.tracked


def is_regular_epi(f):
    if not (f.tracked and is_surjective(f)):
        return False
    return is_iso(image_factorization(f).iota)


def isomorphisms(X, Y):
    """Every tracked bijection ``X -> Y`` with tracked inverse."""
    if len(X) != len(Y):
        return
    for perm in itertools.permutations(range(len(Y))):
        f = AsmMorphism(X, Y, perm)
        if is_iso(f):
            yield f


def isomorphic(X, Y):
    return next(isomorphisms(X, Y), None) is not None


# -- valuations -------------------------------------------------------------

@dataclass
class ValuationCover:
    hat: Assembly
    check: Assembly
    g: AsmMorphism
    factorization: ImageFactorization
    bracket: AsmMorphism  # x -> g^-1(x), from (X, exists nu) to Im(g)
    iso: bool


def valuation_cover(nu, A, m0):
    """The cover ``g: hatX -> checkX`` of a valuation and the comparison ``(X, exists nu) ~ Im(g)``."""
    m0 = A.lattice.idx(m0)
    L = A.lattice
    carrier, exist, gmap = [], [], []
    for k, (x, vals) in enumerate(zip(nu.index, nu.values)):
        if not vals:
            raise StructuralError(f"valuation is empty at {x!r}")
        for m in sorted(vals):
            carrier.append(f"{x}:{L.name(m)}")
            exist.append(m)
            gmap.append(k)
    hat = Assembly(A, carrier, exist)
    check = Assembly(A, [str(x) for x in nu.index], [m0] * len(nu.index))
    g = AsmMorphism(hat, check, gmap)
    fac = image_factorization(g)
    ex = Assembly(A, check.carrier, [A.exists(v) for v in nu.values])
    where = {fac.iota.map[k]: k for k in range(len(fac.image))}
    bracket = AsmMorphism(ex, fac.image, [where[k] for k in range(len(ex))])
    return ValuationCover(hat, check, g, fac, bracket, is_iso(bracket) and fam_iso(xi(ex), Family(ex.carrier, [fac.image.exist[j] for j in bracket.map]), A))


# -- chaotic situation ------------------------------------------------------

def delta(X):
    """The chaotic assembly on the carrier of ``X``: existence constantly top."""
    return Assembly(X.A, X.carrier, [X.A.top] * len(X))


def is_pre_embedding(f):
    """Whether the square ``X -> Delta|X|``, ``Y -> Delta|Y|`` over ``f`` is a pullback.

    The pullback of ``Delta|f|`` along the unit of ``Y`` is built and the
    canonical comparison from ``X`` is tested for being an isomorphism.
    """
    X, Y = f.source, f.target
    dX, dY = delta(X), delta(Y)
    unitY = AsmMorphism(Y, dY, range(len(Y)))
    dfmap = AsmMorphism(dX, dY, f.map)
    P, q0, q1 = pullback(unitY, dfmap)
    comparison = {}
    for k in range(len(P)):
        comparison[(q0.map[k], q1.map[k])] = k
    cmp = AsmMorphism(X, P, [comparison[(f.map[i], i)] for i in range(len(X))])
    return is_iso(cmp)


def separator_assembly(A):
    """``(S, id_S)``: the separator as an assembly over itself."""
    S = sorted(A.separator.members)
    return Assembly(A, [A.lattice.name(s) for s in S], S, name="S")


def generic_object_check(corpus):
    """Every assembly pre-embeds into the separator via its own existence predicate."""
    out = Report("generic-object", "pass")
    for X in corpus:
        G = separator_assembly(X.A)
        f = AsmMorphism(X, G, [G.pos[X.A.lattice.name(e)] for e in X.exist])
        ok = f.tracked and is_pre_embedding(f)
        out.details[repr(X)] = ok
        if not ok:
            out.verdict = "fail"
            out.violations.append(f"{X!r} does not pre-embed into the separator")
    return out


def is_projective(X, bound, values=None):
    """Bounded projectivity: every regular epi onto ``X`` from an assembly
    of at most ``bound`` points has a tracked section.

    Returns a :class:`Report` whose witness on failure is the epi.
    """
    A = X.A
    checked = 0
    for size in range(1, bound + 1):
        for Z in enumerate_assemblies(A, size, values):
            for e in all_maps(Z, X):
                if not is_regular_epi(e):
                    continue
                checked += 1
                if not any(s.then(e).map == tuple(range(len(X))) for s in all_maps(X, Z)):
                    return Report("projective", "fail", bound=bound,
                                  witnesses=[{"cover": repr(Z), "map": e.as_dict()}],
                                  details={"epis_checked": checked})
    return Report("projective", "pass", bound=bound, details={"epis_checked": checked})


# -- orthogonality ----------------------------------------------------------

def diagonal_fillers(e, m, u, v):
    """All set maps ``d`` with ``d . e = u`` and ``m . d = v``, tagged with trackedness."""
    B, C = e.target, m.source
    out = []
    for cand in itertools.product(range(len(C)), repeat=len(B)):
        d = AsmMorphism(B, C, cand)
        if e.then(d).map == u.map and d.then(m).map == v.map:
            out.append(d)
    return out
