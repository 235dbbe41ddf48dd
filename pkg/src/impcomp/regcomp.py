"""The regular completion of ``Asm_M`` and the decision procedures around it.

Objects are tracked maps between M-assemblies; a morphism ``f -> f'`` is a
class of tracked maps ``l`` modulo ``f' . l``.  The functor ``U`` sends an
object to the image of its map.

Valuation searches are exact.  For each index the candidate subsets
``V`` of ``M`` are reduced to the Pareto-maximal pairs
``(u_x -> exists V, exists V -> u_x)``; a depth-first search over the
running meets then prunes as soon as a meet leaves the separator, which is
sound because separators are upward closed.
"""
from dataclasses import dataclass, field
import itertools
import logging

from .algebra import Family, Valuation, e_exists_valuation, fam_entails, fam_iso
from .assemblies import (
    Assembly, AsmMorphism, all_maps, enumerate_assemblies, identity, image_factorization,
    isomorphisms, require_tracked, valuation_cover,
)
from .errors import StructuralError, Undecided
from .report import Report, verdict

log = logging.getLogger(__name__)

DENSITY_CAP = (6, 4)  # |S|, |M| for the exhaustive strategy


# -- objects and morphisms --------------------------------------------------

class RegObject:
    def __init__(self, f, M=None):
        require_tracked(f)
        if M is not None and not (f.source.is_M(M) and f.target.is_M(M)):
            raise StructuralError("source and target must be M-assemblies")
        self.f = f
        self.M = M

    @property
    def source(self):
        return self.f.source

    def kernel(self):
        """The partition of the source induced by ``f``, as a canonical tuple."""
        seen = {}
        return tuple(seen.setdefault(y, len(seen)) for y in self.f.map)

    def __repr__(self):
        return f"RegObject({self.f!r})"


class RegMorphism:
    """A class ``[l]``; ``canonical`` is ``f' . l`` as a position tuple."""

    def __init__(self, source, target, l):
        if l.source != source.source or l.target != target.source:
            raise StructuralError("representative has the wrong endpoints")
        require_tracked(l)
        f, g = source.f.map, target.f.map
        for i, j in itertools.combinations(range(len(f)), 2):
            if f[i] == f[j] and g[l.map[i]] != g[l.map[j]]:
                raise StructuralError(
                    f"representative does not coequalise the kernel pair at "
                    f"({l.source.carrier[i]}, {l.source.carrier[j]})")
        self.source = source
        self.target = target
        self.l = l
        self.canonical = tuple(g[j] for j in l.map)

    def then(self, other):
        return RegMorphism(self.source, other.target, self.l.then(other.l))

    def __eq__(self, other):
        return (isinstance(other, RegMorphism) and self.source is other.source
                and self.target is other.target and self.canonical == other.canonical)

    def __hash__(self):
        return hash(self.canonical)

    def __repr__(self):
        return f"RegMorphism([{self.l.as_dict()}])"


def reg_identity(F):
    return RegMorphism(F, F, identity(F.source))


def reg_hom(F, G):
    """Classes of morphisms ``F -> G``; the representative is the first in lexicographic order."""
    classes = {}
    for l in all_maps(F.source, G.source):
        try:
            m = RegMorphism(F, G, l)
        except StructuralError:
            continue
        classes.setdefault(m.canonical, m)
    return list(classes.values())


def y_object(X):
    """The insertion ``Asm_M -> completion`` on objects: ``id_X``."""
    return RegObject(identity(X))


def y_morphism(f):
    return RegMorphism(y_object(f.source), y_object(f.target), f)


def U_object(F):
    return image_factorization(F.f).image


def U_morphism(m):
    """``[x]_f -> [l x]_f'`` between the images."""
    fa = image_factorization(m.source.f)
    fb = image_factorization(m.target.f)
    return AsmMorphism(fa.image, fb.image, [fb.fbar.map[m.l.map[c[0]]] for c in fa.classes])


# -- algebraicity and density -----------------------------------------------

def _elements(M, A):
    return sorted({A.lattice.idx(m) for m in M})


def _require_M(M, A):
    M = _elements(M, A)
    if not M:
        raise StructuralError("M is empty")
    bad = [A.name_of(m) for m in M if not A.in_sep(m)]
    if bad:
        raise StructuralError(f"M is not contained in the separator: {bad}")
    return M


def is_algebraic(M, A):
    """Closure of ``M`` under the encoded meet."""
    M = _elements(M, A)
    Ms = set(M)
    for a in M:
        for b in M:
            c = A.emeet(a, b)
            if c not in Ms:
                return Report("algebraic", "fail",
                              witnesses=[{"a": A.name_of(a), "b": A.name_of(b), "meet": A.name_of(c)}])
    return Report("algebraic", "pass")


def nonempty_subsets(M):
    M = sorted(M)
    return [frozenset(c) for k in range(1, len(M) + 1) for c in itertools.combinations(M, k)]


def _pareto(cands, A):
    """Drop candidates dominated in both coordinates; keeps the first of equal pairs."""
    leq = A.lattice.leq
    out = []
    for i, (a, b, V) in enumerate(cands):
        dominated = False
        for j, (c, d, _) in enumerate(cands):
            if (c, d) == (a, b):
                if j < i:
                    dominated = True
                    break
            elif leq[a, c] and leq[b, d]:
                dominated = True
                break
        if not dominated:
            out.append((a, b, V))
    return out


def find_valuation(u, M, A):
    """A valuation ``nu`` with ``u ~ exists nu``, or None.  Exact.

    Returns ``(nu, nodes)`` where ``nodes`` counts search nodes.
    """
    subsets = nonempty_subsets(M)
    L = A.lattice
    imp = A.imp
    mask = A.separator.mask
    options = []
    for x in u.values:
        cands = []
        for V in subsets:
            e = A.exists(V)
            cands.append((int(imp[x, e]), int(imp[e, x]), V))
        options.append(_pareto(cands, A))
    choice = [None] * len(options)
    nodes = 0

    def dfs(k, fwd, bwd):
        nonlocal nodes
        nodes += 1
        if k == len(options):
            return True
        for a, b, V in options[k]:
            f2, b2 = L.meet_table[fwd, a], L.meet_table[bwd, b]
            if mask[f2] and mask[b2]:
                choice[k] = V
                if dfs(k + 1, f2, b2):
                    return True
        return False

    if dfs(0, L.top, L.top):
        return Valuation(u.index, choice), nodes
    return None, nodes


def identity_family(A):
    S = sorted(A.separator.members)
    return Family(tuple(A.name_of(s) for s in S), S)


def canonical_valuation(M, A):
    """``s -> {m in M | m <= s}``; raises :class:`Undecided` if some value is empty."""
    M = _elements(M, A)
    u = identity_family(A)
    vals = []
    for x, s in zip(u.index, u.values):
        V = {m for m in M if A.le(m, s)}
        if not V:
            raise Undecided(f"canonical valuation is empty at {x}",
                            advice="try the exhaustive strategy")
        vals.append(V)
    return Valuation(u.index, vals)


def _valuation_json(nu, A):
    return {str(x): sorted(A.name_of(m) for m in v) for x, v in zip(nu.index, nu.values)}


def check_valuation(nu, A, u=None):
    """``(iso?, forward witness, backward witness)`` for ``u ~ exists nu``."""
    u = identity_family(A) if u is None else u
    ex = e_exists_valuation(nu, A)
    ok1, w1 = fam_entails(u, ex, A)
    ok2, w2 = fam_entails(ex, u, A)
    return ok1 and ok2, w1, w2


def is_dense(M, A, strategy="auto", valuation=None, cap=DENSITY_CAP):
    """Decide density of ``M``.

    ``strategy`` is ``canonical``, ``exhaustive``, ``user`` (needs
    ``valuation``) or ``auto`` (canonical, then exhaustive).  The
    exhaustive search refuses inputs above ``cap`` unless ``cap`` is None.
    """
    Ms = _require_M(M, A)
    u = identity_family(A)
    if strategy == "user":
        if valuation is None:
            raise StructuralError("the user strategy needs a valuation")
        if not valuation.within(Ms):
            raise StructuralError("valuation leaves M")
        ok, w1, w2 = check_valuation(valuation, A)
        return Report("density", verdict(ok), witnesses=[_valuation_json(valuation, A)] if ok else [],
                      violations=[] if ok else ["supplied valuation is not isomorphic to the identity"],
                      details={"strategy": "user", "forward": A.name_of(w1), "backward": A.name_of(w2)})
    if strategy in ("canonical", "auto"):
        try:
            nu = canonical_valuation(Ms, A)
            ok, w1, w2 = check_valuation(nu, A)
        except Undecided:
            if strategy == "canonical":
                raise
            ok = False
        if ok:
            return Report("density", "pass", witnesses=[_valuation_json(nu, A)],
                          details={"strategy": "canonical", "forward": A.name_of(w1), "backward": A.name_of(w2)})
        if strategy == "canonical":
            return Report("density", "undecided",
                          violations=["canonical valuation is not isomorphic to the identity"],
                          details={"strategy": "canonical", "advice": "try the exhaustive strategy"})
    elif strategy != "exhaustive":
        raise StructuralError(f"unknown density strategy {strategy!r}")
    if cap is not None and (len(A.separator) > cap[0] or len(Ms) > cap[1]):
        raise Undecided(f"exhaustive density search capped at |S| <= {cap[0]}, |M| <= {cap[1]}",
                        advice="raise the cap or supply a valuation")
    nu, nodes = find_valuation(u, Ms, A)
    if nu is None:
        return Report("density", "fail", violations=["no valuation is isomorphic to the identity"],
                      details={"strategy": "exhaustive", "nodes": nodes})
    _, w1, w2 = check_valuation(nu, A)
    return Report("density", "pass", witnesses=[_valuation_json(nu, A)],
                  details={"strategy": "exhaustive", "nodes": nodes,
                           "forward": A.name_of(w1), "backward": A.name_of(w2)})


def families(A, size, values=None):
    """Separator-valued families on ``x0..x{size-1}``, one per multiset of values.

    Valuation existence is invariant under permuting the index, so
    multisets suffice.
    """
    values = sorted(A.separator.members) if values is None else sorted(values)
    index = tuple(f"x{i}" for i in range(size))
    for vals in itertools.combinations_with_replacement(values, size):
        yield Family(index, vals)


def per_family_density(M, A, bound=3):
    """Every separator-valued family over at most ``bound`` indices has a valuation."""
    Ms = _require_M(M, A)
    checked = 0
    for size in range(1, bound + 1):
        for u in families(A, size):
            checked += 1
            nu, _ = find_valuation(u, Ms, A)
            if nu is None:
                return Report("per-family-density", "fail", bound=bound,
                              witnesses=[{"family": dict(zip(u.index, A.lattice.names(u.values)))}],
                              details={"families": checked})
    return Report("per-family-density", "pass", bound=bound, details={"families": checked})


def valuations_on(index, M):
    subsets = nonempty_subsets(M)
    for vals in itertools.product(subsets, repeat=len(index)):
        yield Valuation(index, vals)


def essential_surjectivity(M, A, bound=3):
    """Every separator-valued assembly on at most ``bound`` points is isomorphic
    to ``U`` of some object of the completion.

    The images of maps between M-assemblies are, up to isomorphism, the
    assemblies ``(Z, exists nu)``; each candidate ``nu`` is realised by its
    cover ``g_nu`` and the image is computed through ``U``.
    """
    Ms = _require_M(M, A)
    m0 = Ms[0]
    checked = 0
    for size in range(1, bound + 1):
        for X in enumerate_assemblies(A, size):
            checked += 1
            hit = None
            for nu in valuations_on(X.carrier, Ms):
                cover = valuation_cover(nu, A, m0)
                img = U_object(RegObject(cover.g))
                iso = next(isomorphisms(X, img), None)
                if iso is not None:
                    hit = (nu, iso)
                    break
            if hit is None:
                return Report("essential-surjectivity", "fail", bound=bound,
                              witnesses=[{"assembly": repr(X)}], details={"assemblies": checked})
    return Report("essential-surjectivity", "pass", bound=bound, details={"assemblies": checked})


# -- compactness and lifting ------------------------------------------------

def is_compact(M, A, bound=2):
    """Bounded compactness: for ``u`` in ``M^X`` and ``u <= exists nu`` there is
    ``b`` in ``prod nu(x)`` with ``u <= b <= exists nu``, for ``|X| <= bound``."""
    Ms = _require_M(M, A)
    alg = is_algebraic(Ms, A).ok
    checked = 0
    for size in range(1, bound + 1):
        index = tuple(f"x{i}" for i in range(size))
        for vals in itertools.product(Ms, repeat=size):
            u = Family(index, vals)
            for nu in valuations_on(index, Ms):
                ex = e_exists_valuation(nu, A)
                if not fam_entails(u, ex, A)[0]:
                    continue
                checked += 1
                found = False
                for b in itertools.product(*[sorted(v) for v in nu.values]):
                    fb = Family(index, b)
                    if fam_entails(u, fb, A)[0] and fam_entails(fb, ex, A)[0]:
                        found = True
                        break
                if not found:
                    return Report("compactness", "fail", bound=bound,
                                  witnesses=[{"u": dict(zip(index, A.lattice.names(vals))),
                                              "nu": _valuation_json(nu, A)}],
                                  details={"instances": checked, "algebraic": alg})
    return Report("compactness", "pass", bound=bound, details={"instances": checked, "algebraic": alg})


def lift_search(g, k):
    """A tracked ``l: X -> source(g)`` with ``gbar . l = k``, or None."""
    fac = image_factorization(g)
    if k.target != fac.image:
        raise StructuralError("k must land in the image of g")
    choices = [fac.classes[j] for j in k.map]
    for cand in itertools.product(*choices):
        l = AsmMorphism(k.source, g.source, cand)
        if l.tracked:
            return l
    return None


def lifting_instances(M, A, bound=3):
    """``(g, k)`` pairs: ``g`` between M-assemblies, ``k: X -> Im(g)`` tracked.

    Lifting only depends on ``gbar``, so ``g`` is taken up to its source and
    kernel partition.
    """
    Ms = _require_M(M, A)
    seen = set()
    for sa in range(1, bound + 1):
        for Asrc in enumerate_assemblies(A, sa, Ms, prefix="a"):
            for sb in range(1, bound + 1):
                for B in enumerate_assemblies(A, sb, Ms, prefix="b"):
                    for g in all_maps(Asrc, B):
                        key = (Asrc.key(), RegObject(g).kernel())
                        if key in seen:
                            continue
                        seen.add(key)
                        Im = image_factorization(g).image
                        for sx in range(1, bound + 1):
                            for X in enumerate_assemblies(A, sx, Ms, prefix="x"):
                                for k in all_maps(X, Im):
                                    yield g, k


def lifting_report(M, A, bound=3):
    checked = 0
    for g, k in lifting_instances(M, A, bound):
        checked += 1
        if lift_search(g, k) is None:
            return Report("lifting", "fail", bound=bound,
                          witnesses=[{"g": g.as_dict(), "k": k.as_dict(), "X": repr(k.source)}],
                          details={"instances": checked})
    return Report("lifting", "pass", bound=bound, details={"instances": checked})


def is_generator(M, A, bound=2):
    parts = {"algebraic": is_algebraic(M, A), "dense": is_dense(M, A), "compact": is_compact(M, A, bound)}
    ok = all(r.ok for r in parts.values())
    return Report("generator", verdict(ok), bound=bound,
                  violations=[f"not {k}" for k, r in parts.items() if not r.ok],
                  details={k: r.to_dict() for k, r in parts.items()})


# -- the comparison functor -------------------------------------------------

def reg_objects(M, A, bound=2):
    """Objects over M-assemblies on at most ``bound`` points, one per (source, kernel)."""
    Ms = _elements(M, A)
    seen = set()
    out = []
    for sx in range(1, bound + 1):
        for X in enumerate_assemblies(A, sx, Ms, prefix="a"):
            for sy in range(1, bound + 1):
                for Y in enumerate_assemblies(A, sy, Ms, prefix="b"):
                    for f in all_maps(X, Y):
                        F = RegObject(f, Ms)
                        key = (X.key(), F.kernel())
                        if key not in seen:
                            seen.add(key)
                            out.append(F)
    return out


@dataclass
class _Tally:
    pairs: int = 0
    problems: list = field(default_factory=list)


def check_U_functor(objs):
    """``U`` preserves identities and composites on the given objects."""
    t = _Tally()
    for F in objs:
        if U_morphism(reg_identity(F)) != identity(U_object(F)):
            t.problems.append(f"U does not preserve the identity of {F!r}")
    for F, G, H in itertools.product(objs[:6], repeat=3):
        for m1 in reg_hom(F, G):
            for m2 in reg_hom(G, H):
                t.pairs += 1
                if U_morphism(m1.then(m2)) != U_morphism(m1).then(U_morphism(m2)):
                    t.problems.append(f"U does not preserve {m1!r} then {m2!r}")
    return t


def check_U_equivalence(M, A, bound=3, hom_bound=2):
    """Bounded check that ``U`` is an equivalence.

    Essential surjectivity is checked on assemblies of at most ``bound``
    points; fullness and faithfulness on objects over at most
    ``hom_bound`` points.
    """
    Ms = _require_M(M, A)
    ess = essential_surjectivity(Ms, A, bound)
    objs = reg_objects(Ms, A, hom_bound)
    not_full, not_faithful, homs = [], [], 0
    for F, G in itertools.product(objs, repeat=2):
        ms = reg_hom(F, G)
        images = [U_morphism(m) for m in ms]
        if len(set(images)) != len(images):
            not_faithful.append((F, G))
        hit = set(images)
        for h in all_maps(U_object(F), U_object(G)):
            homs += 1
            if h not in hit:
                not_full.append((F, G, h.as_dict()))
    functor = check_U_functor(objs)
    violations = list(ess.violations)
    if not ess.ok:
        violations.append(f"not essentially surjective: {ess.witnesses}")
    violations += [f"not full at {F!r} -> {G!r}: {h}" for F, G, h in not_full[:5]]
    violations += [f"not faithful at {F!r} -> {G!r}" for F, G in not_faithful[:5]]
    violations += functor.problems[:5]
    ok = ess.ok and not not_full and not not_faithful and not functor.problems
    return Report("reglex", verdict(ok), bound=bound, violations=violations,
                  details={"essential_surjectivity": ess.to_dict(), "objects": len(objs),
                           "hom_bound": hom_bound, "maps_checked": homs,
                           "composites_checked": functor.pairs,
                           "dense": is_dense(Ms, A).verdict})
