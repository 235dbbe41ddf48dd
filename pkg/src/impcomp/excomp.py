"""Quivers and pseudo-groupoids in assemblies, homotopies, and hom-sets of
the exact completion as homotopy classes of quiver morphisms."""
import itertools

from .algebra import Valuation
from .assemblies import (
    Assembly, AsmMorphism, all_maps, identity, product, pullback, require_tracked,
)
from .errors import StructuralError
from .report import Report, verdict


class Quiver:
    """Vertices ``X0``, edges ``X1`` and tracked source and target maps."""

    def __init__(self, X0, X1, s, t):
        for name, m in (("s", s), ("t", t)):
            if m.source != X1 or m.target != X0:
                raise StructuralError(f"{name} must be a map from the edges to the vertices")
        self.X0, self.X1, self.s, self.t = X0, X1, s, t

    def edges(self, x, y):
        """Edge positions of ``X(x, y)``; ``x`` and ``y`` are vertex positions."""
        return [e for e in range(len(self.X1)) if self.s.map[e] == x and self.t.map[e] == y]


class PseudoGroupoid(Quiver):
    """A quiver with reflexivity ``rho``, symmetry ``sigma`` and composition ``tau``.

    ``tau`` is given on the carrier of the composable pairs, the pullback of
    ``t`` along ``s``, whose points are labelled ``(e,e')``.
    """

    def __init__(self, X0, X1, s, t, rho, sigma, tau, name=None):
        super().__init__(X0, X1, s, t)
        self.name = name
        self.comp, self.p0, self.p1 = pullback(t, s)
        if isinstance(rho, (dict, list, tuple)):
            rho = AsmMorphism(X0, X1, rho)
        if isinstance(sigma, (dict, list, tuple)):
            sigma = AsmMorphism(X1, X1, sigma)
        if isinstance(tau, (dict, list, tuple)):
            tau = AsmMorphism(self.comp, X1, tau)
        self.rho, self.sigma, self.tau = rho, sigma, tau
        if rho.source != X0 or rho.target != X1 or sigma.source != X1 or sigma.target != X1:
            raise StructuralError("rho or sigma has the wrong endpoints")
        if tau.source != self.comp or tau.target != X1:
            raise StructuralError("tau must be defined on the composable pairs")

    def pair(self, e1, e2):
        """Position of the composable pair ``(e1, e2)`` in ``comp``."""
        for k in range(len(self.comp)):
            if self.p0.map[k] == e1 and self.p1.map[k] == e2:
                return k
        raise StructuralError("edges are not composable")

    def __repr__(self):
        return f"PseudoGroupoid({self.name or ''} {len(self.X0)} vertices, {len(self.X1)} edges)"


def validate_pseudo_groupoid(G):
    """The six structural equations and the trackedness of every structure map."""
    ident = tuple(range(len(G.X0)))
    s, t = G.s.map, G.t.map
    eqs = {
        "s.rho = id": tuple(s[e] for e in G.rho.map) == ident,
        "t.rho = id": tuple(t[e] for e in G.rho.map) == ident,
        "s.sigma = t": tuple(s[e] for e in G.sigma.map) == t,
        "t.sigma = s": tuple(t[e] for e in G.sigma.map) == s,
        "s.tau = s.p0": tuple(s[e] for e in G.tau.map) == tuple(s[e] for e in G.p0.map),
        "t.tau = t.p1": tuple(t[e] for e in G.tau.map) == tuple(t[e] for e in G.p1.map),
    }
    tracked = {f"{n} tracked": m.tracked for n, m in
               (("s", G.s), ("t", G.t), ("rho", G.rho), ("sigma", G.sigma), ("tau", G.tau))}
    checks = {**eqs, **tracked}
    return Report("groupoid", verdict(all(checks.values())),
                  violations=[k + " fails" for k, v in checks.items() if not v], details=checks)


def discrete(X, name=None):
    """``id, id: X => X`` with every structure map the identity."""
    i = identity(X)
    comp, p0, _ = pullback(i, i)
    return PseudoGroupoid(X, X, i, i, i, i, AsmMorphism(comp, X, p0.map), name=name or X.name)


def codiscrete(X, name=None):
    """Edges ``X x X`` with encoded-meet existence; ``rho`` the diagonal,
    ``sigma`` the swap and ``tau`` the outer pair."""
    P, p0, p1 = product(X, X)
    n = len(X)
    pos = lambda i, j: i * n + j  # noqa: E731  (product order)
    rho = [pos(i, i) for i in range(n)]
    sigma = [pos(p1.map[e], p0.map[e]) for e in range(len(P))]
    comp, c0, c1 = pullback(p1, p0)
    tau = [pos(p0.map[c0.map[k]], p1.map[c1.map[k]]) for k in range(len(comp))]
    return PseudoGroupoid(X, P, p0, p1, rho, sigma, tau, name=name)


def first_structure(X0, X1, s, t, name=None):
    """The lexicographically first tracked ``rho, sigma, tau`` on a quiver, or None."""
    Q = Quiver(X0, X1, s, t)
    rho_opts = [Q.edges(x, x) for x in range(len(X0))]
    sig_opts = [Q.edges(t.map[e], s.map[e]) for e in range(len(X1))]
    comp, c0, c1 = pullback(t, s)
    tau_opts = [Q.edges(s.map[c0.map[k]], t.map[c1.map[k]]) for k in range(len(comp))]
    if any(not o for o in rho_opts + sig_opts + tau_opts):
        return None
    picks = []
    for opts, src in ((rho_opts, X0), (sig_opts, X1), (tau_opts, comp)):
        found = None
        for cand in itertools.product(*opts):
            m = AsmMorphism(src, X1, cand)
            if m.tracked:
                found = m
                break
        if found is None:
            return None
        picks.append(found)
    return PseudoGroupoid(X0, X1, s, t, *picks, name=name)


class QuiverMorphism:
    def __init__(self, X, Y, f0, f1):
        if isinstance(f0, (list, tuple, dict)):
            f0 = AsmMorphism(X.X0, Y.X0, f0)
        if isinstance(f1, (list, tuple, dict)):
            f1 = AsmMorphism(X.X1, Y.X1, f1)
        require_tracked(f0)
        require_tracked(f1)
        for a, b in ((X.s, Y.s), (X.t, Y.t)):
            if tuple(f0.map[v] for v in a.map) != tuple(b.map[e] for e in f1.map):
                raise StructuralError("naturality square fails")
        self.X, self.Y, self.f0, self.f1 = X, Y, f0, f1

    def then(self, g):
        return QuiverMorphism(self.X, g.Y, self.f0.then(g.f0), self.f1.then(g.f1))

    def key(self):
        return (self.f0.map, self.f1.map)

    def __eq__(self, other):
        return isinstance(other, QuiverMorphism) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"QuiverMorphism({self.f0.as_dict()}, {self.f1.as_dict()})"


def quiver_identity(X):
    return QuiverMorphism(X, X, identity(X.X0), identity(X.X1))


def quiver_morphisms(X, Y):
    """All quiver morphisms ``X -> Y`` with tracked components."""
    for f0 in all_maps(X.X0, Y.X0):
        opts = [Y.edges(f0.map[X.s.map[e]], f0.map[X.t.map[e]]) for e in range(len(X.X1))]
        for cand in itertools.product(*opts):
            f1 = AsmMorphism(X.X1, Y.X1, cand)
            if f1.tracked:
                yield QuiverMorphism(X, Y, f0, f1)


# -- homotopies -------------------------------------------------------------

def _is_homotopy(h, f, g):
    Y = f.Y
    return (h.tracked and tuple(Y.s.map[e] for e in h.map) == f.f0.map
            and tuple(Y.t.map[e] for e in h.map) == g.f0.map)


def is_homotopic(f, g):
    """A tracked ``h: X0 -> Y1`` with ``s.h = f0`` and ``t.h = g0``, or None."""
    Y = f.Y
    opts = [Y.edges(a, b) for a, b in zip(f.f0.map, g.f0.map)]
    for cand in itertools.product(*opts):
        h = AsmMorphism(f.X.X0, Y.X1, cand)
        if h.tracked:
            return h
    return None


def refl_homotopy(f):
    return f.f0.then(f.Y.rho)


def sym_homotopy(h, Y):
    return h.then(Y.sigma)


def trans_homotopy(h1, h2, Y):
    """``x -> tau(h1 x, h2 x)``."""
    pairing = AsmMorphism(h1.source, Y.comp, [Y.pair(a, b) for a, b in zip(h1.map, h2.map)])
    return pairing.then(Y.tau)


def ex_hom(X, Y):
    """Homotopy classes of quiver morphisms ``X -> Y``, as lists of representatives."""
    classes = []
    for f in quiver_morphisms(X, Y):
        for c in classes:
            if is_homotopic(c[0], f) is not None:
                c.append(f)
                break
        else:
            classes.append([f])
    return classes


def check_homotopy_equivalence(X, Y):
    """Homotopy between parallel morphisms ``X -> Y`` is an equivalence, with
    the witnesses built from ``rho``, ``sigma`` and ``tau`` re-verified."""
    ms = list(quiver_morphisms(X, Y))
    rel = {}
    problems = []
    for f in ms:
        if not _is_homotopy(refl_homotopy(f), f, f):
            problems.append(f"rho does not give a homotopy {f} ~ {f}")
    for f, g in itertools.product(ms, repeat=2):
        rel[f, g] = is_homotopic(f, g)
    for (f, g), h in rel.items():
        if h is None:
            continue
        if not _is_homotopy(sym_homotopy(h, Y), g, f):
            problems.append(f"sigma does not reverse the homotopy {f} ~ {g}")
        for k in ms:
            h2 = rel[g, k]
            if h2 is not None and not _is_homotopy(trans_homotopy(h, h2, Y), f, k):
                problems.append(f"tau does not compose {f} ~ {g} ~ {k}")
    return Report("homotopy", verdict(not problems), violations=problems[:10],
                  details={"morphisms": len(ms), "homotopic_pairs": sum(h is not None for h in rel.values())})


def compose_classes(c1, c2):
    """Composite class of ``c1: X -> Y`` and ``c2: Y -> Z``; checks every pair of representatives agree."""
    reps = [f.then(g) for f in c1 for g in c2]
    base = reps[0]
    for r in reps[1:]:
        if is_homotopic(base, r) is None:
            raise StructuralError("composition of homotopy classes is not well defined")
    return base


def check_composition(X, Y, Z, W=None):
    """Composition is well defined on classes and, given ``W``, associative."""
    problems = []
    hxy, hyz = ex_hom(X, Y), ex_hom(Y, Z)
    triples = 0
    for c1 in hxy:
        for c2 in hyz:
            try:
                compose_classes(c1, c2)
            except StructuralError as e:
                problems.append(str(e))
    if W is not None:
        for c1 in hxy:
            for c2 in hyz:
                for c3 in ex_hom(Z, W):
                    triples += 1
                    a = c1[0].then(c2[0]).then(c3[-1])
                    b = c1[-1].then(c2[-1].then(c3[0]))
                    if is_homotopic(a, b) is None:
                        problems.append("composition is not associative up to homotopy")
    return Report("ex-composition", verdict(not problems), violations=problems[:10],
                  details={"triples": triples})


# -- valuations -------------------------------------------------------------

def induced_nu(X):
    """``(x, x') -> {e(edge) | edge in X(x, x')}`` as a partial valuation on vertex pairs."""
    V = X.X0.carrier
    index, values = [], []
    for i, j in itertools.product(range(len(V)), repeat=2):
        index.append((V[i], V[j]))
        values.append({X.X1.exist[e] for e in X.edges(i, j)})
    return Valuation(index, values, partial=True)


# -- a small corpus ---------------------------------------------------------

def corpus_groupoids(A, values=None, max_vertices=2, max_edges=3):
    """Pseudo-groupoids with at most the given numbers of vertices and edges.

    Existence values are drawn from ``values`` (default: top only); each
    quiver carries the first admissible structure.
    """
    vals = [A.top] if values is None else sorted(A.lattice.idx(v) for v in values)
    out = []
    for nv in range(1, max_vertices + 1):
        for ne in range(nv, max_edges + 1):
            for ends in itertools.product(itertools.product(range(nv), repeat=2), repeat=ne):
                if list(ends) != sorted(ends):
                    continue
                for ev in itertools.product(vals, repeat=nv):
                    X0 = Assembly(A, [f"v{i}" for i in range(nv)], ev)
                    for ee in itertools.product(vals, repeat=ne):
                        X1 = Assembly(A, [f"e{i}" for i in range(ne)], ee)
                        s = AsmMorphism(X1, X0, [a for a, _ in ends])
                        t = AsmMorphism(X1, X0, [b for _, b in ends])
                        if not (s.tracked and t.tracked):
                            continue
                        G = first_structure(X0, X1, s, t)
                        if G is not None:
                            out.append(G)
    return out
