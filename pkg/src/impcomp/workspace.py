"""The plain-text workspace format.

A workspace is a sequence of sections::

    [algebra H3]
    elements: 0 h 1
    order: 0 <= h, h <= 1
    imp: heyting
    separator: generators 1

    [assembly X over H3]
    carrier: a b
    exist: a = 1, b = 1

A field starts with ``key:``; indented lines continue it.  Items are
separated by commas or newlines.  Lines starting with ``#`` outside
``[term]`` sections are comments.  ``emit`` writes the canonical form, which
parses back to an equal workspace.
"""
from dataclasses import dataclass, field
import re

from .algebra import ImplicativeAlgebra, Separator, validate_separator
from .assemblies import Assembly, AsmMorphism
from .errors import ImpcompError, ParseError, StructuralError
from .excomp import PseudoGroupoid, validate_pseudo_groupoid
from .order import ImplicativeStructure, Lattice, derive_heyting, validate_implicative_structure
from .seta import FunctionalRelation, ImplicativeSet, validate_frel, validate_implicative_set
from .terms import parse as parse_term, pretty


class WorkspaceError(ImpcompError):
    """Loading failed; ``problems`` lists every itemised reason."""

    def __init__(self, problems):
        super().__init__("; ".join(problems))
        self.problems = problems


_HEADER = re.compile(r"^\[(?P<kind>[a-z-]+)\s+(?P<name>[^\s\]]+)(?P<rest>[^\]]*)\]\s*$")
_KINDS = ("algebra", "subset", "assembly", "morphism", "groupoid", "implicative-set", "relation", "term")


@dataclass
class Section:
    kind: str
    name: str
    rest: str
    fields: dict
    line: int
    source: str
    text: str = ""


@dataclass
class Workspace:
    algebras: dict = field(default_factory=dict)
    subsets: dict = field(default_factory=dict)       # name -> (algebra name, element ids)
    assemblies: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    groupoids: dict = field(default_factory=dict)
    isets: dict = field(default_factory=dict)
    relations: dict = field(default_factory=dict)
    terms: dict = field(default_factory=dict)
    owner: dict = field(default_factory=dict)         # object name -> algebra name
    heyting: set = field(default_factory=set)         # algebras declared with imp: heyting

    def algebra_of(self, name):
        return self.algebras[self.owner[name]]

    def __eq__(self, other):
        return isinstance(other, Workspace) and emit(self) == emit(other)


# -- reading ----------------------------------------------------------------

def _sections(text, source):
    out = []
    cur = None
    key = None
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.rstrip()
        m = _HEADER.match(line.strip()) if line.startswith("[") else None
        if m:
            if m["kind"] not in _KINDS:
                raise ParseError(f"unknown section kind {m['kind']!r}", no, 1, source)
            cur = Section(m["kind"], m["name"], m["rest"].strip(), {}, no, source)
            out.append(cur)
            key = None
            continue
        if cur is None:
            if line.strip() and not line.lstrip().startswith("#"):
                raise ParseError("content before the first section", no, 1, source)
            continue
        if cur.kind == "term":
            cur.text += raw + "\n"
            continue
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        if line[0].isspace():
            if key is None:
                raise ParseError("continuation line without a field", no, 1, source)
            cur.fields[key] += "\n" + line.strip()
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", no, 1, source)
        key, value = line.split(":", 1)
        key = key.strip()
        if key in cur.fields:
            raise ParseError(f"duplicate field {key!r}", no, 1, source)
        cur.fields[key] = value.strip()
    return out


def _items(value):
    return [p.strip() for p in re.split(r"[,\n]", value or "") if p.strip()]


def _need(sec, key):
    if key not in sec.fields:
        raise ParseError(f"[{sec.kind} {sec.name}] is missing '{key}:'", sec.line, 1, sec.source)
    return sec.fields[key]


def _kv(item, sep, sec):
    if sep not in item:
        raise ParseError(f"expected '{sep}' in {item!r}", sec.line, 1, sec.source)
    a, b = item.rsplit(sep, 1)
    return a.strip(), b.strip()


def _pair(text, sec):
    t = text.strip()
    if not (t.startswith("(") and t.endswith(")")) or "," not in t:
        raise ParseError(f"expected a pair '(x,y)', got {text!r}", sec.line, 1, sec.source)
    a, b = t[1:-1].split(",", 1)
    return a.strip(), b.strip()


def _pair_items(value, sec):
    """``(x,y) = v`` items; commas inside parentheses do not split."""
    out = []
    for chunk in re.findall(r"\([^)]*\)\s*=\s*[^,\n]+", value or ""):
        k, v = chunk.rsplit("=", 1)
        out.append((_pair(k, sec), v.strip()))
    return out


def _arrow_map(value, sec):
    """``x -> y`` items, or ``(e,e') -> y`` for composition tables."""
    out = {}
    for chunk in re.findall(r"(\([^)]*\)|[^\s,()]+)\s*->\s*([^\s,]+)", value or ""):
        out[chunk[0].strip()] = chunk[1].strip()
    return out


def parse_workspace(paths=(), texts=(), validate=True):
    """Load sections from files and/or strings; cross references must resolve."""
    sections = []
    for p in paths:
        with open(p, encoding="utf-8") as fh:
            sections += _sections(fh.read(), str(p))
    for i, t in enumerate(texts):
        sections += _sections(t, f"<text{i}>")
    ws = Workspace()
    problems = []
    names = set()
    for sec in sections:
        if sec.name in names:
            problems.append(f"{sec.source}:{sec.line}: duplicate name {sec.name!r}")
            continue
        names.add(sec.name)
        try:
            _load(ws, sec, validate)
        except (ParseError, StructuralError, KeyError) as e:
            msg = str(e) if not isinstance(e, KeyError) else f"unknown reference {e}"
            problems.append(f"{sec.source}:{sec.line}: [{sec.kind} {sec.name}] {msg}")
    if problems:
        raise WorkspaceError(problems)
    return ws


def _ref(table, name, what, sec):
    if name not in table:
        raise StructuralError(f"unknown {what} {name!r}")
    return table[name]


def _load(ws, sec, validate):
    k, f = sec.kind, sec.fields
    if k == "algebra":
        elems = _need(sec, "elements").split()
        order = [_kv(i, "<=", sec) for i in _items(f.get("order", ""))]
        L = Lattice(elems, order)
        imp = _need(sec, "imp").strip()
        head = imp.split("\n", 1)
        if head[0].strip() == "heyting":
            H = derive_heyting(L)
            ws.heyting.add(sec.name)
        elif head[0].strip() == "table":
            rows = []
            for item in _items(head[1] if len(head) > 1 else ""):
                lhs, c = _kv(item, "=", sec)
                a, b = _kv(lhs, "->", sec)
                rows.append((a, b, c))
            H = ImplicativeStructure.from_rows(L, rows)
        else:
            raise ParseError("imp must be 'heyting' or 'table'", sec.line, 1, sec.source)
        sep = _need(sec, "separator").split()
        if sep[:1] == ["generators"] and len(sep) > 1:
            A = ImplicativeAlgebra.build(H, sep[1:], sec.name)
        else:
            # a literal member list; validation catches a set that is not upward closed
            members = sep[1:] if sep[:1] == ["members"] else sep
            if not members:
                raise ParseError("empty separator", sec.line, 1, sec.source)
            A = ImplicativeAlgebra(H, Separator(L, members), sec.name)
        if validate:
            bad = validate_implicative_structure(H) + validate_separator(A)
            if bad:
                raise StructuralError("; ".join(f"{v.kind}: {v.message}" for v in bad[:5]))
        ws.algebras[sec.name] = A
    elif k == "subset":
        alg = _of(sec, "of")
        A = _ref(ws.algebras, alg, "algebra", sec)
        members = tuple(sorted(A.lattice.idx(m) for m in _need(sec, "members").split()))
        ws.subsets[sec.name] = (alg, members)
        ws.owner[sec.name] = alg
    elif k == "assembly":
        alg = _of(sec, "over")
        A = _ref(ws.algebras, alg, "algebra", sec)
        carrier = _need(sec, "carrier").split()
        ex = dict(_kv(i, "=", sec) for i in _items(_need(sec, "exist")))
        missing = [x for x in carrier if x not in ex]
        if missing:
            raise StructuralError(f"no existence value for {missing}")
        ws.assemblies[sec.name] = Assembly(A, carrier, [ex[x] for x in carrier], sec.name)
        ws.owner[sec.name] = alg
    elif k == "morphism":
        src, dst = _arrow(sec)
        X = _ref(ws.assemblies, src, "assembly", sec)
        Y = _ref(ws.assemblies, dst, "assembly", sec)
        ws.morphisms[sec.name] = AsmMorphism(X, Y, _arrow_map(_need(sec, "map"), sec), sec.name)
        ws.owner[sec.name] = ws.owner[src]
    elif k == "groupoid":
        V = _ref(ws.assemblies, _need(sec, "vertices").strip(), "assembly", sec)
        E = _ref(ws.assemblies, _need(sec, "edges").strip(), "assembly", sec)
        s = AsmMorphism(E, V, _arrow_map(_need(sec, "s"), sec))
        t = AsmMorphism(E, V, _arrow_map(_need(sec, "t"), sec))
        rho = _arrow_map(_need(sec, "rho"), sec)
        sigma = _arrow_map(_need(sec, "sigma"), sec)
        tau = {"(%s,%s)" % _pair(k, sec): v for k, v in _arrow_map(_need(sec, "tau"), sec).items()}
        G = PseudoGroupoid(V, E, s, t, rho, sigma, tau, name=sec.name)
        if validate:
            r = validate_pseudo_groupoid(G)
            if not r.ok:
                raise StructuralError("invalid pseudo-groupoid: " + ", ".join(r.violations))
        ws.groupoids[sec.name] = G
        ws.owner[sec.name] = ws.owner[V.name]
    elif k == "implicative-set":
        alg = _of(sec, "over")
        A = _ref(ws.algebras, alg, "algebra", sec)
        carrier = _need(sec, "carrier").split()
        eq = {p: v for p, v in _pair_items(f.get("eq", ""), sec)}
        E = ImplicativeSet(A, carrier, eq, sec.name)
        if validate:
            r = validate_implicative_set(E)
            if not r.ok:
                raise StructuralError("invalid implicative set: " + ", ".join(r.violations))
        ws.isets[sec.name] = E
        ws.owner[sec.name] = alg
    elif k == "relation":
        src, dst = _arrow(sec)
        E = _ref(ws.isets, src, "implicative set", sec)
        F = _ref(ws.isets, dst, "implicative set", sec)
        R = FunctionalRelation(E, F, {p: v for p, v in _pair_items(f.get("values", ""), sec)}, sec.name)
        if validate:
            r = validate_frel(R)
            if not r.ok:
                raise StructuralError("invalid functional relation: " + ", ".join(r.violations))
        ws.relations[sec.name] = R
        ws.owner[sec.name] = ws.owner[src]
    elif k == "term":
        try:
            ws.terms[sec.name] = parse_term(sec.text)
        except ParseError as e:
            raise ParseError(f"in term: {e}", sec.line + (e.line or 1), e.column, sec.source) from None


def _of(sec, word):
    parts = sec.rest.split()
    if len(parts) != 2 or parts[0] != word:
        raise ParseError(f"expected '[{sec.kind} {sec.name} {word} ALG]'", sec.line, 1, sec.source)
    return parts[1]


def _arrow(sec):
    m = re.fullmatch(r":\s*(\S+)\s*->\s*(\S+)", sec.rest)
    if not m:
        raise ParseError(f"expected '[{sec.kind} {sec.name} : A -> B]'", sec.line, 1, sec.source)
    return m[1], m[2]


# -- writing ----------------------------------------------------------------

def emit(ws):
    """Canonical text: sections grouped by kind, names sorted, Hasse covers for orders."""
    out = []
    for name in sorted(ws.algebras):
        A = ws.algebras[name]
        L = A.lattice
        covers = [(L.name(a), L.name(b)) for a in range(L.n) for b in range(L.n)
                  if a != b and L.leq[a, b] and not any(c not in (a, b) and L.leq[a, c] and L.leq[c, b]
                                                         for c in range(L.n))]
        lines = [f"[algebra {name}]", "elements: " + " ".join(L.elements)]
        if covers:
            lines.append("order: " + ", ".join(f"{a} <= {b}" for a, b in covers))
        if name in ws.heyting:
            lines.append("imp: heyting")
        else:
            lines.append("imp: table")
            for a in range(L.n):
                lines.append("  " + ", ".join(f"{L.name(a)} -> {L.name(b)} = {L.name(A.imp[a, b])}"
                                              for b in range(L.n)))
        gens = [s for s in sorted(A.separator.members)
                if not any(o != s and L.leq[o, s] for o in A.separator.members)]
        closed = Separator.from_generators(L, gens).members == A.separator.members
        if closed:
            lines.append("separator: generators " + " ".join(L.name(g) for g in gens))
        else:
            lines.append("separator: members " + " ".join(L.name(m) for m in sorted(A.separator.members)))
        out.append("\n".join(lines))
    for name in sorted(ws.subsets):
        alg, members = ws.subsets[name]
        L = ws.algebras[alg].lattice
        out.append(f"[subset {name} of {alg}]\nmembers: " + " ".join(L.name(m) for m in members))
    for name in sorted(ws.assemblies):
        X = ws.assemblies[name]
        L = X.A.lattice
        out.append(f"[assembly {name} over {ws.owner[name]}]\ncarrier: {' '.join(X.carrier)}\nexist: "
                   + ", ".join(f"{x} = {L.name(e)}" for x, e in zip(X.carrier, X.exist)))
    for name in sorted(ws.morphisms):
        f = ws.morphisms[name]
        out.append(f"[morphism {name} : {f.source.name} -> {f.target.name}]\nmap: "
                   + ", ".join(f"{x} -> {y}" for x, y in f.as_dict().items()))
    for name in sorted(ws.groupoids):
        G = ws.groupoids[name]
        arr = lambda m: ", ".join(f"{x} -> {y}" for x, y in m.as_dict().items())  # noqa: E731
        out.append("\n".join([f"[groupoid {name}]", f"vertices: {G.X0.name}", f"edges: {G.X1.name}",
                              f"s: {arr(G.s)}", f"t: {arr(G.t)}", f"rho: {arr(G.rho)}",
                              f"sigma: {arr(G.sigma)}", f"tau: {arr(G.tau)}"]))
    for name in sorted(ws.isets):
        E = ws.isets[name]
        L = E.A.lattice
        vals = ", ".join(f"({x},{y}) = {L.name(E.eq[i, j])}" for i, x in enumerate(E.carrier)
                         for j, y in enumerate(E.carrier))
        out.append(f"[implicative-set {name} over {ws.owner[name]}]\ncarrier: {' '.join(E.carrier)}\neq: {vals}")
    for name in sorted(ws.relations):
        R = ws.relations[name]
        L = R.A.lattice
        vals = ", ".join(f"({x},{y}) = {L.name(R.F[i, j])}" for i, x in enumerate(R.source.carrier)
                         for j, y in enumerate(R.target.carrier))
        out.append(f"[relation {name} : {R.source.name} -> {R.target.name}]\nvalues: {vals}")
    for name in sorted(ws.terms):
        out.append(f"[term {name}]\n{pretty(ws.terms[name])}")
    return "\n\n".join(out) + "\n"
