"""Command-line front end: ``impcomp COMMAND WORKSPACE... [options]``.

Exit code 0 means pass, 1 means fail or undecided, 2 means an error
(unreadable workspace, unknown name, bad flags).
"""
import argparse
import itertools
import json
import logging
import sys

from .algebra import Valuation, validate_separator
from .assemblies import (check_cone_universal, enumerate_assemblies, equalizer, image_factorization,
                         kernel_pair, product, pullback)
from .errors import ImpcompError, StructuralError, Undecided
from .excomp import check_homotopy_equivalence, ex_hom, validate_pseudo_groupoid
from .order import validate_implicative_structure
from .regcomp import check_U_equivalence, is_compact, is_dense, is_generator
from .report import Report, verdict
from .seta import (K_object, K_relation, check_K_faithful_full, check_tracker_terms, ghost_partition,
                   hat_groupoid, internal_injective, internal_surjective, validate_frel,
                   validate_implicative_set)
from .terms import parse as parse_term
from .workspace import WorkspaceError, parse_workspace


class UsageError(ImpcompError):
    pass


def _get(table, name, what):
    if name not in table:
        known = ", ".join(sorted(table)) or "none"
        raise UsageError(f"unknown {what} {name!r} (known: {known})")
    return table[name]


def _subset(ws, name):
    alg, members = _get(ws.subsets, name, "subset")
    return ws.algebras[alg], list(members)


def _only_algebra(ws, name):
    if name:
        return _get(ws.algebras, name, "algebra")
    if len(ws.algebras) != 1:
        raise UsageError("the workspace has several algebras; pass --algebra")
    return next(iter(ws.algebras.values()))


def parse_valuation(text, A):
    """``"x=a b; y=c"`` with ``x`` an element id of ``A`` and the values elements of ``M``."""
    index, values = [], []
    for part in text.split(";"):
        if not part.strip():
            continue
        if "=" not in part:
            raise UsageError(f"bad valuation entry {part!r}; expected 'x=a b'")
        x, vs = part.split("=", 1)
        index.append(x.strip())
        values.append({A.lattice.idx(v) for v in vs.split()})
    missing = [s for s in A.lattice.elements if A.in_sep(A.lattice.idx(s)) and s not in index]
    if missing:
        raise UsageError(f"valuation does not cover {missing}")
    order = [A.lattice.name(s) for s in sorted(A.separator.members)]
    lookup = dict(zip(index, values))
    return Valuation(tuple(order), [lookup[s] for s in order])


# -- commands ---------------------------------------------------------------

def cmd_check(ws, args):
    parts = {}
    for name, A in sorted(ws.algebras.items()):
        bad = validate_implicative_structure(A.structure, seed=args.seed) + validate_separator(A)
        parts[f"algebra {name}"] = [str(v) for v in bad]
    for name, X in sorted(ws.assemblies.items()):
        parts[f"assembly {name}"] = [f"existence of {x} is outside S" for x, e in zip(X.carrier, X.exist)
                                     if not X.A.in_sep(e)]
    for name, f in sorted(ws.morphisms.items()):
        parts[f"morphism {name}"] = [] if f.tracked else [f"tracker {f.source.A.name_of(f.tracker)} is outside S"]
    for name, G in sorted(ws.groupoids.items()):
        parts[f"groupoid {name}"] = validate_pseudo_groupoid(G).violations
    for name, E in sorted(ws.isets.items()):
        parts[f"implicative-set {name}"] = validate_implicative_set(E).violations
    for name, R in sorted(ws.relations.items()):
        parts[f"relation {name}"] = validate_frel(R).violations
    bad = [f"{k}: {v}" for k, vs in parts.items() for v in vs]
    return Report("check", verdict(not bad), violations=bad,
                  details={k: verdict(not v) for k, v in parts.items()})


def cmd_interp(ws, args):
    A = _only_algebra(ws, args.algebra)
    t = ws.terms[args.term] if args.term in ws.terms else parse_term(args.term)
    env = {}
    for item in args.env or ():
        k, _, v = item.partition("=")
        env[k.strip()] = v.strip()
    v = A.interp(t, env)
    return Report("interp", "pass", witnesses=[A.name_of(v)],
                  details={"algebra": A.name, "value": A.name_of(v), "in_separator": A.in_sep(v)})


def cmd_tracked(ws, args):
    f = _get(ws.morphisms, args.morphism, "morphism")
    A = f.source.A
    return Report("tracked", verdict(f.tracked), witnesses=[A.name_of(f.tracker)],
                  violations=[] if f.tracked else [f"tracker {A.name_of(f.tracker)} is outside S"],
                  details={"map": f.as_dict()})


def cmd_image(ws, args):
    f = _get(ws.morphisms, args.morphism, "morphism")
    if not f.tracked:
        return Report("image", "fail", violations=["the morphism is not tracked"])
    fac = image_factorization(f)
    A = f.source.A
    ok = fac.fbar.then(fac.iota) == f
    return Report("image", verdict(ok), violations=[] if ok else ["f differs from iota . fbar"],
                  witnesses=[{x: A.name_of(e) for x, e in zip(fac.image.carrier, fac.image.exist)}],
                  details={"fbar": fac.fbar.as_dict(), "iota": fac.iota.as_dict()})


def cmd_limits(ws, args):
    """Products, pullbacks, equalizers and kernel pairs of the workspace
    objects, each checked against every test assembly up to ``--bound`` points."""
    results = {}
    tests_of = {}

    def tests(A):
        if A.name not in tests_of:
            tests_of[A.name] = [T for n in range(1, args.bound + 1) for T in enumerate_assemblies(A, n, prefix="t")]
        return tests_of[A.name]

    asm = sorted(ws.assemblies.items())
    for (n1, X), (n2, Y) in itertools.combinations_with_replacement(asm, 2):
        if X.A is not Y.A:
            continue
        _, p0, p1 = product(X, Y)
        results[f"product {n1} x {n2}"] = check_cone_universal([p0, p1], [], tests(X.A))
    mors = sorted((n, f) for n, f in ws.morphisms.items() if f.tracked)
    for (n1, f), (n2, g) in itertools.combinations_with_replacement(mors, 2):
        if f.target == g.target:
            _, p0, p1 = pullback(f, g)
            results[f"pullback {n1}, {n2}"] = check_cone_universal([p0, p1], [(0, 1, f, g)], tests(f.source.A))
        if n1 != n2 and f.source == g.source and f.target == g.target:
            _, e = equalizer(f, g)
            results[f"equalizer {n1}, {n2}"] = check_cone_universal([e], [(0, 0, f, g)], tests(f.source.A))
    for n, f in mors:
        _, p0, p1 = kernel_pair(f)
        results[f"kernel pair {n}"] = check_cone_universal([p0, p1], [(0, 1, f, f)], tests(f.source.A))
    bad = [f"{k}: {v}" for k, r in results.items() for v in r.violations]
    return Report("limits", verdict(not bad), bound=args.bound, violations=bad,
                  details={k: r.verdict for k, r in results.items()})


def cmd_density(ws, args):
    A, M = _subset(ws, args.M)
    if args.with_:
        return is_dense(M, A, strategy="user", valuation=parse_valuation(args.with_, A))
    return is_dense(M, A, strategy=args.strategy)


def cmd_compactness(ws, args):
    A, M = _subset(ws, args.M)
    return is_compact(M, A, args.bound)


def cmd_generator(ws, args):
    A, M = _subset(ws, args.M)
    return is_generator(M, A, args.bound)


def cmd_reglex(ws, args):
    A, M = _subset(ws, args.M)
    return check_U_equivalence(M, A, args.bound, min(args.bound, 2))


def cmd_exlex(ws, args):
    parts, homs, bad = {}, {}, []
    gs = sorted(ws.groupoids.items())
    for name, G in gs:
        r = validate_pseudo_groupoid(G)
        parts[f"groupoid {name}"] = r.verdict
        bad += [f"{name}: {v}" for v in r.violations]
    valid = [(n, G) for n, G in gs if parts[f"groupoid {n}"] == "pass"]
    for (n1, X), (n2, Y) in itertools.product(valid, repeat=2):
        if X.X0.A is not Y.X0.A:
            continue
        homs[f"{n1} -> {n2}"] = len(ex_hom(X, Y))
        r = check_homotopy_equivalence(X, Y)
        parts[f"homotopy {n1} -> {n2}"] = r.verdict
        bad += [f"{n1} -> {n2}: {v}" for v in r.violations]
    return Report("exlex", verdict(not bad), violations=bad, details={"checks": parts, "hom_counts": homs})


def cmd_kcheck(ws, args):
    parts, bad, notes = {}, [], []
    gs = sorted((n, G) for n, G in ws.groupoids.items() if validate_pseudo_groupoid(G).ok)
    for name, G in gs:
        r = validate_implicative_set(K_object(G))
        parts[f"K({name}) valid"] = r.verdict
        for c in check_tracker_terms(G, "groupoid"):
            parts[f"{name} tracker {c.term}"] = verdict(c.ok)
    for (n1, X), (n2, Y) in itertools.product(gs, repeat=2):
        if X.X0.A is not Y.X0.A:
            continue
        r = check_K_faithful_full(X, Y)
        parts[f"K faithful and full {n1} -> {n2}"] = r.verdict
        bad += r.violations
    for name, E in sorted(ws.isets.items()):
        A = E.A
        M = _subset(ws, args.M)[1] if args.M else sorted(A.separator.members)
        try:
            H = hat_groupoid(E, M)
        except StructuralError as e:
            notes.append(f"{name}: no hat groupoid ({e})")
            continue
        R = K_relation(H)
        inj, surj = internal_injective(R), internal_surjective(R)
        ghosts = bool(ghost_partition(E).ghosts)
        parts[f"{name} injective"] = inj.verdict
        parts[f"{name} surjective"] = surj.verdict
        parts[f"{name} ghosts"] = ghosts
        for c in check_tracker_terms(H, "hat"):
            # a quoted term only has to work when its side data are trackers
            if c.side_data_valid:
                parts[f"{name} tracker {c.term}"] = verdict(c.ok)
            else:
                notes.append(f"{name}: tracker {c.term} skipped, side data outside S")
    for name, R in sorted(ws.relations.items()):
        parts[f"relation {name}"] = validate_frel(R).verdict
    bad += [k for k, v in parts.items() if v == "fail"]
    return Report("kcheck", verdict(not bad), violations=bad, details={"checks": parts, "notes": notes})


def cmd_report(ws, args):
    sections = {"check": cmd_check(ws, args), "exlex": cmd_exlex(ws, args), "kcheck": cmd_kcheck(ws, args)}
    for name in sorted(ws.subsets):
        sub = argparse.Namespace(M=name, bound=args.bound, strategy="auto", with_=None)
        for cmd, fn in (("density", cmd_density), ("compactness", cmd_compactness), ("generator", cmd_generator)):
            sections[f"{cmd} {name}"] = _guard(cmd, fn, ws, sub)
    ok = all(r.verdict == "pass" for r in sections.values())
    rep = Report("report", verdict(ok), bound=args.bound,
                 violations=[f"{k}: {r.verdict}" for k, r in sections.items() if r.verdict != "pass"],
                 details={k: r.to_dict() for k, r in sections.items()})
    with open(args.json_path, "w", encoding="utf-8") as fh:
        fh.write(rep.to_json() + "\n")
    return rep


def _guard(cmd, fn, ws, args):
    try:
        return fn(ws, args)
    except Undecided as e:
        return Report(cmd, "undecided", violations=[str(e)], details={"advice": e.advice})


# -- wiring -----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("workspace", nargs="+", help="workspace files")
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--no-validate", action="store_true", help="load objects without validating them")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled validation on large lattices")
    p = argparse.ArgumentParser(prog="impcomp", description="Finite implicative algebras and their completions.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    add("check", cmd_check, "validate every object")
    sp = add("interp", cmd_interp, "interpret a lambda term")
    sp.add_argument("-t", "--term", required=True, help="term text or the name of a [term] section")
    sp.add_argument("--algebra", help="algebra to interpret in")
    sp.add_argument("--env", action="append", help="binding x=elem (repeatable)")
    add("tracked", cmd_tracked, "tracker of a morphism").add_argument("-f", dest="morphism", required=True)
    add("image", cmd_image, "image factorization").add_argument("-f", dest="morphism", required=True)
    add("limits", cmd_limits, "universal properties of finite limits").add_argument("--bound", type=int, default=1)
    sp = add("density", cmd_density, "decide density of a subset")
    sp.add_argument("-M", required=True)
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--strategy", choices=["auto", "canonical", "exhaustive"], default="auto")
    g.add_argument("--with", dest="with_", metavar="VALUATION", help="valuation 'x=a b; y=c'")
    for name, fn, help_, default in (("compactness", cmd_compactness, "bounded compactness", 2),
                                     ("generator", cmd_generator, "algebraic, dense and compact", 2),
                                     ("reglex", cmd_reglex, "U is an equivalence (bounded)", 3)):
        sp = add(name, fn, help_)
        sp.add_argument("-M", required=True)
        sp.add_argument("--bound", type=int, default=default)
    add("exlex", cmd_exlex, "groupoid validation and hom counts")
    add("kcheck", cmd_kcheck, "the K functor suite").add_argument("-M", help="subset for the hat construction")
    sp = add("report", cmd_report, "run every check and write JSON")
    sp.add_argument("--json-path", "--out", dest="json_path", required=True)
    sp.add_argument("--bound", type=int, default=2)
    sp.add_argument("-M", help=argparse.SUPPRESS)
    return p


def _print(rep, as_json, out):
    if as_json:
        out.write(rep.to_json() + "\n")
        return
    out.write(f"{rep.command}: {rep.verdict}" + (f" (bound {rep.bound})" if rep.bound is not None else "") + "\n")
    for w in rep.witnesses:
        out.write(f"  witness: {json.dumps(w, sort_keys=True) if not isinstance(w, str) else w}\n")
    for v in rep.violations:
        out.write(f"  violation: {v}\n")


def main(argv=None, out=None):
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    # ``report --json PATH`` is the documented spelling; keep the flag form for everything else
    if argv[:1] == ["report"] and "--json" in argv:
        i = argv.index("--json")
        if i + 1 < len(argv) and not argv[i + 1].startswith("-"):
            argv[i] = "--json-path"
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        ws = parse_workspace(args.workspace, validate=not args.no_validate)
        rep = _guard(args.command, args.fn, ws, args)
    except WorkspaceError as e:
        for p in e.problems:
            sys.stderr.write(f"error: {p}\n")
        return 2
    except (ImpcompError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    _print(rep, args.json, out)
    return 0 if rep.verdict == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
