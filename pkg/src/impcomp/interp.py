"""Denotational interpretation of tracker terms in an implicative structure.

A subterm is evaluated once for every valuation of the bound variables it
actually mentions, as a tensor with one axis per such variable.  Abstraction
is then a meet-reduction along one axis::

    lam x . t      ->  meet_a (a -> t[x := a])
    t u            ->  meet { c | t <= u -> c }
    t /\\ u         ->  meet_c ((t -> u -> c) -> c)
"""
from dataclasses import dataclass, field
import itertools

import numpy as np

from . import kernels
from .errors import StructuralError, TermError
from .order import Violation
from .terms import (
    COMBINATOR_TEXT, DUMMY, App, Const, Lam, LetIn, MeetPair, Pair, Quote, Term, Var,
    apps, curry_binders, expand_lets, parse, substitute,
)

MAX_CELLS = 4_000_000


class Interpreter:
    def __init__(self, A, max_cells=MAX_CELLS):
        self.A = A
        self.max_cells = max_cells
        self._combinators = {}

    def combinator(self, name):
        if name not in self._combinators:
            self._combinators[name] = self.interp(parse(COMBINATOR_TEXT[name]))
        return self._combinators[name]

    def interp(self, t, env=None):
        """Element index denoted by the closed-under-``env`` term ``t``."""
        if isinstance(t, str):
            t = parse(t)
        env = self._env(env)
        names, arr = self._eval(_prepare(t), env)
        assert not names
        return int(arr)

    def _env(self, env):
        L = self.A.lattice
        out = {}
        for k, v in (env or {}).items():
            try:
                out[k] = L.idx(v)
            except StructuralError as e:
                raise TermError(f"environment binding {k}: {e}") from None
        return out

    def _eval(self, t, env):
        A = self.A
        if isinstance(t, Var):
            if isinstance(t, _Bound):
                arr = np.arange(A.n, dtype=np.int64)
                return (t.name,), arr
            if t.name not in env:
                raise TermError(f"unbound variable {t.name!r}")
            return (), np.int64(env[t.name])
        if isinstance(t, Quote):
            try:
                return (), np.int64(A.lattice.idx(t.elem))
            except StructuralError:
                raise TermError(f"quoted element #{t.elem} is not in the carrier") from None
        if isinstance(t, Const):
            return (), np.int64(self.combinator(t.name))
        if isinstance(t, App):
            return self._binary(A.app_table, self._eval(t.fun, env), self._eval(t.arg, env))
        if isinstance(t, MeetPair):
            return self._binary(A.emeet_table, self._eval(t.left, env), self._eval(t.right, env))
        if isinstance(t, Lam):
            (x,) = t.params
            names, body = self._eval(t.body, env)
            L = A.lattice
            if x not in names:
                # a -> b is antitone in a, so the meet is attained at top
                return names, A.imp[L.top, body]
            k = names.index(x)
            rest = names[:k] + names[k + 1 :]
            flat = np.moveaxis(body, k, 0).reshape(A.n, -1)
            out = kernels.lam_reduce(A.imp, L.meet_table, L.top, flat)
            return rest, out.reshape(body.shape[:k] + body.shape[k + 1 :])
        raise TypeError(f"unexpected node {t!r}")

    def _binary(self, table, left, right):
        ln, la = left
        rn, ra = right
        names = tuple(sorted(set(ln) | set(rn)))
        if self.A.n ** len(names) > self.max_cells:
            raise TermError(
                f"term needs {self.A.n}^{len(names)} cells; raise max_cells to evaluate it"
            )
        return names, table[_align(la, ln, names), _align(ra, rn, names)]


def _align(arr, names, target):
    if not names:
        return arr
    shape = [arr.shape[names.index(v)] if v in names else 1 for v in target]
    return np.asarray(arr).reshape(shape)


@dataclass(frozen=True)
class _Bound(Var):
    """A binder-renamed variable; names sort in binding order."""


_ids = itertools.count()


def _prepare(t):
    t = curry_binders(expand_lets(t))
    return _rename(t, {})


def _rename(t, scope):
    if isinstance(t, Var):
        return scope.get(t.name, t)
    if isinstance(t, (Const, Quote)):
        return t
    if isinstance(t, Pair):
        z = _Bound(f"\0{next(_ids):08d}")
        return Lam((z.name,), apps(z, _rename(t.left, scope), _rename(t.right, scope)))
    if isinstance(t, App):
        return App(_rename(t.fun, scope), _rename(t.arg, scope))
    if isinstance(t, MeetPair):
        return MeetPair(_rename(t.left, scope), _rename(t.right, scope))
    if isinstance(t, Lam):
        (x,) = t.params
        b = _Bound(f"\0{next(_ids):08d}")
        inner = dict(scope)
        if x != DUMMY:
            inner[x] = b
        else:
            inner.pop(x, None)
        return Lam((b.name,), _rename(t.body, inner))
    raise TypeError(f"unexpected node {t!r}")


def interpreter(A):
    """The cached interpreter of ``A`` (a structure, or an algebra over one)."""
    A = getattr(A, "structure", A)
    it = A.__dict__.get("_interpreter")
    if it is None:
        it = A.__dict__["_interpreter"] = Interpreter(A)
    return it


def interp(t, env=None, A=None):
    """Interpret the term (or term text) ``t`` under ``env`` in ``A``."""
    return interpreter(A).interp(t, env)


@dataclass
class BetaReport:
    ok: bool
    cases: int
    failures: list = field(default_factory=list)


def beta_soundness_check(t, s, A, env=None, arguments=None):
    """Check ``(lam x . b) s <= b[x := s]`` for ``s`` and for every quoted element.

    ``arguments`` overrides the quoted elements tried besides ``s``.
    """
    if isinstance(t, str):
        t = parse(t)
    if isinstance(s, str):
        s = parse(s)
    t = curry_binders(expand_lets(t))
    if not isinstance(t, Lam):
        t = _prepare_combinator(t)
    (x,) = t.params
    L = A.lattice
    args = [s] + [Quote(L.name(a)) for a in (arguments if arguments is not None else range(L.n))]
    it = interpreter(A)
    report = BetaReport(True, 0)
    for arg in args:
        lhs = it.interp(App(t, arg), env)
        rhs = it.interp(t.body if x == DUMMY else substitute(t.body, x, arg), env)
        report.cases += 1
        if not L.le(lhs, rhs):
            report.ok = False
            report.failures.append(Violation(
                "beta", f"({t}) ({arg}) = {L.name(lhs)} is not below {L.name(rhs)}", (lhs, rhs)))
    return report


def _prepare_combinator(t):
    if isinstance(t, Const):
        return curry_binders(parse(COMBINATOR_TEXT[t.name]))
    raise TermError("beta check needs an abstraction or a named combinator")
