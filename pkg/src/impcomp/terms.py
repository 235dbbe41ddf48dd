"""AST, parser and printer for the tracker lambda-calculus.

Grammar (``/\\`` is right-associative and binds looser than application)::

    term  ::= 'lam' binder+ '.' term  |  'let' NAME '=' term 'in' term  |  meet
    meet  ::= app ('/\\' meet)?
    app   ::= atom+ [lam-or-let]
    atom  ::= NAME | 'I' | 'K' | 'S' | 'pi0' | 'pi1' | 'pi2' | '#' ELEM
            | '(' term ')' | '<' term ',' term '>'
    binder::= NAME | '_'

``\\`` and ``λ`` are accepted for ``lam``, ``⊓`` for ``/\\`` and ``◇`` for ``_``.
"""
from dataclasses import dataclass
import itertools
import re

from .errors import ParseError

COMBINATORS = ("I", "K", "S", "pi0", "pi1", "pi2")
KEYWORDS = {"lam", "let", "in"}
DUMMY = "_"


class Term:
    __slots__ = ()

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Lam(Term):
    params: tuple
    body: Term

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True)
class MeetPair(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class LetIn(Term):
    name: str
    bound: Term
    body: Term


@dataclass(frozen=True)
class Const(Term):
    """A named combinator: one of ``I K S pi0 pi1 pi2``."""

    name: str


@dataclass(frozen=True)
class Quote(Term):
    """A quoted algebra element ``#elem``."""

    elem: str


@dataclass(frozen=True)
class Pair(Term):
    """``<t, u>``, read as ``lam z . z t u``."""

    left: Term
    right: Term


def apps(f, *args):
    for a in args:
        f = App(f, a)
    return f


def meets(*items):
    acc = items[-1]
    for t in reversed(items[:-1]):
        acc = MeetPair(t, acc)
    return acc


# -- lexer ------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|--[^\n]*)
  | (?P<lam>\\|λ)
  | (?P<meet>/\\|⊓)
  | (?P<dummy>◇)
  | (?P<quote>\#(?:"[^"]*"|[A-Za-z0-9_'.{}+\-]+))
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[().,<>=])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text):
    toks = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            if kind == "lam":
                kind, tok = "name", "lam"
            elif kind == "dummy":
                kind, tok = "name", DUMMY
            elif kind == "meet":
                tok = "/\\"
            toks.append(_Tok(kind, tok, line, pos - line_start + 1))
        for i, ch in enumerate(tok if kind != "ws" else m.group()):
            if ch == "\n":
                line += 1
                line_start = pos + i + 1
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _lex(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg):
        t = self.tok
        shown = t.text or "end of input"
        raise ParseError(f"{msg} (at {shown!r})", t.line, t.col)

    def accept(self, text):
        if self.tok.text == text and self.tok.kind in ("name", "punct", "meet"):
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.error(f"expected {text!r}")

    def ident(self):
        t = self.tok
        if t.kind != "name" or t.text in KEYWORDS or t.text in COMBINATORS or t.text == DUMMY:
            self.error("expected an identifier")
        self.i += 1
        return t.text

    def term(self):
        t = self.tok
        if t.kind == "name" and t.text == "lam":
            self.i += 1
            params = []
            while not (self.tok.kind == "punct" and self.tok.text == "."):
                if self.tok.kind == "name" and self.tok.text == DUMMY:
                    self.i += 1
                    params.append(DUMMY)
                else:
                    params.append(self.ident())
            if not params:
                self.error("a lambda needs at least one binder")
            self.expect(".")
            return Lam(tuple(params), self.term())
        if t.kind == "name" and t.text == "let":
            self.i += 1
            name = self.ident()
            self.expect("=")
            bound = self.term()
            self.expect("in")
            return LetIn(name, bound, self.term())
        left = self.app()
        if self.accept("/\\"):
            return MeetPair(left, self.term())
        return left

    def starts_atom(self):
        t = self.tok
        if t.kind == "quote":
            return True
        if t.kind == "punct":
            return t.text in "(<"
        return t.kind == "name" and t.text not in KEYWORDS and t.text != DUMMY

    def app(self):
        if not self.starts_atom():
            self.error("expected a term")
        fun = self.atom()
        while True:
            if self.starts_atom():
                fun = App(fun, self.atom())
            elif self.tok.kind == "name" and self.tok.text in ("lam", "let"):
                # a trailing abstraction extends as far right as possible
                return App(fun, self.term())
            else:
                return fun

    def atom(self):
        t = self.tok
        if t.kind == "quote":
            self.i += 1
            body = t.text[1:]
            return Quote(body[1:-1] if body.startswith('"') else body)
        if self.accept("("):
            inner = self.term()
            self.expect(")")
            return inner
        if self.accept("<"):
            left = self.term()
            self.expect(",")
            right = self.term()
            self.expect(">")
            return Pair(left, right)
        if t.kind == "name" and t.text in COMBINATORS:
            self.i += 1
            return Const(t.text)
        return Var(self.ident())


def parse(text):
    """Parse ``text`` into a :class:`Term`; raises :class:`ParseError` with line/column."""
    p = _Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        p.error("unexpected trailing input")
    return t


# -- printer ----------------------------------------------------------------

_SAFE_QUOTE = re.compile(r"[A-Za-z0-9_'.{}+\-]+\Z")


def pretty(t):
    """Canonical text; ``parse(pretty(t)) == t`` for every term."""
    return _pp(t, 0)


# precedence levels: 0 = term, 1 = meet operand, 2 = application head, 3 = atom
def _pp(t, level):
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return t.name
    if isinstance(t, Quote):
        return "#" + (t.elem if _SAFE_QUOTE.match(t.elem) else f'"{t.elem}"')
    if isinstance(t, Pair):
        return f"<{_pp(t.left, 0)}, {_pp(t.right, 0)}>"
    if isinstance(t, Lam):
        s = f"lam {' '.join(t.params)} . {_pp(t.body, 0)}"
        return s if level == 0 else f"({s})"
    if isinstance(t, LetIn):
        s = f"let {t.name} = {_pp(t.bound, 0)} in {_pp(t.body, 0)}"
        return s if level == 0 else f"({s})"
    if isinstance(t, MeetPair):
        s = f"{_pp(t.left, 1)} /\\ {_pp(t.right, 0)}"
        return s if level == 0 else f"({s})"
    if isinstance(t, App):
        s = f"{_pp(t.fun, 2)} {_pp(t.arg, 3)}"
        return s if level <= 2 else f"({s})"
    raise TypeError(f"not a term: {t!r}")


# -- traversal --------------------------------------------------------------

def free_vars(t):
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, (Const, Quote)):
        return set()
    if isinstance(t, Lam):
        return free_vars(t.body) - set(t.params)
    if isinstance(t, (App,)):
        return free_vars(t.fun) | free_vars(t.arg)
    if isinstance(t, (MeetPair, Pair)):
        return free_vars(t.left) | free_vars(t.right)
    if isinstance(t, LetIn):
        return free_vars(t.bound) | (free_vars(t.body) - {t.name})
    raise TypeError(f"not a term: {t!r}")


_fresh_counter = itertools.count()


def _fresh(avoid, base="v"):
    while True:
        name = f"{base}'{next(_fresh_counter)}"
        if name not in avoid:
            return name


def substitute(t, name, value):
    """Capture-avoiding ``t[name := value]``."""
    fv = free_vars(value)
    return _subst(t, name, value, fv)


def _subst(t, name, value, fv):
    if isinstance(t, Var):
        return value if t.name == name else t
    if isinstance(t, (Const, Quote)):
        return t
    if isinstance(t, App):
        return App(_subst(t.fun, name, value, fv), _subst(t.arg, name, value, fv))
    if isinstance(t, MeetPair):
        return MeetPair(_subst(t.left, name, value, fv), _subst(t.right, name, value, fv))
    if isinstance(t, Pair):
        return Pair(_subst(t.left, name, value, fv), _subst(t.right, name, value, fv))
    if isinstance(t, LetIn):
        return _subst(expand_lets(t), name, value, fv)
    if isinstance(t, Lam):
        if len(t.params) > 1:
            return _subst(Lam((t.params[0],), Lam(t.params[1:], t.body)), name, value, fv)
        (x,) = t.params
        if x == name:
            return t
        body = t.body
        if x in fv:
            new = _fresh(fv | free_vars(body) | {name}, x.split("'")[0])
            body = substitute(body, x, Var(new))
            x = new
        return Lam((x,), _subst(body, name, value, fv))
    raise TypeError(f"not a term: {t!r}")


def expand_lets(t):
    """Replace every ``let x = e in b`` by ``b[x := e]``, innermost first."""
    if isinstance(t, (Var, Const, Quote)):
        return t
    if isinstance(t, LetIn):
        return substitute(expand_lets(t.body), t.name, expand_lets(t.bound))
    if isinstance(t, Lam):
        return Lam(t.params, expand_lets(t.body))
    if isinstance(t, App):
        return App(expand_lets(t.fun), expand_lets(t.arg))
    if isinstance(t, MeetPair):
        return MeetPair(expand_lets(t.left), expand_lets(t.right))
    if isinstance(t, Pair):
        return Pair(expand_lets(t.left), expand_lets(t.right))
    raise TypeError(f"not a term: {t!r}")


def curry_binders(t):
    """Split multi-binder lambdas into nested single-binder ones."""
    if isinstance(t, Lam):
        body = curry_binders(t.body)
        for x in reversed(t.params):
            body = Lam((x,), body)
        return body
    if isinstance(t, App):
        return App(curry_binders(t.fun), curry_binders(t.arg))
    if isinstance(t, MeetPair):
        return MeetPair(curry_binders(t.left), curry_binders(t.right))
    if isinstance(t, Pair):
        return Pair(curry_binders(t.left), curry_binders(t.right))
    if isinstance(t, LetIn):
        return LetIn(t.name, curry_binders(t.bound), curry_binders(t.body))
    return t


# Definitions of the named combinators; projections read right-nested tuples.
COMBINATOR_TEXT = {
    "I": "lam x . x",
    "K": "lam x y . x",
    "S": "lam x y z . x z (y z)",
    "pi0": "lam p . p (lam x y . x)",
    "pi1": "lam p . p (lam x y . y (lam x2 y2 . x2))",
    "pi2": "lam p . p (lam x y . y (lam x2 y2 . y2))",
}
