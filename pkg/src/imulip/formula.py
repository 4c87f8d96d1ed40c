"""Formulas of the language {&, |, ->, [], #f} with #t as surface sugar.

Formulas are hash-consed: building the same tree twice returns the same
object, so structural equality is identity and the default identity hash
is sound.  Every node
carries its weight, its positive/negative variable sets and a structural sort
key, all computed once at construction.
"""
from __future__ import annotations

import enum
import re

__all__ = [
    "Formula", "Atom", "Bot", "Top", "And", "Or", "Imp", "Box",
    "BOT", "TOP", "TOP_N", "Polarity", "POS", "NEG",
    "FormulaSyntaxError", "parse", "render", "weight", "vars_of",
    "is_polarity_free", "atoms", "normalize_top", "big_and", "big_or",
    "subformulas", "size",
]

ATOM, BOT_K, TOP_K, AND, OR, IMP, BOX = range(7)

_table: dict = {}


class Polarity(enum.Enum):
    POS = "+"
    NEG = "-"

    @property
    def dual(self) -> "Polarity":
        return NEG if self is POS else POS

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, text: str) -> "Polarity":
        t = text.strip().lower()
        if t in ("+", "pos", "positive"):
            return POS
        if t in ("-", "neg", "negative"):
            return NEG
        raise ValueError(f"unknown polarity {text!r}")


POS = Polarity.POS
NEG = Polarity.NEG


class Formula:
    """Base class of all formula nodes.  Do not instantiate directly."""

    __slots__ = ("weight", "key", "pos", "neg", "_text")
    kind = -1

    def __lt__(self, other):
        return self.key < other.key

    def __le__(self, other):
        return self.key <= other.key

    def __gt__(self, other):
        return self.key > other.key

    def __ge__(self, other):
        return self.key >= other.key

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"parse({render(self)!r})"

    def __reduce__(self):
        return (parse, (render(self),))

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    # Convenience builders, so tests can write ``p & q >> r``.
    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __rshift__(self, other):
        return Imp(self, other)


def _init(node, weight, key, pos, neg):
    node.weight = weight
    node.key = key
    node.pos = pos
    node.neg = neg
    node._text = None


_EMPTY = frozenset()


class Atom(Formula):
    __slots__ = ("name",)
    kind = ATOM

    def __new__(cls, name: str):
        hit = _table.get((ATOM, name))
        if hit is not None:
            return hit
        if not _ATOM_RE.fullmatch(name):
            raise ValueError(f"illegal atom name {name!r}")
        node = object.__new__(cls)
        node.name = name
        _init(node, 1, (1, ATOM, name), frozenset((name,)), _EMPTY)
        _table[(ATOM, name)] = node
        return node


class Bot(Formula):
    __slots__ = ()
    kind = BOT_K

    def __new__(cls):
        hit = _table.get(BOT_K)
        if hit is None:
            hit = object.__new__(cls)
            _init(hit, 1, (1, BOT_K), _EMPTY, _EMPTY)
            _table[BOT_K] = hit
        return hit


class Top(Formula):
    """Surface-syntax truth constant; see :func:`normalize_top`."""

    __slots__ = ()
    kind = TOP_K

    def __new__(cls):
        hit = _table.get(TOP_K)
        if hit is None:
            hit = object.__new__(cls)
            _init(hit, 1, (1, TOP_K), _EMPTY, _EMPTY)
            _table[TOP_K] = hit
        return hit


class _Binary(Formula):
    __slots__ = ("left", "right")

    def __new__(cls, left: Formula, right: Formula):
        k = (cls.kind, left, right)
        hit = _table.get(k)
        if hit is not None:
            return hit
        if not (isinstance(left, Formula) and isinstance(right, Formula)):
            raise TypeError("operands must be formulas")
        node = object.__new__(cls)
        node.left = left
        node.right = right
        w = left.weight + right.weight + (2 if cls.kind == AND else 1)
        if cls.kind == IMP:
            pos = left.neg | right.pos
            neg = left.pos | right.neg
        else:
            pos = left.pos | right.pos
            neg = left.neg | right.neg
        _init(node, w, (w, cls.kind, left.key, right.key), pos, neg)
        _table[k] = node
        return node


class And(_Binary):
    __slots__ = ()
    kind = AND


class Or(_Binary):
    __slots__ = ()
    kind = OR


class Imp(_Binary):
    __slots__ = ()
    kind = IMP


class Box(Formula):
    __slots__ = ("body",)
    kind = BOX

    def __new__(cls, body: Formula):
        k = (BOX, body)
        hit = _table.get(k)
        if hit is not None:
            return hit
        if not isinstance(body, Formula):
            raise TypeError("operand must be a formula")
        node = object.__new__(cls)
        node.body = body
        w = body.weight + 1
        _init(node, w, (w, BOX, body.key), body.pos, body.neg)
        _table[k] = node
        return node


BOT = Bot()
TOP = Top()
#: The calculus-level truth constant, #f -> #f.
TOP_N = Imp(BOT, BOT)


def weight(f: Formula) -> int:
    return f.weight


def vars_of(f: Formula, pol: Polarity) -> frozenset:
    """Atoms occurring in ``f`` with polarity ``pol``."""
    return f.pos if pol is POS else f.neg


def is_polarity_free(f: Formula, p: str, pol: Polarity) -> bool:
    return p not in vars_of(f, pol)


def atoms(f: Formula) -> frozenset:
    return f.pos | f.neg


def big_and(fs) -> Formula:
    """Right-nested conjunction; the empty conjunction is #f -> #f."""
    fs = list(fs)
    if not fs:
        return TOP_N
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def big_or(fs) -> Formula:
    """Right-nested disjunction; the empty disjunction is #f."""
    fs = list(fs)
    if not fs:
        return BOT
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


_norm_memo: dict = {}


def normalize_top(f: Formula) -> Formula:
    """Replace every #t by #f -> #f."""
    k = f.kind
    if k == TOP_K:
        return TOP_N
    if k in (ATOM, BOT_K):
        return f
    hit = _norm_memo.get(f)
    if hit is not None:
        return hit
    if k == BOX:
        out = Box(normalize_top(f.body))
    else:
        out = type(f)(normalize_top(f.left), normalize_top(f.right))
    _norm_memo[f] = out
    return out


def subformulas(f: Formula) -> set:
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        if isinstance(g, _Binary):
            stack.append(g.left)
            stack.append(g.right)
        elif g.kind == BOX:
            stack.append(g.body)
    return out


def size(f: Formula) -> int:
    """Number of distinct nodes in the DAG of ``f``."""
    return len(subformulas(f))


# ---------------------------------------------------------------- parsing

_ATOM_RE = re.compile(r"[a-z][A-Za-z0-9_]*")
_TOKEN_RE = re.compile(r"\s*(?:(->)|(\[\])|(#[ft])|([&|~()])|([a-z][A-Za-z0-9_]*))")


class FormulaSyntaxError(ValueError):
    def __init__(self, msg: str, text: str, pos: int):
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


def _tokenize(text):
    toks = []
    i = 0
    n = len(text)
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            break
        m = _TOKEN_RE.match(text, i)
        if m is None or m.end() == i:
            raise FormulaSyntaxError(f"unknown token {text[i]!r}", text, i)
        tok = m.group(m.lastindex)
        toks.append((tok, m.start(m.lastindex)))
        i = m.end()
    toks.append(("", n))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg):
        raise FormulaSyntaxError(msg, self.text, self.toks[self.i][1])

    def imp(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Imp(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        if self.peek() == "|":
            self.take()
            return Or(left, self.disj())
        return left

    def conj(self):
        left = self.unary()
        if self.peek() == "&":
            self.take()
            return And(left, self.conj())
        return left

    def unary(self):
        tok = self.peek()
        if tok == "[]":
            self.take()
            return Box(self.unary())
        if tok == "~":
            self.take()
            return Imp(self.unary(), BOT)
        if tok == "(":
            self.take()
            f = self.imp()
            if self.peek() != ")":
                self.fail("expected ')'")
            self.take()
            return f
        if tok == "#f":
            self.take()
            return BOT
        if tok == "#t":
            self.take()
            return TOP
        if tok and _ATOM_RE.fullmatch(tok):
            self.take()
            return Atom(tok)
        self.fail("unexpected end of input" if tok == "" else f"unexpected {tok!r}")


def parse(text: str) -> Formula:
    """Parse ``text``; ``~A`` is read as ``A -> #f``.

    Binary connectives are right-associative; ``&`` binds tighter than ``|``,
    which binds tighter than ``->``; ``[]`` and ``~`` are prefix and tightest.
    """
    p = _Parser(text)
    f = p.imp()
    if p.peek() != "":
        p.fail(f"unexpected {p.peek()!r}")
    return f


_PREC = {IMP: 1, OR: 2, AND: 3}
_OPS = {IMP: " -> ", OR: " | ", AND: " & "}


def _render(f: Formula) -> str:
    k = f.kind
    if k == ATOM:
        return f.name
    if k == BOT_K:
        return "#f"
    if k == TOP_K:
        return "#t"
    if k == BOX:
        b = f.body
        inner = render(b)
        if b.kind in _PREC:
            inner = f"({inner})"
        return "[] " + inner
    prec = _PREC[k]
    left = render(f.left)
    if f.left.kind in _PREC and _PREC[f.left.kind] <= prec:
        left = f"({left})"
    right = render(f.right)
    if f.right.kind in _PREC and _PREC[f.right.kind] < prec:
        right = f"({right})"
    return left + _OPS[k] + right


def render(f: Formula) -> str:
    """Text form with minimal parentheses; ``parse(render(f)) is f``."""
    t = f._text
    if t is None:
        t = _render(f)
        if f.weight <= 512:
            f._text = t
    return t
