"""The graph-expression mini-language.

    expr    := term (ws? term)*
    term    := '~'* bracket suffix*
    bracket := ('[' | '(') word? '|' word? (']' | ')')
    word    := ('+' | '-' | '*')+
    suffix  := '_' '[' ('h' | 'd') '=' int ']'
             | '_' '[' 'v' '=' bits ']'
             | '^' 'ext' '(' int ')'

Bracket shapes: ``[w|E)`` left fragment, ``(E|w]`` right fragment, ``(D|E)``
cube (box product with what precedes it), ``[D|E]`` bilateral fragment.  The
empty brackets ``[|)``, ``(|]`` and ``[|]`` are the left, right and bilateral
towers.  Juxtaposition applies each term to the graph built so far.  After a
term is applied, ``_[d=k]``/``_[h=k]`` shift and ``^ext(k)`` extends the result
horizontally, and then ``~`` reverses its edges; ``_[v=nu]`` twists the term's
own slots.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bilateral import BilateralDag, bilateral_fragment, bilateral_tower, horizontal_extend
from .bitword import BitWord, ExtBitWord
from .cubes import LEFT, RIGHT, CubeSpec, cube, fragment, tower
from .dag import ColoredDag, box_product, shift_horizontal, shift_vertical

WORD_CHARS = "+-*"


class ExprError(ValueError):
    def __init__(self, msg: str, offset: int | None = None, expected=()):
        self.offset = offset
        self.expected = tuple(sorted(set(expected)))
        where = "" if offset is None else f" at byte {offset}"
        exp = f" (expected one of: {' '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{msg}{where}{exp}")


class LengthError(ExprError):
    pass


@dataclass(frozen=True)
class Suffix:
    key: str  # 'h', 'd', 'v' or 'ext'
    value: object

    def text(self) -> str:
        if self.key == "ext":
            return f"^ext({self.value})"
        return f"_[{self.key}={self.value}]"


@dataclass(frozen=True)
class Term:
    open: str
    first: str
    second: str
    close: str
    reversals: int = 0
    suffixes: tuple = ()

    @property
    def shape(self) -> str:
        return self.open + self.close

    @property
    def is_tower(self) -> bool:
        return not self.first and not self.second

    @property
    def m(self) -> int:
        return len(self.first)

    def text(self) -> str:
        s = "~" * self.reversals + f"{self.open}{self.first}|{self.second}{self.close}"
        return s + "".join(x.text() for x in self.suffixes)


@dataclass(frozen=True)
class GraphExpr:
    terms: tuple = field(default_factory=tuple)

    def text(self) -> str:
        return "".join(t.text() for t in self.terms)

    __str__ = text


# -- parsing ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.i = 0

    def offset(self, i: int | None = None) -> int:
        i = self.i if i is None else i
        return len(self.text[:i].encode("utf-8"))

    def peek(self) -> str:
        return self.text[self.i] if self.i < len(self.text) else ""

    def fail(self, msg: str, expected=(), i: int | None = None):
        raise ExprError(msg, self.offset(i), expected)

    def eat(self, ch: str) -> None:
        if self.peek() != ch:
            got = repr(self.peek()) if self.peek() else "end of input"
            self.fail(f"unexpected {got}", (ch,))
        self.i += 1

    def skip_ws(self) -> None:
        while self.peek() and self.peek() in " \t\n":
            self.i += 1

    def expr(self) -> GraphExpr:
        terms = []
        self.skip_ws()
        if not self.peek():
            self.fail("empty expression", ("[", "(", "~"))
        while self.peek():
            terms.append(self.term())
            self.skip_ws()
        return GraphExpr(tuple(terms))

    def word(self, allowed: str = WORD_CHARS) -> str:
        j = self.i
        while self.peek() and self.peek() in allowed:
            self.i += 1
        return self.text[j:self.i]

    def integer(self) -> int:
        j = self.i
        if self.peek() == "-":
            self.i += 1
        if not self.peek().isdigit():
            self.fail("expected an integer", ("-", "digit"))
        while self.peek().isdigit():
            self.i += 1
        return int(self.text[j:self.i])

    def term(self) -> Term:
        rev = 0
        while self.peek() == "~":
            rev += 1
            self.i += 1
        start = self.i
        op = self.peek()
        if op not in ("[", "("):
            got = repr(op) if op else "end of input"
            self.fail(f"unexpected {got}", ("[", "(", "~"))
        self.i += 1
        i1 = self.i
        first = self.word()
        if self.peek() != "|":
            self.fail("bad slot word", tuple(WORD_CHARS) + ("|",))
        self.i += 1
        i2 = self.i
        second = self.word()
        cl = self.peek()
        if cl not in ("]", ")"):
            self.fail("bad slot word", tuple(WORD_CHARS) + ("]", ")"))
        self.i += 1
        t = Term(op, first, second, cl, rev)
        if first and second and len(first) != len(second):
            raise LengthError(
                f"slot words {first!r} (byte {self.offset(i1)}) and {second!r} "
                f"(byte {self.offset(i2)}) have different lengths",
                self.offset(start),
            )
        if not t.is_tower and not (first and second):
            raise LengthError(
                f"one slot word of {t.text()!r} is empty and the other is not", self.offset(start)
            )
        if t.shape in ("[)", "(]") and not t.is_tower:
            fixed = first if t.shape == "[)" else second
            if "*" in fixed:
                self.fail(f"fragment word {fixed!r} must be fixed (no '*')", (), i1 if t.shape == "[)" else i2)
        sufs = []
        while self.peek() in ("_", "^"):
            sufs.append(self.suffix(t))
        return Term(op, first, second, cl, rev, tuple(sufs))

    def suffix(self, t: Term) -> Suffix:
        if self.peek() == "^":
            self.i += 1
            for ch in "ext":
                self.eat(ch)
            self.eat("(")
            j = self.i
            k = self.integer()
            if k < 0 or k % 2:
                self.fail(f"extension bound {k} must be even and non-negative", (), j)
            self.eat(")")
            return Suffix("ext", k)
        self.eat("_")
        self.eat("[")
        key = self.peek()
        if key not in ("h", "d", "v"):
            self.fail(f"unknown shift key {key!r}" if key else "unexpected end of input", ("h", "d", "v"))
        self.i += 1
        self.eat("=")
        if key == "v":
            j = self.i
            v = self.word("+-")
            if not v:
                self.fail("expected a bit word", ("+", "-"))
            if len(v) != t.m:
                raise LengthError(
                    f"twist {v!r} has length {len(v)} but {t.text()!r} has {t.m} slots", self.offset(j)
                )
            val: object = v
        else:
            val = self.integer()
        self.eat("]")
        return Suffix(key, val)


def parse(text: str) -> GraphExpr:
    return _Parser(text).expr()


def canonical(text: str) -> str:
    return parse(text).text()


# -- evaluation ---------------------------------------------------------------


def _is_bilateral(q) -> bool:
    return isinstance(q, BilateralDag)


def _apply_term(q, t: Term, cutoff: int):
    nu = next((s.value for s in t.suffixes if s.key == "v"), "")
    shape = t.shape
    if t.is_tower:
        if q is not None:
            raise ExprError(f"tower {t.text()!r} must come first")
        if shape == "[]":
            return bilateral_tower(cutoff)
        if shape in ("[)", "(]"):
            return tower(cutoff)
        return cube(CubeSpec("", ""))
    if shape == "[]":
        if q is None:
            q = bilateral_tower(cutoff)
        if not _is_bilateral(q):
            raise ExprError(f"{t.text()!r} needs a bilateral base")
        return bilateral_fragment(q, t.first, t.second, nu, cutoff)
    if _is_bilateral(q):
        raise ExprError(f"{t.text()!r} cannot act on a bilateral graph")
    if shape == "()":
        c = cube(CubeSpec(ExtBitWord(t.first), ExtBitWord(t.second), BitWord(nu)))
        return c if q is None else box_product(q, c).restrict_depth(cutoff)
    if q is None:
        q = tower(cutoff)
    if shape == "[)":
        return fragment(q, t.first, side=LEFT, E=t.second, nu=nu, cutoff=cutoff)
    if shape == "(]":
        return fragment(q, t.second, side=RIGHT, E=t.first, nu=nu, cutoff=cutoff)
    raise ExprError(f"bracket shape {shape!r} is not supported")


def _shift(q, key: str, k: int, cutoff: int):
    if _is_bilateral(q):
        return BilateralDag(_shift(q.left, key, k, cutoff), _shift(q.right, key, k, cutoff), q.h0)
    if key == "d":
        return shift_vertical(q, k).restrict_depth(cutoff)
    return shift_horizontal(q, k)


def evaluate(e: GraphExpr | str, cutoff: int = 12):
    """The ColoredDag (or BilateralDag) an expression denotes, cut at ``cutoff``."""
    if isinstance(e, str):
        e = parse(e)
    q = None
    for t in e.terms:
        q = _apply_term(q, t, cutoff)
        for s in t.suffixes:
            if s.key in ("d", "h"):
                q = _shift(q, s.key, s.value, cutoff)
            elif s.key == "ext":
                if not _is_bilateral(q):
                    raise ExprError("horizontal extension needs a bilateral graph")
                q = horizontal_extend(q, s.value, cutoff=cutoff)
        if t.reversals % 2:
            q = q.reverse_edges() if _is_bilateral(q) else q.reverse()
    return q


def as_dag(q) -> ColoredDag:
    return q.as_dag() if _is_bilateral(q) else q


LEGEND = """\
ASCII   meaning
+ -     the two bit values
*       both values (the slot is free)
[w|E)   left fragment with fixed first word w, second word E
(E|w]   right fragment with fixed second word w, first word E
(D|E)   hypercube, box product with the graph on its left
[D|E]   bilateral fragment (left and right halves together)
[|)     edgeless tower (left); (|] the same on the right; [|] both
_[d=k]  vertical shift by k;  _[h=k] horizontal shift by k
_[v=nu] twist of the term's own slots by the bit word nu
~       reverse the edges of everything built through this term
^ext(k) horizontal extension by even shifts 0..k
"""
