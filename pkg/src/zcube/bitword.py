"""Bit words over {+, -} and their extension by the wildcard ``*`` (both).

A bit word is an element of the elementary abelian 2-group {+,-}^m: the
product ``star`` is componentwise with ``+`` as identity.  Words are stored
as plain strings so they hash fast and print as themselves.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator

PLUS = "+"
MINUS = "-"
BOTH = "*"


class BitWordError(ValueError):
    pass


class BitWord(str):
    """An immutable word over ``+`` and ``-``."""

    __slots__ = ()

    def __new__(cls, text: str = "") -> "BitWord":
        if isinstance(text, BitWord):
            return text
        text = str(text)
        for i, ch in enumerate(text):
            if ch != PLUS and ch != MINUS:
                raise BitWordError(f"invalid bit {ch!r} at position {i} in {text!r}")
        return str.__new__(cls, text)

    @classmethod
    def plus(cls, m: int) -> "BitWord":
        return str.__new__(cls, PLUS * m)

    @classmethod
    def minus(cls, m: int) -> "BitWord":
        return str.__new__(cls, MINUS * m)

    @classmethod
    def all(cls, m: int) -> Iterator["BitWord"]:
        """Every word of length ``m``, in lexicographic order with ``+`` first."""
        for t in product(PLUS + MINUS, repeat=m):
            yield str.__new__(cls, "".join(t))

    def __add__(self, other: str) -> "BitWord":
        if isinstance(other, BitWord):
            return str.__new__(BitWord, str.__add__(self, other))
        return BitWord(str.__add__(self, other))

    def __getitem__(self, key):
        out = str.__getitem__(self, key)
        return str.__new__(BitWord, out) if isinstance(key, slice) else out

    def __repr__(self) -> str:
        return f"BitWord({str(self)!r})"

    def star(self, other: str) -> "BitWord":
        return star(self, other)

    @property
    def minus_count(self) -> int:
        return self.count(MINUS)

    @property
    def bar(self) -> "BitWord":
        return bar(self)

    def signs(self) -> tuple[int, ...]:
        """The word as a tuple of +1/-1."""
        return tuple(1 if c == PLUS else -1 for c in self)


class ExtBitWord(str):
    """A word over ``+``, ``-`` and ``*``; ``*`` is a free slot.

    It stands for the sub-hypercube of ``{+,-}^m`` fixing every non-``*`` slot.
    """

    __slots__ = ()

    def __new__(cls, text: str = "") -> "ExtBitWord":
        if isinstance(text, ExtBitWord):
            return text
        text = str(text)
        for i, ch in enumerate(text):
            if ch not in (PLUS, MINUS, BOTH):
                raise BitWordError(f"invalid symbol {ch!r} at position {i} in {text!r}")
        return str.__new__(cls, text)

    @classmethod
    def full(cls, m: int) -> "ExtBitWord":
        return str.__new__(cls, BOTH * m)

    def __add__(self, other: str) -> "ExtBitWord":
        return ExtBitWord(str.__add__(self, other))

    def __getitem__(self, key):
        out = str.__getitem__(self, key)
        return str.__new__(ExtBitWord, out) if isinstance(key, slice) else out

    def __repr__(self) -> str:
        return f"ExtBitWord({str(self)!r})"

    @property
    def free_count(self) -> int:
        return self.count(BOTH)

    @property
    def minus_count(self) -> int:
        """Minimum of ``|w|_-`` over the subset, i.e. the number of fixed ``-``."""
        return self.count(MINUS)

    @property
    def bar(self) -> "ExtBitWord":
        return ExtBitWord(self.translate(_FLIP))

    def subset(self) -> list[BitWord]:
        """The subset reading, sorted lexicographically."""
        choices = [(c,) if c != BOTH else (PLUS, MINUS) for c in self]
        return [str.__new__(BitWord, "".join(t)) for t in product(*choices)]

    def __contains__(self, word) -> bool:  # type: ignore[override]
        if len(word) != len(self):
            return False
        return all(e == BOTH or e == w for e, w in zip(self, word))

    def is_plain(self) -> bool:
        return BOTH not in self


_FLIP = str.maketrans({PLUS: MINUS, MINUS: PLUS})


def _check_lengths(*words: str) -> None:
    n = len(words[0])
    for w in words[1:]:
        if len(w) != n:
            raise BitWordError(f"length mismatch: {[str(x) for x in words]}")


def star(a: str, b: str) -> BitWord:
    """Componentwise product in (S_2)^m."""
    _check_lengths(a, b)
    return str.__new__(
        BitWord, "".join(PLUS if x == y else MINUS for x, y in zip(a, b))
    )


def minus_count(a: str) -> int:
    return a.count(MINUS)


def bar(a):
    """Flip every entry; applied elementwise to sets and other iterables."""
    if isinstance(a, str):
        return BitWord(a.translate(_FLIP)) if BOTH not in a else ExtBitWord(a).bar
    if isinstance(a, (set, frozenset)):
        return type(a)(bar(x) for x in a)
    return [bar(x) for x in a]


def le(lam: str, mu: str, mu2: str) -> bool:
    """``mu <=_lam mu2``: every + slot of lam*mu is also + in lam*mu2."""
    _check_lengths(lam, mu, mu2)
    return all(
        not (l == m) or (l == m2) for l, m, m2 in zip(lam, mu, mu2)
    )


def gap_count(lam: str, mu: str, mu2: str) -> int:
    """``|mu2 -_lam mu|``: slots where lam*mu is - and lam*mu2 is +."""
    if not le(lam, mu, mu2):
        raise BitWordError(f"{mu!s} <=_{lam!s} {mu2!s} does not hold")
    return sum(1 for l, m, m2 in zip(lam, mu, mu2) if l != m and l == m2)


def both_minus(a: str, b: str) -> int:
    """Number of slots where both words are ``-``."""
    _check_lengths(a, b)
    return sum(1 for x, y in zip(a, b) if x == MINUS and y == MINUS)


def as_words(items: Iterable[str]) -> list[BitWord]:
    return [BitWord(x) for x in items]
