"""Characters of colored DAGs and the bosonic formula.

``ch Q = sum over colors of (#nodes of that color) x_{b,d}``.  Everything here
is exact integer arithmetic on finitely supported maps, truncated at a depth.

A fragment descriptor ``(lam, d)`` stands for the tower times ``(lam|*^N)``
shifted so that its top node sits at depth ``d``; its character is
``sum_{j>=0, mu} x_{lam*mu, d + 2j + |mu|_-}``.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from math import comb, factorial
from typing import Iterable, Iterator, Mapping, NamedTuple

from .bitword import BitWord, bar, minus_count, star
from .cubes import CubeSpec, cube, fragment, tower
from .dag import Color, ColoredDag, box_product


def binom(n: int, k: int) -> int:
    """Binomial coefficient, zero outside ``0 <= k <= n``."""
    if n < 0 or k < 0 or k > n:
        return 0
    return comb(n, k)


class CharPoly(Mapping):
    """Finitely supported integer combination of colors ``x_{b,d}``.

    Signed coefficients are allowed so that alternating sums can be formed;
    ``char_of`` always yields non-negative ones.
    """

    __slots__ = ("_c",)

    def __init__(self, data: Mapping | Iterable = ()):
        c = Counter()
        items = data.items() if isinstance(data, Mapping) else data
        for k, v in items:
            if not isinstance(k, Color):
                k = Color(BitWord(k[0]), int(k[1]))
            c[k] += v
        self._c = {k: v for k, v in c.items() if v}

    def __getitem__(self, k):
        return self._c.get(k, 0)

    def __iter__(self) -> Iterator[Color]:
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, CharPoly):
            return self._c == other._c
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def __add__(self, other: "CharPoly") -> "CharPoly":
        out = Counter(self._c)
        out.update(other._c)
        return CharPoly(out)

    def __sub__(self, other: "CharPoly") -> "CharPoly":
        return self + other.scale(-1)

    def __neg__(self) -> "CharPoly":
        return self.scale(-1)

    def scale(self, a: int) -> "CharPoly":
        return CharPoly({k: a * v for k, v in self._c.items()})

    def shift(self, d: int) -> "CharPoly":
        return CharPoly({Color(k.bits, k.depth + d): v for k, v in self._c.items()})

    def truncate(self, max_depth: int) -> "CharPoly":
        return CharPoly({k: v for k, v in self._c.items() if k.depth <= max_depth})

    def support(self) -> frozenset:
        return frozenset(self._c)

    def is_nonnegative(self) -> bool:
        return all(v > 0 for v in self._c.values())

    def __mul__(self, other: "CharPoly") -> "CharPoly":
        """Product under concatenation of bits and addition of depths."""
        out = Counter()
        for a, x in self._c.items():
            for b, y in other._c.items():
                out[Color(a.bits + b.bits, a.depth + b.depth)] += x * y
        return CharPoly(out)

    def sorted_items(self) -> list:
        return sorted(self._c.items(), key=lambda kv: (kv[0].depth, str(kv[0].bits)))

    def __repr__(self) -> str:
        if not self._c:
            return "CharPoly(0)"
        terms = " + ".join(f"{v}*x[{k.bits or 'e'},{k.depth}]" for k, v in self.sorted_items())
        return f"CharPoly({terms})"

    def to_lines(self) -> str:
        return "".join(f"({k.bits or 'e'}, {k.depth}): {v}\n" for k, v in self.sorted_items())

    def to_json(self) -> str:
        rows = [{"bits": str(k.bits), "depth": k.depth, "count": v} for k, v in self.sorted_items()]
        return json.dumps(rows, indent=1)


ZERO = CharPoly()


def char_of(q: ColoredDag) -> CharPoly:
    return CharPoly(Counter(n.color for n in q.nodes.values()))


def char_equiv(c1: CharPoly, c2: CharPoly) -> bool:
    """Equal supports: every color vanishes on one side iff on the other."""
    return c1.support() == c2.support()


class BilateralChar(dict):
    """``h -> CharPoly``."""

    def column(self, h: int) -> CharPoly:
        return self.get(h, ZERO)


def bilateral_char(q) -> BilateralChar:
    """Per-column characters of a bilateral DAG (or any graph with ``h`` labels)."""
    cols: dict = {}
    graphs = (q.left, q.right) if hasattr(q, "left") else (q,)
    for g in graphs:
        for n in g.nodes.values():
            cols.setdefault(n.h, Counter())[n.color] += 1
    return BilateralChar({h: CharPoly(c) for h, c in sorted(cols.items())})


# -- fragment descriptors and signed sums -------------------------------------


class Term(NamedTuple):
    sign: int
    mult: int
    lam: BitWord
    depth: int


def descriptor_char(lam: str, d: int, cutoff: int) -> CharPoly:
    """Character of the tower times ``(lam|*^N)`` with top node at depth ``d``."""
    lam = BitWord(lam)
    out = Counter()
    for mu in BitWord.all(len(lam)):
        b = star(lam, mu)
        base = d + minus_count(mu)
        for depth in range(base, cutoff + 1, 2):
            out[Color(b, depth)] += 1
    return CharPoly(out)


@dataclass
class SignedFragmentSum:
    terms: list[Term] = field(default_factory=list)

    def collected(self) -> dict:
        """``(lam, depth) -> signed multiplicity``, zero entries dropped."""
        c = Counter()
        for t in self.terms:
            c[(t.lam, t.depth)] += t.sign * t.mult
        return {k: v for k, v in sorted(c.items()) if v}

    def evaluate(self, cutoff: int) -> CharPoly:
        """Closed-form evaluation via ``descriptor_char``."""
        out = ZERO
        cache: dict = {}
        for (lam, d), w in self.collected().items():
            if d > cutoff:
                continue
            key = (lam, d)
            if key not in cache:
                cache[key] = descriptor_char(lam, d, cutoff)
            out = out + cache[key].scale(w)
        return out

    def evaluate_graphs(self, cutoff: int) -> CharPoly:
        """Evaluation by building each fragment graph and taking ``char_of``."""
        t = tower(cutoff)
        base_chars: dict = {}
        out = Counter()
        for (lam, d), w in self.collected().items():
            if d > cutoff:
                continue
            if lam not in base_chars:
                base_chars[lam] = char_of(fragment(t, lam, cutoff=cutoff))
            ch = base_chars[lam].shift(d - minus_count(lam)).truncate(cutoff)
            for k, v in ch.items():
                out[k] += w * v
        return CharPoly(out)


def bosonic_sum(N: int, lam1: str, n_max: int) -> SignedFragmentSum:
    """Signed, binomially weighted fragments whose characters add up to the terminal one."""
    if N < 1:
        raise ValueError(f"N must be at least 1, got {N}")
    lam1 = BitWord(lam1)
    terms = []
    for n in range(n_max + 1):
        mult = binom(n + N - 1, N - 1)
        for nu in BitWord.all(N):
            lam = star(lam1, nu[:1]) + bar(nu[1:])
            d = 2 * n + N + minus_count(nu) - minus_count(bar(lam1))
            terms.append(Term((-1) ** minus_count(nu), mult, lam, d))
    return SignedFragmentSum(terms)


def _slot_step(states: dict, a: str, cutoff: int) -> dict:
    """Expand one ``[a|+)`` slot into ``sum_n sum_nu (-1)^|nu| [a|*)_[nu][2n]``."""
    out = Counter()
    for (lam, d), w in states.items():
        for nu in "+-":
            sign = -1 if nu == "-" else 1
            top = d + minus_count(a) + minus_count(nu)
            for n in range(0, (cutoff - top) // 2 + 1):
                out[(lam + star(a, nu), top + 2 * n)] += sign * w
    return {k: v for k, v in out.items() if v}


def bosonic_by_recursion(N: int, lam1: str, cutoff: int) -> SignedFragmentSum:
    """Slot-by-slot expansion down the reduction pipeline.

    Slot 1 carries ``lam1``, later slots carry ``-`` (the surviving quotient
    index); each is expanded by the SL2-to-B character formula and descriptors
    are collected.  Independent of the closed binomial form.
    """
    states = {(BitWord(""), 0): 1}
    for k in range(N):
        states = _slot_step(states, lam1 if k == 0 else "-", cutoff)
    return SignedFragmentSum([Term(1 if w > 0 else -1, abs(w), lam, d) for (lam, d), w in sorted(states.items())])


def terminal_graph(N: int, lam1: str, cutoff: int) -> ColoredDag:
    """``[l1|+)[+^{N-1}|-^{N-1})`` over the tower."""
    return fragment(tower(cutoff), BitWord(lam1) + BitWord.plus(N - 1), E="+" + "-" * (N - 1), cutoff=cutoff)


def verify_bosonic(N: int, lam1: str, cutoff: int, sums: SignedFragmentSum | None = None) -> bool:
    """Exact equality of the terminal character and the bosonic sum up to ``cutoff``."""
    lhs = char_of(terminal_graph(N, lam1, cutoff))
    if sums is None:
        sums = bosonic_sum(N, lam1, cutoff // 2 + 1)
    return lhs == sums.evaluate_graphs(cutoff)


def mutate_sign(s: SignedFragmentSum, i: int) -> SignedFragmentSum:
    terms = list(s.terms)
    t = terms[i]
    terms[i] = t._replace(sign=-t.sign)
    return SignedFragmentSum(terms)


# -- alternating-sum equality -------------------------------------------------


def alternating_coefficient(m: int, k: int) -> int:
    """``sum_nu (-1)^|nu| sum_{0<=n<=k-|nu|} C(m+n-1, m-1)``."""
    total = 0
    for a in range(m + 1):
        inner = sum(binom(m + n - 1, m - 1) for n in range(0, k - a + 1))
        total += (-1) ** a * binom(m, a) * inner
    return total


def alternating_rhs(m: int, cutoff: int) -> CharPoly:
    """``sum_n C(n+m-1,m-1) sum_nu (-1)^|nu| ch[~nu|*^m)_[2(n+|nu|)]``, truncated."""
    out = ZERO
    for nu in BitWord.all(m):
        top_shift = 2 * minus_count(nu)
        lam = bar(nu)
        base = descriptor_char(lam, minus_count(lam), cutoff)
        for n in range(0, cutoff // 2 + 1):
            sh = 2 * n + top_shift
            if sh > cutoff:
                break
            w = (-1) ** minus_count(nu) * binom(n + m - 1, m - 1)
            out = out + base.shift(sh).truncate(cutoff).scale(w)
    return out


def verify_alternating_equality(m: int, k_max: int, cutoff: int | None = None) -> bool:
    """Coefficient of ``x_{-^m, m+2k}`` is 1 for ``k <= k_max``, by formula and by expansion."""
    if m < 1:
        raise ValueError("m must be at least 1")
    if cutoff is None:
        cutoff = m + 2 * k_max
    if any(alternating_coefficient(m, k) != 1 for k in range(k_max + 1)):
        return False
    rhs = alternating_rhs(m, cutoff)
    allminus = BitWord.minus(m)
    return all(
        rhs[Color(allminus, m + 2 * k)] == 1 for k in range(k_max + 1) if m + 2 * k <= cutoff
    )


def verify_alternating_full(m: int, cutoff: int) -> bool:
    """Whole-polynomial equality ``ch[-^m|+^m) = RHS`` up to ``cutoff``."""
    lhs = char_of(fragment(tower(cutoff), BitWord.minus(m), E="+" * m, cutoff=cutoff))
    return lhs == alternating_rhs(m, cutoff)


def binomial_vanishing(m: int, k: int) -> int:
    """``sum_a (-1)^a C(m,a) C(m+k-a, m-1)``; zero for ``m >= 1``."""
    return sum((-1) ** a * binom(m, a) * binom(m + k - a, m - 1) for a in range(m + 1))


def finite_difference(coeffs: list[int], x: int) -> int:
    """``sum_a (-1)^a C(m,a) p(x-a)`` with ``m = len(coeffs) - 1``."""
    m = len(coeffs) - 1

    def p(t):
        return sum(c * t ** i for i, c in enumerate(coeffs))

    return sum((-1) ** a * binom(m, a) * p(x - a) for a in range(m + 1))


def difference_identity_holds(coeffs: list[int], x: int) -> bool:
    m = len(coeffs) - 1
    return finite_difference(coeffs, x) == factorial(m) * coeffs[m]


# -- support-level rewrite log --------------------------------------------------


def sim_audit(cutoff: int) -> list[tuple[str, bool]]:
    """Check the B-to-SL2 support rewrite over the tower for each ``(a, nu_a)``.

    ``ch [a|*)_[nu]`` and ``ch [*|*)_[a*nu][2 (a,nu)=(-,-)]`` must have the same
    support; multiplicities differ, which is why only support is compared.
    """
    t = tower(cutoff)
    log = []
    for a in "+-":
        for nu in "+-":
            lhs = char_of(fragment(t, a, nu=nu, cutoff=cutoff))
            dd = 2 if (a, nu) == ("-", "-") else 0
            full = box_product(t, cube(CubeSpec.full(1, star(a, nu), dd))).restrict_depth(cutoff)
            rhs = char_of(full)
            ok = char_equiv(lhs.truncate(cutoff - 2), rhs.truncate(cutoff - 2))
            log.append((f"[{a}|*)_[{nu}] ~ [*|*)_[{star(a, nu)}][{dd}]", ok))
    return log


# -- column formula -----------------------------------------------------------


def sl2_column_formula(v_same: BilateralChar, v_other: BilateralChar, h: int) -> CharPoly:
    """``sum_{n >= h} ch V^{h=n} - ch V'^{h=n+1}`` over the stored columns.

    Only weights in the parity class of ``v_same`` carry anything; other ``h``
    give 0 (the raw telescoping sum would not vanish there).
    """
    parities = {x % 2 for x, c in v_same.items() if len(c)}
    if parities and h % 2 not in parities:
        return ZERO
    hs = set(v_same) | {x - 1 for x in v_other}
    top = max(hs, default=h)
    out = ZERO
    for n in range(h, top + 1):
        out = out + v_same.column(n) - v_other.column(n + 1)
    return out
