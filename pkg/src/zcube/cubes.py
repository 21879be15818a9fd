"""Hypercube DAGs, segments, fragments over slim bases, and the base tower.

All towers are finite: they stop at an even depth ``cutoff``.  Fragment edges
that would need a base node deeper than the cutoff are silently absent, so a
result is only trustworthy up to ``cutoff - 2m`` where ``m`` counts all the
slots added on top of the tower (see ``stable_depth``).

Node ids: a cube node is ``(lam, mu)``; a node over a base is
``(base_id, (lam, mu))``.  Each node also carries ``coord``, the tuple of
per-slot ``lam_i + mu_i`` strings accumulated from the tower up.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Union

from .bitword import BOTH, MINUS, PLUS, BitWord, BitWordError, ExtBitWord, bar, minus_count, star
from .dag import Color, ColoredDag, DagError, Node, box_product, shift_vertical

LEFT = "left"
RIGHT = "right"


class SlimnessError(DagError):
    pass


def _ext(w) -> ExtBitWord:
    return w if isinstance(w, ExtBitWord) else ExtBitWord(w)


@dataclass(frozen=True)
class CubeSpec:
    """``(D|E)_[nu]`` shifted down by ``offset``."""

    D: ExtBitWord
    E: ExtBitWord
    nu: BitWord = BitWord("")
    offset: int = 0

    def __post_init__(self):
        object.__setattr__(self, "D", _ext(self.D))
        object.__setattr__(self, "E", _ext(self.E))
        nu = BitWord(self.nu) if self.nu else BitWord.plus(len(self.D))
        object.__setattr__(self, "nu", nu)
        if not (len(self.D) == len(self.E) == len(nu)):
            raise BitWordError(
                f"cube slot lengths differ: D={self.D!s} E={self.E!s} nu={nu!s}"
            )

    @property
    def m(self) -> int:
        return len(self.D)

    @classmethod
    def full(cls, m: int, nu: str = "", offset: int = 0) -> "CubeSpec":
        return cls(ExtBitWord.full(m), ExtBitWord.full(m), BitWord(nu), offset)

    def __add__(self, other: "CubeSpec") -> "CubeSpec":
        """Slot concatenation."""
        return CubeSpec(
            self.D + other.D, self.E + other.E, self.nu + other.nu, self.offset + other.offset
        )


def cube_color(lam: str, mu: str, nu: str = "", offset: int = 0) -> Color:
    if not nu:
        nu = BitWord.plus(len(lam))
    b = star(star(lam, mu), nu)
    return Color(b, minus_count(lam) + minus_count(mu) + minus_count(nu) + offset)


@lru_cache(maxsize=4096)
def cube(spec: CubeSpec) -> ColoredDag:
    """The cube DAG ``(D|E)_[nu]``.

    Edges raise one ``-`` of ``lam`` to ``+`` or lower one ``+`` of ``mu`` to
    ``-``, staying inside ``D x E``.
    """
    D, E, nu = spec.D, spec.E, spec.nu
    # per slot: every (lam_i, mu_i) allowed, with its color bit and depth
    slots = []
    for d, e, n in zip(D, E, nu):
        opts = []
        for l in ((PLUS, MINUS) if d == BOTH else (d,)):
            for u in ((PLUS, MINUS) if e == BOTH else (e,)):
                bit = PLUS if (l == u) == (n == PLUS) else MINUS
                opts.append((l, u, bit, (l == MINUS) + (u == MINUS) + (n == MINUS)))
        slots.append(opts)
    free_d = [d == BOTH for d in D]
    free_e = [e == BOTH for e in E]
    new_bw = str.__new__
    nodes = {}
    edges = []
    for combo in product(*slots):
        if combo:
            l, u, b, dd = zip(*combo)
            ls, us = "".join(l), "".join(u)
        else:
            l = u = b = dd = ()
            ls = us = ""
        lam, mu = new_bw(BitWord, ls), new_bw(BitWord, us)
        key = (lam, mu)
        nodes[key] = Node(
            Color(new_bw(BitWord, "".join(b)), sum(dd) + spec.offset), None, tuple(map(str.__add__, l, u))
        )
        for i in range(len(l)):
            if free_d[i] and l[i] == MINUS:
                edges.append((key, (new_bw(BitWord, ls[:i] + PLUS + ls[i + 1:]), mu)))
            if free_e[i] and u[i] == PLUS:
                edges.append((key, (lam, new_bw(BitWord, us[:i] + MINUS + us[i + 1:]))))
    return ColoredDag(nodes, edges, check=False)


def segment(w: str, side: str = LEFT, nu: str = "", offset: int = 0) -> ColoredDag:
    """``(w|*^m)`` on the left, ``(*^m|w)`` on the right."""
    w = BitWord(w)
    full = ExtBitWord.full(len(w))
    if side == LEFT:
        return cube(CubeSpec(ExtBitWord(w), full, BitWord(nu), offset))
    return cube(CubeSpec(full, ExtBitWord(w), BitWord(nu), offset))


def box_cube_compose(*specs: CubeSpec) -> ColoredDag:
    """Box product of the cubes, left to right.

    Equal (as colored graphs, up to node names) to ``cube(sum(specs))``.
    """
    out = None
    for s in specs:
        c = cube(s)
        out = c if out is None else box_product(out, c)
    if out is None:
        return cube(CubeSpec("", ""))
    return out


def concat_spec(*specs: CubeSpec) -> CubeSpec:
    out = CubeSpec("", "")
    for s in specs:
        out = out + s
    return out


_LAM_OK = {("+", "+"), ("-", "-"), (BOTH, "-"), ("-", BOTH)}
_MU_OK = {("+", "+"), ("-", "-"), (BOTH, "+"), ("+", BOTH)}


def span_cubes(a: CubeSpec, b: CubeSpec) -> tuple[ColoredDag, ColoredDag]:
    """Two cubes sharing a start node span a larger one.

    ``a`` and ``b`` live on the same ``m`` slots.  Returns the box product and
    the merged cube ``(D u D'|E u E')`` shifted by ``|lam mu|_-`` of the shared
    start; the two are isomorphic in the color-class sense.
    """
    if a.m != b.m:
        raise BitWordError(f"span needs equal slot counts, got {a.m} and {b.m}")
    if a.nu.minus_count or b.nu.minus_count:
        raise BitWordError("span is only defined for untwisted cubes")
    D, E = [], []
    for i in range(a.m):
        pl, pm = (a.D[i], b.D[i]), (a.E[i], b.E[i])
        if pl not in _LAM_OK:
            raise BitWordError(f"slot {i}: first words {pl} do not share a start")
        if pm not in _MU_OK:
            raise BitWordError(f"slot {i}: second words {pm} do not share a start")
        D.append(BOTH if BOTH in pl else pl[0])
        E.append(BOTH if BOTH in pm else pm[0])
    lam = "".join("+" if p == ("+", "+") else "-" for p in zip(a.D, b.D))
    mu = "".join("-" if p == ("-", "-") else "+" for p in zip(a.E, b.E))
    d = minus_count(lam) + minus_count(mu)
    merged = cube(CubeSpec("".join(D), "".join(E), "", d + a.offset + b.offset))
    return box_cube_compose(a, b), merged


# -- towers and slimness ------------------------------------------------------


@dataclass(frozen=True)
class TowerSpec:
    cutoff: int

    def __post_init__(self):
        if self.cutoff < 0 or self.cutoff % 2:
            raise ValueError(f"tower cutoff must be even and non-negative, got {self.cutoff}")

    def build(self) -> ColoredDag:
        return tower(self.cutoff)


def tower(cutoff: int, h: int | None = None) -> ColoredDag:
    """The edgeless tower ``{(e, 2k) : 0 <= 2k <= cutoff}``."""
    TowerSpec(cutoff)
    empty = BitWord("")
    return ColoredDag(
        {2 * k: Node(Color(empty, 2 * k), h, ()) for k in range(cutoff // 2 + 1)}, ()
    )


def slimness_violation(q: ColoredDag, cutoff: int | None = None):
    """None if ``q`` is slim up to ``cutoff``, else a description."""
    seen = set()
    for n in q.nodes.values():
        k = (n.color, n.h)
        if k in seen:
            return f"color {n.color} (h={n.h}) occurs twice"
        seen.add(k)
    if cutoff is None:
        cutoff = q.max_depth()
    for c, h in seen:
        if c.depth + 2 <= cutoff and (Color(c.bits, c.depth + 2), h) not in seen:
            return f"color {c} (h={h}) present but ({c.bits or 'e'},{c.depth + 2}) missing"
    return None


def is_slim(q: ColoredDag, cutoff: int | None = None) -> bool:
    return slimness_violation(q, cutoff) is None


def check_slim(q: ColoredDag, cutoff: int | None = None) -> None:
    msg = slimness_violation(q, cutoff)
    if msg:
        raise SlimnessError(f"base is not slim: {msg}")


# -- fragments ----------------------------------------------------------------


def fragment(
    base: ColoredDag,
    w: str,
    *,
    side: str = LEFT,
    nu: str = "",
    E: str | None = None,
    cutoff: int | None = None,
    check: bool = True,
) -> ColoredDag:
    """The left fragment ``base[w|*^m)_[nu]`` or right fragment ``base(*^m|w]_[nu]``.

    ``w`` is the fixed slot word as written: on the right it sits in the second
    slot.  Nodes are those of the segment over ``base``; edges are the segment's
    plus the opposite segment's, shifted by ``-2m`` and matched back by color.
    ``E`` restricts the free slot.  The result is cut at ``cutoff`` (default:
    the base's maximal depth).
    """
    w = BitWord(w)
    m = len(w)
    if side not in (LEFT, RIGHT):
        raise ValueError(f"side must be {LEFT!r} or {RIGHT!r}, got {side!r}")
    if cutoff is None:
        cutoff = base.max_depth() or 0
    if check:
        check_slim(base, cutoff)
    full = ExtBitWord.full(m)
    free = full if E is None else _ext(E)
    if len(free) != m:
        raise BitWordError(f"restriction {free!s} has length {len(free)}, expected {m}")
    nu = BitWord(nu) if nu else BitWord.plus(m)
    if side == LEFT:
        own = CubeSpec(ExtBitWord(w), free, nu)
        other = CubeSpec(full, ExtBitWord(bar(w)), nu, -2 * m)
    else:
        own = CubeSpec(free, ExtBitWord(w), nu)
        other = CubeSpec(ExtBitWord(bar(w)), full, nu, -2 * m)
    q = box_product(base, cube(own)).restrict_depth(cutoff)
    if m == 0:
        return q
    idx = q.by_color()
    edges = set(q.edges)
    opp = box_product(base, cube(other))
    for a, b in opp.edges:
        na, nb = opp.nodes[a], opp.nodes[b]
        va = idx.get((na.color, na.h))
        vb = idx.get((nb.color, nb.h))
        if va is not None and vb is not None:
            edges.add((va, vb))
    return ColoredDag(q.nodes, edges)


def fragmented_cubization(
    base: ColoredDag,
    m: int,
    nu: str = "",
    side: str = LEFT,
    cutoff: int | None = None,
) -> dict[BitWord, ColoredDag]:
    """Every fragment of ``base(*^m|*^m)_[nu]``, keyed by its fixed slot word."""
    if cutoff is None:
        cutoff = base.max_depth() or 0
    check_slim(base, cutoff)
    return {
        w: fragment(base, w, side=side, nu=nu, cutoff=cutoff, check=False)
        for w in BitWord.all(m)
    }


@dataclass(frozen=True)
class FragmentDescriptor:
    """A fragment over a tower or over another fragment, then shifted by ``shift``."""

    word: BitWord
    side: str = LEFT
    nu: BitWord = BitWord("")
    shift: int = 0
    base: Union[TowerSpec, "FragmentDescriptor"] = field(default_factory=lambda: TowerSpec(12))

    def __post_init__(self):
        object.__setattr__(self, "word", BitWord(self.word))
        object.__setattr__(self, "nu", BitWord(self.nu) if self.nu else BitWord.plus(len(self.word)))
        if len(self.nu) != len(self.word):
            raise BitWordError(f"twist {self.nu!s} does not match word {self.word!s}")

    @property
    def cutoff(self) -> int:
        return self.base.cutoff

    @property
    def total_slots(self) -> int:
        inner = self.base.total_slots if isinstance(self.base, FragmentDescriptor) else 0
        return inner + len(self.word)

    def build(self) -> ColoredDag:
        base = self.base.build()
        q = fragment(base, self.word, side=self.side, nu=self.nu, cutoff=self.cutoff)
        if self.shift:
            q = shift_vertical(q, self.shift).restrict_depth(self.cutoff)
        return q


def stable_depth(cutoff: int, m: int) -> int:
    """Largest depth whose neighborhood is unaffected by truncation."""
    return cutoff - 2 * m


def node_census(qs: Iterable[ColoredDag]):
    """Multiset of ``(color, h)`` over a family of graphs."""
    from collections import Counter

    out: Counter = Counter()
    for q in qs:
        out.update((n.color, n.h) for n in q.nodes.values())
    return out
