"""Bilateral DAGs, horizontal positions, and the reduction operators.

A bilateral DAG is a pair of graphs: the left half ``Q[D|E)`` and the right
half ``Q(~E|~D]`` (``~`` = bar).  The gap is ``min depth(right) - min depth(left)``.

A fragmented family starts as ``B[l1|*][*^m|*^m]``: one member per
``lam in Bits(m)``, each a bilateral DAG whose slot 0 is the bilateral
``[l1|*]`` piece.  ``gamma`` fixes the active slot's second coordinate to
``+`` (the SL2 slice) and ``quotient_sim`` keeps the members whose next slot
word is ``-`` and makes that slot the new active one.  Both act only on the
per-node cube coordinates, never on colors.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import permutations
from typing import Callable, Iterable, NamedTuple

from .bitword import BOTH, BitWord, ExtBitWord, bar, minus_count
from .cubes import LEFT, RIGHT, check_slim, fragment, stable_depth, tower
from .dag import CONG, ColoredDag, DagError, Node, disjoint_union, iso, shift_vertical

B_PLUS = "B+"
B_MINUS = "B-"
SL2 = "SL2"


class ShapeError(ValueError):
    """Raised when a graph is not one of the recognized family shapes."""


@dataclass(frozen=True)
class BilateralDag:
    left: ColoredDag
    right: ColoredDag
    h0: int | None = None

    def gap(self) -> int:
        lo, ro = self.left.min_depth(), self.right.min_depth()
        if lo is None or ro is None:
            raise ShapeError("gap of a bilateral DAG with an empty half")
        return ro - lo

    def swap(self) -> "BilateralDag":
        """Exchange the halves."""
        return BilateralDag(self.right, self.left, self.h0)

    def reverse_edges(self) -> "BilateralDag":
        return BilateralDag(self.left.reverse(), self.right.reverse(), self.h0)

    def induced(self, keep_left: Callable, keep_right: Callable) -> "BilateralDag":
        return BilateralDag(
            self.left.induced(lambda v, n: keep_left(n)),
            self.right.induced(lambda v, n: keep_right(n)),
            self.h0,
        )

    def restrict_depth(self, k: int) -> "BilateralDag":
        return BilateralDag(self.left.restrict_depth(k), self.right.restrict_depth(k), self.h0)

    def as_dag(self) -> ColoredDag:
        return disjoint_union([("L", self.left), ("R", self.right)])

    def columns(self) -> list[int]:
        hs = {n.h for q in (self.left, self.right) for n in q.nodes.values()}
        if None in hs:
            raise ShapeError("bilateral DAG has no horizontal positions")
        return sorted(hs)

    def column(self, h: int) -> ColoredDag:
        q = self.as_dag()
        return q.induced(lambda v, n: n.h == h)

    def census(self) -> tuple[int, int]:
        return (len(self.left) + len(self.right), len(self.left.edges) + len(self.right.edges))


def bilateral_tower(cutoff: int) -> BilateralDag:
    """``[ | ] = [ | ) u ( | ]``: two edgeless towers, gap 0."""
    return BilateralDag(tower(cutoff), tower(cutoff))


def bilateral_fragment(
    q: BilateralDag, D: str, E: str, nu: str = "", cutoff: int | None = None
) -> BilateralDag:
    """``Q[D|E]_[nu] = Q[D|E)_[nu] u Q(~E|~D]_[nu]``; free slots of ``D`` become a union."""
    D, E = ExtBitWord(D), ExtBitWord(E)
    if cutoff is None:
        cutoff = max(q.left.max_depth() or 0, q.right.max_depth() or 0)
    check_slim(q.left, cutoff)
    check_slim(q.right, cutoff)
    left = [
        (w, fragment(q.left, w, E=E, nu=nu, cutoff=cutoff, check=False)) for w in D.subset()
    ]
    right = [
        (w, fragment(q.right, w, side=RIGHT, E=E.bar, nu=nu, cutoff=cutoff, check=False))
        for w in D.bar.subset()
    ]
    if len(left) == 1:
        return BilateralDag(left[0][1], right[0][1], q.h0)
    return BilateralDag(disjoint_union(left), disjoint_union(right), q.h0)


def expected_gap(D: str, E: str, base_gap: int = 0) -> int:
    """Gap after ``[D|E]``: ``base + |~D|_- + |~E|_- - |D|_- - |E|_-`` (fixed slots only)."""
    D, E = ExtBitWord(D), ExtBitWord(E)
    return base_gap + D.bar.minus_count + E.bar.minus_count - D.minus_count - E.minus_count


def horizontal_extend(
    q: BilateralDag, hcut: int, h0: int | None = None, cutoff: int | None = None
) -> BilateralDag:
    """Union of the ``2k``-vertical shifts of each half, ``0 <= 2k <= hcut``.

    The left copy shifted by ``2k`` sits at ``h = h0 + 2k``, the right one at
    ``h = h0 - 2 - 2k``.  Depths beyond ``cutoff`` are dropped.
    """
    if h0 is None:
        h0 = q.h0 if q.h0 is not None else 0
    if cutoff is None:
        cutoff = max(q.left.max_depth() or 0, q.right.max_depth() or 0)
    lparts, rparts = [], []
    for k in range(hcut // 2 + 1):
        lq = shift_vertical(q.left, 2 * k).map_nodes(lambda n, k=k: n._replace(h=h0 + 2 * k))
        rq = shift_vertical(q.right, 2 * k).map_nodes(
            lambda n, k=k: n._replace(h=h0 - 2 - 2 * k)
        )
        lparts.append((k, lq.restrict_depth(cutoff)))
        rparts.append((k, rq.restrict_depth(cutoff)))
    return BilateralDag(disjoint_union(lparts), disjoint_union(rparts), h0)


# -- classification -----------------------------------------------------------


class XDagKind(NamedTuple):
    X: str
    m: int
    h0: int

    def __str__(self) -> str:
        return f"({self.X},{self.m}) h0={self.h0}"


@dataclass(frozen=True)
class FamilyShape:
    """Bookkeeping for ``[l1 ...|...]`` families.

    ``D``/``E`` are the first/second slot words over all ``m+1`` slots, with
    ``*`` for slots still indexed by family members (in ``D``) or free (in
    ``E``).  ``order`` lists the slots not yet made active, in processing order.
    """

    lam1: str
    D: ExtBitWord
    E: ExtBitWord
    active: int
    orientation: str
    order: tuple[int, ...]

    @property
    def m_total(self) -> int:
        return len(self.D) - 1


@dataclass(frozen=True)
class FragmentedFamily:
    shape: FamilyShape
    members: dict  # BitWord over slots 1..m  ->  BilateralDag
    cutoff: int
    hcut: int
    h0: int

    @property
    def left(self) -> ColoredDag:
        return disjoint_union(sorted(((k, v.left) for k, v in self.members.items()), key=lambda t: t[0]))

    @property
    def right(self) -> ColoredDag:
        return disjoint_union(sorted(((k, v.right) for k, v in self.members.items()), key=lambda t: t[0]))

    def as_bilateral(self) -> BilateralDag:
        return BilateralDag(self.left, self.right, self.h0)

    def gap(self) -> int:
        lo = min(q.left.min_depth() for q in self.members.values())
        ro = min(q.right.min_depth() for q in self.members.values())
        return ro - lo

    def census(self) -> tuple[int, int, int]:
        n = sum(q.census()[0] for q in self.members.values())
        e = sum(q.census()[1] for q in self.members.values())
        return len(self.members), n, e


def _member(lam1: str, lam: BitWord, orientation: str, cutoff: int, hcut: int) -> BilateralDag:
    t = tower(cutoff)
    left = fragment(t, lam1, cutoff=cutoff)
    right = fragment(t, bar(lam1), side=RIGHT, cutoff=cutoff)
    if orientation == "-":
        left, right = left.reverse(), right.reverse()
    if lam:
        left = fragment(left, lam, cutoff=cutoff, check=False)
        right = fragment(right, bar(lam), side=RIGHT, cutoff=cutoff, check=False)
    h0 = minus_count(lam1)
    return horizontal_extend(BilateralDag(left, right), hcut, h0, cutoff)


def start_family(
    lam1: str, m: int, orientation: str = "+", cutoff: int = 12, hcut: int | None = None,
    order: Iterable[int] | None = None,
) -> FragmentedFamily:
    """The fragmented ``(B, m)`` family ``B[l1|*][*^m|*^m]`` with columns."""
    lam1 = BitWord(lam1)
    if len(lam1) != 1:
        raise ShapeError(f"first slot word must have length 1, got {lam1!s}")
    if orientation not in ("+", "-"):
        raise ShapeError(f"orientation must be '+' or '-', got {orientation!r}")
    if hcut is None:
        hcut = cutoff
    order = tuple(range(1, m + 1)) if order is None else tuple(order)
    if sorted(order) != list(range(1, m + 1)):
        raise ShapeError(f"slot order {order} is not a permutation of 1..{m}")
    shape = FamilyShape(
        str(lam1), ExtBitWord(str(lam1) + BOTH * m), ExtBitWord.full(m + 1), 0, orientation, order
    )
    members = {lam: _member(lam1, lam, orientation, cutoff, hcut) for lam in BitWord.all(m)}
    return FragmentedFamily(shape, members, cutoff, hcut, minus_count(lam1))


def classify(fam: FragmentedFamily) -> XDagKind:
    """``(X, m, h0)`` of a family; checks the gap formula against the graph."""
    s = fam.shape
    predicted = expected_gap(s.D, s.E)
    actual = fam.gap()
    if predicted != actual:
        raise ShapeError(f"gap {actual} disagrees with the slot formula ({predicted})")
    if s.E[s.active] == BOTH:
        X = B_PLUS if s.orientation == "+" else B_MINUS
        g = actual
    else:
        X = SL2
        g = actual - 1
    if g not in (1, -1):
        raise ShapeError(f"gap {actual} is not that of a {X} family")
    h0 = 0 if g == 1 else 1
    if h0 != fam.h0:
        raise ShapeError(f"minuscule weight {h0} does not match the column labels ({fam.h0})")
    return XDagKind(X, len(s.order), h0)


def gamma(fam: FragmentedFamily) -> FragmentedFamily:
    """Restrict the active slot to its SL2 slice."""
    kind = classify(fam)
    if kind.X == SL2:
        raise ShapeError("gamma needs a B-type family")
    a = fam.shape.active
    members = {
        k: q.induced(lambda n: n.coord[a][1] == "+", lambda n: n.coord[a][0] == "-")
        for k, q in fam.members.items()
    }
    E = fam.shape.E
    shape = replace(fam.shape, E=ExtBitWord(E[:a] + "+" + E[a + 1:]))
    return replace(fam, shape=shape, members=members)


def quotient_sim(fam: FragmentedFamily) -> FragmentedFamily:
    """Keep members whose next slot word is ``-``; that slot becomes active."""
    kind = classify(fam)
    if kind.X != SL2:
        raise ShapeError("the quotient step needs an SL2-type family")
    s = fam.shape
    if not s.order:
        raise ShapeError("no fragmented slot left to make active")
    nxt = s.order[0]
    members = {k: q for k, q in fam.members.items() if k[nxt - 1] == "-"}
    shape = FamilyShape(
        s.lam1, ExtBitWord(s.D[:nxt] + "-" + s.D[nxt + 1:]), s.E, nxt, "+", s.order[1:]
    )
    return replace(fam, shape=shape, members=members)


class Stage(NamedTuple):
    index: int
    op: str
    kind: XDagKind
    census: tuple[int, int, int]

    def line(self) -> str:
        f, n, e = self.census
        return f"{self.index:>3}  {self.op:<8} {self.kind}  fragments={f} nodes={n} edges={e}"


def pipeline(
    lam1: str, m: int, orientation: str = "+", cutoff: int = 12, hcut: int | None = None,
    order: Iterable[int] | None = None,
) -> tuple[FragmentedFamily, list[Stage]]:
    """Apply ``gamma`` and ``quotient_sim`` alternately, ``m+1`` gammas in all."""
    fam = start_family(lam1, m, orientation, cutoff, hcut, order)
    trace = [Stage(0, "start", classify(fam), fam.census())]
    i = 1
    while True:
        fam = gamma(fam)
        trace.append(Stage(i, "gamma", classify(fam), fam.census()))
        i += 1
        if not fam.shape.order:
            return fam, trace
        fam = quotient_sim(fam)
        trace.append(Stage(i, "quotient", classify(fam), fam.census()))
        i += 1


def terminal_direct(lam1: str, m: int, cutoff: int = 12, hcut: int | None = None) -> BilateralDag:
    """``SL2[l1 +^m | + -^m]`` built in one step, with columns."""
    if hcut is None:
        hcut = cutoff
    lam = BitWord(lam1) + BitWord.plus(m)
    E = "+" + "-" * m
    t = tower(cutoff)
    left = fragment(t, lam, E=E, cutoff=cutoff)
    right = fragment(t, bar(lam), side=RIGHT, E=bar(E), cutoff=cutoff)
    return horizontal_extend(BilateralDag(left, right), hcut, minus_count(lam1), cutoff)


def terminal_check(lam1: str, m: int, cutoff: int = 12, orientation: str = "+") -> bool:
    """Pipeline output is isomorphic to the direct terminal object (stable depths)."""
    fam, _ = pipeline(lam1, m, orientation, cutoff)
    if len(fam.members) != 1:
        return False
    (out,) = fam.members.values()
    k = stable_depth(cutoff, m + 1)
    a = out.restrict_depth(k).as_dag()
    b = terminal_direct(lam1, m, cutoff).restrict_depth(k).as_dag()
    return not a.edges and iso(a, b, CONG)


def permutation_census(lam1: str, m: int, cutoff: int = 12, hcut: int | None = None) -> dict:
    """Per-stage ``(kind, fragments, nodes, edges, depth multiset)`` for every slot order."""
    from collections import Counter

    out = {}
    for order in permutations(range(1, m + 1)):
        fam = start_family(lam1, m, "+", cutoff, hcut, order)
        rows = []
        while True:
            fam = gamma(fam)
            depths = Counter()
            for q in fam.members.values():
                depths.update((n.h, n.color.depth) for g in (q.left, q.right) for n in g.nodes.values())
            rows.append((classify(fam), fam.census(), tuple(sorted(depths.items()))))
            if not fam.shape.order:
                break
            fam = quotient_sim(fam)
        out[order] = rows
    return out
