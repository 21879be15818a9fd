"""Graph-level checks of defragmentation, the P+- families and shift systems.

Everything here is a finite census or character identity.  Fragment node ids
are shared with the full cubization (``(base_id, (lam, mu))``), so unions of
fragments can be compared with the cube directly.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .bilateral import gamma, quotient_sim, start_family
from .bitword import BOTH, BitWord, minus_count
from .characters import ZERO, BilateralChar, CharPoly, bilateral_char, char_of, sl2_column_formula
from .cubes import LEFT, CubeSpec, cube, fragment, tower
from .dag import ColoredDag, box_product


class FamilyError(ValueError):
    pass


def _interior(cutoff: int, N: int, h: int = 0) -> int:
    return cutoff - 2 * (N + 1) - max(h, 0)


# -- fragment families and defragmentation ------------------------------------


@dataclass
class FragmentFamily:
    """Fragments ``base[lam|*^n)`` indexed by ``lam``; keys may carry ``*`` once merged."""

    base: ColoredDag
    n: int
    members: dict
    cutoff: int
    side: str = LEFT
    nu: str = ""

    def check_complete(self) -> None:
        want = {str(w) for w in BitWord.all(self.n)}
        have = {str(k) for k in self.members}
        if want != have:
            missing = sorted(want - have)
            raise FamilyError(f"family is incomplete: missing {missing[:4]}")

    def union(self) -> tuple[dict, set]:
        nodes, edges = {}, set()
        for q in self.members.values():
            nodes.update(q.nodes)
            edges.update(q.edges)
        return nodes, edges


def fragment_family(base: ColoredDag, n: int, cutoff: int | None = None, nu: str = "") -> FragmentFamily:
    if cutoff is None:
        cutoff = base.max_depth() or 0
    members = {w: fragment(base, w, nu=nu, cutoff=cutoff) for w in BitWord.all(n)}
    return FragmentFamily(base, n, members, cutoff, LEFT, nu)


def full_cubization(base: ColoredDag, n: int, cutoff: int, nu: str = "") -> ColoredDag:
    return box_product(base, cube(CubeSpec.full(n, nu))).restrict_depth(cutoff)


def _lam(v) -> str:
    return v[1][0]


@dataclass
class DefragReport:
    nodes_equal: bool
    node_count: int
    cube_edges: int
    fragment_edges: int
    deficit: set = field(repr=False)
    cross_edges: set = field(repr=False)

    @property
    def deficit_is_cross(self) -> bool:
        return self.deficit == self.cross_edges

    @property
    def ok(self) -> bool:
        return self.nodes_equal and self.deficit_is_cross

    def line(self) -> str:
        return (
            f"nodes={self.node_count} cube_edges={self.cube_edges} "
            f"fragment_edges={self.fragment_edges} deficit={len(self.deficit)}"
        )


def defragment_census(F: FragmentFamily, cutoff: int | None = None) -> DefragReport:
    """Compare the fragment union with the full cubization.

    The deficit is the set of cube edges missing from the union; it should be
    exactly the edges joining different fragments (a change of ``lam``).
    """
    F.check_complete()
    if cutoff is None:
        cutoff = F.cutoff
    full = full_cubization(F.base, F.n, cutoff, F.nu)
    nodes, edges = F.union()
    nodes = {v: n for v, n in nodes.items() if n.color.depth <= cutoff}
    full_census = Counter((n.color, n.h) for n in full.nodes.values())
    frag_census = Counter((n.color, n.h) for n in nodes.values())
    cube_edges = set(full.edges)
    deficit = cube_edges - edges
    cross = {(a, b) for a, b in cube_edges if _lam(a) != _lam(b)}
    return DefragReport(
        full_census == frag_census and set(nodes) == set(full.nodes),
        len(nodes), len(cube_edges), len(edges), deficit, cross,
    )


def _key_merge(key: str, slots) -> str:
    k = list(key)
    for i in slots:
        k[i] = BOTH
    return "".join(k)


def partial_defragment(members: dict, slots, full: ColoredDag) -> dict:
    """Merge members over ``slots`` and add the cube edges inside each merged group."""
    groups: dict = {}
    for key, (nodes, edges) in members.items():
        g = groups.setdefault(_key_merge(str(key), slots), [set(), set()])
        g[0] |= nodes
        g[1] |= edges
    out = {}
    for key, (nodes, edges) in groups.items():
        inner = {(a, b) for a, b in full.edges if a in nodes and b in nodes}
        out[key] = (frozenset(nodes), frozenset(edges | inner))
    return out


def _vlambda_family(lam1: str, N: int, cutoff: int):
    base = fragment(tower(cutoff), lam1, cutoff=cutoff)
    fam = fragment_family(base, N - 1, cutoff)
    members = {str(k): (set(q.nodes), set(q.edges)) for k, q in fam.members.items()}
    return fam, members, full_cubization(base, N - 1, cutoff)


def _census(groups: dict) -> tuple[int, int, int]:
    return (
        len(groups),
        sum(len(n) for n, _ in groups.values()),
        sum(len(e) for _, e in groups.values()),
    )


def fubini_check(N: int, I, J, cutoff: int = 12, lam1: str = "+") -> bool:
    """Defragmenting over ``I`` then ``J`` equals ``J`` then ``I`` equals ``I u J`` at once.

    Slots are numbered ``2..N``; slot 1 is the fixed first slot ``lam1``.
    """
    I, J = set(I), set(J)
    if I & J:
        raise FamilyError(f"slot sets overlap: {sorted(I & J)}")
    if not (I | J) <= set(range(2, N + 1)):
        raise FamilyError(f"slots must lie in 2..{N}")
    _, members, full = _vlambda_family(lam1, N, cutoff)
    pos = lambda S: sorted(i - 2 for i in S)
    a = partial_defragment(partial_defragment(members, pos(I), full), pos(J), full)
    b = partial_defragment(partial_defragment(members, pos(J), full), pos(I), full)
    c = partial_defragment(members, pos(I | J), full)
    return a == b == c and _census(a) == _census(c)


def subquotient_check(N: int, I, cutoff: int = 12, lam1: str = "+") -> bool:
    """Fixing ``lam_I`` inside the full defragmentation gives the partial one over the rest."""
    I = set(I)
    rest = set(range(2, N + 1)) - I
    _, members, full = _vlambda_family(lam1, N, cutoff)
    (whole,) = partial_defragment(members, range(N - 1), full).values()
    nodes, edges = whole
    part = partial_defragment(members, sorted(i - 2 for i in rest), full)
    for key, (pn, pe) in part.items():
        fixed = {i - 2: key[i - 2] for i in I}
        sub = {v for v in nodes if all(_lam(v)[j] == s for j, s in fixed.items())}
        sub_edges = {(a, b) for a, b in edges if a in sub and b in sub}
        if sub != pn or sub_edges != pe:
            return False
    return True


# -- P+- ----------------------------------------------------------------------


@dataclass
class GradedFamily:
    """``n -> (multiplicity, W_n)`` for an SL2-graded object."""

    sign: str
    N: int
    h0: int
    parts: dict
    inherited_edges: frozenset = frozenset()

    def multiplicities(self) -> dict:
        return {n: m for n, (m, _) in sorted(self.parts.items())}

    def check(self) -> None:
        for n, (m, _) in self.parts.items():
            if m != n + 1:
                raise FamilyError(f"multiplicity {m} at weight {n} is not {n + 1}")
            if n % 2 != self.h0:
                raise FamilyError(f"weight {n} has the wrong parity for h0={self.h0}")


def _lacking_block(v, node) -> bool:
    return node.coord[0] == "++"


def build_P(sign: str, N: int, cutoff: int) -> GradedFamily:
    """``P_-``: ``C^{2d} x (*^N|*^N)[2(d-1)]``.  ``P_+``: ``C^{2d+1} x (*|*)_[-](*^{N-1}|*^{N-1})[2(d-1)]``,
    where ``W_0`` lacks its first-slot ``(+|+)`` block (edges kept from the ambient cube).
    """
    if N < 1:
        raise FamilyError(f"N must be at least 1, got {N}")
    parts = {}
    if sign == "-":
        d = 1
        while 2 * (d - 1) <= cutoff:
            parts[2 * d - 1] = (2 * d, cube(CubeSpec.full(N, "", 2 * (d - 1))))
            d += 1
        return GradedFamily("-", N, 1, parts)
    if sign != "+":
        raise FamilyError(f"sign must be '+' or '-', got {sign!r}")
    nu = "-" + "+" * (N - 1)
    d = 0
    while 2 * (d - 1) <= cutoff:
        w = cube(CubeSpec.full(N, nu, 2 * (d - 1)))
        if d == 0:
            w = w.induced(lambda v, n: not _lacking_block(v, n))
        parts[2 * d] = (2 * d + 1, w)
        d += 1
    return GradedFamily("+", N, 0, parts, frozenset({0}))


def lacking_block_size(N: int) -> int:
    """Nodes removed from ``W_0``: the full first-slot ``(+|+)`` block."""
    full = cube(CubeSpec.full(N, "-" + "+" * (N - 1), -2))
    return sum(1 for v, n in full.nodes.items() if _lacking_block(v, n))


def _vchars(N: int, cutoff: int) -> dict:
    return {
        lam1: bilateral_char(start_family(lam1, N - 1, orientation="-", cutoff=cutoff).as_bilateral())
        for lam1 in "+-"
    }


def P_column(v: dict, sign: str, h: int) -> CharPoly:
    """Weight ``h`` of the extension ``V_s^h -> P^h -> V_{-s}^{h-1}``."""
    other = "+" if sign == "-" else "-"
    return v[sign].column(h) + v[other].column(h - 1)


def check_P(sign: str, N: int, cutoff: int) -> bool:
    """Multiplicity spaces of ``P`` read off the V columns agree with ``build_P``."""
    P = build_P(sign, N, cutoff)
    P.check()
    v = _vchars(N, cutoff)
    for n, (_, w) in P.parts.items():
        k = _interior(cutoff, N, n)
        if k < 0:
            continue
        got = P_column(v, sign, n) - P_column(v, sign, n + 2)
        if got.truncate(k) != char_of(w).truncate(k):
            return False
    return True


# -- shift systems ------------------------------------------------------------


def weight_multiplicity(g: BilateralChar, h: int) -> CharPoly:
    return g.column(h) - g.column(h + 2)


def grothendieck_check(N: int, lam1: str, h: int, cutoff: int = 14) -> bool:
    """``[W_{lam1,h}] = [(lam1|+)(*^{N-1}|*^{N-1})_[h - |lam1|]]`` or 0 off parity.

    ``W`` is read from the columns of gamma applied to the fragmented ``V_lam1``
    model; ``h`` is a dominant weight.
    """
    if h < 0:
        raise FamilyError(f"multiplicity spaces are indexed by dominant weights, got h={h}")
    k = _interior(cutoff, N, h)
    if k < 0:
        raise FamilyError(f"h={h} is outside the interior of cutoff {cutoff}")
    h0 = minus_count(BitWord(lam1))
    g = bilateral_char(gamma(start_family(lam1, N - 1, orientation="-", cutoff=cutoff)).as_bilateral())
    w = weight_multiplicity(g, h)
    if (h - h0) % 2:
        want = ZERO
    else:
        rest = BOTH * (N - 1)
        want = char_of(cube(CubeSpec(lam1 + rest, "+" + rest, "", h - h0)))
    return w.truncate(k) == want.truncate(k)


def telescope(v_same: BilateralChar, v_other: BilateralChar, h: int) -> CharPoly:
    """``sum_{n >= h} V^n - sum_{n >= h+1} V'^n`` by tail sums."""
    top = max(list(v_same) + list(v_other) + [h])
    tail_same = tail_other = ZERO
    for n in range(top, h, -1):
        tail_same = tail_same + v_same.column(n)
        tail_other = tail_other + v_other.column(n)
    return tail_same + v_same.column(h) - tail_other


def felder_telescope_check(N: int, lam1: str, cutoff: int = 12) -> bool:
    """Gamma output columns equal the telescoped input pair on their parity class."""
    m = N - 1
    other = "-" if lam1 == "+" else "+"
    same = start_family(lam1, m, orientation="-", cutoff=cutoff)
    vs = bilateral_char(same.as_bilateral())
    vo = bilateral_char(start_family(other, m, orientation="-", cutoff=cutoff).as_bilateral())
    g = bilateral_char(gamma(same).as_bilateral())
    h0 = minus_count(BitWord(lam1))
    lo, hi = min(vs) - 2, max(vs) + 2
    for h in range(lo, hi + 1):
        want = telescope(vs, vo, h) if (h - h0) % 2 == 0 else ZERO
        if g.column(h) != want or sl2_column_formula(vs, vo, h) != want:
            return False
    return telescope(vs, vo, hi + 2) == ZERO


def stage_weight_census(N: int, lam1: str, cutoff: int = 16) -> list[tuple[int, str, str, bool]]:
    """Per gamma stage: does every weight multiplicity equal its ``(D|E)`` hypercube census?"""
    h0 = minus_count(BitWord(lam1))
    fam = start_family(lam1, N - 1, orientation="-", cutoff=cutoff)
    out = []
    stage = 0
    while True:
        fam = gamma(fam)
        stage += 1
        g = bilateral_char(fam.as_bilateral())
        s = fam.shape
        ok = True
        for h in range(h0, cutoff, 2):
            k = _interior(cutoff, N, h)
            if k < 0:
                break
            w = weight_multiplicity(g, h)
            want = char_of(cube(CubeSpec(s.D, s.E, "", h - h0)))
            ok = ok and w.is_nonnegative() and w.truncate(k) == want.truncate(k)
        out.append((stage, str(s.D), str(s.E), ok))
        if not s.order:
            return out
        fam = quotient_sim(fam)
