"""Finite C_m-colored directed acyclic graphs.

A node carries a color ``(bits, depth)``, an optional horizontal position
``h`` and an optional ``coord``: the cube coordinates it was built from.
``h`` and ``coord`` are bookkeeping; only ``(bits, depth)`` is the color.
Graphs are immutable; every operation returns a new graph.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from typing import Callable, Hashable, Iterable, Iterator, Mapping, NamedTuple

from .bitword import BitWord, minus_count, star

NodeId = Hashable


class DagError(ValueError):
    pass


class Color(NamedTuple):
    bits: BitWord
    depth: int

    def __str__(self) -> str:
        return f"({self.bits or 'e'},{self.depth})"


class Node(NamedTuple):
    color: Color
    h: int | None = None
    coord: tuple = ()


class ColoredDag:
    """A colored DAG.  Acyclicity is checked on construction."""

    __slots__ = ("_nodes", "_edges", "_succ", "_pred")

    def __init__(
        self,
        nodes: Mapping[NodeId, Node],
        edges: Iterable[tuple[NodeId, NodeId]] = (),
        *,
        check: bool = True,
    ):
        self._nodes = dict(nodes)
        self._edges = frozenset(edges)
        self._succ = self._pred = None
        if check:
            for a, b in self._edges:
                if a not in self._nodes or b not in self._nodes:
                    raise DagError(f"edge ({a!r}, {b!r}) has an endpoint outside the graph")
            self._check_acyclic()

    def _adjacency(self) -> None:
        # built on first use; most graphs are only compared by node and edge sets
        succ: dict = defaultdict(list)
        pred: dict = defaultdict(list)
        for a, b in self._edges:
            succ[a].append(b)
            pred[b].append(a)
        self._succ, self._pred = succ, pred

    # -- basic access -------------------------------------------------------

    @property
    def nodes(self) -> Mapping[NodeId, Node]:
        return self._nodes

    @property
    def edges(self) -> frozenset:
        return self._edges

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self) -> Iterator[NodeId]:
        return iter(self._nodes)

    def __contains__(self, v) -> bool:
        return v in self._nodes

    def color(self, v: NodeId) -> Color:
        return self._nodes[v].color

    def succ(self, v: NodeId) -> list:
        if self._succ is None:
            self._adjacency()
        return self._succ.get(v, [])

    def pred(self, v: NodeId) -> list:
        if self._pred is None:
            self._adjacency()
        return self._pred.get(v, [])

    @property
    def bit_length(self) -> int | None:
        for node in self._nodes.values():
            return len(node.color.bits)
        return None

    def colors(self) -> Counter:
        return Counter(n.color for n in self._nodes.values())

    def is_labeled(self) -> bool:
        """True if the coloring (with ``h``) is injective."""
        keys = [(n.color, n.h) for n in self._nodes.values()]
        return len(set(keys)) == len(keys)

    def min_depth(self) -> int | None:
        return min((n.color.depth for n in self._nodes.values()), default=None)

    def max_depth(self) -> int | None:
        return max((n.color.depth for n in self._nodes.values()), default=None)

    def by_color(self) -> dict:
        """Map ``(color, h)`` to node id; only meaningful for labeled graphs."""
        return {(n.color, n.h): v for v, n in self._nodes.items()}

    def census(self) -> tuple[int, int]:
        return len(self._nodes), len(self._edges)

    def __repr__(self) -> str:
        return f"<ColoredDag nodes={len(self._nodes)} edges={len(self._edges)}>"

    def _check_acyclic(self) -> None:
        indeg = {v: 0 for v in self._nodes}
        for _, b in self._edges:
            indeg[b] += 1
        stack = [v for v, d in indeg.items() if d == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for w in self.succ(v):
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
        if seen != len(self._nodes):
            raise DagError("graph has a directed cycle")

    # -- operations ---------------------------------------------------------

    def map_nodes(self, f: Callable[[Node], Node]) -> "ColoredDag":
        """Same graph, node records rewritten by ``f``."""
        return ColoredDag(
            {v: f(n) for v, n in self._nodes.items()}, self._edges, check=False
        )

    def relabel(self, f: Callable[[NodeId], NodeId]) -> "ColoredDag":
        nodes = {f(v): n for v, n in self._nodes.items()}
        if len(nodes) != len(self._nodes):
            raise DagError("relabeling is not injective")
        return ColoredDag(nodes, ((f(a), f(b)) for a, b in self._edges), check=False)

    def induced(self, keep: Callable[[NodeId, Node], bool]) -> "ColoredDag":
        nodes = {v: n for v, n in self._nodes.items() if keep(v, n)}
        edges = [(a, b) for a, b in self._edges if a in nodes and b in nodes]
        return ColoredDag(nodes, edges, check=False)

    def restrict_depth(self, max_depth: int, min_depth: int | None = None) -> "ColoredDag":
        lo = min_depth
        return self.induced(
            lambda v, n: n.color.depth <= max_depth and (lo is None or n.color.depth >= lo)
        )

    def reverse(self) -> "ColoredDag":
        return ColoredDag(self._nodes, ((b, a) for a, b in self._edges), check=False)


def shift_vertical(q: ColoredDag, d: int) -> ColoredDag:
    if d == 0:
        return q
    return q.map_nodes(lambda n: n._replace(color=Color(n.color.bits, n.color.depth + d)))


def shift_horizontal(q: ColoredDag, h: int) -> ColoredDag:
    return q.map_nodes(lambda n: n._replace(h=(n.h or 0) + h))


def set_horizontal(q: ColoredDag, h: int | None) -> ColoredDag:
    return q.map_nodes(lambda n: n._replace(h=h))


def twist(q: ColoredDag, nu: str) -> ColoredDag:
    """Recolor ``(b, d)`` to ``(b*nu, d+|nu|_-)``.

    A ``nu`` shorter than the bit length acts on the trailing bits.
    """
    nu = BitWord(nu)
    k = len(nu)
    if not k:
        return q
    dm = minus_count(nu)
    m = q.bit_length
    if m is not None and k > m:
        raise DagError(f"twist of length {k} on a graph with {m} bits")

    def f(n: Node) -> Node:
        b = n.color.bits
        nb = b[: len(b) - k] + star(b[len(b) - k:], nu)
        return n._replace(color=Color(BitWord(nb), n.color.depth + dm))

    return q.map_nodes(f)


def shift(q: ColoredDag, *, h: int = 0, d: int = 0, nu: str = "") -> ColoredDag:
    """Horizontal ``h``-shift, vertical ``d``-shift and bit-word ``nu``-shift."""
    if h:
        q = shift_horizontal(q, h)
    if d:
        q = shift_vertical(q, d)
    if nu:
        q = twist(q, nu)
    return q


def reverse(q: ColoredDag) -> ColoredDag:
    return q.reverse()


def induced(q: ColoredDag, keep: Callable[[NodeId, Node], bool]) -> ColoredDag:
    return q.induced(keep)


def _sum_h(a: int | None, b: int | None) -> int | None:
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def box_product(q1: ColoredDag, q2: ColoredDag) -> ColoredDag:
    """Cartesian product; node ``(v1, v2)`` gets ``(b1 b2, d1 + d2)``."""
    nodes = {}
    for v1, n1 in q1.nodes.items():
        for v2, n2 in q2.nodes.items():
            nodes[(v1, v2)] = Node(
                Color(n1.color.bits + n2.color.bits, n1.color.depth + n2.color.depth),
                _sum_h(n1.h, n2.h),
                n1.coord + n2.coord,
            )
    edges = []
    for a, b in q2.edges:
        for v1 in q1.nodes:
            edges.append(((v1, a), (v1, b)))
    for a, b in q1.edges:
        for v2 in q2.nodes:
            edges.append(((a, v2), (b, v2)))
    return ColoredDag(nodes, edges, check=False)


def disjoint_union(parts: Iterable[tuple[Hashable, ColoredDag]]) -> ColoredDag:
    """Union of graphs, node ids tagged ``(tag, id)``."""
    nodes = {}
    edges = []
    for tag, q in parts:
        for v, n in q.nodes.items():
            nodes[(tag, v)] = n
        edges.extend(((tag, a), (tag, b)) for a, b in q.edges)
    return ColoredDag(nodes, edges, check=False)


# -- isomorphism --------------------------------------------------------------

CONG = "cong"  # color preserving
SIM = "sim"  # color-class preserving


def _refine(qs: list[ColoredDag], init: list[dict]) -> list[dict]:
    """Joint color refinement; returns per-graph node -> class id."""
    table: dict = {}
    labels = []
    for q, lab in zip(qs, init):
        labels.append({v: table.setdefault(("i", lab[v]), len(table)) for v in q.nodes})
    count = len(set(c for lab in labels for c in lab.values()))
    while True:
        table = {}
        new = []
        for q, lab in zip(qs, labels):
            nl = {}
            for v in q.nodes:
                sig = (
                    lab[v],
                    tuple(sorted(lab[w] for w in q.succ(v))),
                    tuple(sorted(lab[w] for w in q.pred(v))),
                )
                nl[v] = table.setdefault(sig, len(table))
            new.append(nl)
        ncount = len(table)
        labels = new
        if ncount == count:
            return labels
        count = ncount


def find_isomorphism(q1: ColoredDag, q2: ColoredDag, mode: str = CONG) -> dict | None:
    """An edge-preserving bijection ``q1 -> q2`` per ``mode``, or None.

    ``CONG``: colors and horizontal positions are preserved.
    ``SIM``: nodes of equal color map to nodes of equal color.
    """
    if mode not in (CONG, SIM):
        raise ValueError(f"unknown isomorphism mode {mode!r}")
    if len(q1) != len(q2) or len(q1.edges) != len(q2.edges):
        return None

    def key(n: Node):
        return (n.color, n.h)

    if mode == CONG:
        if Counter(key(n) for n in q1.nodes.values()) != Counter(
            key(n) for n in q2.nodes.values()
        ):
            return None
        if q1.is_labeled():
            idx = q2.by_color()
            f = {v: idx[key(n)] for v, n in q1.nodes.items()}
            img = {(f[a], f[b]) for a, b in q1.edges}
            return f if img == set(q2.edges) else None

    f = _coord_witness(q1, q2, key, mode)
    if f is not None:
        return f

    def init(q: ColoredDag) -> dict:
        out = {}
        for v, n in q.nodes.items():
            base = (len(q.succ(v)), len(q.pred(v)))
            out[v] = (key(n),) + base if mode == CONG else base
        return out

    lab1, lab2 = _refine([q1, q2], [init(q1), init(q2)])
    if Counter(lab1.values()) != Counter(lab2.values()):
        return None
    return _backtrack(q1, q2, lab1, lab2, key if mode == SIM else None)


def _coord_witness(q1, q2, key, mode) -> dict | None:
    """Try the bijection that matches cube coordinates; None if it is not an iso."""
    c2 = {}
    for v, n in q2.nodes.items():
        if not n.coord or n.coord in c2:
            return None
        c2[n.coord] = v
    f = {}
    cmap: dict = {}
    for v, n in q1.nodes.items():
        w = c2.get(n.coord)
        if w is None:
            return None
        k1, k2 = key(n), key(q2.nodes[w])
        if mode == CONG and k1 != k2:
            return None
        if cmap.setdefault(k1, k2) != k2:
            return None
        f[v] = w
    if len(set(cmap.values())) != len(cmap) or len(f) != len(q2):
        return None
    return f if {(f[a], f[b]) for a, b in q1.edges} == q2.edges else None


def _search_order(q: ColoredDag, lab: dict) -> list:
    size = Counter(lab.values())
    remaining = set(q.nodes)
    order = []
    while remaining:
        start = min(remaining, key=lambda v: (size[lab[v]], lab[v], repr(v)))
        remaining.discard(start)
        queue = [start]
        i = 0
        while i < len(queue):
            v = queue[i]
            i += 1
            order.append(v)
            nbrs = sorted(
                (w for w in list(q.succ(v)) + list(q.pred(v)) if w in remaining),
                key=lambda w: (size[lab[w]], lab[w], repr(w)),
            )
            for w in nbrs:
                if w in remaining:
                    remaining.discard(w)
                    queue.append(w)
    return order


def _backtrack(q1, q2, lab1, lab2, classkey) -> dict | None:
    order = _search_order(q1, lab1)
    by_class: dict = defaultdict(list)
    for w in sorted(q2.nodes, key=repr):
        by_class[lab2[w]].append(w)
    e2 = q2.edges
    f: dict = {}
    used: set = set()
    cmap: dict = {}
    cmap_owner: dict = {}

    def candidates(v):
        mapped_s = [f[u] for u in q1.succ(v) if u in f]
        mapped_p = [f[u] for u in q1.pred(v) if u in f]
        if mapped_p:
            pool = q2.succ(mapped_p[0])
        elif mapped_s:
            pool = q2.pred(mapped_s[0])
        else:
            pool = by_class[lab1[v]]
        out = []
        n_mapped = len(mapped_s) + len(mapped_p)
        for w in pool:
            if w in used or lab2[w] != lab1[v]:
                continue
            if any((w, x) not in e2 for x in mapped_s):
                continue
            if any((x, w) not in e2 for x in mapped_p):
                continue
            cnt = sum(1 for x in q2.succ(w) if x in used) + sum(
                1 for x in q2.pred(w) if x in used
            )
            if cnt != n_mapped:
                continue
            if classkey is not None:
                c1 = classkey(q1.nodes[v])
                if c1 in cmap and cmap[c1] != classkey(q2.nodes[w]):
                    continue
            out.append(w)
        return out

    stack = [iter(candidates(order[0]))] if order else []
    depth = 0
    while stack:
        v = order[depth]
        nxt = next(stack[-1], None)
        if v in f:
            w_old = f.pop(v)
            used.discard(w_old)
            if classkey is not None and cmap_owner.get(classkey(q1.nodes[v])) == v:
                c1 = classkey(q1.nodes[v])
                del cmap[c1]
                del cmap_owner[c1]
        if nxt is None:
            stack.pop()
            depth -= 1
            continue
        f[v] = nxt
        used.add(nxt)
        if classkey is not None:
            c1 = classkey(q1.nodes[v])
            if c1 not in cmap:
                cmap[c1] = classkey(q2.nodes[nxt])
                cmap_owner[c1] = v
        if depth + 1 == len(order):
            return dict(f)
        depth += 1
        stack.append(iter(candidates(order[depth])))
    return {} if not order else None


def iso(q1: ColoredDag, q2: ColoredDag, mode: str = CONG) -> bool:
    return find_isomorphism(q1, q2, mode) is not None


# -- serialization ------------------------------------------------------------


def canonical_order(q: ColoredDag) -> list:
    """Nodes sorted by (h, color, structural signature, coordinate)."""
    lab = _refine([q], [{v: (n.color, n.h) for v, n in q.nodes.items()}])[0]

    def sig(v):
        n = q.nodes[v]
        return (
            n.h if n.h is not None else 0,
            str(n.color.bits),
            n.color.depth,
            len(q.succ(v)),
            len(q.pred(v)),
            tuple(sorted((str(q.color(w).bits), q.color(w).depth) for w in q.succ(v))),
            tuple(sorted((str(q.color(w).bits), q.color(w).depth) for w in q.pred(v))),
            n.coord,
            lab[v],
            repr(v),
        )

    return sorted(q.nodes, key=sig)


def to_dot(q: ColoredDag, name: str = "Q", comment: str | None = None) -> str:
    order = canonical_order(q)
    index = {v: i for i, v in enumerate(order)}
    lines = [f"digraph {name} {{"]
    if comment:
        for c in comment.splitlines():
            lines.append(f"  // {c}")
    for v in order:
        n = q.nodes[v]
        label = f"b={n.color.bits}, d={n.color.depth}"
        if n.h is not None:
            label += f", h={n.h}"
        lines.append(f'  n{index[v]} [label="{label}"];')
    for a, b in sorted(q.edges, key=lambda e: (index[e[0]], index[e[1]])):
        lines.append(f"  n{index[a]} -> n{index[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
