from collections import Counter
from itertools import product

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from zcube.bitword import BitWord, BitWordError, ExtBitWord, star
from zcube.cubes import (
    LEFT, RIGHT, CubeSpec, FragmentDescriptor, SlimnessError, TowerSpec,
    box_cube_compose, check_slim, concat_spec, cube, fragment, fragmented_cubization,
    is_slim, node_census, segment, span_cubes, stable_depth, tower,
)
from zcube.dag import CONG, SIM, Color, ColoredDag, Node, iso, shift_vertical

CUT = 12


def colors_of(q):
    return Counter((n.color.bits, n.color.depth) for n in q.nodes.values())


def test_one_cube_exact():
    q = cube(CubeSpec.full(1))
    got = {f"{l}|{m}": (str(n.color.bits), n.color.depth) for (l, m), n in q.nodes.items()}
    assert got == {"+|+": ("+", 0), "-|+": ("-", 1), "+|-": ("-", 1), "-|-": ("+", 2)}
    edges = {(f"{a[0]}|{a[1]}", f"{b[0]}|{b[1]}") for a, b in q.edges}
    assert edges == {("-|+", "+|+"), ("-|+", "-|-"), ("+|+", "+|-"), ("-|-", "+|-")}


@pytest.mark.parametrize("m", range(4))
def test_full_cube_counts_and_shape(m):
    q = cube(CubeSpec.full(m))
    assert q.census() == (4 ** m, m * 4 ** m)
    if m == 0:
        return
    g = nx.Graph()
    g.add_nodes_from(q.nodes)
    g.add_edges_from(q.edges)
    assert nx.is_isomorphic(g, nx.hypercube_graph(2 * m))


def test_sub_cube_counts():
    spec = CubeSpec("*-+", "+**")
    q = cube(spec)
    assert len(q) == len(spec.D.subset()) * len(spec.E.subset())


@pytest.mark.parametrize("m", range(4))
def test_segments_are_labeled(m):
    for w in BitWord.all(m):
        assert segment(w).is_labeled()
        assert segment(w, RIGHT).is_labeled()


def test_concatenation():
    a = CubeSpec("-*", "*+", "+-", 1)
    b = CubeSpec("*", "*", "-")
    assert iso(box_cube_compose(a, b), cube(concat_spec(a, b)), CONG)
    e = CubeSpec("", "")
    assert iso(box_cube_compose(a, e), cube(a), CONG)
    for lam, lam2 in product(BitWord.all(2), BitWord.all(1)):
        lhs = box_cube_compose(CubeSpec(lam, "**"), CubeSpec(lam2, "*"))
        assert iso(lhs, cube(CubeSpec(lam + lam2, "***")), SIM)


LAM_PAIRS = [("+", "+"), ("-", "-"), ("*", "-"), ("-", "*")]
MU_PAIRS = [("+", "+"), ("-", "-"), ("*", "+"), ("+", "*")]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda m: st.tuples(
    st.lists(st.sampled_from(LAM_PAIRS), min_size=m, max_size=m),
    st.lists(st.sampled_from(MU_PAIRS), min_size=m, max_size=m))))
def test_span_cubes(pairs):
    lp, mp = pairs
    a = CubeSpec("".join(p[0] for p in lp), "".join(p[0] for p in mp))
    b = CubeSpec("".join(p[1] for p in lp), "".join(p[1] for p in mp))
    prod, merged = span_cubes(a, b)
    assert iso(prod, merged, SIM)
    assert Counter(n.color.depth for n in prod.nodes.values()) == Counter(
        n.color.depth for n in merged.nodes.values())


def test_span_rejects_incompatible():
    with pytest.raises(BitWordError):
        span_cubes(CubeSpec("+", "*"), CubeSpec("-", "+"))
    with pytest.raises(BitWordError):
        span_cubes(CubeSpec("*", "+"), CubeSpec("*", "+"))


def test_tower():
    t = tower(6)
    assert sorted(n.color.depth for n in t.nodes.values()) == [0, 2, 4, 6]
    assert not t.edges and is_slim(t)
    with pytest.raises(ValueError):
        tower(5)


def test_zigzag():
    z = fragment(tower(CUT), "+")
    edges = {(z.color(a), z.color(b)) for a, b in z.edges}
    P, M = BitWord("+"), BitWord("-")
    for k in range(1, CUT // 2):
        assert (Color(P, 2 * k), Color(M, 2 * k + 1)) in edges
        assert (Color(P, 2 * k), Color(M, 2 * k - 1)) in edges
    out0 = [e for e in edges if e[0] == Color(P, 0)]
    assert out0 == [(Color(P, 0), Color(M, 1))]
    assert len(edges) == 2 * (CUT // 2) - 1 + 1


@pytest.mark.parametrize("side", [LEFT, RIGHT])
def test_fragment_nodes_match_segment(side):
    t = tower(CUT)
    for w in BitWord.all(2):
        f = fragment(t, w, side=side)
        from zcube.dag import box_product
        s = box_product(t, segment(w, side)).restrict_depth(CUT)
        assert colors_of(f) == colors_of(s)
        assert f.edges != s.edges or w == ""


@pytest.mark.parametrize("side", [LEFT, RIGHT])
def test_composition_law(side):
    t = tower(CUT)
    stable = stable_depth(CUT, 2)
    for lam, nu in product(list(BitWord.all(2)), repeat=2):
        a = fragment(fragment(t, lam[0], nu=nu[0], side=side), lam[1], nu=nu[1], side=side)
        b = fragment(t, lam, nu=nu, side=side)
        assert iso(a.restrict_depth(stable), b.restrict_depth(stable))


@pytest.mark.parametrize("side", [LEFT, RIGHT])
def test_twist_coherence(side):
    t = tower(CUT)
    stable = stable_depth(CUT, 2)
    for lam, nu in product(list(BitWord.all(2)), repeat=2):
        ln = star(lam, nu)
        lhs = fragment(t, lam, nu=nu, side=side)
        sh = lam.minus_count + nu.minus_count - ln.minus_count
        rhs = shift_vertical(fragment(t, ln, side=side), sh)
        assert iso(lhs.restrict_depth(stable), rhs.restrict_depth(stable))


def test_left_right_duality():
    t = tower(CUT)
    for m in range(3):
        for w in BitWord.all(m):
            left = fragment(t, w).reverse()
            right = fragment(t.reverse(), w, side=RIGHT)
            assert iso(left, right)


@pytest.mark.parametrize("m", range(4))
@pytest.mark.parametrize("side", [LEFT, RIGHT])
def test_fragmented_census(m, side):
    t = tower(CUT)
    fam = fragmented_cubization(t, m, side=side)
    assert len(fam) == 2 ** m
    from zcube.dag import box_product
    whole = box_product(t, cube(CubeSpec.full(m))).restrict_depth(CUT)
    assert node_census(fam.values()) == node_census([whole])
    for f in fam.values():
        assert f.is_labeled() and is_slim(f, CUT)


def test_fragmented_m0_is_base():
    t = tower(8)
    fam = fragmented_cubization(t, 0)
    assert list(fam) == [""] and iso(fam[""], t)


def test_slimness_rejected():
    bad = ColoredDag({0: Node(Color(BitWord(""), 0)), 1: Node(Color(BitWord(""), 4))})
    with pytest.raises(SlimnessError, match=r"\(e,2\) missing"):
        fragment(bad, "+", cutoff=4)
    dup = ColoredDag({0: Node(Color(BitWord(""), 0)), 1: Node(Color(BitWord(""), 0))})
    with pytest.raises(SlimnessError, match="twice"):
        check_slim(dup)
    fat = box_product_full(tower(4), 1)
    assert not is_slim(fat)


def box_product_full(t, m):
    from zcube.dag import box_product
    return box_product(t, cube(CubeSpec.full(m)))


@pytest.mark.parametrize("side", [LEFT, RIGHT])
def test_cutoff_stability(side):
    big, small = 14, 8
    for w in BitWord.all(2):
        a = fragment(tower(big), w, side=side)
        b = fragment(tower(small), w, side=side)
        k = stable_depth(small, 2)
        assert iso(a.restrict_depth(k), b.restrict_depth(k))


def test_restriction_is_induced():
    t = tower(CUT)
    f = fragment(t, "+-")
    r = fragment(t, "+-", E="+*")
    keep = {v for v, n in f.nodes.items() if n.coord[0][1] == "+"}
    assert set(r.nodes) == keep
    assert set(r.edges) == {e for e in f.edges if e[0] in keep and e[1] in keep}


def test_descriptor_nesting():
    inner = FragmentDescriptor("+", base=TowerSpec(CUT))
    outer = FragmentDescriptor("-", base=inner, shift=2)
    q = outer.build()
    direct = shift_vertical(fragment(tower(CUT), "+-"), 2).restrict_depth(CUT)
    k = stable_depth(CUT, outer.total_slots)
    assert iso(q.restrict_depth(k), direct.restrict_depth(k))
    with pytest.raises(BitWordError):
        FragmentDescriptor("++", nu="+")
