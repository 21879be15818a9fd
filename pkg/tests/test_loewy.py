from itertools import product
from math import comb

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zcube.bilateral import terminal_direct
from zcube.bitword import BitWord
from zcube.characters import CharPoly, bilateral_char, char_of
from zcube.cubes import CubeSpec, cube, fragment, tower
from zcube.dag import CONG, iso
from zcube.loewy import (
    FamilyError,
    _vchars,
    build_P,
    check_P,
    stage_weight_census,
    defragment_census,
    felder_telescope_check,
    fragment_family,
    fubini_check,
    grothendieck_check,
    lacking_block_size,
    partial_defragment,
    subquotient_check,
    telescope,
    _vlambda_family,
)


def hand_cross_edges(n, cutoff):
    """Raise one '-' of lam to '+' at the same tower level, both ends within the cutoff."""
    out = set()
    for k in range(0, cutoff + 1, 2):
        for lam in product("+-", repeat=n):
            for mu in product("+-", repeat=n):
                d = k + lam.count("-") + mu.count("-")
                if d > cutoff:
                    continue
                for i in range(n):
                    if lam[i] == "-":
                        lam2 = lam[:i] + ("+",) + lam[i + 1:]
                        a = (k, ("".join(lam), "".join(mu)))
                        b = (k, ("".join(lam2), "".join(mu)))
                        out.add((a, b))
    return out


def hand_node_count(n, cutoff):
    return sum(
        comb(n, a) * comb(n, b)
        for k in range(0, cutoff + 1, 2)
        for a in range(n + 1)
        for b in range(n + 1)
        if k + a + b <= cutoff
    )


@pytest.mark.parametrize("n", range(4))
def test_defragment_nodes_match_cube(n):
    r = defragment_census(fragment_family(tower(12), n, 12))
    assert r.nodes_equal
    assert r.node_count == hand_node_count(n, 12)


def test_defragment_zero_slots_no_deficit():
    r = defragment_census(fragment_family(tower(12), 0, 12))
    assert r.deficit == set() and r.ok


@pytest.mark.parametrize("n", [1, 2])
def test_deficit_is_cross_edges(n):
    r = defragment_census(fragment_family(tower(12), n, 12))
    keyed = {((a[0], (str(a[1][0]), str(a[1][1]))), (b[0], (str(b[1][0]), str(b[1][1])))) for a, b in r.deficit}
    assert keyed == hand_cross_edges(n, 12)
    assert r.deficit
    assert r.deficit_is_cross


@pytest.mark.parametrize("lam1", "+-")
def test_defragment_over_fragment_base(lam1):
    base = fragment(tower(12), lam1, cutoff=12)
    assert defragment_census(fragment_family(base, 2, 12)).ok


def test_incomplete_family_rejected():
    F = fragment_family(tower(8), 2, 8)
    F.members.pop(BitWord("++"))
    with pytest.raises(FamilyError):
        defragment_census(F)


def disjoint_pairs(N):
    slots = list(range(2, N + 1))
    for I in range(1 << len(slots)):
        for J in range(1 << len(slots)):
            if I & J:
                continue
            yield (
                {s for i, s in enumerate(slots) if I >> i & 1},
                {s for i, s in enumerate(slots) if J >> i & 1},
            )


@pytest.mark.parametrize("lam1", "+-")
def test_fubini_all_disjoint_pairs(lam1):
    for I, J in disjoint_pairs(3):
        assert fubini_check(3, I, J, 12, lam1)


def test_fubini_overlap_rejected():
    with pytest.raises(FamilyError):
        fubini_check(3, {2}, {2, 3})
    with pytest.raises(FamilyError):
        fubini_check(3, {1}, set())


def test_fubini_empty_trivial():
    assert fubini_check(2, set(), set())


@settings(max_examples=15, deadline=None)
@given(st.permutations([0, 1, 2]), st.sampled_from("+-"))
def test_merge_order_free(perm, lam1):
    _, members, full = _vlambda_family(lam1, 4, 10)
    seq = members
    for i in perm:
        seq = partial_defragment(seq, [i], full)
    assert seq == partial_defragment(members, [0, 1, 2], full)


@pytest.mark.parametrize("I", [{2}, {3}, {2, 3}, set()])
@pytest.mark.parametrize("lam1", "+-")
def test_subquotient(I, lam1):
    assert subquotient_check(3, I, 12, lam1)


def test_fully_merged_is_cube_plus_fragment_extras():
    fam, members, full = _vlambda_family("+", 3, 12)
    (whole,) = partial_defragment(members, range(2), full).values()
    nodes, edges = whole
    assert nodes == set(full.nodes)
    assert set(full.edges) <= edges


# -- P+- ----------------------------------------------------------------------


@pytest.mark.parametrize("N", [1, 2, 3])
def test_P_multiplicities(N):
    pm, pp = build_P("-", N, 12), build_P("+", N, 12)
    assert pm.h0 == 1 and pp.h0 == 0
    assert all(m == 2 * ((n + 1) // 2) for n, m in pm.multiplicities().items())
    assert list(pm.multiplicities()) == [2 * d - 1 for d in range(1, 8)]
    assert all(m == n + 1 for n, m in pp.multiplicities().items())
    assert list(pp.multiplicities()) == [2 * d for d in range(0, 8)]
    pm.check()
    pp.check()


@pytest.mark.parametrize("N", [1, 2, 3])
def test_W_shapes(N):
    pm = build_P("-", N, 8)
    for n, (_, w) in pm.parts.items():
        assert iso(w, cube(CubeSpec.full(N, "", n - 1)), CONG)
        g = nx.Graph([(a, b) for a, b in w.edges])
        assert nx.is_isomorphic(g, nx.hypercube_graph(2 * N))
        assert len(w.nodes) == 4 ** N
    pp = build_P("+", N, 8)
    for n, (_, w) in pp.parts.items():
        if n:
            assert len(w.nodes) == 4 ** N
            assert min(x.color.depth for x in w.nodes.values()) == n - 1


@pytest.mark.parametrize("N", [1, 2, 3])
def test_W0_lacking_block(N):
    # the removed (+|+) first slot times the full (N-1)-slot cube: 4^{N-1} nodes
    assert lacking_block_size(N) == 4 ** (N - 1)
    _, w0 = build_P("+", N, 8).parts[0]
    assert len(w0.nodes) == 4 ** N - 4 ** (N - 1)
    assert all(n.coord[0] != "++" for n in w0.nodes.values())
    full = cube(CubeSpec.full(N, "-" + "+" * (N - 1), -2))
    assert set(w0.edges) == {(a, b) for a, b in full.edges if a in w0.nodes and b in w0.nodes}


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("sign", "+-")
def test_P_from_V_columns(N, sign):
    assert check_P(sign, N, 14)


# -- shift systems ------------------------------------------------------------


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("lam1", "+-")
def test_grothendieck(N, lam1):
    for h in range(0, 5):
        assert grothendieck_check(N, lam1, h, 14)


def test_grothendieck_N1_alternates():
    from zcube.bilateral import gamma, start_family
    from zcube.loewy import weight_multiplicity

    g = bilateral_char(gamma(start_family("+", 0, orientation="-", cutoff=12)).as_bilateral())
    sizes = [len(weight_multiplicity(g, h).truncate(6)) for h in range(6)]
    assert sizes == [1, 0, 1, 0, 1, 0]


def test_grothendieck_N2_is_two_cube():
    from zcube.bilateral import gamma, start_family
    from zcube.loewy import weight_multiplicity

    g = bilateral_char(gamma(start_family("+", 1, orientation="-", cutoff=14)).as_bilateral())
    w = weight_multiplicity(g, 0).truncate(8)
    assert w == char_of(cube(CubeSpec("+*", "+*"))).truncate(8)
    assert sum(w.values()) == 4


def test_grothendieck_rejects_negative_weight():
    with pytest.raises(FamilyError):
        grothendieck_check(2, "+", -2)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
@pytest.mark.parametrize("lam1", "+-")
def test_felder_telescope(N, lam1):
    assert felder_telescope_check(N, lam1, 12)


@pytest.mark.parametrize("lam1", "+-")
def test_telescope_N1_by_hand(lam1):
    # m=0: the SL2 output is the terminal object on one slot
    v = _vchars(1, 12)
    other = "-" if lam1 == "+" else "+"
    direct = bilateral_char(terminal_direct(lam1, 0, 12))
    h0 = 1 if lam1 == "-" else 0
    for h in range(-12, 13):
        if (h - h0) % 2 == 0:
            assert telescope(v[lam1], v[other], h) == direct.column(h)
    assert telescope(v[lam1], v[other], 40) == CharPoly()


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("lam1", "+-")
def test_stage_weight_census(N, lam1):
    stages = stage_weight_census(N, lam1, 16)
    assert len(stages) == N
    assert all(ok for *_, ok in stages)
