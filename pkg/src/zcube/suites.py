"""Named invariant checks grouped by module, for ``verify``.

Each check takes ``(max_m, depth)`` and returns ``(ok, detail)``.  Details
carry census sizes only, so output is reproducible.
"""

from __future__ import annotations

import random
from itertools import product
from math import gcd

from . import bilateral as bl
from . import characters as ch
from . import cubes as cu
from . import loewy as lw
from . import qseries as qs
from .bitword import BitWord, bar, gap_count, minus_count, star
from .dag import CONG, SIM, box_product, iso


# -- bitword ------------------------------------------------------------------


def bw_star_group(max_m, depth):
    n = 0
    for m in range(max_m + 1):
        ws = list(BitWord.all(m))
        for a, b in product(ws, repeat=2):
            n += 1
            if star(a, b) != star(b, a) or star(star(a, b), b) != a:
                return False, f"words={n}"
    return True, f"pairs={n}"


def bw_bar(max_m, depth):
    n = 0
    for m in range(max_m + 1):
        for a in BitWord.all(m):
            n += 1
            if bar(bar(a)) != a or minus_count(bar(a)) != m - minus_count(a):
                return False, f"words={n}"
    return True, f"words={n}"


def bw_gap(max_m, depth):
    n = 0
    for m in range(max_m + 1):
        for lam, mu in product(list(BitWord.all(m)), repeat=2):
            n += 1
            if gap_count(mu, lam, mu) != minus_count(star(lam, mu)):
                return False, f"pairs={n}"
    return True, f"pairs={n}"


# -- dag ----------------------------------------------------------------------


def dag_box_census(max_m, depth):
    for a, b in product(range(max_m + 1), repeat=2):
        x, y = cu.cube(cu.CubeSpec.full(a)), cu.cube(cu.CubeSpec.full(b))
        z = box_product(x, y)
        if len(z) != len(x) * len(y):
            return False, f"m={a},{b}"
        if len(z.edges) != len(x) * len(y.edges) + len(y) * len(x.edges):
            return False, f"m={a},{b}"
    return True, f"products={(max_m + 1) ** 2}"


def dag_reverse(max_m, depth):
    q = cu.fragment(cu.tower(depth), BitWord.plus(max_m))
    ok = q.reverse().reverse().edges == q.edges and iso(q.reverse().reverse(), q)
    return ok, f"nodes={len(q)} edges={len(q.edges)}"


def dag_iso_relabel(max_m, depth):
    q = cu.cube(cu.CubeSpec.full(max_m))
    names = {v: i for i, v in enumerate(sorted(q.nodes, key=repr))}
    r = q.relabel(names.__getitem__)
    return iso(q, r, CONG) and iso(q, r, SIM), f"nodes={len(q)}"


# -- cubes --------------------------------------------------------------------


def cubes_composition(max_m, depth):
    m = min(max_m, 2)
    cut = depth + 2 * (2 * m)
    t = cu.tower(cut)
    stable = cu.stable_depth(cut, 2 * m)
    n = 0
    for a, b in product(range(1, m + 1), repeat=2):
        for lam, lam2, nu, nu2 in product(
            list(BitWord.all(a)), list(BitWord.all(b)), list(BitWord.all(a)), list(BitWord.all(b))
        ):
            n += 1
            x = cu.fragment(cu.fragment(t, lam, nu=nu), lam2, nu=nu2)
            y = cu.fragment(t, lam + lam2, nu=nu + nu2)
            if not iso(x.restrict_depth(stable), y.restrict_depth(stable), CONG):
                return False, f"cases={n}"
    return True, f"cases={n}"


def cubes_box_compose(max_m, depth):
    n = 0
    for a in range(max_m + 1):
        for b in range(max_m + 1 - a):
            for D, E in product(["".join(p) for p in product("+-*", repeat=a + b)], repeat=2):
                n += 1
                s1, s2 = cu.CubeSpec(D[:a], E[:a]), cu.CubeSpec(D[a:], E[a:])
                if not iso(cu.box_cube_compose(s1, s2), cu.cube(s1 + s2), SIM):
                    return False, f"cases={n}"
    return True, f"cases={n}"


def cubes_tower(max_m, depth):
    t = cu.tower(depth)
    ok = cu.is_slim(t)
    for w in BitWord.all(max_m):
        f = cu.fragment(t, w)
        s = box_product(t, cu.segment(w)).restrict_depth(depth)
        ok = ok and cu.node_census([f]) == cu.node_census([s])
    return ok, f"depth={depth} words={2 ** max_m}"


# -- bilateral ----------------------------------------------------------------


def bl_gap(max_m, depth):
    rnd = random.Random(7)
    base1 = bl.bilateral_fragment(bl.bilateral_tower(depth), "+", "*")
    for _ in range(200):
        m = rnd.randint(0, min(max_m, 3))
        D = "".join(rnd.choice("+-*") for _ in range(m))
        E = "".join(rnd.choice("+-*") for _ in range(m))
        nu = "".join(rnd.choice("+-") for _ in range(m))
        base = rnd.choice([bl.bilateral_tower(depth), base1])
        q = bl.bilateral_fragment(base, D, E, nu)
        if q.gap() != bl.expected_gap(D, E, base.gap()):
            return False, f"D={D} E={E}"
    return True, "cases=200"


def bl_classification(max_m, depth):
    n = 0
    for lam1, m in product("+-", range(max_m + 1)):
        _, trace = bl.pipeline(lam1, m, "-", depth, hcut=4)
        h0 = minus_count(BitWord(lam1))
        for j, s in enumerate(trace):
            n += 1
            X = bl.B_MINUS if j == 0 else bl.SL2 if j % 2 else bl.B_PLUS
            if tuple(s.kind) != (X, m - j // 2, h0):
                return False, f"lam1={lam1} m={m} stage={j}"
    return True, f"stages={n}"


def bl_terminal(max_m, depth):
    cut = max(depth, 2 * max_m + 6)
    for lam1, m in product("+-", range(max_m + 1)):
        if not bl.terminal_check(lam1, m, cut):
            return False, f"lam1={lam1} m={m}"
    return True, f"cases={2 * (max_m + 1)}"


# -- characters ---------------------------------------------------------------


def ch_bosonic(max_m, depth):
    for N, lam1 in product(range(1, max_m + 2), "+-"):
        if not ch.verify_bosonic(N, lam1, 2 * N + depth):
            return False, f"N={N} lam1={lam1}"
    return True, f"N<={max_m + 1}"


def ch_binomial(max_m, depth):
    ok = all(ch.binomial_vanishing(m, k) == 0 for m in range(1, 9) for k in range(31))
    return ok, "m<=8 k<=30"


def ch_coefficient_one(max_m, depth):
    ok = all(ch.verify_alternating_equality(m, 10) for m in range(1, max_m + 1))
    return ok, f"m<={max_m} k<=10"


def ch_column_formula(max_m, depth):
    n = 0
    for lam1, m in product("+-", range(max_m + 1)):
        other = "-" if lam1 == "+" else "+"
        vs = ch.bilateral_char(bl.start_family(lam1, m, cutoff=depth).as_bilateral())
        vo = ch.bilateral_char(bl.start_family(other, m, cutoff=depth).as_bilateral())
        g = ch.bilateral_char(bl.gamma(bl.start_family(lam1, m, cutoff=depth)).as_bilateral())
        for h in range(-depth - 4, depth + 5):
            n += 1
            if ch.sl2_column_formula(vs, vo, h) != g.column(h):
                return False, f"lam1={lam1} m={m} h={h}"
    return True, f"columns={n}"


# -- qseries ------------------------------------------------------------------


def _params(max_N):
    ps = [2, 3, 5, 7]
    out = []
    for N in range(1, max_N + 1):
        for tup in product(ps, repeat=N):
            if len(set(tup)) < N or list(tup) != sorted(tup):
                continue
            if any(gcd(a, b) != 1 for a in tup for b in tup if a != b):
                continue
            for rs in product(*(range(1, p) for p in tup)):
                out.append(qs.SeifertParams(tup, rs))
    return out


def qs_pipeline(max_m, depth):
    n = 0
    for p in _params(min(max_m, 3)):
        for lam1 in "+-":
            n += 1
            if qs.singlet_via_pipeline(p, lam1, 50) != qs.singlet_series(p, lam1, 50):
                return False, f"p={p.p} r={p.r} lam1={lam1}"
    return True, f"cases={n}"


def qs_flip(max_m, depth):
    n = 0
    for p in _params(min(max_m, 3)):
        n += 1
        d = qs.singlet_series(p, "+", 50) - qs.singlet_series(p.flip_first(), "-", 50)
        if d != qs.flip_difference(p, 50):
            return False, f"p={p.p} r={p.r}"
    return True, f"cases={n}"


def qs_eta(max_m, depth):
    from fractions import Fraction

    for p in _params(1):
        order = Fraction(12)
        ex = qs.singlet_series(p, "+", order, eta=qs.EXPAND)
        back = ex * qs.eta_series(order + Fraction(1, 24))
        if back != qs.singlet_series(p, "+", back.order):
            return False, f"p={p.p} r={p.r}"
    return True, f"cases={len(_params(1))}"


def qs_triplet_column(max_m, depth):
    for p in _params(min(max_m, 2)):
        for lam1 in "+-":
            if qs.triplet_series(p, lam1, 40, h_cutoff=0) != qs.singlet_series(p, lam1, 40):
                return False, f"p={p.p} r={p.r}"
    return True, f"cases={2 * len(_params(min(max_m, 2)))}"


# -- loewy --------------------------------------------------------------------


def lw_defrag(max_m, depth):
    t = cu.tower(depth)
    sizes = []
    for n in range(max_m + 1):
        r = lw.defragment_census(lw.fragment_family(t, n, depth))
        if not r.ok:
            return False, f"n={n} {r.line()}"
        sizes.append(len(r.deficit))
    return True, "deficits=" + ",".join(map(str, sizes))


def lw_fubini(max_m, depth):
    N = 3
    n = 0
    for lam1 in "+-":
        for I, J in product([set(), {2}, {3}, {2, 3}], repeat=2):
            if I & J:
                continue
            n += 1
            if not lw.fubini_check(N, I, J, depth, lam1):
                return False, f"I={sorted(I)} J={sorted(J)}"
    return True, f"pairs={n}"


def lw_P(max_m, depth):
    for sign, N in product("+-", range(1, min(max_m, 3) + 1)):
        if not lw.check_P(sign, N, depth + 2):
            return False, f"sign={sign} N={N}"
        if lw.lacking_block_size(N) != 4 ** (N - 1):
            return False, f"N={N} lacking"
    return True, f"N<={min(max_m, 3)}"


def lw_grothendieck(max_m, depth):
    n = 0
    for N, lam1 in product(range(1, min(max_m, 3) + 1), "+-"):
        for h in range(0, 5):
            n += 1
            if not lw.grothendieck_check(N, lam1, h, depth + 2):
                return False, f"N={N} lam1={lam1} h={h}"
    return True, f"cases={n}"


def lw_felder(max_m, depth):
    for N, lam1 in product(range(1, max_m + 2), "+-"):
        if not lw.felder_telescope_check(N, lam1, depth):
            return False, f"N={N} lam1={lam1}"
    return True, f"N<={max_m + 1}"


def lw_stage_weights(max_m, depth):
    n = 0
    for N, lam1 in product(range(1, min(max_m, 3) + 1), "+-"):
        for stage in lw.stage_weight_census(N, lam1, depth + 4):
            n += 1
            if not stage[-1]:
                return False, f"N={N} lam1={lam1} stage={stage[0]}"
    return True, f"stages={n}"


SUITES = {
    "bitword": [("star_group", bw_star_group), ("bar", bw_bar), ("gap_count", bw_gap)],
    "dag": [("box_census", dag_box_census), ("reverse", dag_reverse), ("iso_relabel", dag_iso_relabel)],
    "cubes": [
        ("fragment_composition", cubes_composition),
        ("box_cube_compose", cubes_box_compose),
        ("tower_and_segments", cubes_tower),
    ],
    "bilateral": [
        ("gap_formula", bl_gap),
        ("classification", bl_classification),
        ("terminal_identity", bl_terminal),
    ],
    "characters": [
        ("bosonic_identity", ch_bosonic),
        ("binomial_vanishing", ch_binomial),
        ("coefficient_one", ch_coefficient_one),
        ("column_formula", ch_column_formula),
    ],
    "qseries": [
        ("pipeline_vs_closed", qs_pipeline),
        ("lambda1_flip", qs_flip),
        ("eta_expand", qs_eta),
        ("triplet_zero_cutoff", qs_triplet_column),
    ],
    "loewy": [
        ("defragment_census", lw_defrag),
        ("fubini", lw_fubini),
        ("P_families", lw_P),
        ("grothendieck", lw_grothendieck),
        ("felder_telescope", lw_felder),
        ("stage_weight_census", lw_stage_weights),
    ],
}


def checks(suite: str):
    if suite == "all":
        return [(s, name, fn) for s, lst in SUITES.items() for name, fn in lst]
    if suite not in SUITES:
        raise KeyError(suite)
    return [(suite, name, fn) for name, fn in SUITES[suite]]


def run_one(args):
    suite, name, fn, max_m, depth = args
    try:
        ok, detail = fn(max_m, depth)
    except Exception as ex:  # a crash is a failure, reported with its type
        ok, detail = False, f"{type(ex).__name__}: {ex}"
    return suite, name, bool(ok), detail
