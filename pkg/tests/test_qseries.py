import itertools
import random
from fractions import Fraction as F
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zcube.bitword import BitWord
from zcube.characters import SignedFragmentSum, Term, bosonic_sum
from zcube.qseries import (
    EXPAND,
    ParamError,
    QSeries,
    SeifertParams,
    delta_weight,
    eta_series,
    flip_difference,
    fragment_sum_series,
    inverse_eta,
    on_false_theta_lattice,
    partition_numbers,
    singlet_series,
    singlet_via_pipeline,
    triplet_series,
)


def all_params(max_p=7, N=(1, 2)):
    out = []
    for n in N:
        for ps in itertools.combinations(range(2, max_p + 1), n):
            if any(gcd(a, b) != 1 for a, b in itertools.combinations(ps, 2)):
                continue
            for rs in itertools.product(*(range(1, p) for p in ps)):
                out.append(SeifertParams(ps, rs))
    return out


# -- params -------------------------------------------------------------------


def test_params_validation():
    SeifertParams((2, 3, 5), (1, 1, 1))
    with pytest.raises(ParamError, match="coprime"):
        SeifertParams((2, 4), (1, 1))
    with pytest.raises(ParamError):
        SeifertParams((1,), (1,))
    with pytest.raises(ParamError):
        SeifertParams((3,), (0,))
    with pytest.raises(ParamError):
        SeifertParams((3, 5), (1,))


def test_boundary_r_rejected_without_references():
    with pytest.raises(ParamError) as ex:
        SeifertParams((3,), (3,))
    msg = str(ex.value)
    assert "degenerate" in msg and "§" not in msg


# -- weights ------------------------------------------------------------------


def test_delta_weight_examples():
    assert delta_weight(SeifertParams((2,), (1,)), "+", 0) == F(1, 4)
    assert delta_weight(SeifertParams((2, 3), (1, 1)), "++", 0) == F(25, 12)
    with pytest.raises(Exception):
        delta_weight(SeifertParams((2, 3), (1, 1)), "+", 0)


@given(st.sampled_from(all_params(7, (1, 2, 3))), st.integers(-6, 6), st.data())
def test_delta_weight_sign_flip(params, d, data):
    lam = BitWord(data.draw(st.sampled_from(list(BitWord.all(params.N)))))
    assert delta_weight(params, lam, d) == delta_weight(params, lam.bar, -d)


# -- series arithmetic --------------------------------------------------------


def random_series(rng, order):
    c = {F(rng.randint(-8, 40), rng.choice([1, 2, 3, 6])): rng.randint(-3, 3) for _ in range(12)}
    return QSeries(c, order)


def schoolbook(a, b, order):
    c = {}
    for e1, v1 in a.items():
        for e2, v2 in b.items():
            if e1 + e2 <= order:
                c[e1 + e2] = c.get(e1 + e2, 0) + v1 * v2
    return {e: v for e, v in c.items() if v}


@pytest.mark.parametrize("seed", range(25))
def test_product_matches_schoolbook(seed):
    rng = random.Random(seed)
    a, b = random_series(rng, F(30)), random_series(rng, F(25))
    p = a * b
    assert p.order == min(a.order + b.valuation(), b.order + a.valuation())
    assert dict(p) == schoolbook(a, b, p.order)


def test_series_basics():
    a = QSeries({F(1, 2): 1, F(3): -2, F(50): 7}, 10)
    assert F(50) not in a and a[F(3)] == -2
    assert (a - a) == QSeries({}, 10)
    assert a.shift(1)[F(3, 2)] == 1 and a.shift(1).order == 11
    assert a.truncate(2) == QSeries({F(1, 2): 1}, 2)
    assert a.denominator() == 2
    with pytest.raises(ValueError):
        a.check_denominator(3)
    assert a.to_csv().splitlines() == ["exponent_num,exponent_den,coefficient", "1,2,1", "3,1,-2"]


def test_partition_numbers():
    assert partition_numbers(10) == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
    # p(n) counted by brute force over compositions into parts
    def brute(n, k=None):
        if k is None:
            k = n
        if n == 0:
            return 1
        return sum(brute(n - j, j) for j in range(1, min(n, k) + 1))

    assert partition_numbers(20)[20] == brute(20) == 627


def test_eta_times_inverse_is_one():
    x = eta_series(F(30) + F(1, 24)) * inverse_eta(F(30))
    assert dict(x) == {F(0): 1}
    assert x.order >= 30


# -- singlet ------------------------------------------------------------------


def brute_singlet(params, lam1, order):
    """Separately coded partial sum of the binomial theta-like display."""
    N, P = params.N, params.P
    out = {}
    s1 = 1 if lam1 == "+" else -1
    for n in range(60):
        mult = 1
        for k in range(1, N):
            mult = mult * (n + k) // k
        for signs in itertools.product((1, -1), repeat=N):
            k_minus = signs.count(-1)
            x = F(-2 * n - N - k_minus + (1 if lam1 == "+" else 0))
            x += F(s1 * signs[0] * params.r[0], params.p[0])
            for i in range(1, N):
                x -= F(signs[i] * params.r[i], params.p[i])
            e = F(P, 2) * x * x
            if e <= order:
                out[e] = out.get(e, 0) + (-1) ** k_minus * mult
    return {e: v for e, v in out.items() if v}


def test_singlet_first_terms_p2():
    params = SeifertParams((2,), (1,))
    s = singlet_series(params, "+", 20)
    assert dict(s) == brute_singlet(params, "+", 20)
    # r/p = 1/2: the two sign classes telescope, leaving q^{1/4}
    assert list(s.items()) == [(F(1, 4), 1)]
    s3 = singlet_series(SeifertParams((3,), (1,)), "+", 20)
    assert list(s3.items()) == [(F(1, 6), 1), (F(8, 3), -1), (F(25, 6), 1), (F(50, 3), -1)]


@pytest.mark.parametrize("params", all_params(7, (1, 2)) + [SeifertParams((2, 3, 5), (1, 1, 1)), SeifertParams((2, 3, 7), (1, 2, 3))])
@pytest.mark.parametrize("lam1", "+-")
def test_singlet_matches_brute(params, lam1):
    order = 60 if params.N < 3 else 400
    assert dict(singlet_series(params, lam1, order)) == brute_singlet(params, lam1, order)


def test_terms_per_n():
    s = bosonic_sum(3, "+", 4)
    assert len(s.terms) == 5 * 2 ** 3


@pytest.mark.parametrize("N,params", [(1, SeifertParams((5,), (2,))), (2, SeifertParams((3, 5), (1, 2))), (3, SeifertParams((2, 3, 5), (1, 2, 3)))])
def test_coefficient_bound(N, params):
    # a coefficient collects at most 2^N signed terms at each n of the same exponent
    s = singlet_series(params, "+", 200)
    bound = sum(2 ** N * max(1, (n + N - 1) ** (N - 1)) for n in range(40))
    for v in s.values():
        assert abs(v) <= bound
    if N == 1:
        assert set(s.values()) <= {-1, 1}


@pytest.mark.parametrize("params", [SeifertParams((2,), (1,)), SeifertParams((7,), (3,)), SeifertParams((3, 5), (2, 1)), SeifertParams((2, 3, 5), (1, 1, 1)), SeifertParams((2, 5, 7), (1, 3, 2))])
@pytest.mark.parametrize("lam1", "+-")
def test_pipeline_equals_closed_form(params, lam1):
    order = 50 if params.N < 3 else 600
    assert singlet_via_pipeline(params, lam1, order) == singlet_series(params, lam1, order)


def test_pipeline_mutation_breaks_equality():
    params = SeifertParams((3, 5), (1, 2))
    s = bosonic_sum(2, "+", 8)
    good = fragment_sum_series(params, s, 50)
    assert good == singlet_series(params, "+", 50)
    t = s.terms[0]
    bad = SignedFragmentSum([Term(t.sign, t.mult + 1, t.lam, t.depth)] + s.terms[1:])
    assert fragment_sum_series(params, bad, 50) != good


@pytest.mark.parametrize("params", all_params(7, (1, 2)) + [SeifertParams((2, 3, 5), (1, 2, 3))])
def test_lambda_flip_relation(params):
    order = 60 if params.N < 3 else 500
    diff = singlet_series(params, "+", order) - singlet_series(params.flip_first(), "-", order)
    assert diff == flip_difference(params, order)
    if params.N == 1:
        assert dict(diff) == {F(params.r[0] ** 2, 2 * params.p[0]): 1}


@pytest.mark.parametrize("params", all_params(7, (1, 2)))
def test_false_theta_support(params):
    for lam1 in "+-":
        for e in singlet_series(params, lam1, 40):
            assert on_false_theta_lattice(params, e)


@pytest.mark.parametrize("params", [SeifertParams((2,), (1,)), SeifertParams((5,), (2,)), SeifertParams((3, 5), (1, 2)), SeifertParams((2, 3, 5), (1, 1, 1))])
def test_eta_expand_consistent(params):
    order = F(12) if params.N < 3 else F(90)
    ex = singlet_series(params, "+", order, eta=EXPAND)
    assert ex.order == order
    back = ex * eta_series(order + F(1, 24))
    stripped = singlet_series(params, "+", back.order)
    assert back == stripped
    ex.check_denominator(24 * params.P)


def test_denominators_divide_2P():
    for params in all_params(7, (1, 2)):
        s = singlet_series(params, "+", 40)
        assert (2 * params.P) % s.denominator() == 0
        t = triplet_series(params, "+", 40)
        assert (2 * params.P) % t.denominator() == 0


# -- triplet ------------------------------------------------------------------


def brute_triplet(p, r, lam1, order, hmax=80):
    """Double loop: Cartan weight h on the terminal bilateral object, then n, nu."""
    h0 = 1 if lam1 == "-" else 0
    s1 = 1 if lam1 == "+" else -1
    out = {}
    for h in range(-hmax, hmax + 1):
        if (h - h0) % 2:
            continue
        for n in range(60):
            for sg in (1, -1):
                km = 1 if sg < 0 else 0
                d = 2 * n + 1 + km - (1 - h0) + abs(h) - h0
                x = F(-d) + F(s1 * sg * r, p)
                e = F(p, 2) * x * x
                if e <= order:
                    out[e] = out.get(e, 0) + (-1) ** km
    return {e: v for e, v in out.items() if v}


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (3, 2), (5, 2), (7, 4)])
@pytest.mark.parametrize("lam1", "+-")
def test_triplet_matches_double_loop(p, r, lam1):
    params = SeifertParams((p,), (r,))
    assert dict(triplet_series(params, lam1, 40)) == brute_triplet(p, r, lam1, 40)


def test_triplet_p2_frozen():
    t = triplet_series(SeifertParams((2,), (1,)), "+", 13)
    # column weights 1 + 2j at (2j - 1/2)^2 minus 1 + 2(j-1) at the same point
    assert list(t.items()) == [(F(1, 4), 1), (F(9, 4), 2), (F(49, 4), 2)]


@pytest.mark.parametrize("params", [SeifertParams((3,), (1,)), SeifertParams((3, 5), (1, 2)), SeifertParams((2, 3, 5), (1, 1, 1))])
@pytest.mark.parametrize("lam1", "+-")
def test_triplet_zero_cutoff_is_singlet(params, lam1):
    order = 40 if params.N < 3 else 300
    assert triplet_series(params, lam1, order, h_cutoff=0) == singlet_series(params, lam1, order)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(all_params(5, (1, 2))), st.sampled_from("+-"), st.integers(0, 6))
def test_triplet_monotone_in_cutoff(params, lam1, hc):
    # each added column pair contributes shifted copies of the singlet
    a = triplet_series(params, lam1, 30, h_cutoff=hc)
    b = triplet_series(params, lam1, 30, h_cutoff=hc + 2)
    diff = b - a
    for e in diff:
        assert on_false_theta_lattice(params, e)
