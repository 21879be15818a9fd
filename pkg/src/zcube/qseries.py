"""Exact q-series with rational exponents, Fock weights and singlet/triplet sums.

Series are character-normalized: no overall q-power or eta normalization is
chosen beyond the explicit ``eta`` switch.  ``order`` bounds exponents, not
term counts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm, prod
from typing import Iterable, Mapping

from .bitword import BitWord, bar, minus_count, star
from .characters import SignedFragmentSum, binom, bosonic_sum

STRIP = "strip"
EXPAND = "expand"


class ParamError(ValueError):
    pass


@dataclass(frozen=True)
class SeifertParams:
    p: tuple[int, ...]
    r: tuple[int, ...]

    def __post_init__(self):
        p, r = tuple(int(x) for x in self.p), tuple(int(x) for x in self.r)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "r", r)
        if not p:
            raise ParamError("need at least one p_i")
        if len(p) != len(r):
            raise ParamError(f"{len(p)} values of p but {len(r)} values of r")
        for i, (pi, ri) in enumerate(zip(p, r)):
            if pi < 2:
                raise ParamError(f"p[{i}] = {pi} must be at least 2")
            if ri == pi:
                raise ParamError(
                    f"r[{i}] = p[{i}] = {pi} is the degenerate boundary case; only 1 <= r_i < p_i is computed"
                )
            if not 1 <= ri < pi:
                raise ParamError(f"r[{i}] = {ri} must satisfy 1 <= r < {pi}")
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                if gcd(p[i], p[j]) != 1:
                    raise ParamError(f"p[{i}] = {p[i]} and p[{j}] = {p[j]} are not coprime")

    @property
    def N(self) -> int:
        return len(self.p)

    @property
    def P(self) -> int:
        return prod(self.p)

    def flip_first(self) -> "SeifertParams":
        """``r_1 -> p_1 - r_1``."""
        return SeifertParams(self.p, (self.p[0] - self.r[0],) + self.r[1:])


class QSeries(Mapping):
    """``{exponent: coefficient}`` with every exponent ``<= order``."""

    __slots__ = ("_c", "order")

    def __init__(self, data: Mapping | Iterable = (), order=None):
        self.order = None if order is None else Fraction(order)
        c: dict = {}
        items = data.items() if isinstance(data, Mapping) else data
        for e, v in items:
            e = Fraction(e)
            if self.order is not None and e > self.order:
                continue
            c[e] = c.get(e, 0) + v
        self._c = {e: v for e, v in sorted(c.items()) if v}

    def __getitem__(self, e):
        return self._c.get(Fraction(e), 0)

    def __contains__(self, e) -> bool:
        return Fraction(e) in self._c

    def __iter__(self):
        return iter(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, QSeries):
            return self._c == other._c and self.order == other.order
        return NotImplemented

    __hash__ = None

    def __repr__(self) -> str:
        head = ", ".join(f"{e}: {v}" for e, v in list(self._c.items())[:6])
        more = ", ..." if len(self._c) > 6 else ""
        return f"QSeries({{{head}{more}}}, order={self.order})"

    def _order_with(self, other: "QSeries"):
        if self.order is None:
            return other.order
        if other.order is None:
            return self.order
        return min(self.order, other.order)

    def __add__(self, other: "QSeries") -> "QSeries":
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return QSeries(c, self._order_with(other))

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + other.scale(-1)

    def scale(self, a: int) -> "QSeries":
        return QSeries({e: a * v for e, v in self._c.items()}, self.order)

    def shift(self, a) -> "QSeries":
        """Multiply by ``q^a``."""
        a = Fraction(a)
        return QSeries(
            {e + a: v for e, v in self._c.items()}, None if self.order is None else self.order + a
        )

    def truncate(self, order) -> "QSeries":
        order = Fraction(order)
        if self.order is not None:
            order = min(order, self.order)
        return QSeries(self._c, order)

    def valuation(self):
        return next(iter(self._c), None)

    def __mul__(self, other: "QSeries") -> "QSeries":
        """Product, correct up to ``min(A + v_b, B + v_a)`` for orders A, B and valuations v."""
        va, vb = self.valuation(), other.valuation()
        if va is None or vb is None:
            return QSeries({}, self._order_with(other))
        bounds = []
        if self.order is not None:
            bounds.append(self.order + vb)
        if other.order is not None:
            bounds.append(other.order + va)
        order = min(bounds) if bounds else None
        c: dict = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = e1 + e2
                if order is not None and e > order:
                    break
                c[e] = c.get(e, 0) + v1 * v2
        return QSeries(c, order)

    def denominator(self) -> int:
        return lcm(1, *(e.denominator for e in self._c))

    def check_denominator(self, den: int) -> None:
        bad = [e for e in self._c if den % e.denominator]
        if bad:
            raise ValueError(f"exponent {bad[0]} has denominator not dividing {den}")

    def to_csv(self) -> str:
        lines = ["exponent_num,exponent_den,coefficient"]
        lines += [f"{e.numerator},{e.denominator},{v}" for e, v in self._c.items()]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        rows = [
            {"exponent_num": e.numerator, "exponent_den": e.denominator, "coefficient": v}
            for e, v in self._c.items()
        ]
        return json.dumps({"order": str(self.order), "terms": rows}, indent=1)


def delta_weight(params: SeifertParams, lam: str, d: int) -> Fraction:
    """``(P/2) (-d + sum_i lam_i r_i / p_i)^2``."""
    lam = BitWord(lam)
    if len(lam) != params.N:
        raise ParamError(f"word {lam!s} has length {len(lam)}, expected {params.N}")
    s = Fraction(-d) + sum(
        Fraction(sg * ri, pi) for sg, ri, pi in zip(lam.signs(), params.r, params.p)
    )
    return Fraction(params.P, 2) * s * s


# -- eta ----------------------------------------------------------------------


def partition_numbers(n_max: int) -> list[int]:
    """``p(0..n_max)`` by Euler's pentagonal recurrence."""
    p = [0] * (n_max + 1)
    p[0] = 1
    for n in range(1, n_max + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            if g1 > n:
                break
            sign = 1 if k % 2 else -1
            total += sign * p[n - g1]
            g2 = k * (3 * k + 1) // 2
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def eta_series(order) -> QSeries:
    """``eta = q^{1/24} prod (1 - q^n)`` via the pentagonal theorem."""
    order = Fraction(order)
    c = {}
    k = 0
    while True:
        done = True
        for kk in ((k, -k) if k else (0,)):
            e = Fraction(1, 24) + Fraction(kk * (3 * kk - 1), 2)
            if e <= order:
                c[e] = (-1) ** abs(kk)
                done = False
        if done and k > 0:
            break
        k += 1
    return QSeries(c, order)


def inverse_eta(order) -> QSeries:
    """``1/eta = q^{-1/24} sum p(n) q^n``."""
    order = Fraction(order)
    top = order + Fraction(1, 24)
    n_max = int(top) if top >= 0 else -1
    parts = partition_numbers(max(n_max, 0))
    return QSeries({Fraction(n) - Fraction(1, 24): parts[n] for n in range(n_max + 1)}, order)


def expand_eta(stripped_fn, order) -> QSeries:
    """Multiply a stripped series (computed to ``order + 1/24``) by ``1/eta``."""
    order = Fraction(order)
    s = stripped_fn(order + Fraction(1, 24))
    out = s * inverse_eta(order + Fraction(1, 24) - (s.valuation() or 0))
    return out.truncate(order)


# -- singlet and triplet ------------------------------------------------------


def _n_bound(P: int, order: Fraction, extra: int = 0) -> int:
    """Largest ``n`` for which terms with ``d >= 2n + extra`` can reach ``order``."""
    n = 0
    while Fraction(P, 2) * max(0, 2 * (n + 1) + extra - 1) ** 2 <= order:
        n += 1
    return n


def _singlet_terms(params: SeifertParams, lam1: str, order: Fraction, shift: int = 0):
    """``(exponent, signed weight)`` pairs straight from the exponent display."""
    N, P = params.N, params.P
    lam1 = BitWord(lam1)
    barm = minus_count(bar(lam1))
    for n in range(_n_bound(P, order, shift) + 1):
        w = binom(n + N - 1, N - 1)
        for nu in BitWord.all(N):
            arg = Fraction(-2 * n - N - minus_count(nu) + barm - shift)
            arg += Fraction(star(lam1, nu[:1]).signs()[0] * params.r[0], params.p[0])
            for i in range(1, N):
                arg -= Fraction(nu.signs()[i] * params.r[i], params.p[i])
            e = Fraction(P, 2) * arg * arg
            if e <= order:
                yield e, (-1) ** minus_count(nu) * w


def _declared_den(params: SeifertParams, eta: str) -> int:
    return lcm(2 * params.P, 24) if eta == EXPAND else 2 * params.P


def singlet_series(params: SeifertParams, lam1: str, order, eta: str = STRIP) -> QSeries:
    """The binomially weighted signed theta-like sum (times ``1/eta`` if expanded)."""
    order = Fraction(order)
    if eta not in (STRIP, EXPAND):
        raise ParamError(f"eta must be {STRIP!r} or {EXPAND!r}")

    def stripped(o):
        c: dict = {}
        for e, w in _singlet_terms(params, lam1, o):
            c[e] = c.get(e, 0) + w
        return QSeries(c, o)

    out = stripped(order) if eta == STRIP else expand_eta(stripped, order)
    out.check_denominator(_declared_den(params, eta))
    return out


def fragment_sum_series(params: SeifertParams, s: SignedFragmentSum, order) -> QSeries:
    """Replace each fragment descriptor ``(lam, d)`` by ``q^{Delta_{lam,d}}``."""
    c: dict = {}
    order = Fraction(order)
    for t in s.terms:
        e = delta_weight(params, t.lam, t.depth)
        if e <= order:
            c[e] = c.get(e, 0) + t.sign * t.mult
    return QSeries(c, order)


def singlet_via_pipeline(params: SeifertParams, lam1: str, order) -> QSeries:
    """The bosonic fragment sum evaluated through Fock weights (stripped)."""
    order = Fraction(order)
    n_max = _n_bound(params.P, order) + 1
    out = fragment_sum_series(params, bosonic_sum(params.N, lam1, n_max), order)
    out.check_denominator(_declared_den(params, STRIP))
    return out


def triplet_shifts(lam1: str, order, P: int, h_cutoff: int | None = None) -> list[int]:
    """Vertical shift ``|h| - h0`` for each column ``h = h0 (mod 2)`` that can reach ``order``.

    Columns are ``h0 + 2k`` on the left and ``h0 - 2 - 2k`` on the right.
    """
    h0 = minus_count(BitWord(lam1))
    order = Fraction(order)
    out = []
    k = 0
    while True:
        added = False
        for h in (h0 + 2 * k, h0 - 2 - 2 * k):
            if h_cutoff is not None and abs(h - h0) > h_cutoff:
                continue
            s = abs(h) - h0
            if Fraction(P, 2) * max(0, s - 1) ** 2 <= order:
                out.append(s)
                added = True
        if not added:
            return out
        k += 1


def triplet_series(
    params: SeifertParams, lam1: str, order, h_cutoff: int | None = None, eta: str = STRIP
) -> QSeries:
    """Sum over Cartan weights of the singlet sum shifted down by ``|h| - h0``.

    ``h_cutoff`` bounds ``|h - h0|``; 0 keeps only the column ``h0``.
    """
    order = Fraction(order)

    def stripped(o):
        c: dict = {}
        for s in triplet_shifts(lam1, o, params.P, h_cutoff):
            for e, w in _singlet_terms(params, lam1, o, s):
                c[e] = c.get(e, 0) + w
        return QSeries(c, o)

    out = stripped(order) if eta == STRIP else expand_eta(stripped, order)
    out.check_denominator(_declared_den(params, eta))
    return out


def flip_difference(params: SeifertParams, order) -> QSeries:
    """Predicted ``S_+(r) - S_-(r_1 -> p_1 - r_1)``.

    Terms with ``nu_1 = -`` cancel between the two sums; those with
    ``nu_1 = +`` telescope in ``n``, leaving
    ``sum_{nu_1=+} (-1)^|nu| [T(0) + sum_n C(n+N-1, N-2) T(n+1)]``.
    """
    order = Fraction(order)
    N, P = params.N, params.P
    c: dict = {}
    for n in range(_n_bound(P, order) + 2):
        w = 1 if n == 0 else binom(n - 1 + N - 1, N - 2)
        if not w:
            continue
        for nu in BitWord.all(N):
            if nu[0] != "+":
                continue
            arg = Fraction(-2 * n - N - minus_count(nu) + 1) + Fraction(params.r[0], params.p[0])
            for i in range(1, N):
                arg -= Fraction(nu.signs()[i] * params.r[i], params.p[i])
            e = Fraction(P, 2) * arg * arg
            if e <= order:
                c[e] = c.get(e, 0) + (-1) ** minus_count(nu) * w
    return QSeries(c, order)


def on_false_theta_lattice(params: SeifertParams, e: Fraction) -> bool:
    """``e = (P/2)(k + sum_i eps_i r_i/p_i)^2`` for some integer k and signs eps."""
    P = params.P
    t = 2 * P * e
    if t.denominator != 1:
        return False
    root = isqrt(t.numerator)
    if root * root != t.numerator:
        return False
    for eps in BitWord.all(params.N):
        off = sum(s * ri * (P // pi) for s, ri, pi in zip(eps.signs(), params.r, params.p))
        if (root - off) % P == 0 or (-root - off) % P == 0:
            return True
    return False
