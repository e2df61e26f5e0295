"""Enumerative invariants of abelian scrolls.

A scroll here is swept out by the spans of the translates of a point of an
n-dimensional abelian variety under a finite subgroup of order k, inside
P^(l-1).  Its dimension is m = n + k - 1.  Working in the truncated product
ring Q[c, h]/(c^(n+1), h^k), where c is the polarization class and h the
hyperplane class of the P^(k-1) factor, every invariant below reduces to one
coefficient extraction:

  * scroll degree        (1/k) * C(n+k-1, k-1) * c^n
  * top Chern number of the normal sheaf of the scroll map, read off from the
    total class (1+c+h)^l * (1+h)^(-k)
  * virtual double point number, the degree of the double point class
    phi^* phi_* [X] - c_m(N) cap [X]

Each extraction is computed twice: once through the ring engine and once from
a closed form, and a mismatch raises EngineMismatchError (it would mean a bug
in the ring, not bad input).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .ring import RingShape, TruncPoly, binomial, coefficient, make_poly, mul, power_signed

VERDICT_SMOOTH = "consistent-with-smooth"
VERDICT_DOUBLE_POINTS = "double-points-forced"


class EngineMismatchError(RuntimeError):
    """Ring-engine extraction disagrees with the closed form (internal bug)."""


@dataclass(frozen=True)
class ScrollData:
    """Discrete invariants of a candidate scroll.

    n   dimension of the abelian variety (= irregularity of the scroll)
    k   order of the translating subgroup
    l   number of sections; ambient space is P^(l-1)
    cn  self-intersection number c^n of the polarization
    """

    n: int
    k: int
    l: int
    cn: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.k < 1:
            raise ValueError(f"need n >= 1 and k >= 1, got n={self.n}, k={self.k}")
        if self.l < self.n + self.k:
            raise ValueError(f"need l >= n + k = {self.n + self.k}, got l={self.l}")
        if self.cn < 1:
            raise ValueError(f"need cn >= 1, got cn={self.cn}")

    @property
    def dim_y(self) -> int:
        return self.n + self.k - 1

    @property
    def linear_system(self) -> str:
        """'complete', 'incomplete' (cn above the complete value) or 'impossible'.

        Riemann-Roch gives cn >= n! * l for any l-section embedding, with
        equality exactly for a complete linear system.
        """
        floor = math.factorial(self.n) * self.l
        if self.cn == floor:
            return "complete"
        return "incomplete" if self.cn > floor else "impossible"


@dataclass(frozen=True)
class ScrollReport:
    data: ScrollData
    deg_Y: Fraction
    top_chern_normal: int
    double_point: Fraction
    verdict: str
    flags: tuple = field(default_factory=tuple)


def _series_binomial(m: int, j: int) -> int:
    """Coefficient of x^j in (1+x)^m for any integer m (signed when m < 0)."""
    if j < 0:
        return 0
    if m >= 0:
        return binomial(m, j)
    return (-1) ** j * binomial(j - m - 1, j)


def _hyperplane_class(shape: RingShape) -> TruncPoly:
    # h vanishes identically when h_cap = 0 (k = 1).
    terms = [(1, 0, 1)]
    if shape.h_cap >= 1:
        terms.append((0, 1, 1))
    return make_poly(shape, terms)


def hyperplane_power_coefficient(n: int, k: int) -> int:
    """Coefficient of c^n h^(k-1) in (c+h)^(n+k-1), which equals C(n+k-1, k-1).

    Computed through the ring engine and by the binomial closed form; both
    routes must agree exactly.
    """
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    shape = RingShape(n, k - 1)
    engine = coefficient(power_signed(_hyperplane_class(shape), n + k - 1), n, k - 1)
    closed = binomial(n + k - 1, k - 1)
    if engine != closed:
        raise EngineMismatchError(
            f"hyperplane power at (n={n}, k={k}): engine {engine} != closed form {closed}"
        )
    return closed


def top_chern_normal(n: int, k: int, l: int) -> int:
    """Coefficient of c^n h^(k-1) in (1+c+h)^l (1+h)^(-k).

    This is the c^n-coefficient of the top Chern class of the normal sheaf of
    the scroll map to P^(l-1), pulled back to the product model.  The engine
    extraction is cross-checked against C(l, n) * C(l-n-k, k-1); for
    l = 2n+2k-1 that product equals C(n+k-1, n) * C(2n+2k-1, n).
    """
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    if l < n + k:
        raise ValueError(f"need l >= n + k = {n + k}, got l={l}")
    shape = RingShape(n, k - 1)
    ambient = make_poly(
        shape, [(0, 0, 1), (1, 0, 1)] + ([(0, 1, 1)] if k > 1 else [])
    )
    total = mul(power_signed(ambient, l), power_signed(make_poly(
        shape, [(0, 0, 1)] + ([(0, 1, 1)] if k > 1 else [])), -k))
    engine = coefficient(total, n, k - 1)
    closed = binomial(l, n) * _series_binomial(l - n - k, k - 1)
    if engine != closed:
        raise EngineMismatchError(
            f"top Chern coefficient at (n={n}, k={k}, l={l}): engine {engine} != closed form {closed}"
        )
    return closed


def scroll_degree(data: ScrollData) -> Fraction:
    """Expected degree of the scroll, (1/k) * C(n+k-1, k-1) * cn.

    May be non-integral; callers flag that case rather than erroring, so that
    impossible configurations can still be described.
    """
    return Fraction(hyperplane_power_coefficient(data.n, data.k) * data.cn, data.k)


def double_point_number(data: ScrollData) -> Fraction:
    """Degree of the virtual double point class of the scroll map.

    Evaluates (1/k) * cn * [ (1/k) * C(n+k-1, k-1)^2 * cn - c_m(N) coefficient ]
    as an exact rational.  Positive values force double points; zero is the
    necessary condition for smoothness.
    """
    b = hyperplane_power_coefficient(data.n, data.k)
    t = top_chern_normal(data.n, data.k, data.l)
    return Fraction(data.cn, data.k) * (Fraction(b * b * data.cn, data.k) - t)


def rr_min_degree(n: int, l: int) -> int:
    """Minimal cn compatible with l sections on an abelian n-fold: n! * l.

    Equality holds exactly when the linear system is complete.
    """
    if n < 1 or l < 1:
        raise ValueError(f"need n >= 1 and l >= 1, got n={n}, l={l}")
    return math.factorial(n) * l


def build_report(data: ScrollData) -> ScrollReport:
    """Aggregate all invariants of one scroll configuration into a report."""
    deg = scroll_degree(data)
    tcn = top_chern_normal(data.n, data.k, data.l) * data.cn
    dp = double_point_number(data)
    flags = []
    if deg.denominator != 1:
        flags.append("non-integral scroll degree")
    if dp.denominator != 1:
        flags.append("non-integral double point number")
    if dp < 0:
        flags.append("negative double point number")
    if data.linear_system == "impossible":
        flags.append("cn below the Riemann-Roch minimum n!*l; no such embedding exists")
    verdict = VERDICT_DOUBLE_POINTS if dp > 0 else VERDICT_SMOOTH
    return ScrollReport(
        data=data,
        deg_Y=deg,
        top_chern_normal=tcn,
        double_point=dp,
        verdict=verdict,
        flags=tuple(flags),
    )
