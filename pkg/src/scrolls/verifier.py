"""Exact verification of the binomial inequality behind the irregularity bound.

For a smooth scroll of dimension m = n+k-1 filling half of P^(2m), the double
point number vanishes iff

    C(n+k-1, k-1) * (2n+2k-1) * n!  =  k * C(2n+2k-1, n),

and smoothness forces ">=".  Equality holds exactly for n in {1, 2}; for
n >= 3 the strict inequality follows termwise from

    (n+k-l+1) * l >= 2n+2k-l        for l = 2..n,

each term being equivalent to n+k >= l.  Everything here is exact big-integer
arithmetic; sweeps check the classification exhaustively over user ranges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .invariants import ScrollData, ScrollReport, build_report
from .ring import binomial

FAMILY_DEGREE_NOTE = (
    "family degree fixed to 2*(2k+3) (type (1, 2k+3), linearly normal in P^(2k+2)); "
    "a degree-4*(k+1) surface cannot be linearly normal there"
)


@dataclass(frozen=True)
class InequalityRecord:
    n: int
    k: int
    lhs: int
    rhs: int
    relation: str  # "lt" | "eq" | "gt", by exact comparison


@dataclass(frozen=True)
class TermwiseTerm:
    l: int
    lhs: int  # (n+k-l+1) * l
    rhs: int  # 2n+2k-l
    holds: bool
    equiv_holds: bool  # the equivalent condition n+k >= l


@dataclass(frozen=True)
class TermwiseRecord:
    n: int
    k: int
    terms: tuple


@dataclass(frozen=True)
class SweepResult:
    records: tuple
    equality_set: tuple  # (n, k) pairs with relation == "eq", sorted


def inequality_check(n: int, k: int) -> InequalityRecord:
    """Exact comparison of C(n+k-1,k-1)*(2n+2k-1)*n! against k*C(2n+2k-1,n)."""
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    lhs = binomial(n + k - 1, k - 1) * (2 * n + 2 * k - 1) * math.factorial(n)
    rhs = k * binomial(2 * n + 2 * k - 1, n)
    relation = "eq" if lhs == rhs else ("gt" if lhs > rhs else "lt")
    return InequalityRecord(n=n, k=k, lhs=lhs, rhs=rhs, relation=relation)


def termwise_check(n: int, k: int) -> TermwiseRecord:
    """Per-factor reduction of the inequality for n >= 3; empty below that."""
    if n < 1 or k < 1:
        raise ValueError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    terms = []
    if n >= 3:
        for l in range(2, n + 1):
            lhs = (n + k - l + 1) * l
            rhs = 2 * n + 2 * k - l
            terms.append(
                TermwiseTerm(l=l, lhs=lhs, rhs=rhs, holds=lhs >= rhs, equiv_holds=n + k >= l)
            )
    return TermwiseRecord(n=n, k=k, terms=tuple(terms))


def sweep(n_range: Iterable[int], k_range: Iterable[int]) -> SweepResult:
    """Inequality records for every (n, k) pair, ordered by (n, k).

    Also returns the set of pairs where equality holds; by the classification
    that set should be exactly the n <= 2 part of the grid.
    """
    n_values = sorted(set(n_range))
    k_values = sorted(set(k_range))
    if not n_values or not k_values:
        raise ValueError("sweep ranges must be nonempty")
    records = []
    equality = []
    for n in n_values:
        for k in k_values:
            rec = inequality_check(n, k)
            records.append(rec)
            if rec.relation == "eq":
                equality.append((n, k))
    return SweepResult(records=tuple(records), equality_set=tuple(equality))


def very_ample_bound(n: int, l: int) -> int:
    """Largest odd k for which a polarization with l sections on an abelian
    n-fold (n >= 3) can still be k-very ample, namely the largest odd k < l-2n.
    """
    if n < 3:
        raise ValueError(f"the bound applies to dimension n >= 3, got n={n}")
    if l <= 2 * n + 1:
        raise ValueError(f"need l > 2n+1 = {2 * n + 1}, got l={l}")
    cap = l - 2 * n
    k = cap - 1 if cap % 2 == 0 else cap - 2
    return max(k, 1)


def conjecture_family_report(k_max: int) -> list[ScrollReport]:
    """Invariant reports for the candidate smooth-surface-scroll family.

    For each torsion order k in 2..k_max the abelian surface is linearly
    normally embedded in P^(2k+2) with type (1, 2k+3), so cn = 2*(2k+3).  The
    double point number vanishes for every k (the n = 2 equality case) and the
    degree is (k+1)*(2k+3); see FAMILY_DEGREE_NOTE for the degree convention.
    """
    if k_max < 2:
        raise ValueError(f"need k_max >= 2, got {k_max}")
    reports = []
    for k in range(2, k_max + 1):
        l = 2 * k + 3
        report = build_report(ScrollData(n=2, k=k, l=l, cn=2 * l))
        if report.double_point != 0:
            raise AssertionError(
                f"family member k={k} has nonzero double point number {report.double_point}"
            )
        reports.append(report)
    return reports
