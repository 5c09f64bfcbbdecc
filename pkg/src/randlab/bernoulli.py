"""Combinatorial tests for the Bernoulli family and their certification.

A combinatorial test must average below 1 on every constant-composition
class B(n, k).  This module validates that, extends tests by monotonicity,
compares sampling without replacement against the i.i.d. coin (the n^2-urn
bound), and certifies the full Bernoulli property by deciding polynomial
nonnegativity on [0, 1] with Sturm sequences.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping, Optional

from .exact import fmt
from .measures import all_words, bernoulli_mass, validate_bits
from .poly import UnivariatePoly, constant, nonneg_on_unit_interval
from .randtests import ExtendedTest

__all__ = [
    "CombinatorialTest",
    "words_with_ones",
    "class_average",
    "CombinatorialReport",
    "validate_combinatorial_test",
    "extension_values",
    "extend_by_monotonicity",
    "hypergeom_prefix_prob",
    "UrnReport",
    "replacement_domination_check",
    "bernoulli_poly",
    "CertifyReport",
    "certify_bernoulli_test",
]


class CombinatorialTest(ExtendedTest):
    """An extended test whose class averages have been checked."""


def words_with_ones(n: int, k: int) -> list[str]:
    """B(n, k): length-n words with exactly k ones, lexicographic."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return [x for x in all_words(n) if x.count("1") == k]


def class_average(f: Mapping[str, Fraction], n: int, k: int) -> Fraction:
    """Average of f over B(n, k)."""
    members = words_with_ones(n, k)
    total = Fraction(0)
    for x in members:
        if x not in f:
            raise ValueError(f"function undefined on {x!r}")
        total += Fraction(f[x])
    return total / comb(n, k)


@dataclass
class CombinatorialReport:
    ok: bool
    rows: list[tuple[str, str, str, str]] = field(default_factory=list)
    first_violation: Optional[str] = None

    def tsv_rows(self):
        return self.rows


def validate_combinatorial_test(
    f: Mapping[str, Fraction] | ExtendedTest, depth: int
) -> CombinatorialReport:
    """Check monotonicity and the B(n, k) average bound for every n <= depth."""
    values = f.values if isinstance(f, ExtendedTest) else dict(f)
    rows: list[tuple[str, str, str, str]] = []
    first: Optional[str] = None
    for length in range(depth + 1):
        for x in all_words(length):
            if x not in values:
                return CombinatorialReport(
                    False,
                    [(x, "-", "-", "missing")],
                    f"value missing at {x!r}",
                )
    for length in range(depth):
        for x in all_words(length):
            for b in "01":
                if values[x] > values[x + b]:
                    rows.append((x + b, fmt(values[x + b]), fmt(values[x]), "non-monotone"))
                    if first is None:
                        first = f"monotonicity fails at {(x + b)!r}"
    for n in range(depth + 1):
        for k in range(n + 1):
            average = class_average(values, n, k)
            ok_class = average <= 1
            rows.append(
                (f"B({n},{k})", fmt(average), fmt(1), "pass" if ok_class else "fail")
            )
            if not ok_class and first is None:
                first = f"class average at B({n},{k}) is {average} > 1"
    return CombinatorialReport(ok=first is None, rows=rows, first_violation=first)


def extension_values(
    values: Mapping[str, Fraction], n_target: int
) -> dict[str, Fraction]:
    """Copy each deepest value onto both children, repeatedly, up to n_target."""
    out = {x: Fraction(v) for x, v in values.items()}
    depth = max(len(x) for x in out)
    if n_target < depth:
        raise ValueError("target depth below the given depth")
    for length in range(depth, n_target):
        for x in all_words(length):
            for b in "01":
                out[x + b] = out[x]
    return out


def extend_by_monotonicity(
    f: Mapping[str, Fraction] | ExtendedTest, n_target: int
) -> CombinatorialTest:
    """Extend a combinatorial test to longer words by value copying.

    The input must already be a valid combinatorial test on its own depth;
    the output is validated again rather than trusted.
    """
    values = dict(f.values) if isinstance(f, ExtendedTest) else {x: Fraction(v) for x, v in f.items()}
    depth = max(len(x) for x in values)
    base = validate_combinatorial_test(values, depth)
    if not base.ok:
        raise ValueError(f"input is not a combinatorial test: {base.first_violation}")
    extended_values = extension_values(values, n_target)
    extended = validate_combinatorial_test(extended_values, n_target)
    if not extended.ok:
        raise AssertionError(
            f"monotone extension broke validity: {extended.first_violation}"
        )
    return CombinatorialTest(n_target, extended_values)


def hypergeom_prefix_prob(N: int, K: int, x: str) -> Fraction:
    """Probability that draws without replacement from an N-ball urn
    (K of them marked 1) produce exactly the word x.

    Impossible draws yield 0 rather than an error.
    """
    validate_bits(x)
    if not 0 <= K <= N:
        raise ValueError(f"need 0 <= K <= N, got K={K}, N={N}")
    if len(x) > N:
        raise ValueError(f"word longer than the urn: {len(x)} > {N}")
    ones_left, zeros_left = K, N - K
    prob = Fraction(1)
    for i, bit in enumerate(x):
        remaining = N - i
        if bit == "1":
            if ones_left == 0:
                return Fraction(0)
            prob *= Fraction(ones_left, remaining)
            ones_left -= 1
        else:
            if zeros_left == 0:
                return Fraction(0)
            prob *= Fraction(zeros_left, remaining)
            zeros_left -= 1
    return prob


@dataclass
class UrnReport:
    ok: bool
    n: int
    N: int
    factor: Fraction
    max_ratio: Fraction
    argmax: Optional[tuple[int, str]]  # (K, word) attaining the max ratio

    def tsv_rows(self):
        where = f"K={self.argmax[0]},x={self.argmax[1]}" if self.argmax else "-"
        return [
            (
                str(self.n),
                fmt(self.factor),
                fmt(self.max_ratio),
                where,
                "pass" if self.ok else "fail",
            )
        ]


def replacement_domination_check(n: int) -> UrnReport:
    """Verify the urn bound at N = n^2: sampling K of N without replacement
    never beats the p = K/N coin by more than (N/(N-n))^n on length-n words.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    N = n * n
    factor = Fraction(N, N - n) ** n
    max_ratio = Fraction(0)
    argmax: Optional[tuple[int, str]] = None
    ok = True
    for K in range(N + 1):
        p = Fraction(K, N)
        for x in all_words(n):
            hyper = hypergeom_prefix_prob(N, K, x)
            bern = bernoulli_mass(p, x)
            if hyper > factor * bern:
                ok = False
            if bern > 0 and hyper / bern > max_ratio:
                max_ratio = hyper / bern
                argmax = (K, x)
    return UrnReport(ok=ok, n=n, N=N, factor=factor, max_ratio=max_ratio, argmax=argmax)


def bernoulli_poly(test: ExtendedTest, n: int) -> UnivariatePoly:
    """The level-n coin average sum_x T(x) p^ones(x) (1-p)^zeros(x), expanded."""
    if n > test.depth:
        raise ValueError("level beyond test depth")
    by_ones = [Fraction(0)] * (n + 1)
    for x in all_words(n):
        by_ones[x.count("1")] += test.values[x]
    # p^k (1-p)^(n-k) expanded via the binomial theorem
    result = UnivariatePoly([])
    p_power = constant(Fraction(1))
    p_poly = UnivariatePoly([Fraction(0), Fraction(1)])
    one_minus_p = UnivariatePoly([Fraction(1), Fraction(-1)])
    for k in range(n + 1):
        if by_ones[k] != 0:
            q = p_power
            for _ in range(n - k):
                q = q * one_minus_p
            result = result + q.scale(by_ones[k])
        p_power = p_power * p_poly
    return result


@dataclass
class CertifyReport:
    ok: bool
    rows: list[tuple[str, str, str, str]] = field(default_factory=list)
    witness: Optional[tuple[int, Fraction]] = None  # (level, p with average > 1)

    def tsv_rows(self):
        return self.rows


def certify_bernoulli_test(test: ExtendedTest) -> CertifyReport:
    """Decide, level by level, whether the coin average stays below 1 for
    every p in [0, 1].  A failing level carries an exact rational witness p.
    """
    rows = []
    witness: Optional[tuple[int, Fraction]] = None
    for n in range(test.depth + 1):
        integral = bernoulli_poly(test, n)
        slack = constant(Fraction(1)) - integral
        ok_level, bad_p = nonneg_on_unit_interval(slack)
        rows.append(
            (
                str(n),
                str(max(integral.degree, 0)),
                "certified" if ok_level else "rejected",
                fmt(bad_p) if bad_p is not None else "-",
            )
        )
        if not ok_level and witness is None:
            witness = (n, bad_p)
    return CertifyReport(ok=witness is None, rows=rows, witness=witness)
