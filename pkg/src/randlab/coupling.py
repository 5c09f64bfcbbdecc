"""Coupling decisions on the hypercube, monotonization, and sparsity values.

Whether one level-n mass vector can be coupled below another along the
coordinatewise order is decided by an exact rational max-flow; infeasibility
is certified by a violating monotone upper set extracted from the min cut.
The brute-force criterion over all monotone 0/1 functions gives the same
answer (Strassen) and serves as a cross-check up to n = 4.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Optional

from .measures import DyadicMeasure, all_words, bernoulli_mass, realize, Bernoulli, validate_bits
from .randtests import ExtendedTest

__all__ = [
    "CapabilityError",
    "CouplingWitness",
    "CouplingResult",
    "leq_words",
    "is_coupled_below",
    "enumerate_upper_sets",
    "CriterionResult",
    "monotone_criterion_check",
    "monotonize",
    "PushdownReport",
    "pushdown_measure",
    "sparsity_value",
]


class CapabilityError(ValueError):
    """The requested instance exceeds a documented enumeration cap."""


def leq_words(x: str, y: str) -> bool:
    """Coordinatewise order on words of equal length."""
    if len(x) != len(y):
        raise ValueError("coordinatewise order needs equal lengths")
    return all(a <= b for a, b in zip(x, y))


@dataclass
class CouplingWitness:
    """A transportation plan on pairs x <= y with prescribed marginals."""

    flow: dict[tuple[str, str], Fraction]

    def row_sums(self) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for (x, _), v in self.flow.items():
            out[x] = out.get(x, Fraction(0)) + v
        return out

    def col_sums(self) -> dict[str, Fraction]:
        out: dict[str, Fraction] = {}
        for (_, y), v in self.flow.items():
            out[y] = out.get(y, Fraction(0)) + v
        return out


@dataclass
class CouplingResult:
    coupled: bool
    witness: Optional[CouplingWitness]
    certificate: Optional[list[str]]  # violating upper set, sorted
    p_mass: Optional[Fraction] = None
    q_mass: Optional[Fraction] = None


def _maxflow_level(
    p_mass: Mapping[str, Fraction], q_mass: Mapping[str, Fraction], n: int
) -> tuple[Fraction, dict[tuple[str, str], Fraction], set[str]]:
    """Exact max flow from P-words to Q-words along x <= y.

    Returns (flow value, edge flows, residual-reachable P-words).  Nodes are
    visited in lexicographic order so the result is deterministic.
    """
    words = all_words(n)
    source, sink = "S", "T"
    nodes = [source] + [("P", x) for x in words] + [("Q", y) for y in words] + [sink]
    cap: dict[tuple, Fraction] = {}
    adj: dict = {node: [] for node in nodes}

    def add_edge(u, v, c):
        cap[(u, v)] = c
        cap[(v, u)] = Fraction(0)
        adj[u].append(v)
        adj[v].append(u)

    for x in words:
        add_edge(source, ("P", x), Fraction(p_mass[x]))
    for x in words:
        for y in words:
            if leq_words(x, y):
                add_edge(("P", x), ("Q", y), Fraction(2))
    for y in words:
        add_edge(("Q", y), sink, Fraction(q_mass[y]))

    flow: dict[tuple, Fraction] = {edge: Fraction(0) for edge in cap}
    total = Fraction(0)
    while True:
        # BFS in deterministic adjacency order
        parent = {source: None}
        queue = [source]
        while queue and sink not in parent:
            u = queue.pop(0)
            for v in adj[u]:
                if v not in parent and cap[(u, v)] - flow[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            break
        bottleneck = None
        v = sink
        while parent[v] is not None:
            u = parent[v]
            slack = cap[(u, v)] - flow[(u, v)]
            bottleneck = slack if bottleneck is None else min(bottleneck, slack)
            v = u
        v = sink
        while parent[v] is not None:
            u = parent[v]
            flow[(u, v)] += bottleneck
            flow[(v, u)] -= bottleneck
            v = u
        total += bottleneck

    reachable = {source}
    queue = [source]
    while queue:
        u = queue.pop(0)
        for v in adj[u]:
            if v not in reachable and cap[(u, v)] - flow[(u, v)] > 0:
                reachable.add(v)
                queue.append(v)
    reachable_p = {node[1] for node in reachable if isinstance(node, tuple) and node[0] == "P"}

    edge_flows = {
        (x, y): flow[(("P", x), ("Q", y))]
        for x in words
        for y in words
        if leq_words(x, y) and flow[(("P", x), ("Q", y))] > 0
    }
    return total, edge_flows, reachable_p


def is_coupled_below(P: DyadicMeasure, Q: DyadicMeasure, n: int) -> CouplingResult:
    """Decide whether the level-n restriction of P can be coupled below Q.

    Feasibility returns the transportation plan; infeasibility returns the
    up-closure of the min-cut side, a monotone set U with P(U) > Q(U).
    """
    if n > min(P.depth, Q.depth):
        raise ValueError("level beyond a measure table depth")
    p_mass = {x: P.mass(x) for x in all_words(n)}
    q_mass = {y: Q.mass(y) for y in all_words(n)}
    total, edge_flows, reachable_p = _maxflow_level(p_mass, q_mass, n)
    supply = sum(p_mass.values(), Fraction(0))
    if total == supply:
        witness = CouplingWitness(edge_flows)
        return CouplingResult(coupled=True, witness=witness, certificate=None)
    upper = sorted(
        y for y in all_words(n) if any(leq_words(x, y) for x in reachable_p)
    )
    p_u = sum((p_mass[x] for x in upper), Fraction(0))
    q_u = sum((q_mass[y] for y in upper), Fraction(0))
    if not p_u > q_u:
        raise AssertionError("min-cut certificate failed to separate the masses")
    return CouplingResult(
        coupled=False, witness=None, certificate=upper, p_mass=p_u, q_mass=q_u
    )


@lru_cache(maxsize=None)
def enumerate_upper_sets(n: int) -> tuple[frozenset, ...]:
    """All monotone upper subsets of {0,1}^n, built from antichains.

    Refuses n > 4: the count is the Dedekind number (168 at n = 4) and the
    next one is out of desk range by policy.
    """
    if n > 4:
        raise CapabilityError(f"monotone-function enumeration capped at n = 4, got {n}")
    words = all_words(n)

    def up_closure(members: tuple[str, ...]) -> frozenset:
        return frozenset(
            y for y in words if any(leq_words(x, y) for x in members)
        )

    antichains: list[tuple[str, ...]] = []

    def grow(chosen: tuple[str, ...], start: int):
        antichains.append(chosen)
        for i in range(start, len(words)):
            w = words[i]
            if all(
                not leq_words(w, c) and not leq_words(c, w) for c in chosen
            ):
                grow(chosen + (w,), i + 1)

    grow((), 0)
    closures = {up_closure(a) for a in antichains}
    return tuple(sorted(closures, key=lambda s: (len(s), tuple(sorted(s)))))


@dataclass
class CriterionResult:
    ok: bool
    failing_upper_set: Optional[list[str]]
    p_mass: Optional[Fraction] = None
    q_mass: Optional[Fraction] = None


def monotone_criterion_check(P: DyadicMeasure, Q: DyadicMeasure, n: int) -> CriterionResult:
    """Brute-force Strassen criterion: P(U) <= Q(U) for every upper set U."""
    if n > min(P.depth, Q.depth):
        raise ValueError("level beyond a measure table depth")
    for upper in enumerate_upper_sets(n):
        p_u = sum((P.mass(x) for x in upper), Fraction(0))
        q_u = sum((Q.mass(y) for y in upper), Fraction(0))
        if p_u > q_u:
            return CriterionResult(
                ok=False, failing_upper_set=sorted(upper), p_mass=p_u, q_mass=q_u
            )
    return CriterionResult(ok=True, failing_upper_set=None)


def monotonize(t: Mapping[str, Fraction]) -> dict[str, Fraction]:
    """Pointwise max over coordinatewise-smaller words: the monotone hull."""
    words = sorted(t)
    if not words:
        return {}
    n = len(words[0])
    if len(words) != 2 ** n or any(len(w) != n for w in words):
        raise ValueError("need a total function on one level")
    hull: dict[str, Fraction] = {}
    for x in sorted(t, key=lambda w: (w.count("1"), w)):
        best = Fraction(t[x])
        for i, bit in enumerate(x):
            if bit == "1":
                best = max(best, hull[x[:i] + "0" + x[i + 1 :]])
        hull[x] = best
    return hull


@dataclass
class PushdownReport:
    coupled_ok: bool
    equality_ok: bool
    lhs: Fraction  # sum t dQ*
    rhs: Fraction  # sum monotonized-t dB_p


def pushdown_measure(
    t: Mapping[str, Fraction], p: Fraction, n: int
) -> tuple[DyadicMeasure, PushdownReport]:
    """Move each coin-measure leaf mass down to the smallest maximizer of t.

    Realizes the monotonization argument exactly: the resulting measure Q*
    couples below the coin measure and integrates t to the same value the
    coin measure gives the monotone hull of t.  Both claims are re-verified.
    """
    p = Fraction(p)
    hull = monotonize(t)
    q_leaves: dict[str, Fraction] = {x: Fraction(0) for x in all_words(n)}
    for x in all_words(n):
        candidates = _down_set(x)
        best = candidates[0]
        for c in candidates[1:]:
            if Fraction(t[c]) > Fraction(t[best]):
                best = c
        q_leaves[best] += bernoulli_mass(p, x)
    q_star = DyadicMeasure.from_leaves(n, q_leaves)
    lhs = sum((q_leaves[x] * Fraction(t[x]) for x in all_words(n)), Fraction(0))
    rhs = sum(
        (bernoulli_mass(p, x) * hull[x] for x in all_words(n)), Fraction(0)
    )
    coin = realize(Bernoulli(p), n)
    coupled = is_coupled_below(q_star, coin, n).coupled
    report = PushdownReport(
        coupled_ok=coupled, equality_ok=lhs == rhs, lhs=lhs, rhs=rhs
    )
    if not (report.coupled_ok and report.equality_ok):
        raise AssertionError("pushdown proof obligations failed")
    return q_star, report


def _down_set(x: str) -> list[str]:
    """All words <= x coordinatewise, in lexicographic order."""
    positions = [i for i, bit in enumerate(x) if bit == "1"]
    out = []
    for choice in itertools.product("01", repeat=len(positions)):
        word = list(x)
        for pos, bit in zip(positions, choice):
            word[pos] = bit
        out.append("".join(word))
    return sorted(out)


def sparsity_value(test: ExtendedTest, x: str) -> Fraction:
    """Depth-level lower bound for the sparsity test at x: the minimum of the
    test over leaves whose first |x| coordinates dominate x."""
    validate_bits(x)
    if len(x) > test.depth:
        raise ValueError("prefix deeper than test")
    best: Optional[Fraction] = None
    for y in all_words(test.depth):
        if leq_words(x, y[: len(x)]):
            v = test.values[y]
            if best is None or v < best:
                best = v
    assert best is not None
    return best
