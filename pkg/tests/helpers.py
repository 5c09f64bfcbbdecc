"""Seeded random generators for measures, machines, and tests.

Everything is built from exact rationals so the properties under test are
decided exactly; the RNG only chooses structure, never precision.
"""
from __future__ import annotations

import random
from fractions import Fraction

from randlab.machines import MonotoneMachine, PrefixMachine
from randlab.measures import DyadicMeasure, all_words
from randlab.randtests import ExtendedTest, from_weights

SPLIT_GRID = [Fraction(n, d) for d in (1, 2, 3, 4, 8) for n in range(d + 1)]


def random_dyadic_measure(rng: random.Random, depth: int) -> DyadicMeasure:
    """Random exact table built by recursive mass splitting.

    The split grid includes 0 and 1 so null prefixes occur regularly.
    """
    mass = {"": Fraction(1)}
    for length in range(depth):
        for x in all_words(length):
            theta = rng.choice(SPLIT_GRID)
            mass[x + "0"] = mass[x] * (1 - theta)
            mass[x + "1"] = mass[x] * theta
    return DyadicMeasure(depth, mass, validate=False)


def random_prefix_machine(rng: random.Random, max_program_len: int = 5, max_output_len: int = 4) -> PrefixMachine:
    """Random prefix-free table grown as a random code tree."""
    entries: dict[str, str] = {}

    def grow(node: str):
        if len(node) >= max_program_len or (node and rng.random() < 0.4):
            if rng.random() < 0.8:
                out_len = rng.randrange(max_output_len + 1)
                entries[node] = "".join(rng.choice("01") for _ in range(out_len))
            return
        grow(node + "0")
        grow(node + "1")

    grow("")
    if not entries:
        entries["0"] = ""
    return PrefixMachine(entries)


def random_monotone_machine(rng: random.Random, max_program_len: int = 3) -> MonotoneMachine:
    """Random consistent relation: outputs grow along a random monotone map."""
    out: dict[str, str] = {"": ""}
    for length in range(max_program_len):
        for p in all_words(length):
            for b in "01":
                suffix = "".join(rng.choice("01") for _ in range(rng.randrange(3)))
                out[p + b] = out[p] + suffix
    chosen = [
        (p, out[p])
        for length in range(max_program_len + 1)
        for p in all_words(length)
        if rng.random() < 0.6
    ]
    if not chosen:
        chosen = [("", "")]
    return MonotoneMachine(chosen)


def random_monotone_test(rng: random.Random, measure: DyadicMeasure, depth: int) -> ExtendedTest:
    """Random extended test passing the average bound, built from a scaled
    random weight budget (every monotone test arises this way)."""
    weights: dict[str, Fraction] = {}
    for length in range(depth + 1):
        for x in all_words(length):
            if rng.random() < 0.3:
                weights[x] = Fraction(rng.randrange(1, 9), rng.choice((1, 2, 3, 4)))
    budget = sum(
        (measure.mass(x) * w for x, w in weights.items()), Fraction(0)
    )
    if budget > 1:
        scale = Fraction(rng.randrange(1, 5), 4) / budget
        weights = {x: w * scale for x, w in weights.items()}
    return from_weights(weights, measure, depth)


def random_word(rng: random.Random, length: int) -> str:
    return "".join(rng.choice("01") for _ in range(length))
