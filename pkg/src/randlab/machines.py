"""Finite prefix-free and monotone machines, and the masses they induce.

A prefix machine is a finite program table; the shortest-program length and
the 2^-|p| output mass are read off exactly.  A monotone machine is a finite
consistent relation between programs and outputs; feeding it fair coin flips
induces an output mass on prefixes.  All results are relative to the supplied
table: no universality is attempted.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .exact import INF
from .measures import all_words, validate_bits

__all__ = [
    "MachineError",
    "PrefixMachine",
    "MonotoneMachine",
    "kp_of",
    "discrete_semimeasure",
    "semimeasure_total",
    "monotone_output_prob",
    "canonical_machine",
    "tiny_machine",
    "canonical_monotone_machine",
]


class MachineError(ValueError):
    """A machine table violates its structural invariant; names the pair."""

    def __init__(self, message: str, pair: tuple[str, str] | None = None):
        super().__init__(message)
        self.pair = pair


class PrefixMachine:
    """Finite map from programs to outputs with a prefix-free domain."""

    __slots__ = ("entries",)

    def __init__(self, entries: Mapping[str, str]):
        table = {}
        for program, output in entries.items():
            table[validate_bits(program)] = validate_bits(output)
        programs = sorted(table)
        for first, second in zip(programs, programs[1:]):
            if second.startswith(first):
                raise MachineError(
                    f"programs {first!r} and {second!r} violate prefix-freeness",
                    (first, second),
                )
        self.entries = table

    def kraft_sum(self) -> Fraction:
        return sum(
            (Fraction(1, 2 ** len(p)) for p in self.entries), Fraction(0)
        )

    def __repr__(self) -> str:
        return f"PrefixMachine({len(self.entries)} entries)"


class MonotoneMachine:
    """Finite set of (program, output) pairs, consistent on comparable programs."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[tuple[str, str]]):
        pairs = sorted({(validate_bits(p), validate_bits(o)) for p, o in entries})
        for i, (p, out) in enumerate(pairs):
            for q, out2 in pairs[i + 1 :]:
                comparable = p.startswith(q) or q.startswith(p)
                if comparable and not (
                    out.startswith(out2) or out2.startswith(out)
                ):
                    raise MachineError(
                        f"entries ({p!r} -> {out!r}) and ({q!r} -> {out2!r}) "
                        "have comparable programs but incomparable outputs",
                        (p, q),
                    )
        self.entries = pairs

    def max_program_length(self) -> int:
        return max((len(p) for p, _ in self.entries), default=0)

    def output(self, program: str) -> str:
        """sup of outputs over table entries whose program prefixes `program`."""
        best = ""
        for p, out in self.entries:
            if program.startswith(p) and len(out) > len(best):
                best = out
        return best

    def __repr__(self) -> str:
        return f"MonotoneMachine({len(self.entries)} entries)"


def kp_of(machine: PrefixMachine, x: str):
    """Length of a shortest program producing exactly x; INF if none."""
    validate_bits(x)
    lengths = [len(p) for p, out in machine.entries.items() if out == x]
    if not lengths:
        return INF
    return min(lengths)


def discrete_semimeasure(machine: PrefixMachine, x: str) -> Fraction:
    """Sum of 2^-|p| over programs p producing exactly x."""
    validate_bits(x)
    return sum(
        (Fraction(1, 2 ** len(p)) for p, out in machine.entries.items() if out == x),
        Fraction(0),
    )


def semimeasure_table(machine: PrefixMachine) -> dict[str, Fraction]:
    """Output mass per produced word (words not produced are absent)."""
    table: dict[str, Fraction] = {}
    for program, output in machine.entries.items():
        table[output] = table.get(output, Fraction(0)) + Fraction(1, 2 ** len(program))
    return table


def semimeasure_total(machine: PrefixMachine) -> Fraction:
    """Total output mass; <= 1 is forced by prefix-freeness (Kraft)."""
    total = machine.kraft_sum()
    if total > 1:
        raise MachineError("Kraft sum exceeds 1 on a prefix-free table")
    return total


def monotone_output_prob(machine: MonotoneMachine, x: str, horizon: int) -> Fraction:
    """Coin-flip probability that the machine output begins with x.

    Every input word of length `horizon` is evaluated; the horizon must cover
    the whole program table so longer inputs cannot change the verdict.
    """
    validate_bits(x)
    if horizon < machine.max_program_length():
        raise ValueError(
            f"horizon {horizon} below the maximal program length "
            f"{machine.max_program_length()}"
        )
    hits = sum(1 for p in all_words(horizon) if machine.output(p).startswith(x))
    return Fraction(hits, 2 ** horizon)


def canonical_machine(max_len: int = 6) -> PrefixMachine:
    """The shipped length-conditional encoder: 1^L 0 x -> x for |x| = L <= max_len.

    Every word of length L <= max_len is produced by exactly one program of
    length 2L + 1, so its shortest-program length is exactly 2L + 1.
    """
    entries = {}
    for length in range(max_len + 1):
        for x in all_words(length):
            entries["1" * length + "0" + x] = x
    return PrefixMachine(entries)


def tiny_machine() -> PrefixMachine:
    """Three entries saturating the Kraft inequality exactly."""
    return PrefixMachine({"0": "", "10": "0", "11": "1"})


def canonical_monotone_machine(max_len: int = 3) -> MonotoneMachine:
    """The shipped copy machine: every program up to max_len outputs itself."""
    entries = []
    for length in range(max_len + 1):
        for p in all_words(length):
            entries.append((p, p))
    return MonotoneMachine(entries)
