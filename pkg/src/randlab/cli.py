"""Command-line entry point.

Exit codes: 0 when every asserted property holds, 1 for a certified
violation (the report carries a machine-checkable witness), 2 for usage,
parse, or capability errors.  Output is TSV with a header row, on stdout or
`--out`, and is byte-for-byte deterministic for identical inputs.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import bernoulli as bl
from . import coupling as cp
from . import neutral as nt
from . import randtests as rt
from . import separator as sp
from .exact import fmt, parse_rational
from .formats import (
    ParseError,
    format_word,
    parse_machine_file,
    parse_measure_spec_file,
    parse_sequence_file,
    parse_test_file,
    parse_word,
    render_test_file,
    render_tsv,
)
from .machines import (
    MachineError,
    MonotoneMachine,
    PrefixMachine,
    canonical_machine,
    kp_of,
    semimeasure_table,
    semimeasure_total,
)
from .measures import (
    DyadicMeasure,
    MeasureError,
    all_words,
    count_upcrossings,
    realize,
)

OK, VIOLATION, USAGE = 0, 1, 2


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="ascii", newline="\n") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_measure(args, depth: int) -> DyadicMeasure:
    spec = parse_measure_spec_file(args.measure)
    return realize(spec, depth)


def _cmd_validate_measure(args) -> int:
    spec = parse_measure_spec_file(args.spec)
    try:
        measure = realize(spec, args.depth)
    except MeasureError as exc:
        _emit(
            render_tsv(
                ("prefix", "value", "bound", "verdict"),
                [(format_word(exc.prefix or ""), "-", "-", "fail")],
            ),
            args.out,
        )
        return VIOLATION
    rows = []
    for length in range(measure.depth + 1):
        level_sum = sum((mass for _, mass in measure.level(length)), Fraction(0))
        rows.append((f"len={length}", fmt(level_sum), fmt(1), "pass"))
    _emit(render_tsv(("prefix", "value", "bound", "verdict"), rows), args.out)
    return OK


def _cmd_validate_test(args) -> int:
    test = parse_test_file(args.test)
    measure = _load_measure(args, args.depth if args.depth is not None else test.depth)
    report = rt.validate_extended_test(test, measure)
    _emit(render_tsv(("prefix", "value", "bound", "verdict"), report.tsv_rows()), args.out)
    return OK if report.ok else VIOLATION


def _cmd_deficiency(args) -> int:
    sequence = parse_sequence_file(args.sequence)
    prefix_machine: PrefixMachine | None = None
    monotone_machine: MonotoneMachine | None = None
    for path in args.machine or []:
        machine = parse_machine_file(path)
        if isinstance(machine, PrefixMachine):
            prefix_machine = machine
        else:
            monotone_machine = machine
    if prefix_machine is None:
        prefix_machine = canonical_machine()
    depth = args.depth if args.depth is not None else min(len(sequence), 6)
    if len(sequence) < depth:
        raise ParseError("sequence shorter than the requested depth")
    measure = _load_measure(args, depth)
    profile = rt.deficiency_profile(
        prefix_machine, monotone_machine, measure, sequence[:depth]
    )
    header = (
        "prefix",
        "m_ratio",
        "sum",
        "sup",
        "tbar",
        "that",
        "M_ratio",
        "flag",
        "sum_over_sup",
    )
    _emit(render_tsv(header, profile.tsv_rows()), args.out)
    return OK


def _cmd_min_extension(args) -> int:
    test = parse_test_file(args.test)
    x = parse_word(args.prefix)
    value = rt.min_extension(test, x)
    _emit(
        render_tsv(("prefix", "value", "bound", "verdict"), [(format_word(x), fmt(value), "-", "ok")]),
        args.out,
    )
    return OK


def _cmd_cond_average(args) -> int:
    test = parse_test_file(args.test)
    x = parse_word(args.prefix)
    measure = _load_measure(args, test.depth)
    value = rt.conditional_average(test, measure, x)
    flagged = measure.mass(x) == 0 and value == 0
    _emit(
        render_tsv(
            ("prefix", "value", "bound", "verdict"),
            [(format_word(x), fmt(value), "-", "flagged" if flagged else "ok")],
        ),
        args.out,
    )
    return OK


def _cmd_martingale(args) -> int:
    test = parse_test_file(args.g)
    measure = _load_measure(args, test.depth)
    report = rt.martingale_check(test.values, measure, args.mode)
    _emit(render_tsv(("prefix", "lhs", "rhs", "verdict"), report.tsv_rows()), args.out)
    return OK if report.ok else VIOLATION


def _cmd_prob_check(args) -> int:
    test = parse_test_file(args.test)
    measure = _load_measure(args, test.depth)
    report = rt.prob_bound_check(test, measure)
    rows = list(report.tsv_rows())
    if report.witness is not None:
        n_value, tail = report.witness
        rows.append((f"witness-N={fmt(n_value)}", fmt(tail), fmt(1 / n_value), "fail"))
    _emit(render_tsv(("prefix", "value", "bound", "verdict"), rows), args.out)
    return OK if report.ok else VIOLATION


def _cmd_convert(args) -> int:
    test = parse_test_file(args.test)
    measure = _load_measure(args, test.depth)
    converted, report = rt.prob_to_avg_convert(test, measure)
    rows = [
        (format_word(x), fmt(v), "-", "value")
        for x, v in sorted(converted.values.items(), key=lambda kv: (len(kv[0]), kv[0]))
    ]
    rows.extend(report.tsv_rows())
    _emit(render_tsv(("prefix", "value", "bound", "verdict"), rows), args.out)
    return OK if report.ok else VIOLATION


def _cmd_bernoulli_validate(args) -> int:
    test = parse_test_file(args.test)
    report = bl.validate_combinatorial_test(test, test.depth)
    _emit(render_tsv(("class", "average", "bound", "verdict"), report.tsv_rows()), args.out)
    return OK if report.ok else VIOLATION


def _cmd_bernoulli_extend(args) -> int:
    test = parse_test_file(args.test)
    if args.depth is None:
        raise ParseError("--depth (target) is required for bernoulli-extend")
    extended = bl.extend_by_monotonicity(test, args.depth)
    _emit(render_test_file(extended), args.out)
    return OK


def _cmd_urn_check(args) -> int:
    report = bl.replacement_domination_check(args.n)
    _emit(
        render_tsv(("n", "factor", "max_ratio", "argmax", "verdict"), report.tsv_rows()),
        args.out,
    )
    return OK if report.ok else VIOLATION


def _cmd_certify_bernoulli(args) -> int:
    test = parse_test_file(args.test)
    report = bl.certify_bernoulli_test(test)
    _emit(render_tsv(("level", "degree", "verdict", "witness"), report.tsv_rows()), args.out)
    return OK if report.ok else VIOLATION


def _cmd_coupling(args) -> int:
    lower = realize(parse_measure_spec_file(args.lower), args.depth)
    upper = realize(parse_measure_spec_file(args.upper), args.depth)
    result = cp.is_coupled_below(lower, upper, args.depth)
    if result.coupled:
        rows = [
            (x, y, fmt(v))
            for (x, y), v in sorted(result.witness.flow.items())
        ]
        _emit(render_tsv(("x", "y", "flow"), rows), args.out)
        return OK
    rows = [(y, fmt(result.p_mass), fmt(result.q_mass)) for y in result.certificate]
    _emit(render_tsv(("upper_set_word", "P(U)", "Q(U)"), rows), args.out)
    return VIOLATION


def _cmd_monotone_criterion(args) -> int:
    lower = realize(parse_measure_spec_file(args.lower), args.depth)
    upper = realize(parse_measure_spec_file(args.upper), args.depth)
    result = cp.monotone_criterion_check(lower, upper, args.depth)
    if result.ok:
        _emit(render_tsv(("upper_set_word", "P(U)", "Q(U)"), [("all", "-", "pass")]), args.out)
        return OK
    rows = [
        (y, fmt(result.p_mass), fmt(result.q_mass)) for y in result.failing_upper_set
    ]
    _emit(render_tsv(("upper_set_word", "P(U)", "Q(U)"), rows), args.out)
    return VIOLATION


def _cmd_monotonize(args) -> int:
    test = parse_test_file(args.test)
    leaves = {x: test.values[x] for x in all_words(test.depth)}
    hull = cp.monotonize(leaves)
    rows = [(x, fmt(hull[x])) for x in all_words(test.depth)]
    _emit(render_tsv(("word", "value"), rows), args.out)
    return OK


def _cmd_sparsity(args) -> int:
    test = parse_test_file(args.test)
    measure = _load_measure(args, test.depth)
    report = rt.validate_extended_test(test, measure)
    x = parse_word(args.prefix)
    value = cp.sparsity_value(test, x)
    rows = list(report.tsv_rows())
    rows.append(
        (format_word(x), fmt(value), f"depth-{test.depth}-lower-bound", "ok" if report.ok else "invalid-test")
    )
    _emit(render_tsv(("prefix", "value", "bound", "verdict"), rows), args.out)
    return OK if report.ok else VIOLATION


def _cmd_separator(args) -> int:
    p = parse_rational(args.p)
    if args.certify:
        try:
            n = int(args.target)
        except ValueError as exc:
            raise ParseError("--certify expects an integer block length") from exc
        report = sp.chebyshev_tail_check(n, p)
        _emit(
            render_tsv(("n", "p", "mu", "deviating_counts", "verdict"), report.tsv_rows()),
            args.out,
        )
        return OK if report.certified else VIOLATION
    omega = parse_sequence_file(args.target)
    report = sp.separator_value(omega, p)
    rows = list(report.tsv_rows())
    if args.class_test:
        class_test = parse_test_file(args.class_test)
        composite = sp.class_plus_separator(
            omega[: min(len(omega), class_test.depth)], p, class_test
        )
        class_val, sep_val, combined = composite.tsv_rows()[0]
        rows.append(("composite", class_val, sep_val, combined))
    _emit(render_tsv(("k", "block", "count", "verdict"), rows), args.out)
    return OK


def _cmd_upcrossings(args) -> int:
    omega = parse_sequence_file(args.sequence)
    x = parse_word(args.block)
    alpha = parse_rational(args.alpha)
    beta = parse_rational(args.beta)
    count = count_upcrossings(omega, x, alpha, beta)
    _emit(
        render_tsv(
            ("block", "alpha", "beta", "count"),
            [(format_word(x), fmt(alpha), fmt(beta), str(count))],
        ),
        args.out,
    )
    return OK


def _cmd_neutral(args) -> int:
    sequences = [parse_sequence_file(path) for path in args.sequences]
    if args.machine:
        machine = parse_machine_file(args.machine[0])
        if not isinstance(machine, PrefixMachine):
            raise ParseError("neutral search needs a prefix machine")
    else:
        machine = canonical_machine()
    depth = args.depth if args.depth is not None else min(len(s) for s in sequences)
    cell = nt.sperner_search(sequences, machine, depth, args.resolution)
    rows = []
    for mix, label, value in zip(cell.vertices, cell.labels, cell.values):
        weights = ",".join(fmt(w) for w in mix.weights)
        rows.append((weights, str(label), fmt(value), fmt(cell.diameter)))
    _emit(render_tsv(("weights", "label", "value", "diameter"), rows), args.out)
    return OK


def _cmd_machine_info(args) -> int:
    machine = parse_machine_file(args.machine_file)
    if isinstance(machine, MonotoneMachine):
        rows = [
            (format_word(p), format_word(o), "-", "entry") for p, o in machine.entries
        ]
        rows.append(("consistent", "-", "-", "pass"))
        _emit(render_tsv(("program", "output", "kp", "verdict"), rows), args.out)
        return OK
    total = semimeasure_total(machine)
    table = semimeasure_table(machine)
    rows = []
    for output in sorted(table, key=lambda w: (len(w), w)):
        rows.append(
            (
                format_word(output),
                fmt(table[output]),
                fmt(kp_of(machine, output)),
                "output",
            )
        )
    rows.append(("total", fmt(total), fmt(1), "pass" if total <= 1 else "fail"))
    _emit(render_tsv(("word", "mass", "kp", "verdict"), rows), args.out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randlab",
        description="Exact-rational laboratory for randomness tests on binary prefixes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, measure=False, depth=False, machine=False, resolution=False):
        p.add_argument("--out", help="write the TSV report to this path")
        if measure:
            p.add_argument("--measure", required=True, help="measure spec file")
        if depth:
            p.add_argument("--depth", type=int, default=None)
        if machine:
            p.add_argument("--machine", action="append", help="machine table file")
        if resolution:
            p.add_argument("--resolution", type=int, default=16)

    p = sub.add_parser("validate-measure", help="check measure table axioms")
    p.add_argument("spec")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_validate_measure)

    p = sub.add_parser("validate-test", help="check extended-test averages")
    p.add_argument("test")
    common(p, measure=True, depth=True)
    p.set_defaults(func=_cmd_validate_test)

    p = sub.add_parser("deficiency", help="deficiency profile along a sequence")
    p.add_argument("sequence")
    common(p, measure=True, depth=True, machine=True)
    p.set_defaults(func=_cmd_deficiency)

    p = sub.add_parser("min-extension", help="minimal leaf value over extensions")
    p.add_argument("test")
    p.add_argument("prefix")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_min_extension)

    p = sub.add_parser("cond-average", help="conditional average over a cylinder")
    p.add_argument("test")
    p.add_argument("prefix")
    common(p, measure=True)
    p.set_defaults(func=_cmd_cond_average)

    p = sub.add_parser("martingale", help="check the (super)martingale identity")
    p.add_argument("g")
    common(p, measure=True)
    p.add_argument("--mode", choices=("martingale", "supermartingale"), default="martingale")
    p.set_defaults(func=_cmd_martingale)

    p = sub.add_parser("prob-check", help="probability-bound check")
    p.add_argument("test")
    common(p, measure=True)
    p.set_defaults(func=_cmd_prob_check)

    p = sub.add_parser("convert", help="probability-bounded to average-bounded")
    p.add_argument("test")
    common(p, measure=True)
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("bernoulli-validate", help="combinatorial class averages")
    p.add_argument("test")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bernoulli_validate)

    p = sub.add_parser("bernoulli-extend", help="extend a test by monotonicity")
    p.add_argument("test")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bernoulli_extend)

    p = sub.add_parser("urn-check", help="without-replacement domination bound")
    p.add_argument("n", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_urn_check)

    p = sub.add_parser("certify-bernoulli", help="Sturm certification per level")
    p.add_argument("test")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_certify_bernoulli)

    p = sub.add_parser("coupling", help="max-flow coupling feasibility")
    p.add_argument("lower")
    p.add_argument("upper")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_coupling)

    p = sub.add_parser("monotone-criterion", help="brute-force Strassen check")
    p.add_argument("lower")
    p.add_argument("upper")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_monotone_criterion)

    p = sub.add_parser("monotonize", help="monotone hull of a leaf function")
    p.add_argument("test")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_monotonize)

    p = sub.add_parser("sparsity", help="depth-level sparsity lower bound")
    p.add_argument("test")
    p.add_argument("prefix")
    common(p, measure=True)
    p.set_defaults(func=_cmd_sparsity)

    p = sub.add_parser("separator", help="dyadic-block frequency separator")
    p.add_argument("target", help="sequence file, or block length with --certify")
    p.add_argument("p")
    p.add_argument("--certify", action="store_true")
    p.add_argument("--class-test", help="combinatorial test file for the composite")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_separator)

    p = sub.add_parser("upcrossings", help="count strict upcrossings of block averages")
    p.add_argument("sequence")
    p.add_argument("block")
    p.add_argument("alpha")
    p.add_argument("beta")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_upcrossings)

    p = sub.add_parser("neutral", help="Sperner search for a neutral mixture cell")
    p.add_argument("sequences", nargs="+")
    common(p, depth=True, machine=True, resolution=True)
    p.set_defaults(func=_cmd_neutral)

    p = sub.add_parser("machine-info", help="machine table summary and checks")
    p.add_argument("machine_file")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_machine_info)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    try:
        return args.func(args)
    except (MachineError, MeasureError) as exc:
        pair = getattr(exc, "pair", None)
        prefix = getattr(exc, "prefix", None)
        if pair is not None:
            witness = ",".join(format_word(w) for w in pair)
        elif prefix is not None:
            witness = format_word(prefix)
        else:
            witness = "-"
        sys.stdout.write(
            render_tsv(
                ("error", "witness", "detail"),
                [("validation", witness, str(exc))],
            )
        )
        return VIOLATION
    except cp.CapabilityError as exc:
        sys.stderr.write(f"capability error: {exc}\n")
        return USAGE
    except (ParseError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
