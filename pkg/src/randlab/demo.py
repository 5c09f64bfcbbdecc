"""Deterministic demo battery: writes inputs, runs every subcommand, saves TSV.

Usage: python -m randlab.demo <output-dir>

Running the battery twice into two directories must produce byte-identical
files; the acceptance suite relies on that.
"""
from __future__ import annotations

import os
import sys

from .cli import main as cli_main

INPUTS = {
    "uniform.measure": "bernoulli 1/2\n",
    "third.measure": "bernoulli 1/3\n",
    "table.measure": "table 2\n00 1/6\n01 1/3\n10 1/3\n11 1/6\n",
    "mix.measure": "mix\n1/2 uniform.measure\n1/2 third.measure\n",
    "ones.seq": "1111111111111111\n",
    "zeros.seq": "0000000000000000\n",
    "alt.seq": "0101010101010101\n",
    "tiny.machine": "0 -\n10 0\n11 1\n",
    "copy.machine": "monotone\n- -\n0 0\n1 1\n00 00\n01 01\n10 10\n11 11\n",
    "flat.test": "test 2\n- 1/1\n",
    "onesided.test": "test 2\n1 2/1\n",
    "twop.test": "test 1\n1 2/1\n",
    "leafy.test": "test 2\n00 4/1\n01 0/1\n10 0/1\n11 0/1\n",
}

COMMANDS = [
    ("validate_measure_uniform.tsv", ["validate-measure", "uniform.measure", "--depth", "6"]),
    ("validate_measure_table.tsv", ["validate-measure", "table.measure", "--depth", "2"]),
    ("validate_measure_mix.tsv", ["validate-measure", "mix.measure", "--depth", "4"]),
    ("validate_test_flat.tsv", ["validate-test", "flat.test", "--measure", "uniform.measure"]),
    ("validate_test_onesided.tsv", ["validate-test", "onesided.test", "--measure", "uniform.measure"]),
    (
        "deficiency_alt.tsv",
        [
            "deficiency",
            "alt.seq",
            "--measure",
            "uniform.measure",
            "--machine",
            "tiny.machine",
            "--machine",
            "copy.machine",
            "--depth",
            "4",
        ],
    ),
    ("min_extension.tsv", ["min-extension", "onesided.test", "1"]),
    ("cond_average.tsv", ["cond-average", "onesided.test", "1", "--measure", "uniform.measure"]),
    ("martingale_flat.tsv", ["martingale", "flat.test", "--measure", "uniform.measure"]),
    (
        "supermartingale_onesided.tsv",
        ["martingale", "onesided.test", "--measure", "uniform.measure", "--mode", "supermartingale"],
    ),
    ("prob_check_flat.tsv", ["prob-check", "flat.test", "--measure", "uniform.measure"]),
    ("convert_leafy.tsv", ["convert", "leafy.test", "--measure", "uniform.measure"]),
    ("bernoulli_validate_flat.tsv", ["bernoulli-validate", "flat.test"]),
    ("bernoulli_extend_flat.tsv", ["bernoulli-extend", "flat.test", "--depth", "4"]),
    ("urn_check_3.tsv", ["urn-check", "3"]),
    ("certify_flat.tsv", ["certify-bernoulli", "flat.test"]),
    ("certify_twop.tsv", ["certify-bernoulli", "twop.test"]),
    ("coupling_third_uniform.tsv", ["coupling", "third.measure", "uniform.measure", "--depth", "3"]),
    ("coupling_uniform_third.tsv", ["coupling", "uniform.measure", "third.measure", "--depth", "3"]),
    ("criterion_third_uniform.tsv", ["monotone-criterion", "third.measure", "uniform.measure", "--depth", "3"]),
    ("monotonize_leafy.tsv", ["monotonize", "leafy.test"]),
    ("sparsity_onesided.tsv", ["sparsity", "onesided.test", "0", "--measure", "uniform.measure"]),
    ("separator_ones.tsv", ["separator", "ones.seq", "0"]),
    ("separator_certify_8.tsv", ["separator", "8", "1/2", "--certify"]),
    ("upcrossings_alt.tsv", ["upcrossings", "alt.seq", "01", "1/4", "1/2"]),
    (
        "neutral_pair.tsv",
        ["neutral", "zeros.seq", "ones.seq", "--depth", "8", "--resolution", "64"],
    ),
    ("machine_info_tiny.tsv", ["machine-info", "tiny.machine"]),
    ("machine_info_copy.tsv", ["machine-info", "copy.machine"]),
]


def run(outdir: str) -> int:
    os.makedirs(outdir, exist_ok=True)
    for name, content in INPUTS.items():
        with open(os.path.join(outdir, name), "w", encoding="ascii", newline="\n") as fh:
            fh.write(content)
    statuses = []
    for out_name, argv in COMMANDS:
        rebased = [
            os.path.join(outdir, a) if (a in INPUTS) else a for a in argv
        ]
        rebased += ["--out", os.path.join(outdir, out_name)]
        status = cli_main(rebased)
        statuses.append(f"{out_name}\t{status}")
    with open(os.path.join(outdir, "exit_codes.tsv"), "w", encoding="ascii", newline="\n") as fh:
        fh.write("report\texit\n" + "\n".join(statuses) + "\n")
    return 0


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.stderr.write("usage: python -m randlab.demo <output-dir>\n")
        sys.exit(2)
    sys.exit(run(sys.argv[1]))
