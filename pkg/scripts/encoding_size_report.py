#!/usr/bin/env python3
"""Report encoding sizes per k for one sample: variables, clauses by group,
typed vs base name semantics, templates on/off.

    python3 scripts/encoding_size_report.py sample.manifest --max-size 8
"""

from __future__ import annotations

import argparse

from alcfit.concepts import O_ALL, parse_operators
from alcfit.data import compute_types, interpretation_signature, load_sample
from alcfit.encoder import (encode_fitting, encode_semantics_base,
                            encode_semantics_typed, encode_syntax,
                            encode_templates)

GROUPS = ("syntax", "semantics", "fitting", "template")


def build(sample, k, ops, typed: bool, templates: bool):
    sigma = interpretation_signature(sample.interp)
    cnf, vm = encode_syntax(k, ops, sigma)
    vm.bind(sample.interp)
    if typed:
        cnf.absorb(encode_semantics_typed(k, sample.interp, vm,
                                          compute_types(sample.interp)))
    else:
        cnf.absorb(encode_semantics_base(k, sample.interp, vm))
    if templates:
        cnf.absorb(encode_templates(k, vm))
    cnf.absorb(encode_fitting(sample, vm))
    return cnf, vm


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("manifest")
    parser.add_argument("--max-size", type=int, default=8)
    parser.add_argument("--ops", type=parse_operators, default=O_ALL)
    args = parser.parse_args(argv)

    sample = load_sample(args.manifest)
    interp = sample.interp
    types = compute_types(interp)
    print(f"|domain|={len(interp.domain)} |types|={len(types)} "
          f"examples={sample.num_examples}")
    header = (["k", "variant", "vars", "clauses"]
              + [f"{g}" for g in GROUPS])
    print(" ".join(f"{h:>10}" for h in header))
    for k in range(1, args.max_size + 1):
        for typed, templates, label in ((True, True, "typed+tpl"),
                                        (True, False, "typed"),
                                        (False, False, "base")):
            cnf, vm = build(sample, k, args.ops, typed, templates)
            row = [str(k), label, str(vm.num_vars), str(cnf.num_clauses)]
            row += [str(cnf.group_total(g)) for g in GROUPS]
            print(" ".join(f"{c:>10}" for c in row))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
