#!/usr/bin/env python3
"""Sweep a seeded random corpus: for every sample, quantifier fragment, and
size k, compare encoding satisfiability against the brute-force oracle.

    python3 scripts/corpus_sweep.py --samples 20 --max-size 5

Prints any disagreement (there should be none) and a cell count summary.
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time

from alcfit.benchgen import gen_random
from alcfit.concepts import O_ALL, format_operators
from alcfit.data import compute_types, interpretation_signature
from alcfit.encoder import (encode_fitting, encode_semantics_typed,
                            encode_syntax, encode_templates,
                            pattern_bans_active)
from alcfit.oracle import exact_fit_profile
from alcfit.solver import make_session


def quantifier_fragments():
    frags = []
    for bits in itertools.product((False, True), repeat=5):
        ops = frozenset(op for op, b in zip(sorted(O_ALL), bits) if b)
        if ops & {"exists", "forall"}:
            frags.append(ops)
    return sorted(frags, key=lambda o: (len(o), format_operators(o)))


def encoding_sat(sample, ops, k) -> bool:
    sigma = interpretation_signature(sample.interp)
    cnf, vm = encode_syntax(k, ops, sigma)
    vm.bind(sample.interp)
    cnf.absorb(encode_semantics_typed(k, sample.interp, vm,
                                      compute_types(sample.interp)))
    cnf.absorb(encode_templates(k, vm))
    cnf.absorb(encode_fitting(sample, vm))
    session = make_session()
    try:
        session.add_cnf(cnf)
        return session.solve().status == "sat"
    finally:
        session.close()


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=10)
    parser.add_argument("--max-size", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    rng_seeds = range(args.seed, args.seed + args.samples)
    frags = quantifier_fragments()
    cells = disagreements = 0
    start = time.monotonic()
    for seed in rng_seeds:
        sample = gen_random(num_elements=3 + seed % 4, num_concept_names=2,
                            num_role_names=1 + seed % 2, edge_density=0.35,
                            num_pos=1 + seed % 2, num_neg=1, seed=seed)
        for ops in frags:
            profile = exact_fit_profile(sample, ops, args.max_size)
            for k in range(1, args.max_size + 1):
                sat = encoding_sat(sample, ops, k)
                cells += 1
                if sat != profile[k - 1]:
                    disagreements += 1
                    print(f"DISAGREE seed={seed} ops={format_operators(ops)} "
                          f"k={k}: encoder={sat} oracle={profile[k - 1]}")
    dt = time.monotonic() - start
    print(f"{cells} cells over {args.samples} samples x {len(frags)} "
          f"fragments x k<={args.max_size}: "
          f"{disagreements} disagreements in {dt:.1f}s")
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
