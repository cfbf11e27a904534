#!/usr/bin/env python3
"""Uniformity experiment: tiny model bias vs exact-uniformity failure.

Samples a biased source across many seeds and tabulates the three
quantities the experiment is about: the model's exact distance from
uniform, the empirical distance of each run, and the fixed failure
probability 1 - 2^(-block_len) of matching an independent uniform key.
Also prints the golden-fixture values frozen in the test suite.
"""

import argparse
import hashlib

import numpy as np

from keysec import (BernoulliSource, empirical_distance,
                    model_distance_to_uniform, sample_blocks,
                    uniformity_failure_report)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bias", type=float, default=1e-4)
    parser.add_argument("--block-len", type=int, default=8)
    parser.add_argument("--count", type=int, default=10**6)
    parser.add_argument("--seeds", type=int, default=20)
    args = parser.parse_args()

    model = BernoulliSource(args.bias)
    print(f"model delta (1-bit blocks) : {model_distance_to_uniform(model, 1)!r}")
    print(f"model delta ({args.block_len}-bit blocks): "
          f"{model_distance_to_uniform(model, args.block_len)!r}")

    deltas = []
    uniform_hits = 0
    for seed in range(args.seeds):
        sample = sample_blocks(model, args.block_len, args.count, seed)
        rep = uniformity_failure_report(sample)
        deltas.append(rep.empirical_delta)
        uniform_hits += rep.exactly_uniform
        print(f"seed {seed:3d}: empirical delta {rep.empirical_delta:.6f}  "
              f"exactly uniform {rep.exactly_uniform}  independent failure "
              f"1 - 2^{rep.independent_failure.log2_complement:.0f}")
    print(f"\nempirical delta mean {np.mean(deltas):.6f} "
          f"(range [{min(deltas):.6f}, {max(deltas):.6f}])")
    print(f"exactly uniform in {uniform_hits}/{args.seeds} runs")

    # golden fixture regeneration (bias 1e-3, 8-bit blocks, seed 42)
    golden = sample_blocks(BernoulliSource(1e-3), 8, 16, seed=42)
    print(f"\ngolden first16 : {list(map(int, golden.values))}")
    big = sample_blocks(BernoulliSource(1e-3), 8, 10**6, seed=42)
    digest = hashlib.sha256(big.values.astype("<i8").tobytes()).hexdigest()
    print(f"golden delta   : {empirical_distance(big)!r}")
    print(f"golden sha256  : {digest}")


if __name__ == "__main__":
    main()
