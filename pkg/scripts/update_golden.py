#!/usr/bin/env python3
"""
Golden-value script for the kac-roots sampler.
Prints or rewrites tests/data/golden_samples.json, or checks it against the
current generator.
"""

import argparse
import json
import os
import sys

# Ensure python/kac_roots package is discoverable
sys.path.insert(
    0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "python"))
)

import kac_roots as kr
from kac_roots.ensembles import Xoshiro256StarStar, sample_seed

GOLDEN_PATH = os.path.join(os.path.dirname(__file__), "..", "tests", "data", "golden_samples.json")


def build_golden(master_seed=0, index=0, degree=7):
    """Golden values: raw stream of one sample plus its first coefficients per ensemble."""
    rng = Xoshiro256StarStar(sample_seed(master_seed, index))
    samples = {}
    for dist in kr.Distribution:
        p = kr.sample(kr.EnsembleSpec(dist, degree, master_seed), index)
        samples[dist.value] = {"scale_exp": p.scale_exp, "coeffs": list(p.coeffs[:8])}
    return {
        "master_seed": master_seed,
        "index": index,
        "degree": degree,
        "raw_u64": rng.raw(8),
        "samples": samples,
    }


def check_golden(path):
    """Compare the stored file with freshly generated values."""
    with open(path, encoding="utf-8") as fh:
        stored = json.load(fh)
    fresh = build_golden(stored["master_seed"], stored["index"], stored["degree"])
    if stored != fresh:
        print(f"{path} does not match the current generator", file=sys.stderr)
        for dist in fresh["samples"]:
            if stored["samples"].get(dist) != fresh["samples"][dist]:
                print(f"  {dist}: stored {stored['samples'].get(dist)} != {fresh['samples'][dist]}", file=sys.stderr)
        return False
    print(f"{path} matches the current generator")
    return True


def main():
    parser = argparse.ArgumentParser(description="Maintain the kac-roots golden-value file")
    parser.add_argument(
        "--write", action="store_true", help="Rewrite the golden file instead of printing it"
    )
    parser.add_argument(
        "--check", action="store_true", help="Exit 1 if the golden file is out of date"
    )
    parser.add_argument("--path", default=GOLDEN_PATH, help="Golden file location")

    args = parser.parse_args()

    if args.check:
        sys.exit(0 if check_golden(args.path) else 1)

    text = json.dumps(build_golden(), indent=2) + "\n"
    if args.write:
        with open(args.path, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {args.path}")
    else:
        print(text, end="")


if __name__ == "__main__":
    main()
