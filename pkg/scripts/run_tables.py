#!/usr/bin/env python3
"""Rebuild the Monte Carlo reference tables at a configurable replication count.

Emits CSV to stdout: critical-value rows (one per method/length), bias rows
for the fractionally integrated and stable alternatives, and a power grid.
At --reps 5000 this reproduces the full study; --reps 200 gives a quick look.
"""
import argparse
import sys
import time

from selfaffine.montecarlo import critical_values, run_replications
from selfaffine.simulate import arfima_spec, lstable_spec_for_hurst, niid_spec

SCALING_METHODS = ("rra", "fa1", "fa2", "fa3")


def table_critvals(lengths, reps, seed, out):
    print("table,method,T,mean,sd,c10,c05,c01", file=out)
    for T in lengths:
        for method in SCALING_METHODS:
            sample = run_replications(niid_spec(T), method, reps, seed)
            t = critical_values(sample)
            print(f"critvals,{method},{T},{t.mean:.4f},{t.sd:.4f},"
                  f"{t.cutoff(0.10):.4f},{t.cutoff(0.05):.4f},{t.cutoff(0.01):.4f}",
                  file=out)


def table_bias(lengths, reps, seed, out):
    print("table,model,H,method,T,mean,sd", file=out)
    for T in lengths:
        for H in (0.54, 0.58, 0.62):
            for method in SCALING_METHODS:
                for model, spec in (("arfima", arfima_spec(H - 0.5, T)),
                                    ("lstable", lstable_spec_for_hurst(H, T))):
                    s = run_replications(spec, method, reps, seed)
                    print(f"bias,{model},{H},{method},{T},"
                          f"{s.values.mean():.4f},{s.values.std(ddof=1):.4f}",
                          file=out)


def table_power(lengths, reps, seed, out):
    print("table,model,H,method,T,level,power", file=out)
    for T in lengths:
        tables = {m: critical_values(run_replications(niid_spec(T), m, reps, seed))
                  for m in SCALING_METHODS}
        for H in (0.54, 0.58, 0.62):
            for method in SCALING_METHODS:
                for model, spec in (("arfima", arfima_spec(H - 0.5, T)),
                                    ("lstable", lstable_spec_for_hurst(H, T))):
                    s = run_replications(spec, method, reps, seed + 1)
                    rate = float((s.values > tables[method].cutoff(0.05)).mean())
                    print(f"power,{model},{H},{method},{T},0.05,{rate:.3f}",
                          file=out)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--lengths", default="1000,2000",
                        help="comma-separated sample sizes")
    parser.add_argument("--tables", default="critvals,bias,power")
    args = parser.parse_args()

    lengths = [int(x) for x in args.lengths.split(",")]
    t0 = time.time()
    wanted = args.tables.split(",")
    if "critvals" in wanted:
        table_critvals(lengths, args.reps, args.seed, sys.stdout)
    if "bias" in wanted:
        table_bias(lengths, args.reps, args.seed, sys.stdout)
    if "power" in wanted:
        table_power(lengths, args.reps, args.seed, sys.stdout)
    print(f"# done in {time.time() - t0:.0f}s with {args.reps} replications",
          file=sys.stderr)


if __name__ == "__main__":
    main()
