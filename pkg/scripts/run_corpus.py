"""Run the built-in regression corpus and print a one-line summary per entry.

    python3 scripts/run_corpus.py --seed 0 --quad-nodes 16 --json corpus.json
"""

import argparse
import json
import time

from hhbounds.corpus import CorpusSettings, run_corpus


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--tolerance", type=float, default=1e-9)
    ap.add_argument("--quad-nodes", type=int, default=16)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--json", help="also write the full summary here")
    args = ap.parse_args()

    settings = CorpusSettings(args.seed, args.tolerance, args.quad_nodes, args.trials)
    start = time.perf_counter()
    summary = run_corpus(settings, jobs=args.jobs)
    elapsed = time.perf_counter() - start

    for row in summary["entries"]:
        terms = ""
        if row.get("mean") is not None:
            terms = f"lower={row['lower']:.10g} mean={row['mean']:.10g} upper={row['upper']:.10g}"
        print(f"{'ok  ' if row['passed'] else 'FAIL'} {row['name']:<26} {row['kind']:<10} {terms}")
    print(f"{summary['passed']}/{summary['total']} passed in {elapsed:.2f}s")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
    return 0 if summary["failed"] == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
