"""Run every sampled check for both canonical pairs and print the tallies.

Run:  python demos/harness_tour.py [report_dir]
"""
import sys

from escdyn.harness import run_suite, write_reports

all_reports = []
for pair in ("fatou", "exp"):
    print(f"== pair {pair}")
    reports = run_suite("all", pair=pair, threads=4, log=lambda s: print("  " + s))
    for r in reports:
        r.check_name = f"{pair}_{r.check_name}"
        for w in r.warnings:
            print("  warning:", w)
    all_reports += reports

print("violations:", sum(r.violated for r in all_reports))
if len(sys.argv) > 1:
    print("wrote", write_reports(all_reports, sys.argv[1]))
