#!/usr/bin/env python3
"""Run every verification suite on the default grids and write report.csv."""

import sys
import time

from fracvar.suites import reports_to_csv, run_all


def main() -> int:
    t0 = time.perf_counter()
    reports, code = run_all()
    out = sys.argv[1] if len(sys.argv) > 1 else "report.csv"
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(reports_to_csv(reports))
    for rep in reports:
        npass = sum(1 for c in rep.cases if c.passed)
        print(f"[{'pass' if rep.passed else 'FAIL'}] {rep.suite}: {npass}/{len(rep.cases)} "
              f"({rep.wall_time:.2f}s)")
    print(f"wrote {out} in {time.perf_counter() - t0:.1f}s, exit {code}")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
