"""Write a structure report for every default-battery algebra.

usage: python scripts/battery_reports.py OUTDIR [--seed N] [--skip repn]
"""
import argparse
import time
from pathlib import Path

from superq.catalog import DEFAULT_BATTERY, construct
from superq.report import build


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--skip", default="")
    a = ap.parse_args()
    out = Path(a.outdir)
    out.mkdir(parents=True, exist_ok=True)
    skip = [s for s in a.skip.split(",") if s]
    for spec in DEFAULT_BATTERY:
        t0 = time.perf_counter()
        r = build(construct(spec), a.seed, skip)
        name = "".join(ch if ch.isalnum() else "_" for ch in spec).strip("_")
        (out / f"{name}.json").write_text(r.dumps() + "\n")
        print(f"{spec:16s} ok={r.ok!s:5s} {time.perf_counter() - t0:6.1f}s  failed={r.failed()}")


if __name__ == "__main__":
    main()
