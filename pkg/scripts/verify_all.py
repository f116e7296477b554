"""Run every lemma suite over its default instances; exit 1 if any fails."""
import sys
import time

from superq.verify import LEMMAS, run

failed = []
for lemma in LEMMAS:
    t0 = time.perf_counter()
    suite = run(lemma)
    n = len(suite.verdicts)
    bad = [v.instance for v in suite.verdicts if not v.ok]
    print(f"{lemma:15s} {n - len(bad):2d}/{n:<2d} {time.perf_counter() - t0:6.1f}s  failing: {bad}")
    if bad:
        failed.append(lemma)
sys.exit(1 if failed else 0)
