"""Run the full benchmark grid over the committed fixtures and print a summary.

Usage: python3 scripts/bench_fixtures.py [--report out.csv] [--workers N]
"""

import argparse
import json
from pathlib import Path

from knnup.harness import PipelineSpec, compare_methods, emit_report, run_pipeline

DATA = Path(__file__).resolve().parents[1] / "tests" / "data"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--report", default="fixtures_report.csv")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    spec = PipelineSpec(corpus=[DATA], methods=["knn", "knn-fast", "selective", "bilinear"],
                        repeats=args.repeats, workers=args.workers)
    rows = run_pipeline(spec)
    emit_report(rows, "csv", args.report)
    for r in rows:
        m = r.metrics
        ssim = "n/a" if m.ssim is None else f"{m.ssim:.4f}"
        print(f"{r.image_id:14s} {r.f_y:>2d}x{r.f_x:<2d} {r.method:9s} "
              f"rmse={m.rmse:.5f} ssim={ssim} {r.wall_ms:8.2f} ms")
    print(json.dumps(compare_methods(rows)["summary"], indent=1))


if __name__ == "__main__":
    main()
