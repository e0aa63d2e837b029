"""Sweep the selective gradient threshold on one image.

Reports selectivity, fidelity against plain KNN and the median speedup.
Usage: python3 scripts/selective_sweep.py IMAGE [--factor 4] [--thresholds 0,1,5,20,60]
"""

import argparse
import statistics
import time

from knnup import SelectiveConfig, UpsampleConfig, evaluate, load_image, upsample_knn, upsample_selective


def median_ms(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return out, statistics.median(times) * 1e3


def main():
    ap = argparse.ArgumentParser(description="selective threshold sweep")
    ap.add_argument("image")
    ap.add_argument("--factor", type=int, default=4)
    ap.add_argument("--thresholds", default="0,1,5,20,60")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    img = load_image(args.image)
    cfg = UpsampleConfig.square(args.factor)
    base, base_ms = median_ms(lambda: upsample_knn(img, cfg), args.repeats)
    print(f"knn: {base_ms:.1f} ms")
    for t in (int(v) for v in args.thresholds.split(",")):
        (out, stats), ms = median_ms(lambda: upsample_selective(img, cfg, SelectiveConfig(t)), args.repeats)
        rep = evaluate(base, out)
        ssim = "n/a" if rep.ssim is None else f"{rep.ssim:.6f}"
        print(f"t={t:<4d} selectivity={stats.selectivity:.3f} rmse={rep.rmse:.2e} "
              f"ssim={ssim} {ms:.1f} ms ({ms / base_ms:.2f}x)")


if __name__ == "__main__":
    main()
