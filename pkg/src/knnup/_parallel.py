"""Row partitioning for pixel kernels.

Kernels write disjoint row bands of a preallocated output, so the result
does not depend on the number of workers or the order bands finish in.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor


def row_bands(n_rows: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(int(workers), n_rows))
    step = -(-n_rows // workers)
    return [(lo, min(lo + step, n_rows)) for lo in range(0, n_rows, step)]


def run_bands(kernel, n_rows: int, workers: int = 1) -> None:
    """Call ``kernel(lo, hi)`` for each row band, on a thread pool when workers > 1."""
    bands = row_bands(n_rows, workers)
    if len(bands) == 1:
        kernel(*bands[0])
        return
    with ThreadPoolExecutor(max_workers=len(bands)) as pool:
        for fut in [pool.submit(kernel, lo, hi) for lo, hi in bands]:
            fut.result()
