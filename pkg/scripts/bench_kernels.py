#!/usr/bin/env python3
"""Compare the compiled kernels against the pure-Python fallback.

Times paint_window and count_changed on session-sized inputs and prints
one table row per (kernel, backend, size). Run from a checkout:

    python3 scripts/bench_kernels.py [--repeats 200]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from brainb.kernels import select_backend


def make_inputs(rng: np.random.Generator, side: int, boxes: int):
    buf = np.zeros((side, side), dtype=np.uint8)
    xy = rng.integers(-20, side + 20, size=(boxes, 2))
    half = rng.integers(4, 16, size=(boxes, 2))
    rects = np.empty((boxes, 5), dtype=np.int64)
    rects[:, 0] = xy[:, 0] - half[:, 0]
    rects[:, 1] = xy[:, 1] - half[:, 1]
    rects[:, 2] = xy[:, 0] + half[:, 0] + 1
    rects[:, 3] = xy[:, 1] + half[:, 1] + 1
    rects[:, 4] = rng.integers(2, 9, size=boxes)
    other = rng.integers(0, 9, size=(side, side)).astype(np.uint8)
    return buf, rects, other


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        if dt < best:
            best = dt
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeats", type=int, default=200)
    args = ap.parse_args()

    backends = [select_backend("py")]
    try:
        native = select_backend("native")
        backends.append(native)
    except ImportError:
        print("compiled kernels not built; timing the python fallback only")

    rng = np.random.default_rng(0)
    cases = [(64, 24), (256, 64), (512, 128)]
    rows = []
    for side, boxes in cases:
        buf, rects, other = make_inputs(rng, side, boxes)
        for backend in backends:
            t_paint = best_of(
                lambda: backend.paint_window(buf, rects, 0, 0), args.repeats
            )
            backend.paint_window(buf, rects, 0, 0)
            t_count = best_of(
                lambda: backend.count_changed(buf, other), args.repeats
            )
            rows.append((side, boxes, backend.BACKEND_NAME, t_paint, t_count))

    print(f"{'size':>6} {'boxes':>6} {'backend':>8} {'paint_window':>14} {'count_changed':>14}")
    for side, boxes, name, t_paint, t_count in rows:
        print(
            f"{side:>6} {boxes:>6} {name:>8} {t_paint * 1e6:>11.1f} us {t_count * 1e6:>11.1f} us"
        )

    if len(backends) == 2:
        print()
        for side, boxes in cases:
            py = next(r for r in rows if r[0] == side and r[2] == "python")
            nat = next(r for r in rows if r[0] == side and r[2] != "python")
            print(
                f"{side}x{side}: paint {py[3] / nat[3]:.1f}x, "
                f"count {py[4] / nat[4]:.1f}x faster compiled"
            )


if __name__ == "__main__":
    main()
