"""Pure-Python (numpy) pixel kernels.

Same contract as the compiled module in kernel.pyx; kernels.py picks one at
import time. Buffers are (h, w) uint8 palette-index bitmaps. Rectangles
arrive as an (n, 5) int64 array of x0, y0, x1, y1, color with exclusive
upper edges, in world coordinates; (ox, oy) is the world position of the
buffer's top-left pixel.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"


def paint_window(buf: np.ndarray, rects: np.ndarray, ox: int, oy: int) -> None:
    h, w = buf.shape
    for i in range(rects.shape[0]):
        x0 = int(rects[i, 0]) - ox
        y0 = int(rects[i, 1]) - oy
        x1 = int(rects[i, 2]) - ox
        y1 = int(rects[i, 3]) - oy
        if x0 < 0:
            x0 = 0
        if y0 < 0:
            y0 = 0
        if x1 > w:
            x1 = w
        if y1 > h:
            y1 = h
        if x0 < x1 and y0 < y1:
            buf[y0:y1, x0:x1] = np.uint8(rects[i, 4])


def count_changed(a: np.ndarray, b: np.ndarray) -> int:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return int(np.count_nonzero(a != b))
