# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pixel kernels; contract documented in kernel_py.py."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "native"


def paint_window(cnp.uint8_t[:, ::1] buf, cnp.int64_t[:, ::1] rects, long ox, long oy):
    cdef Py_ssize_t h = buf.shape[0]
    cdef Py_ssize_t w = buf.shape[1]
    cdef Py_ssize_t n = rects.shape[0]
    cdef Py_ssize_t i, x, y
    cdef long x0, y0, x1, y1
    cdef cnp.uint8_t color
    for i in range(n):
        x0 = rects[i, 0] - ox
        y0 = rects[i, 1] - oy
        x1 = rects[i, 2] - ox
        y1 = rects[i, 3] - oy
        if x0 < 0:
            x0 = 0
        if y0 < 0:
            y0 = 0
        if x1 > w:
            x1 = w
        if y1 > h:
            y1 = h
        color = <cnp.uint8_t> rects[i, 4]
        for y in range(y0, y1):
            for x in range(x0, x1):
                buf[y, x] = color


def count_changed(cnp.uint8_t[:, ::1] a, cnp.uint8_t[:, ::1] b):
    if a.shape[0] != b.shape[0] or a.shape[1] != b.shape[1]:
        raise ValueError(
            f"shape mismatch: ({a.shape[0]}, {a.shape[1]}) vs ({b.shape[0]}, {b.shape[1]})"
        )
    cdef Py_ssize_t h = a.shape[0]
    cdef Py_ssize_t w = a.shape[1]
    cdef Py_ssize_t x, y
    cdef long total = 0
    for y in range(h):
        for x in range(w):
            if a[y, x] != b[y, x]:
                total += 1
    return total
