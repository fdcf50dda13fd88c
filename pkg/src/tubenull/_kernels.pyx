# cython: boundscheck=False, wraparound=False, cdivision=False
"""Compiled twins of the kernels in ``_pure.py`` (int64 only).

Callers guarantee that every intermediate sum fits in a signed 64-bit
integer; ``_accel`` checks the bound before dispatching here.
"""
import numpy as np

from libc.stdlib cimport calloc, free

ctypedef long long i64


def word_sums(values, weights):
    cdef i64[:, :] v = np.ascontiguousarray(np.atleast_2d(np.asarray(values, dtype=np.int64).T).T)
    cdef i64[:] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef Py_ssize_t m = v.shape[0], k = v.shape[1], n = w.shape[0]
    cdef Py_ssize_t total = m ** n
    out_arr = np.zeros((total, k), dtype=np.int64)
    cdef i64[:, :] out = out_arr
    cdef int *word = <int *> calloc(n + 1, sizeof(int))
    cdef i64 *acc = <i64 *> calloc((n + 1) * k, sizeof(i64))
    cdef Py_ssize_t r, p, j
    try:
        # acc[p*k + j] = partial sum of the first p symbols
        for p in range(n):
            for j in range(k):
                acc[(p + 1) * k + j] = acc[p * k + j] + v[0, j] * w[p]
        for r in range(total):
            for j in range(k):
                out[r, j] = acc[n * k + j]
            # odometer increment from the last position
            p = n - 1
            while p >= 0:
                word[p] += 1
                if word[p] < m:
                    break
                word[p] = 0
                p -= 1
            if p < 0:
                break
            while p < n:
                for j in range(k):
                    acc[(p + 1) * k + j] = acc[p * k + j] + v[word[p], j] * w[p]
                p += 1
    finally:
        free(word)
        free(acc)
    return out_arr


def pigeonhole_scan(int m, int n):
    cdef int need = (2 * n + m - 1) // m
    cdef int *word = <int *> calloc(n + 1, sizeof(int))
    cdef int *counts = <int *> calloc(m + 1, sizeof(int))
    cdef i64 rank = 0, fails = 0, first = -1
    cdef int p, c, a, b, top
    try:
        counts[0] = n
        while True:
            a = 0
            b = 0
            for c in range(m):
                top = counts[c]
                if top > a:
                    b = a
                    a = top
                elif top > b:
                    b = top
            if (a + b if m >= 2 else a) < need:
                fails += 1
                if first < 0:
                    first = rank
            rank += 1
            p = n - 1
            while p >= 0:
                counts[word[p]] -= 1
                word[p] += 1
                if word[p] < m:
                    counts[word[p]] += 1
                    break
                word[p] = 0
                counts[0] += 1
                p -= 1
            if p < 0:
                break
    finally:
        free(word)
        free(counts)
    return int(fails), int(first)


def freq_sums(values, weights, int symbol, int threshold):
    cdef i64[:] v = np.ascontiguousarray(values, dtype=np.int64)
    cdef i64[:] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef int m = v.shape[0], n = w.shape[0]
    cdef list chunks = []
    cap = 1 << 16
    buf_arr = np.empty(cap, dtype=np.int64)
    cdef i64[:] buf = buf_arr
    cdef Py_ssize_t fill = 0
    cdef int *word = <int *> calloc(n + 1, sizeof(int))
    cdef i64 *acc = <i64 *> calloc(n + 1, sizeof(i64))
    cdef int *cnt = <int *> calloc(n + 1, sizeof(int))
    cdef int p
    try:
        for p in range(n):
            acc[p + 1] = acc[p] + v[0] * w[p]
            cnt[p + 1] = cnt[p] + (1 if symbol == 0 else 0)
        while True:
            if cnt[n] >= threshold:
                buf[fill] = acc[n]
                fill += 1
                if fill == cap:
                    chunks.append(buf_arr.copy())
                    fill = 0
            p = n - 1
            while p >= 0:
                word[p] += 1
                if word[p] < m:
                    break
                word[p] = 0
                p -= 1
            if p < 0:
                break
            while p < n:
                acc[p + 1] = acc[p] + v[word[p]] * w[p]
                cnt[p + 1] = cnt[p] + (1 if word[p] == symbol else 0)
                p += 1
    finally:
        free(word)
        free(acc)
        free(cnt)
    chunks.append(buf_arr[:fill].copy())
    return np.concatenate(chunks)


def verify_words(values, weights, lo_off, hi_off, starts, slab_lo, slab_hi):
    cdef i64[:, :] v = np.ascontiguousarray(values, dtype=np.int64)
    cdef i64[:] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef i64[:] lo = np.ascontiguousarray(lo_off, dtype=np.int64)
    cdef i64[:] hi = np.ascontiguousarray(hi_off, dtype=np.int64)
    cdef i64[:] st = np.ascontiguousarray(starts, dtype=np.int64)
    cdef i64[:] sl = np.ascontiguousarray(slab_lo, dtype=np.int64)
    cdef i64[:] sh = np.ascontiguousarray(slab_hi, dtype=np.int64)
    cdef Py_ssize_t m = v.shape[0], k = v.shape[1], n = w.shape[0]
    cdef int *word = <int *> calloc(n + 1, sizeof(int))
    cdef i64 *acc = <i64 *> calloc((n + 1) * k, sizeof(i64))
    cdef i64 rank = 0, fails = 0, first = -1, x, y
    cdef Py_ssize_t p, j, a, b, mid
    cdef bint covered
    try:
        for p in range(n):
            for j in range(k):
                acc[(p + 1) * k + j] = acc[p * k + j] + v[0, j] * w[p]
        while True:
            covered = False
            for j in range(k):
                a = st[j]
                b = st[j + 1]
                if a == b:
                    continue
                x = acc[n * k + j] + lo[j]
                y = acc[n * k + j] + hi[j]
                # last slab with sl <= x
                while a < b:
                    mid = (a + b) >> 1
                    if sl[mid] <= x:
                        a = mid + 1
                    else:
                        b = mid
                if a > st[j] and y <= sh[a - 1]:
                    covered = True
                    break
            if not covered:
                fails += 1
                if first < 0:
                    first = rank
            rank += 1
            p = n - 1
            while p >= 0:
                word[p] += 1
                if word[p] < m:
                    break
                word[p] = 0
                p -= 1
            if p < 0:
                break
            while p < n:
                for j in range(k):
                    acc[(p + 1) * k + j] = acc[p * k + j] + v[word[p], j] * w[p]
                p += 1
    finally:
        free(word)
        free(acc)
    return int(fails), int(first)


def mark_cells(values, weights, lo, side, den, scale, grid):
    cdef i64[:, :] v = np.ascontiguousarray(values, dtype=np.int64)
    cdef i64[:] w = np.ascontiguousarray(weights, dtype=np.int64)
    cdef i64[:] lo_ = np.ascontiguousarray(lo, dtype=np.int64)
    cdef i64[:] side_ = np.ascontiguousarray(side, dtype=np.int64)
    cdef i64 den_ = den, scale_ = scale
    flat = grid.reshape(-1)
    cdef unsigned char[:] g = flat
    cdef i64[:] shape = np.asarray(grid.shape, dtype=np.int64)
    cdef Py_ssize_t m = v.shape[0], d = v.shape[1], n = w.shape[0]
    cdef int *word = <int *> calloc(n + 1, sizeof(int))
    cdef i64 *acc = <i64 *> calloc((n + 1) * d, sizeof(i64))
    cdef i64 *klo = <i64 *> calloc(d + 1, sizeof(i64))
    cdef i64 *khi = <i64 *> calloc(d + 1, sizeof(i64))
    cdef i64 *cur = <i64 *> calloc(d + 1, sizeof(i64))
    cdef i64 a, idx
    cdef Py_ssize_t p, j
    try:
        for p in range(n):
            for j in range(d):
                acc[(p + 1) * d + j] = acc[p * d + j] + v[0, j] * w[p]
        while True:
            for j in range(d):
                a = acc[n * d + j] + lo_[j]
                klo[j] = (a * scale_) // den_
                khi[j] = -((-(a + side_[j]) * scale_) // den_) - 1
                cur[j] = klo[j]
            # walk the sub-box of cells
            while True:
                idx = 0
                for j in range(d):
                    idx = idx * shape[j] + cur[j]
                g[idx] = 1
                j = d - 1
                while j >= 0:
                    cur[j] += 1
                    if cur[j] <= khi[j]:
                        break
                    cur[j] = klo[j]
                    j -= 1
                if j < 0:
                    break
            p = n - 1
            while p >= 0:
                word[p] += 1
                if word[p] < m:
                    break
                word[p] = 0
                p -= 1
            if p < 0:
                break
            while p < n:
                for j in range(d):
                    acc[(p + 1) * d + j] = acc[p * d + j] + v[word[p], j] * w[p]
                p += 1
    finally:
        free(word)
        free(acc)
        free(klo)
        free(khi)
        free(cur)
    return int(np.count_nonzero(grid))
