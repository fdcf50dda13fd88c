"""Reference (numpy / pure Python) versions of the hot kernels.

Every function here has a twin in ``_kernels.pyx`` with the same signature
and the same results. Words are ranked lexicographically with position 0
most significant. Integer inputs may be int64 arrays or object arrays of
Python ints; object arrays keep the arithmetic exact past 64 bits.
"""
from __future__ import annotations

import itertools

import numpy as np

CHUNK = 1 << 18


def _dtype(*arrays):
    return object if any(np.asarray(a).dtype == object for a in arrays) else np.int64


def word_sums(values, weights):
    """Array S of shape (m**n, k) with S[w] = sum_pos values[w[pos]] * weights[pos]."""
    values = np.asarray(values)
    if values.ndim == 1:
        values = values[:, None]
    dt = _dtype(values, weights)
    values = values.astype(dt)
    s = np.zeros((1, values.shape[1]), dtype=dt)
    for w in weights:
        s = (s[:, None, :] + values[None, :, :] * w).reshape(-1, values.shape[1])
    return s


def _split(m, n):
    tail = 0
    while tail < n and m ** (tail + 1) <= CHUNK:
        tail += 1
    return n - tail, tail


def pigeonhole_scan(m, n):
    """Count words in {0..m-1}^n whose best symbol pair has combined count < ceil(2n/m).

    Returns (number_of_failures, rank_of_first_failure or -1).
    """
    need = -(-2 * n // m)
    head, tail = _split(m, n)
    # symbol counts of every tail word, shape (m**tail, m)
    eye = np.eye(m, dtype=np.int64)
    tail_counts = word_sums(eye, np.ones(tail, dtype=np.int64))
    fails = 0
    first = -1
    block = m**tail
    for prank, prefix in enumerate(itertools.product(range(m), repeat=head)):
        pc = np.bincount(np.asarray(prefix, dtype=np.int64), minlength=m) if head else np.zeros(m, np.int64)
        counts = tail_counts + pc
        if m >= 2:
            top2 = np.partition(counts, m - 2, axis=1)[:, m - 2:].sum(axis=1)
        else:
            top2 = counts[:, 0]
        bad = np.flatnonzero(top2 < need)
        if bad.size:
            if first < 0:
                first = prank * block + int(bad[0])
            fails += int(bad.size)
    return fails, first


def freq_sums(values, weights, symbol, threshold):
    """Sums for words whose count of ``symbol`` is >= threshold, lexicographic order.

    Streams words by choosing the positions of ``symbol`` and filling the rest
    with the other symbols; the result is sorted back into lexicographic rank.
    """
    values = [int(v) for v in values]
    weights = [int(w) for w in weights]
    m, n = len(values), len(weights)
    others = [c for c in range(m) if c != symbol]
    ranked = []
    for k in range(threshold, n + 1):
        for pos in itertools.combinations(range(n), k):
            chosen = set(pos)
            free = [p for p in range(n) if p not in chosen]
            base = sum(values[symbol] * weights[p] for p in pos)
            for fill in itertools.product(others, repeat=n - k):
                word = [symbol] * n
                for p, c in zip(free, fill):
                    word[p] = c
                rank = 0
                for c in word:
                    rank = rank * m + c
                ranked.append((rank, base + sum(values[c] * weights[p] for p, c in zip(free, fill))))
    ranked.sort()
    dt = object if any(abs(s) >= 2**62 for _, s in ranked) else np.int64
    return np.array([s for _, s in ranked], dtype=dt)


def verify_words(values, weights, lo_off, hi_off, starts, slab_lo, slab_hi):
    """Check every parent word lies in a slab of at least one direction.

    values[c, j] is the scaled projected translation of symbol c in direction j;
    a word's interval in direction j is [S_j + lo_off[j], S_j + hi_off[j]];
    direction j owns the sorted disjoint slabs slab_lo/hi[starts[j]:starts[j+1]].
    Returns (number_of_uncovered_words, rank_of_first or -1).
    """
    values = np.asarray(values)
    m, k = values.shape
    n = len(weights)
    head, tail = _split(m, n)
    tail_sums = word_sums(values, list(weights)[head:])
    fails = 0
    first = -1
    block = m**tail
    for prank, prefix in enumerate(itertools.product(range(m), repeat=head)):
        ps = np.zeros(k, dtype=tail_sums.dtype)
        for c, w in zip(prefix, weights[:head]):
            ps = ps + values[c] * w
        sums = tail_sums + ps
        covered = np.zeros(sums.shape[0], dtype=bool)
        for j in range(k):
            a, b = starts[j], starts[j + 1]
            if a == b:
                continue
            lo = sums[:, j] + lo_off[j]
            hi = sums[:, j] + hi_off[j]
            sl = np.asarray(slab_lo[a:b])
            sh = np.asarray(slab_hi[a:b])
            idx = np.searchsorted(sl, lo, side="right") - 1
            ok = idx >= 0
            idx_c = np.where(ok, idx, 0)
            covered |= ok & (hi <= sh[idx_c])
        bad = np.flatnonzero(~covered)
        if bad.size:
            if first < 0:
                first = prank * block + int(bad[0])
            fails += int(bad.size)
    return fails, first


def mark_cells(values, weights, lo, side, den, scale, grid):
    """Mark grid cells of side 1/scale met by the half-open boxes [A+lo, A+lo+side)/den.

    A = sum_pos values[w[pos]] * weights[pos] runs over all words; ``grid`` is a
    uint8 array of shape cells-per-axis (C order) that is updated in place.
    Returns the number of marked cells.
    """
    values = np.asarray(values)
    m, d = values.shape
    n = len(weights)
    head, tail = _split(m, n)
    tail_sums = word_sums(values, list(weights)[head:])
    lo = np.asarray(lo, dtype=tail_sums.dtype)
    side = np.asarray(side, dtype=tail_sums.dtype)
    for prefix in itertools.product(range(m), repeat=head):
        ps = np.zeros(d, dtype=tail_sums.dtype)
        for c, w in zip(prefix, weights[:head]):
            ps = ps + values[c] * w
        a = tail_sums + ps + lo
        k_lo = (a * scale) // den
        k_hi = -((-(a + side) * scale) // den) - 1
        span = int((k_hi - k_lo).max()) + 1
        for offs in itertools.product(range(span), repeat=d):
            idx = k_lo + np.asarray(offs)
            ok = np.all(idx <= k_hi, axis=1)
            sel = idx[ok].astype(np.int64)
            grid[tuple(sel[:, j] for j in range(d))] = 1
    return int(np.count_nonzero(grid))


__all__ = ["word_sums", "pigeonhole_scan", "freq_sums", "verify_words", "mark_cells"]
