"""Reference implementations of the table kernels in plain Python.

Every function here has a compiled twin in ``_ckernels.pyx`` with the same
signature and the same output, bit for bit.  Elements are indices
``0..n-1``; tables are ``n x n`` integer arrays; subsets are bitmasks.
"""
import numpy as np


def subset_folds(table, unit, n):
    """Fold a binary operation over every subset of ``range(n)``."""
    t = np.asarray(table).tolist()
    out = [unit] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        out[mask] = t[out[mask & (mask - 1)]][low]
    return np.array(out, dtype=np.int64)


def subset_and(masks, n):
    m = [int(v) for v in masks]
    full = (1 << n) - 1
    out = [full] * (1 << n)
    for mask in range(1, 1 << n):
        low = (mask & -mask).bit_length() - 1
        out[mask] = out[mask & (mask - 1)] & m[low]
    return np.array(out, dtype=np.uint64)


def app_table(leq, imp, meet, top):
    le = np.asarray(leq).tolist()
    im = np.asarray(imp).tolist()
    mt = np.asarray(meet).tolist()
    n = len(im)
    out = [[top] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            acc = top
            row = im[b]
            for c in range(n):
                if le[a][row[c]]:
                    acc = mt[acc][c]
            out[a][b] = acc
    return np.array(out, dtype=np.int64)


def encoded_meet_table(imp, meet, top):
    im = np.asarray(imp).tolist()
    mt = np.asarray(meet).tolist()
    n = len(im)
    out = [[top] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            acc = top
            for c in range(n):
                acc = mt[acc][im[im[a][im[b][c]]][c]]
            out[a][b] = acc
    return np.array(out, dtype=np.int64)


def lam_reduce(imp, meet, top, body):
    im = np.asarray(imp).tolist()
    mt = np.asarray(meet).tolist()
    rows = np.asarray(body).tolist()
    out = [top] * (len(rows[0]) if rows else 0)
    for a, row in enumerate(rows):
        ia = im[a]
        for j, v in enumerate(row):
            out[j] = mt[out[j]][ia[v]]
    return np.array(out, dtype=np.int64)


def map_witnesses(weights, meet, top):
    w = np.asarray(weights).tolist()
    mt = np.asarray(meet).tolist()
    acc = [top]
    for row in w:
        acc = [mt[prev][v] for prev in acc for v in row]
    return np.array(acc, dtype=np.int64)


def meet_distribution_violations(imp, meet, submeet, n):
    im = np.asarray(imp).tolist()
    mt = np.asarray(meet).tolist()
    sm = np.asarray(submeet).tolist()
    top = sm[0]
    out = []
    for a in range(n):
        ia = im[a]
        folded = [top] * (1 << n)
        for mask in range(1 << n):
            if mask:
                low = (mask & -mask).bit_length() - 1
                folded[mask] = mt[folded[mask & (mask - 1)]][ia[low]]
            if ia[sm[mask]] != folded[mask]:
                out.append((a, mask))
    return np.array(out, dtype=np.int64).reshape(-1, 2)


def joins_violations(imp, meet, subjoin, n, top):
    im = np.asarray(imp).tolist()
    mt = np.asarray(meet).tolist()
    sj = np.asarray(subjoin).tolist()
    out = []
    for b in range(n):
        folded = [top] * (1 << n)
        for mask in range(1 << n):
            if mask:
                low = (mask & -mask).bit_length() - 1
                folded[mask] = mt[folded[mask & (mask - 1)]][im[low][b]]
            if im[sj[mask]][b] != folded[mask]:
                out.append((mask, b))
    return np.array(out, dtype=np.int64).reshape(-1, 2)


def exists_all(imp, meet, top, n):
    im = np.asarray(imp).tolist()
    mt = np.asarray(meet).tolist()
    size = 1 << n
    out = [top] * size
    for c in range(n):
        g = [top] * size
        for mask in range(1, size):
            low = (mask & -mask).bit_length() - 1
            g[mask] = mt[g[mask & (mask - 1)]][im[low][c]]
        for mask in range(size):
            out[mask] = mt[out[mask]][im[g[mask]][c]]
    return np.array(out, dtype=np.int64)
