# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops for exhaustive checks over finite abelian groups.

All arrays are C-contiguous int64. Callers keep moduli below 2**20 (the
exhaustive bound guarantees it), so a row of products fits in int64 and is
reduced once per accumulation.
"""

import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


cdef inline i64 _pmod(i64 a, i64 m) nogil:
    cdef i64 r = a % m
    if r < 0:
        r += m
    return r


def strides_for(moduli):
    cdef Py_ssize_t n = len(moduli)
    out = np.ones(n, dtype=np.int64)
    cdef Py_ssize_t i
    for i in range(n - 2, -1, -1):
        out[i] = out[i + 1] * moduli[i + 1]
    return out


def bilinear_table(const i64[:, ::1] coords, const i64[:, ::1] q, i64 mod):
    """T[a, b] = sum_ij coords[a, i] q[i, j] coords[b, j]  (mod ``mod``)."""
    cdef Py_ssize_t N = coords.shape[0], n = coords.shape[1]
    cdef Py_ssize_t a, b, i, j
    cdef i64 acc
    left_np = np.zeros((N, n), dtype=np.int64)
    cdef i64[:, ::1] left = left_np
    with nogil:
        for a in range(N):
            for j in range(n):
                acc = 0
                for i in range(n):
                    acc += coords[a, i] * q[i, j]
                left[a, j] = _pmod(acc, mod)
    out_np = np.empty((N, N), dtype=np.int64)
    cdef i64[:, ::1] out = out_np
    with nogil:
        for a in range(N):
            for b in range(N):
                acc = 0
                for j in range(n):
                    acc += left[a, j] * coords[b, j]
                out[a, b] = acc % mod
    return out_np


def image_indices(const i64[:, ::1] coords, const i64[:, ::1] alpha,
                  const i64[::1] moduli):
    """Flat index of alpha(x) in the target group for every row x of coords."""
    cdef Py_ssize_t N = coords.shape[0], n_src = coords.shape[1]
    cdef Py_ssize_t n_tgt = alpha.shape[0]
    cdef Py_ssize_t a, i, j
    cdef i64 acc, idx, stride
    out_np = np.empty(N, dtype=np.int64)
    cdef i64[::1] out = out_np
    with nogil:
        for a in range(N):
            idx = 0
            for i in range(n_tgt):
                acc = 0
                for j in range(n_src):
                    acc += alpha[i, j] * coords[a, j]
                idx = idx * moduli[i] + _pmod(acc, moduli[i])
            out[a] = idx
    return out_np


def is_permutation(const i64[::1] idx):
    cdef Py_ssize_t N = idx.shape[0], a
    seen_np = np.zeros(N, dtype=np.uint8)
    cdef cnp.uint8_t[::1] seen = seen_np
    cdef i64 v
    for a in range(N):
        v = idx[a]
        if v < 0 or v >= N or seen[v]:
            return False
        seen[v] = 1
    return True


def addition_table(const i64[:, ::1] coords, const i64[::1] moduli):
    """S[a, b] = flat index of coords[a] + coords[b]."""
    cdef Py_ssize_t N = coords.shape[0], n = coords.shape[1]
    cdef Py_ssize_t a, b, i
    cdef i64 idx, s
    out_np = np.empty((N, N), dtype=np.int64)
    cdef i64[:, ::1] out = out_np
    with nogil:
        for a in range(N):
            for b in range(N):
                idx = 0
                for i in range(n):
                    s = coords[a, i] + coords[b, i]
                    if s >= moduli[i]:
                        s -= moduli[i]
                    idx = idx * moduli[i] + s
                out[a, b] = idx
    return out_np


def cocycle_violation(const i64[:, ::1] c, const i64[:, ::1] add, i64 mod):
    """First (a, b, k) breaking c(a,b) + c(a+b,k) = c(b,k) + c(a,b+k), or None."""
    cdef Py_ssize_t N = c.shape[0], a, b, k
    cdef i64 lhs, rhs
    cdef Py_ssize_t fa = -1, fb = -1, fk = -1
    with nogil:
        for a in range(N):
            for b in range(N):
                for k in range(N):
                    lhs = c[a, b] + c[add[a, b], k]
                    rhs = c[b, k] + c[a, add[b, k]]
                    if (lhs - rhs) % mod != 0:
                        fa = a
                        fb = b
                        fk = k
                        break
                if fa >= 0:
                    break
            if fa >= 0:
                break
    if fa >= 0:
        return (fa, fb, fk)
    return None


def first_mismatch(const i64[:, ::1] table, const i64[::1] idx,
                   const i64[:, ::1] expected):
    """First (a, b) with table[idx[a], idx[b]] != expected[a, b], or None."""
    cdef Py_ssize_t N = expected.shape[0], a, b
    for a in range(N):
        for b in range(N):
            if table[idx[a], idx[b]] != expected[a, b]:
                return (a, b)
    return None


def extension_orders(const i64[:, ::1] c, const i64[:, ::1] add, i64 mod):
    """Orders of all elements (z, k) of the extension of K by Z/mod with cocycle c.

    Returns an (mod, N) array; entry [z, k] is the order of (z, k). Uses
    (z, k)^r = (r z + S_r, r k) with S_1 = 0 and S_{r+1} = S_r + c(r k, k).
    """
    cdef Py_ssize_t N = c.shape[0], k, z
    cdef i64 cur, s, r, t, g, x, y
    out_np = np.empty((mod, N), dtype=np.int64)
    cdef i64[:, ::1] out = out_np
    with nogil:
        for k in range(N):
            cur = k
            s = 0
            r = 1
            while cur != 0:
                s = (s + c[cur, k]) % mod
                cur = add[cur, k]
                r += 1
            # r is now the order of k, (z,k)^r = (r z + s, 0)
            for z in range(mod):
                t = (r * z + s) % mod
                x = t
                y = mod
                while x != 0:
                    g = y % x
                    y = x
                    x = g
                # y = gcd(t, mod)
                out[z, k] = r * (mod // y)
    return out_np
