"""Numpy implementations of the compiled kernels, used when the extension is absent."""

import numpy as np

_CHUNK = 1 << 22


def strides_for(moduli):
    n = len(moduli)
    out = np.ones(n, dtype=np.int64)
    for i in range(n - 2, -1, -1):
        out[i] = out[i + 1] * moduli[i + 1]
    return out


def bilinear_table(coords, q, mod):
    left = (coords @ q) % mod
    return (left @ coords.T) % mod


def image_indices(coords, alpha, moduli):
    moduli = np.asarray(moduli, dtype=np.int64)
    if alpha.shape[0] == 0:
        return np.zeros(coords.shape[0], dtype=np.int64)
    img = (coords @ alpha.T) % moduli
    return img @ strides_for(moduli)


def is_permutation(idx):
    n = idx.shape[0]
    if n == 0:
        return True
    if idx.min() < 0 or idx.max() >= n:
        return False
    return bool(np.bincount(idx, minlength=n).max() == 1)


def addition_table(coords, moduli):
    moduli = np.asarray(moduli, dtype=np.int64)
    n_el = coords.shape[0]
    if coords.shape[1] == 0:
        return np.zeros((n_el, n_el), dtype=np.int64)
    s = (coords[:, None, :] + coords[None, :, :]) % moduli
    return s @ strides_for(moduli)


def cocycle_violation(c, add, mod):
    n_el = c.shape[0]
    step = max(1, _CHUNK // max(1, n_el * n_el))
    for a0 in range(0, n_el, step):
        a = np.arange(a0, min(n_el, a0 + step))
        # lhs[a, b, k] = c[a, b] + c[a+b, k]
        lhs = c[a][:, :, None] + c[add[a]]
        # rhs[a, b, k] = c[b, k] + c[a, b+k]
        rhs = c[None, :, :] + c[a[:, None, None], add[None, :, :]]
        bad = np.argwhere((lhs - rhs) % mod != 0)
        if len(bad):
            ia, b, k = bad[0]
            return (int(a[ia]), int(b), int(k))
    return None


def first_mismatch(table, idx, expected):
    bad = np.argwhere(table[np.ix_(idx, idx)] != expected)
    if len(bad):
        return (int(bad[0][0]), int(bad[0][1]))
    return None


def extension_orders(c, add, mod):
    n_el = c.shape[0]
    out = np.empty((mod, n_el), dtype=np.int64)
    z = np.arange(mod, dtype=np.int64)
    for k in range(n_el):
        cur, s, r = k, 0, 1
        while cur != 0:
            s = (s + int(c[cur, k])) % mod
            cur = int(add[cur, k])
            r += 1
        t = (r * z + s) % mod
        out[:, k] = r * (mod // np.gcd(t, mod))
    return out
