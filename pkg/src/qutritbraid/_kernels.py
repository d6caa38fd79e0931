"""Hot kernels for packed exact matrices over Q(zeta_n).

A packed batch is an integer array of shape (k, rows, cols, phi) holding
power-basis numerators plus a length-k array of positive denominators; each
matrix is kept in lowest terms (gcd of all numerators and its denominator is 1).

Two interchangeable backends compute the same integers: numba ``@njit`` loops
that skip zero coefficients, and a vectorized numpy path.  Set
``QUTRITBRAID_DISABLE_NUMBA=1`` (or call :func:`set_backend`) to force numpy.
The numpy path also serves object-dtype arrays when int64 could overflow.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


DISABLE_ENV = "QUTRITBRAID_DISABLE_NUMBA"
INT64_HEADROOM = 2**54

_backend = "numpy" if (not HAVE_NUMBA or os.environ.get(DISABLE_ENV, "").lower() in ("1", "true", "yes")) else "numba"


def get_backend() -> str:
    return _backend


def set_backend(name: str) -> None:
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    _backend = name


@njit(cache=True)
def _gcd(a, b):
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _matmul_batch_nb(a, aden, b, bden, modulus):
    k, d, m, phi = a.shape
    e = b.shape[2]
    out = np.zeros((k, d, e, phi), np.int64)
    outden = np.empty(k, np.int64)
    buf = np.zeros(2 * phi - 1, np.int64)
    for t in range(k):
        for i in range(d):
            for j in range(e):
                buf[:] = 0
                for l in range(m):
                    for p in range(phi):
                        x = a[t, i, l, p]
                        if x != 0:
                            for q in range(phi):
                                y = b[t, l, j, q]
                                if y != 0:
                                    buf[p + q] += x * y
                for s in range(2 * phi - 2, phi - 1, -1):
                    c = buf[s]
                    if c != 0:
                        base = s - phi
                        for r in range(phi):
                            mr = modulus[r]
                            if mr != 0:
                                buf[base + r] -= c * mr
                for p in range(phi):
                    out[t, i, j, p] = buf[p]
        den = aden[t] * bden[t]
        g = den
        for i in range(d):
            for j in range(e):
                for p in range(phi):
                    if g == 1:
                        break
                    v = out[t, i, j, p]
                    if v != 0:
                        g = _gcd(g, v)
        if g > 1:
            for i in range(d):
                for j in range(e):
                    for p in range(phi):
                        out[t, i, j, p] //= g
            den //= g
        outden[t] = den
    return out, outden


def _reduce_np(buf: np.ndarray, modulus: np.ndarray, phi: int) -> np.ndarray:
    for s in range(buf.shape[-1] - 1, phi - 1, -1):
        c = buf[..., s]
        if np.any(c):
            base = s - phi
            buf[..., base:base + phi] -= c[..., None] * modulus[:phi]
    return buf[..., :phi]


def normalize_batch(num: np.ndarray, den: np.ndarray):
    """Divide each matrix of a batch by gcd(numerators, denominator)."""
    k = num.shape[0]
    flat = num.reshape(k, -1)
    g = np.gcd.reduce(flat, axis=1) if flat.shape[1] else np.zeros(k, dtype=num.dtype)
    g = np.gcd(g, den)
    g = np.where(g == 0, 1, g)
    num = num // g.reshape((k,) + (1,) * (num.ndim - 1))
    return num, den // g


def _matmul_batch_np(a, aden, b, bden, modulus):
    k, d, m, phi = a.shape
    e = b.shape[2]
    buf = np.zeros((k, d, e, 2 * phi - 1), dtype=a.dtype)
    for p in range(phi):
        ap = a[..., p]
        if np.any(ap):
            buf[..., p:p + phi] += np.einsum("kil,kljq->kijq", ap, b)
    out = _reduce_np(buf, modulus.astype(a.dtype), phi)
    return normalize_batch(np.ascontiguousarray(out), aden * bden)


def _growth(modulus: np.ndarray) -> int:
    # crude bound on coefficient growth through top-down reduction
    return int(1 + np.abs(modulus).sum()) ** 2


def _fits_int64(a, aden, b, bden, modulus) -> bool:
    if a.dtype != np.int64 or b.dtype != np.int64:
        return False
    if len(aden) and int(np.max(aden)) * int(np.max(bden)) >= INT64_HEADROOM:
        return False
    if a.size == 0 or b.size == 0:
        return True
    amax = int(np.abs(a).max())
    bmax = int(np.abs(b).max())
    m, phi = a.shape[2], a.shape[3]
    return amax * bmax * m * phi * _growth(modulus) < INT64_HEADROOM


def matmul_batch(a, aden, b, bden, modulus):
    """Pairwise products a[t] @ b[t] of packed matrices, normalized.

    Exact for any input: batches that could overflow int64 run through the
    numpy path on Python integers.
    """
    modulus = np.asarray(modulus, dtype=np.int64)
    if _fits_int64(a, np.asarray(aden), b, np.asarray(bden), modulus):
        aden = np.asarray(aden, dtype=np.int64)
        bden = np.asarray(bden, dtype=np.int64)
        if _backend == "numba":
            return compact(*_matmul_batch_nb(a, aden, b, bden, modulus))
        return compact(*_matmul_batch_np(a, aden, b, bden, modulus))
    ao = a.astype(object)
    bo = b.astype(object)
    num, den = _matmul_batch_np(ao, np.asarray(aden, dtype=object), bo,
                                np.asarray(bden, dtype=object), modulus)
    return compact(num, den)


def matmul_outer(a, aden, gens, gden, modulus):
    """All products a[i] @ gens[j], ordered i-major then j."""
    k = a.shape[0]
    g = gens.shape[0]
    left = np.repeat(a, g, axis=0)
    lden = np.repeat(np.asarray(aden), g)
    right = np.tile(gens, (k, 1, 1, 1))
    rden = np.tile(np.asarray(gden), k)
    return matmul_batch(left, lden, right, rden, modulus)


def compact(num: np.ndarray, den: np.ndarray):
    """Canonical dtype: int64 when every value is below the headroom, else object.

    Keys depend on the dtype, so every packed array passes through here.
    """
    den = np.asarray(den)
    if num.dtype == object or den.dtype == object:
        vals = [abs(int(v)) for v in num.ravel()] + [abs(int(v)) for v in den.ravel()]
        if not vals or max(vals) < INT64_HEADROOM:
            return num.astype(np.int64), den.astype(np.int64)
        return num.astype(object), den.astype(object)
    big = (num.size and int(np.abs(num).max()) >= INT64_HEADROOM) or (den.size and int(np.abs(den).max()) >= INT64_HEADROOM)
    if big:
        return num.astype(object), den.astype(object)
    return num, den


def linear_map_batch(num: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Apply a phi x phi integer map to every coefficient vector (rows of table = images)."""
    if num.dtype == object:
        return np.einsum("...p,pq->...q", num, table.astype(object))
    return num @ table


def keys_for(num: np.ndarray, den) -> list[bytes]:
    """Hashable canonical keys for each matrix of a batch."""
    k = num.shape[0]
    den = np.asarray(den)
    if num.dtype == object:
        # per matrix: a value that fits int64 must get the same key as in an int64 batch
        keys = []
        for t in range(k):
            vals = [int(v) for v in num[t].ravel()]
            d = int(den[t])
            if max([abs(v) for v in vals] + [d]) < INT64_HEADROOM:
                keys.append(d.to_bytes(8, "little", signed=True)
                            + np.array(vals, dtype=np.int64).tobytes())
            else:
                keys.append(repr((d, vals)).encode())
        return keys
    keys = []
    for t in range(k):
        keys.append(int(den[t]).to_bytes(8, "little", signed=True) + num[t].tobytes())
    return keys
