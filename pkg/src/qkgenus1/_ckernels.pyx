# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""int64 series kernels with overflow detection.

Every multiply and add is checked; on overflow the kernel raises
OverflowError and the caller reruns the exact pure-Python version.
"""

import numpy as np

cdef extern from *:
    """
    static inline int qk_mul(long long a, long long b, long long *r) { return __builtin_mul_overflow(a, b, r); }
    static inline int qk_add(long long a, long long b, long long *r) { return __builtin_add_overflow(a, b, r); }
    static inline int qk_sub(long long a, long long b, long long *r) { return __builtin_sub_overflow(a, b, r); }
    """
    int qk_mul(long long a, long long b, long long *r) nogil
    int qk_add(long long a, long long b, long long *r) nogil
    int qk_sub(long long a, long long b, long long *r) nogil


def div_sparse(const long long[::1] s, const long long[:, ::1] shifts, const long long[::1] coeffs):
    cdef Py_ssize_t n = s.shape[0], nt = coeffs.shape[0], i, t
    cdef long long j, acc, prod
    cdef int bad = 0
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] g = out
    with nogil:
        for i in range(n):
            acc = s[i]
            for t in range(nt):
                j = shifts[t, i]
                if j >= 0 and g[j] != 0:
                    if qk_mul(coeffs[t], g[j], &prod) or qk_sub(acc, prod, &acc):
                        bad = 1
                        break
            if bad:
                break
            g[i] = acc
    if bad:
        raise OverflowError("int64 overflow in div_sparse")
    return out


def mul_sparse(const long long[::1] s, const long long[:, ::1] shifts, const long long[::1] coeffs):
    cdef Py_ssize_t n = s.shape[0], nt = coeffs.shape[0], i, t
    cdef long long j, acc, prod
    cdef int bad = 0
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] r = out
    with nogil:
        for i in range(n):
            acc = 0
            for t in range(nt):
                j = shifts[t, i]
                if j >= 0 and s[j] != 0:
                    if qk_mul(coeffs[t], s[j], &prod) or qk_add(acc, prod, &acc):
                        bad = 1
                        break
            if bad:
                break
            r[i] = acc
    if bad:
        raise OverflowError("int64 overflow in mul_sparse")
    return out


cdef inline Py_ssize_t _find(const long long[::1] codes, long long code) noexcept nogil:
    cdef Py_ssize_t lo = 0, hi = codes.shape[0] - 1, mid
    while lo <= hi:
        mid = (lo + hi) >> 1
        if codes[mid] < code:
            lo = mid + 1
        elif codes[mid] > code:
            hi = mid - 1
        else:
            return mid
    return -1


def mul_dense(const long long[::1] a, const long long[::1] b, const long long[:, ::1] exps,
              const long long[::1] codes, const long long[::1] orders, long long cap):
    """Truncated product; ``cap < 0`` means no total-degree cap."""
    cdef Py_ssize_t n = a.shape[0], nv = exps.shape[1], i, j, v, k
    cdef long long prod, di, e
    cdef int bad = 0, ok
    degs_arr = np.asarray(exps).sum(axis=1).astype(np.int64)
    cdef const long long[::1] degs = degs_arr
    nzb_arr = np.flatnonzero(np.asarray(b)).astype(np.int64)
    cdef const long long[::1] nzb = nzb_arr
    cdef Py_ssize_t nb = nzb.shape[0], jj
    out = np.zeros(n, dtype=np.int64)
    cdef long long[::1] c = out
    with nogil:
        for i in range(n):
            if a[i] == 0:
                continue
            di = degs[i]
            for jj in range(nb):
                j = nzb[jj]
                if cap >= 0 and di + degs[j] > cap:
                    continue
                ok = 1
                for v in range(nv):
                    e = exps[i, v] + exps[j, v]
                    if e > orders[v]:
                        ok = 0
                        break
                if not ok:
                    continue
                k = _find(codes, codes[i] + codes[j])
                if qk_mul(a[i], b[j], &prod) or qk_add(c[k], prod, &c[k]):
                    bad = 1
                    break
            if bad:
                break
    if bad:
        raise OverflowError("int64 overflow in mul_dense")
    return out
