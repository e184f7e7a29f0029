# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled finite-field matrix kernels.

Twin of ``hallforge._kernels_py`` (same signatures, bit-identical
results); see that module for the contract. Entries live in flat
row-major bytes with values in [0, q); arithmetic is table-driven.
"""

from libc.string cimport memcpy
from cpython.bytes cimport PyBytes_FromStringAndSize

BACKEND = "compiled"


cdef int _rref_inplace(unsigned char *m, int rows, int cols,
                       int q, const unsigned char *add, const unsigned char *mul,
                       const unsigned char *neg, const unsigned char *inv,
                       int *pivots) nogil:
    cdef int r = 0, c, i, j, pr, piv, s, f, fn
    for c in range(cols):
        pr = -1
        for i in range(r, rows):
            if m[i * cols + c]:
                pr = i
                break
        if pr < 0:
            continue
        if pr != r:
            for j in range(cols):
                piv = m[r * cols + j]
                m[r * cols + j] = m[pr * cols + j]
                m[pr * cols + j] = piv
        piv = m[r * cols + c]
        if piv != 1:
            s = inv[piv]
            for j in range(cols):
                m[r * cols + j] = mul[m[r * cols + j] * q + s]
        for i in range(rows):
            if i == r:
                continue
            f = m[i * cols + c]
            if f:
                fn = neg[f]
                for j in range(cols):
                    m[i * cols + j] = add[m[i * cols + j] * q + mul[m[r * cols + j] * q + fn]]
        if pivots != NULL:
            pivots[r] = c
        r += 1
        if r == rows:
            break
    return r


def rref(entries, int rows, int cols, tables):
    cdef int q = tables[0]
    cdef const unsigned char[:] add = tables[1]
    cdef const unsigned char[:] mul = tables[2]
    cdef const unsigned char[:] neg = tables[3]
    cdef const unsigned char[:] inv = tables[4]
    cdef bytes ebytes = bytes(entries)
    cdef bytearray work = bytearray(ebytes)
    cdef unsigned char[:] m = work
    cdef int[64] pivbuf
    cdef int rank, i
    if rows == 0 or cols == 0:
        return 0, (), bytes(work)
    if rows > 64:
        # fall back for very tall systems (not hit at desk scale)
        from hallforge import _kernels_py
        return _kernels_py.rref(entries, rows, cols, tables)
    rank = _rref_inplace(&m[0], rows, cols, q, &add[0], &mul[0], &neg[0], &inv[0], pivbuf)
    return rank, tuple(pivbuf[i] for i in range(rank)), bytes(work)


def matmul(a, int ar, int ac, b, int bc, tables):
    cdef int q = tables[0]
    cdef const unsigned char[:] add = tables[1]
    cdef const unsigned char[:] mul = tables[2]
    cdef const unsigned char[:] av = bytes(a)
    cdef const unsigned char[:] bv = bytes(b)
    cdef bytearray out = bytearray(ar * bc)
    cdef unsigned char[:] ov = out
    cdef int i, j, k, f, x
    if ar * bc == 0:
        return bytes(out)
    for i in range(ar):
        for k in range(ac):
            f = av[i * ac + k]
            if not f:
                continue
            for j in range(bc):
                x = bv[k * bc + j]
                if x:
                    ov[i * bc + j] = add[ov[i * bc + j] * q + mul[f * q + x]]
    return bytes(out)


cdef bint _is_invertible(const unsigned char *entries, int n, int q,
                         const unsigned char *add, const unsigned char *mul,
                         const unsigned char *neg, const unsigned char *inv,
                         unsigned char *scratch) nogil:
    cdef int c, i, j, pr, s, f, fn
    cdef unsigned char tmp
    if n == 0:
        return True
    memcpy(scratch, entries, n * n)
    for c in range(n):
        pr = -1
        for i in range(c, n):
            if scratch[i * n + c]:
                pr = i
                break
        if pr < 0:
            return False
        if pr != c:
            for j in range(n):
                tmp = scratch[c * n + j]
                scratch[c * n + j] = scratch[pr * n + j]
                scratch[pr * n + j] = tmp
        s = inv[scratch[c * n + c]]
        for j in range(n):
            scratch[c * n + j] = mul[scratch[c * n + j] * q + s]
        for i in range(c + 1, n):
            f = scratch[i * n + c]
            if f:
                fn = neg[f]
                for j in range(c, n):
                    scratch[i * n + j] = add[scratch[i * n + j] * q + mul[scratch[c * n + j] * q + fn]]
    return True


def is_invertible(entries, int n, tables):
    cdef int q = tables[0]
    cdef const unsigned char[:] add = tables[1]
    cdef const unsigned char[:] mul = tables[2]
    cdef const unsigned char[:] neg = tables[3]
    cdef const unsigned char[:] inv = tables[4]
    cdef bytes e = bytes(entries)
    cdef const unsigned char[:] ev = e
    cdef unsigned char[4096] scratch
    if n == 0:
        return True
    if n * n > 4096:
        from hallforge import _kernels_py
        return _kernels_py.is_invertible(entries, n, tables)
    return _is_invertible(&ev[0], n, q, &add[0], &mul[0], &neg[0], &inv[0], scratch)


def _span_iterate(basis, int k, int length, blocks, tables, bint count_all):
    cdef int q = tables[0]
    cdef const unsigned char[:] add = tables[1]
    cdef const unsigned char[:] mul = tables[2]
    cdef const unsigned char[:] neg = tables[3]
    cdef const unsigned char[:] inv = tables[4]
    cdef bytes bcat = b"".join(bytes(b) for b in basis)
    cdef const unsigned char[:] bv = bcat if k else b"\x00"
    cdef bytearray curbuf = bytearray(length if length else 1)
    cdef unsigned char[:] cur = curbuf
    cdef unsigned char[4096] scratch
    cdef long long total = 1, step
    cdef int i, j, p, x, nb = len(blocks)
    cdef int[64] boff
    cdef int[64] bn
    cdef int[64] digits
    cdef long long found = 0
    cdef bint ok
    if nb > 64 or k > 64:
        from hallforge import _kernels_py
        return _kernels_py._span_iterate(basis, k, length, blocks, tables, count_all)
    for i in range(nb):
        boff[i] = blocks[i][0]
        bn[i] = blocks[i][1]
        if bn[i] * bn[i] > 4096:
            from hallforge import _kernels_py
            return _kernels_py._span_iterate(basis, k, length, blocks, tables, count_all)
    for i in range(k):
        digits[i] = 0
        total *= q
    if k == 0:
        ok = True
        for i in range(nb):
            if bn[i] and not _is_invertible(&cur[0] + boff[i], bn[i], q, &add[0], &mul[0], &neg[0], &inv[0], scratch):
                ok = False
                break
        return (1 if ok else 0)
    with nogil:
        for step in range(total):
            ok = True
            for i in range(nb):
                if bn[i] and not _is_invertible(&cur[0] + boff[i], bn[i], q, &add[0], &mul[0], &neg[0], &inv[0], scratch):
                    ok = False
                    break
            if ok:
                found += 1
                if not count_all:
                    break
            j = k - 1
            while j >= 0:
                for p in range(length):
                    x = bv[j * length + p]
                    if x:
                        cur[p] = add[cur[p] * q + x]
                if digits[j] == q - 1:
                    digits[j] = 0
                    j -= 1
                else:
                    digits[j] += 1
                    break
    return found


def count_invertible_span(basis, int k, int length, blocks, tables):
    return _span_iterate(basis, k, length, blocks, tables, True)


def find_invertible_span(basis, int k, int length, blocks, tables):
    return bool(_span_iterate(basis, k, length, blocks, tables, False))
