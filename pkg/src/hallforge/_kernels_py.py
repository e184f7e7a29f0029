"""Pure-Python finite-field matrix kernels.

Fallback twin of the compiled extension ``hallforge._kernels``: same
functions, same signatures, bit-identical results. Matrices are flat
row-major ``bytes`` with entries in ``[0, q)``; all field arithmetic goes
through lookup tables so prime and prime-power fields are handled
uniformly. Tables are passed as ``(q, add, mul, neg, inv)`` where ``add``
and ``mul`` are row-major ``q*q`` byte tables.
"""

from __future__ import annotations

BACKEND = "pure"


def rref(entries, rows, cols, tables):
    """Reduced row echelon form with first-nonzero pivoting.

    Returns ``(rank, pivot_cols, reduced)`` where ``reduced`` is the
    row-reduced matrix as bytes. Pivot search scans columns left to right
    and rows top-down, so the result is deterministic.
    """
    q, add, mul, neg, inv = tables
    m = bytearray(entries)
    pivots = []
    r = 0
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
                m[r * cols + j], m[pr * cols + j] = m[pr * cols + j], m[r * cols + j]
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
                    m[i * cols + j] = add[
                        m[i * cols + j] * q + mul[m[r * cols + j] * q + fn]
                    ]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return r, tuple(pivots), bytes(m)


def matmul(a, ar, ac, b, bc, tables):
    """Product of an ``ar x ac`` and an ``ac x bc`` matrix."""
    q, add, mul, neg, inv = tables
    out = bytearray(ar * bc)
    for i in range(ar):
        ia = i * ac
        io = i * bc
        for k in range(ac):
            f = a[ia + k]
            if not f:
                continue
            kb = k * bc
            fq = f * q
            for j in range(bc):
                x = b[kb + j]
                if x:
                    out[io + j] = add[out[io + j] * q + mul[fq + x]]
    return bytes(out)


def is_invertible(entries, n, tables):
    """Invertibility of a square matrix by in-place elimination."""
    if n == 0:
        return True
    q, add, mul, neg, inv = tables
    m = bytearray(entries)
    for c in range(n):
        pr = -1
        for i in range(c, n):
            if m[i * n + c]:
                pr = i
                break
        if pr < 0:
            return False
        if pr != c:
            for j in range(n):
                m[c * n + j], m[pr * n + j] = m[pr * n + j], m[c * n + j]
        s = inv[m[c * n + c]]
        for j in range(n):
            m[c * n + j] = mul[m[c * n + j] * q + s]
        for i in range(c + 1, n):
            f = m[i * n + c]
            if f:
                fn = neg[f]
                for j in range(c, n):
                    m[i * n + j] = add[m[i * n + j] * q + mul[m[c * n + j] * q + fn]]
    return True


def _all_blocks_invertible(cur, blocks, tables):
    for off, n in blocks:
        if n and not is_invertible(cur[off : off + n * n], n, tables):
            return False
    return True


def _span_iterate(basis, k, length, blocks, tables, count_all):
    """Odometer walk over all q^k combinations of the basis vectors.

    Each combination is a concatenation of square blocks (at the offsets
    given in ``blocks``); a combination scores when every block is
    invertible. Returns the number of scoring combinations if
    ``count_all``, else 1 as soon as one scores and 0 otherwise.
    """
    q, add, mul, neg, inv = tables
    if k == 0:
        ok = _all_blocks_invertible(b"\x00" * length, blocks, tables)
        return (1 if ok else 0)
    digits = [0] * k
    cur = bytearray(length)
    found = 0
    total = q**k
    for _ in range(total):
        if _all_blocks_invertible(cur, blocks, tables):
            if not count_all:
                return 1
            found += 1
        # advance the odometer; wrapping a digit q-1 -> 0 is also one more
        # addition of that basis vector since q * v = 0
        j = k - 1
        while j >= 0:
            bj = basis[j]
            for p in range(length):
                x = bj[p]
                if x:
                    cur[p] = add[cur[p] * q + x]
            if digits[j] == q - 1:
                digits[j] = 0
                j -= 1
            else:
                digits[j] += 1
                break
    return found


def count_invertible_span(basis, k, length, blocks, tables):
    """Count combinations of basis elements with all blocks invertible."""
    return _span_iterate(basis, k, length, blocks, tables, True)


def find_invertible_span(basis, k, length, blocks, tables):
    """Whether some combination of basis elements has all blocks invertible."""
    return bool(_span_iterate(basis, k, length, blocks, tables, False))
