"""Exact linear algebra and exhaustive enumeration over small finite fields.

Elements of F_q are canonical integers in ``[0, q)``. Prime fields use
residue arithmetic; the prime powers 4, 8 and 9 use fixed irreducible
polynomials (documented in ``IRREDUCIBLE``), with the base-p digits of the
integer as polynomial coefficients, lowest degree first. All arithmetic is
precomputed into lookup tables, which also feed the matrix kernels.

Everything here is immutable after construction and side-effect free, so
values can be shared freely across worker threads.
"""

from __future__ import annotations

from itertools import product as _iproduct
from typing import Iterator, Optional, Sequence

from hallforge import _backend

DEFAULT_BUDGET = 2**24

# q -> (p, coefficients of a monic irreducible polynomial, low degree first)
IRREDUCIBLE = {
    4: (2, (1, 1, 1)),  # x^2 + x + 1 over F_2
    8: (2, (1, 1, 0, 1)),  # x^3 + x + 1 over F_2
    9: (3, (2, 2, 1)),  # x^2 + 2x + 2 over F_3
}


class EnumerationBudgetError(RuntimeError):
    """Raised when an exhaustive enumeration would exceed the budget."""

    def __init__(self, size: int, budget: int, what: str = "enumeration"):
        self.size = size
        self.budget = budget
        super().__init__(f"{what} too large: {size} candidates exceed budget {budget}")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mul_mod(a: int, b: int, p: int, irr: Sequence[int]) -> int:
    deg = len(irr) - 1
    da = [(a // p**i) % p for i in range(deg)]
    db = [(b // p**i) % p for i in range(deg)]
    prod = [0] * (2 * deg - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % p
    # reduce: x^deg = -(irr[0] + irr[1] x + ...)/1
    for i in range(len(prod) - 1, deg - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(deg):
                prod[i - deg + j] = (prod[i - deg + j] - c * irr[j]) % p
    return sum(prod[i] * p**i for i in range(deg))


class GF:
    """The field F_q with table-driven arithmetic."""

    def __init__(self, q: int):
        if q in IRREDUCIBLE:
            p, irr = IRREDUCIBLE[q]
            mul = [[_poly_mul_mod(a, b, p, irr) for b in range(q)] for a in range(q)]
            add = [
                [
                    sum((((a // p**i) % p + (b // p**i) % p) % p) * p**i for i in range(len(irr) - 1))
                    for b in range(q)
                ]
                for a in range(q)
            ]
        elif _is_prime(q):
            mul = [[(a * b) % q for b in range(q)] for a in range(q)]
            add = [[(a + b) % q for b in range(q)] for a in range(q)]
        else:
            raise ValueError(f"unsupported field size {q}: need a prime or one of {sorted(IRREDUCIBLE)}")
        self.q = q
        neg = [0] * q
        inv = [0] * q
        for a in range(q):
            for b in range(q):
                if add[a][b] == 0:
                    neg[a] = b
                if a and mul[a][b] == 1:
                    inv[a] = b
        self._add = bytes(x for row in add for x in row)
        self._mul = bytes(x for row in mul for x in row)
        self._neg = bytes(neg)
        self._inv = bytes(inv)
        self.tables = (q, self._add, self._mul, self._neg, self._inv)

    def add(self, a: int, b: int) -> int:
        return self._add[a * self.q + b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a * self.q + self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a * self.q + b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def elements(self) -> range:
        return range(self.q)

    def multiplicative_generator(self) -> int:
        """Smallest element generating the unit group (q <= 9 scale)."""
        target = self.q - 1
        for g in range(1, self.q):
            x, order = g, 1
            while x != 1:
                x = self.mul(x, g)
                order += 1
            if order == target:
                return g
        raise AssertionError("no generator found")

    def __repr__(self):
        return f"GF({self.q})"


_GF_CACHE: dict[int, GF] = {}


def gf(q: int) -> GF:
    """Shared GF instance per field size."""
    if q not in _GF_CACHE:
        _GF_CACHE[q] = GF(q)
    return _GF_CACHE[q]


class Mat:
    """Immutable matrix over F_q, flat row-major bytes entries."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: GF, rows: int, cols: int, entries):
        entries = bytes(entries)
        if len(entries) != rows * cols:
            raise ValueError(f"entry count {len(entries)} != {rows}x{cols}")
        if any(e >= field.q for e in entries):
            raise ValueError("entry out of field range")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def zeros(cls, field: GF, rows: int, cols: int) -> "Mat":
        return cls(field, rows, cols, bytes(rows * cols))

    @classmethod
    def identity(cls, field: GF, n: int) -> "Mat":
        e = bytearray(n * n)
        for i in range(n):
            e[i * n + i] = 1
        return cls(field, n, n, bytes(e))

    @classmethod
    def from_rows(cls, field: GF, rows: Sequence[Sequence[int]]) -> "Mat":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = bytes(x % field.q for row in rows for x in row)
        return cls(field, r, c, flat)

    def __getitem__(self, rc) -> int:
        r, c = rc
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> bytes:
        return self.entries[r * self.cols : (r + 1) * self.cols]

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(r)) for r in range(self.rows)]

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
            and self.field.q == other.field.q
        )

    def __hash__(self):
        return hash((self.field.q, self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"Mat({self.rows}x{self.cols}/{self.field.q}: {list(self.entries)})"

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        e = _backend.matmul(self.entries, self.rows, self.cols, other.entries, other.cols, self.field.tables)
        return Mat(self.field, self.rows, other.cols, e)

    def __add__(self, other: "Mat") -> "Mat":
        f = self.field
        e = bytes(f.add(a, b) for a, b in zip(self.entries, other.entries))
        return Mat(f, self.rows, self.cols, e)

    def __neg__(self) -> "Mat":
        f = self.field
        return Mat(f, self.rows, self.cols, bytes(f.neg(a) for a in self.entries))

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, s: int) -> "Mat":
        f = self.field
        return Mat(f, self.rows, self.cols, bytes(f.mul(s, a) for a in self.entries))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def rank(self) -> int:
        r, _, _ = _backend.rref(self.entries, self.rows, self.cols, self.field.tables)
        return r

    def rref(self):
        return _backend.rref(self.entries, self.rows, self.cols, self.field.tables)

    def is_invertible(self) -> bool:
        if self.rows != self.cols:
            return False
        return _backend.is_invertible(self.entries, self.rows, self.field.tables)

    def transpose(self) -> "Mat":
        e = bytearray(self.rows * self.cols)
        for r in range(self.rows):
            for c in range(self.cols):
                e[c * self.rows + r] = self.entries[r * self.cols + c]
        return Mat(self.field, self.cols, self.rows, bytes(e))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Matrix times column vector."""
        f = self.field
        out = []
        for r in range(self.rows):
            s = 0
            base = r * self.cols
            for c, x in enumerate(vec):
                if x:
                    s = f.add(s, f.mul(self.entries[base + c], x))
            out.append(s)
        return tuple(out)


def block_matrix(field: GF, blocks: Sequence[Sequence[Optional[Mat]]], row_dims: Sequence[int], col_dims: Sequence[int]) -> Mat:
    """Assemble a block matrix; ``None`` blocks are zero."""
    rows = sum(row_dims)
    cols = sum(col_dims)
    e = bytearray(rows * cols)
    roff = 0
    for bi, rd in enumerate(row_dims):
        coff = 0
        for bj, cd in enumerate(col_dims):
            blk = blocks[bi][bj]
            if blk is not None:
                if blk.rows != rd or blk.cols != cd:
                    raise ValueError("block shape mismatch")
                for r in range(rd):
                    base = (roff + r) * cols + coff
                    brow = blk.row(r)
                    e[base : base + cd] = brow
            coff += cd
        roff += rd
    return Mat(field, rows, cols, bytes(e))


def rank_and_kernel(m: Mat) -> tuple[int, list[tuple[int, ...]]]:
    """Rank and a reduced-echelon basis of the right kernel.

    The kernel vectors are the standard free-variable solutions read off
    the reduced row echelon form, in increasing free-column order, which
    makes them deterministic across runs and backends.
    """
    rank, pivots, red = m.rref()
    f = m.field
    pivset = set(pivots)
    free = [c for c in range(m.cols) if c not in pivset]
    basis = []
    for fc in free:
        v = [0] * m.cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = f.neg(red[r * m.cols + fc])
        basis.append(tuple(v))
    return rank, basis


def solve(m: Mat, b: Sequence[int]):
    """Particular solution of ``m x = b`` plus kernel basis, or None.

    Raises ValueError when ``len(b)`` does not match the row count (a
    contract violation, not an unsolvable system).
    """
    if len(b) != m.rows:
        raise ValueError(f"rhs length {len(b)} != rows {m.rows}")
    f = m.field
    aug = bytearray()
    for r in range(m.rows):
        aug += m.row(r)
        aug.append(b[r] % f.q)
    rank, pivots, red = _backend.rref(bytes(aug), m.rows, m.cols + 1, f.tables)
    if m.cols in pivots:
        return None
    x = [0] * m.cols
    w = m.cols + 1
    for r, pc in enumerate(pivots):
        x[pc] = red[r * w + m.cols]
    _, kernel = rank_and_kernel(m)
    return tuple(x), kernel


def enumerate_vectors(field: GF, dim: int, budget: int = DEFAULT_BUDGET) -> Iterator[tuple[int, ...]]:
    """All q^dim vectors in lexicographic order (budget-guarded)."""
    size = field.q**dim
    if size > budget:
        raise EnumerationBudgetError(size, budget, f"vector enumeration q^{dim}")
    return _iproduct(range(field.q), repeat=dim)


def echelonize(field: GF, vectors: Sequence[Sequence[int]], width: int):
    """Reduced echelon basis of the span of the given vectors.

    Returns ``(basis_rows, leading_cols)``; used to take deterministic
    complements and reductions mod a subspace.
    """
    if not vectors:
        return [], []
    flat = bytes(x for v in vectors for x in v)
    rank, pivots, red = _backend.rref(flat, len(vectors), width, field.tables)
    rows = [tuple(red[r * width : (r + 1) * width]) for r in range(rank)]
    return rows, list(pivots)


def reduce_mod(field: GF, basis_rows: Sequence[Sequence[int]], leading: Sequence[int], vec: Sequence[int]) -> tuple[int, ...]:
    """Reduce ``vec`` modulo the echelonized subspace."""
    v = list(vec)
    for row, lead in zip(basis_rows, leading):
        c = v[lead]
        if c:
            cn = field.neg(c)
            for j, x in enumerate(row):
                if x:
                    v[j] = field.add(v[j], field.mul(cn, x))
    return tuple(v)
