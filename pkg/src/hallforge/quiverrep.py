"""Representations of finite acyclic quivers over F_q.

This is the model abelian category: hereditary, essentially small with
finite morphism spaces, linear over F_q, enough projectives, and nonzero
objects have nonzero class in the Grothendieck group (identified with
dimension vectors). The category object owns an isomorphism-class
registry, Hom/Ext/Aut computation, extension construction, Euler forms,
standard projectives and minimal resolutions.

Isomorphism labels are deterministic: for each dimension vector all
arrow-matrix tuples are enumerated lexicographically and partitioned into
orbits under the vertex-wise base-change group (orbit walk by group
generators); a class is labelled by the position of its lexicographically
least representative in that scan. ``is_isomorphic`` is the independent
check: exhaustive search of the Hom space for a vertex-wise invertible
element.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter
from itertools import product as _iproduct
from typing import Optional, Sequence

from hallforge import _backend
from hallforge.gf import (
    DEFAULT_BUDGET,
    EnumerationBudgetError,
    GF,
    Mat,
    block_matrix,
    echelonize,
    gf,
    rank_and_kernel,
    reduce_mod,
    solve,
)

KClass = tuple  # integer vector indexed by vertices
Morphism = tuple  # one Mat per vertex, target-dim x source-dim


class Quiver:
    """Finite acyclic quiver; acyclicity is enforced at construction."""

    def __init__(self, vertices: Sequence[str], arrows: Sequence[tuple[int, int]], name: str = ""):
        self.vertices = tuple(str(v) for v in vertices)
        self.arrows = tuple((int(s), int(t)) for s, t in arrows)
        self.name = name
        n = len(self.vertices)
        for s, t in self.arrows:
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"arrow ({s},{t}) out of range")
        graph: dict[int, list[int]] = {i: [] for i in range(n)}
        for s, t in self.arrows:
            graph[t].append(s)
        try:
            self.topo_order = tuple(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            raise ValueError("quiver must be acyclic") from exc

    @property
    def n(self) -> int:
        return len(self.vertices)

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({self.name or self.vertices}, arrows={self.arrows})"

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "arrows": [{"source": self.vertices[s], "target": self.vertices[t]} for s, t in self.arrows],
        }

    @classmethod
    def from_dict(cls, data: dict, name: str = "") -> "Quiver":
        verts = [str(v) for v in data["vertices"]]
        index = {v: i for i, v in enumerate(verts)}
        arrows = []
        for a in data["arrows"]:
            if isinstance(a, dict):
                s, t = a["source"], a["target"]
            else:
                s, t = a
            arrows.append((index[str(s)], index[str(t)]))
        return cls(verts, arrows, name=name)

    @classmethod
    def from_json_file(cls, path: str) -> "Quiver":
        with open(path) as fh:
            return cls.from_dict(json.load(fh), name=path)


FIXTURES = {
    "a1": lambda: Quiver(["1"], [], name="a1"),
    "a2": lambda: Quiver(["1", "2"], [(0, 1)], name="a2"),
    "kronecker": lambda: Quiver(["1", "2"], [(0, 1), (0, 1)], name="kronecker"),
}


def fixture(name: str) -> Quiver:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ValueError(f"unknown quiver fixture {name!r}; have {sorted(FIXTURES)}") from None


class Rep:
    """A representation: dimension vector plus one matrix per arrow."""

    __slots__ = ("quiver", "field", "dimvec", "maps")

    def __init__(self, quiver: Quiver, field: GF, dimvec: Sequence[int], maps: Sequence[Mat]):
        dimvec = tuple(int(d) for d in dimvec)
        maps = tuple(maps)
        if len(dimvec) != quiver.n or len(maps) != len(quiver.arrows):
            raise ValueError("dimvec/maps arity mismatch")
        for (s, t), m in zip(quiver.arrows, maps):
            if m.rows != dimvec[t] or m.cols != dimvec[s]:
                raise ValueError(f"arrow map shape {m.rows}x{m.cols} != {dimvec[t]}x{dimvec[s]}")
        self.quiver = quiver
        self.field = field
        self.dimvec = dimvec
        self.maps = maps

    @property
    def total_dim(self) -> int:
        return sum(self.dimvec)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def entries_key(self) -> bytes:
        return b"".join(m.entries for m in self.maps)

    def __eq__(self, other):
        return (
            isinstance(other, Rep)
            and self.quiver == other.quiver
            and self.field.q == other.field.q
            and self.dimvec == other.dimvec
            and self.entries_key() == other.entries_key()
        )

    def __hash__(self):
        return hash((self.quiver, self.field.q, self.dimvec, self.entries_key()))

    def __repr__(self):
        return f"Rep(dimvec={self.dimvec}, maps={[m.to_lists() for m in self.maps]})"


@dataclass(frozen=True, order=True)
class IsoLabel:
    """Canonical label of an isomorphism class: dimvec plus orbit index."""

    dimvec: tuple
    index: int

    @property
    def total(self) -> int:
        return sum(self.dimvec)

    def render(self) -> str:
        return f"[{','.join(map(str, self.dimvec))}]#{self.index}"

    @classmethod
    def parse(cls, text: str) -> "IsoLabel":
        dv, idx = text.rsplit("#", 1)
        return cls(tuple(int(x) for x in dv.strip("[]").split(",") if x != ""), int(idx))


@dataclass(frozen=True)
class Resolution:
    """Minimal projective resolution 0 -> P -> Q -> A -> 0."""

    p_rep: Rep
    q_rep: Rep
    incl: Morphism
    pmult: tuple
    qmult: tuple


class _OrbitTable:
    __slots__ = ("lookup", "reps", "sizes")

    def __init__(self, lookup, reps, sizes):
        self.lookup = lookup
        self.reps = reps
        self.sizes = sizes


def identity_morphism(rep: Rep) -> Morphism:
    return tuple(Mat.identity(rep.field, d) for d in rep.dimvec)


def compose(g: Morphism, f: Morphism) -> Morphism:
    """g after f, vertexwise."""
    return tuple(gm @ fm for gm, fm in zip(g, f))


def morphism_is_invertible(f: Morphism) -> bool:
    return all(m.rows == m.cols and m.is_invertible() for m in f)


class RepCategory:
    """rep(Q, F_q) with a sealed-by-construction deterministic registry.

    All query operations are pure; memo tables only ever insert values
    that equal what any other thread would insert, guarded by one lock.
    """

    def __init__(self, quiver: Quiver, q: int, budget: int = DEFAULT_BUDGET, cache=None):
        self.quiver = quiver
        self.q = q
        self.field = gf(q)
        self.budget = budget
        self.cache = cache
        self._lock = threading.Lock()
        self._orbits: dict[tuple, _OrbitTable] = {}
        self._aut: dict[IsoLabel, int] = {}
        self._hom_dim: dict[tuple, int] = {}
        self._ext_counts: dict[tuple, dict[IsoLabel, int]] = {}
        self._resolutions: dict[IsoLabel, Resolution] = {}
        self._paths: Optional[list[list[tuple]]] = None
        self.cache_stats = {"hits": 0, "misses": 0}

    # ------------------------------------------------------------------
    # basic objects

    def zero_rep(self) -> Rep:
        return Rep(
            self.quiver,
            self.field,
            (0,) * self.quiver.n,
            [Mat.zeros(self.field, 0, 0) for _ in self.quiver.arrows],
        )

    def simple(self, v: int) -> Rep:
        dv = [0] * self.quiver.n
        dv[v] = 1
        maps = [
            Mat.zeros(self.field, dv[t], dv[s]) for s, t in self.quiver.arrows
        ]
        return Rep(self.quiver, self.field, dv, maps)

    def _all_paths(self) -> list[list[tuple]]:
        """Paths from each vertex (tuples of arrow indices), by length then
        lexicographically; the trivial path is ()."""
        if self._paths is None:
            out = []
            for v in range(self.quiver.n):
                paths = [((), v)]
                frontier = [((), v)]
                while frontier:
                    nxt = []
                    for p, end in frontier:
                        for ai, (s, t) in enumerate(self.quiver.arrows):
                            if s == end:
                                nxt.append((p + (ai,), t))
                    nxt.sort()
                    paths.extend(nxt)
                    frontier = nxt
                out.append(paths)
            self._paths = out
        return self._paths

    def proj_basis(self, v: int) -> list[tuple]:
        """Basis of the standard projective at v: paths starting at v."""
        return self._all_paths()[v]

    def proj(self, v: int) -> Rep:
        paths = self.proj_basis(v)
        per_vertex: list[list[tuple]] = [[] for _ in range(self.quiver.n)]
        index = {}
        for p, end in paths:
            index[p] = (end, len(per_vertex[end]))
            per_vertex[end].append(p)
        dv = [len(b) for b in per_vertex]
        maps = []
        for ai, (s, t) in enumerate(self.quiver.arrows):
            m = bytearray(dv[t] * dv[s])
            for ci, p in enumerate(per_vertex[s]):
                _, ri = index[p + (ai,)]
                m[ri * dv[s] + ci] = 1
            maps.append(Mat(self.field, dv[t], dv[s], bytes(m)))
        return Rep(self.quiver, self.field, dv, maps)

    def projectives(self) -> list[Rep]:
        return [self.proj(v) for v in range(self.quiver.n)]

    def proj_dimvecs(self) -> list[tuple]:
        return [self.proj(v).dimvec for v in range(self.quiver.n)]

    def rep_from_mult(self, mult: Sequence[int]) -> Rep:
        """Direct sum of standard projectives with the given multiplicities."""
        out = self.zero_rep()
        for v, m in enumerate(mult):
            for _ in range(int(m)):
                out = self.direct_sum(out, self.proj(v))
        return out

    def direct_sum(self, a: Rep, b: Rep) -> Rep:
        dv = tuple(x + y for x, y in zip(a.dimvec, b.dimvec))
        maps = []
        for ai, (s, t) in enumerate(self.quiver.arrows):
            maps.append(
                block_matrix(
                    self.field,
                    [[a.maps[ai], None], [None, b.maps[ai]]],
                    [a.dimvec[t], b.dimvec[t]],
                    [a.dimvec[s], b.dimvec[s]],
                )
            )
        return Rep(self.quiver, self.field, dv, maps)

    # ------------------------------------------------------------------
    # Euler forms

    def euler(self, alpha: Sequence[int], beta: Sequence[int]) -> int:
        s = sum(a * b for a, b in zip(alpha, beta))
        for i, j in self.quiver.arrows:
            s -= alpha[i] * beta[j]
        return s

    def sym_euler(self, alpha: Sequence[int], beta: Sequence[int]) -> int:
        return self.euler(alpha, beta) + self.euler(beta, alpha)

    # ------------------------------------------------------------------
    # Hom spaces

    def hom_basis(self, a: Rep, b: Rep) -> list[Morphism]:
        """Basis of Hom(a, b): solutions of the intertwining conditions."""
        n = self.quiver.n
        offs = [0]
        for v in range(n):
            offs.append(offs[-1] + b.dimvec[v] * a.dimvec[v])
        nunk = offs[-1]
        rows: list[bytes] = []
        fld = self.field
        for ai, (i, j) in enumerate(self.quiver.arrows):
            amap, bmap = a.maps[ai], b.maps[ai]
            for r in range(b.dimvec[j]):
                for c in range(a.dimvec[i]):
                    row = bytearray(nunk)
                    # + f_j[r, k] * A_a[k, c]
                    for k in range(a.dimvec[j]):
                        x = amap[k, c]
                        if x:
                            idx = offs[j] + r * a.dimvec[j] + k
                            row[idx] = fld.add(row[idx], x)
                    # - B_a[r, k] * f_i[k, c]
                    for k in range(b.dimvec[i]):
                        x = bmap[r, k]
                        if x:
                            idx = offs[i] + k * a.dimvec[i] + c
                            row[idx] = fld.sub(row[idx], x)
                    rows.append(bytes(row))
        if rows:
            m = Mat(fld, len(rows), nunk, b"".join(rows))
            _, kernel = rank_and_kernel(m)
        else:
            kernel = [tuple(1 if i == k else 0 for i in range(nunk)) for k in range(nunk)]
        basis = []
        for vec in kernel:
            mats = []
            for v in range(n):
                seg = vec[offs[v] : offs[v + 1]]
                mats.append(Mat(fld, b.dimvec[v], a.dimvec[v], bytes(seg)))
            basis.append(tuple(mats))
        return basis

    def hom_dim(self, a: Rep, b: Rep) -> int:
        key = ("hom", self.label_of(a), self.label_of(b))
        with self._lock:
            if key in self._hom_dim:
                return self._hom_dim[key]
        d = len(self.hom_basis(a, b))
        with self._lock:
            self._hom_dim[key] = d
        return d

    def is_isomorphic(self, m: Rep, n: Rep) -> bool:
        """Exhaustive search of Hom(m, n) for a vertex-wise invertible map."""
        if m.dimvec != n.dimvec:
            return False
        basis = self.hom_basis(m, n)
        k = len(basis)
        if self.q**k > self.budget:
            raise EnumerationBudgetError(self.q**k, self.budget, f"iso search q^{k}")
        flat_basis, blocks, length = _flatten_morphism_basis(basis, m.dimvec, n.dimvec)
        return _backend.find_invertible_span(flat_basis, k, length, blocks, self.field.tables)

    def aut_order(self, rep_or_label) -> int:
        """|Aut(A)| by enumerating End(A) and counting invertible elements."""
        label = rep_or_label if isinstance(rep_or_label, IsoLabel) else self.label_of(rep_or_label)
        with self._lock:
            if label in self._aut:
                return self._aut[label]
        cached = self._cache_get(("aut", label.render()))
        if cached is not None:
            order = int(cached)
        else:
            rep = self.rep_of(label)
            basis = self.hom_basis(rep, rep)
            k = len(basis)
            if self.q**k > self.budget:
                raise EnumerationBudgetError(self.q**k, self.budget, f"Aut enumeration q^{k}")
            flat_basis, blocks, length = _flatten_morphism_basis(basis, rep.dimvec, rep.dimvec)
            order = _backend.count_invertible_span(flat_basis, k, length, blocks, self.field.tables)
            self._cache_put(("aut", label.render()), order)
        with self._lock:
            self._aut[label] = order
        return order

    # ------------------------------------------------------------------
    # extensions

    def ext_transversal(self, a: Rep, b: Rep) -> list[tuple]:
        """One cocycle per element of Ext^1(a, b) = coker(phi).

        The cocycle space is the full space of tuples e_a in
        Hom_k(a_{s(arrow)}, b_{t(arrow)}) (hereditary: no closure condition)
        and phi(f)_arrow = B f - f A ranges over the coboundaries. The
        transversal is the coordinate complement of the echelonized image.
        """
        fld = self.field
        woffs = [0]
        for s, t in self.quiver.arrows:
            woffs.append(woffs[-1] + b.dimvec[t] * a.dimvec[s])
        wdim = woffs[-1]
        image_vectors = []
        for v in range(self.quiver.n):
            for r in range(b.dimvec[v]):
                for c in range(a.dimvec[v]):
                    # phi of the elementary f with f_v[r,c] = 1
                    w = bytearray(wdim)
                    for ai, (i, j) in enumerate(self.quiver.arrows):
                        amap, bmap = a.maps[ai], b.maps[ai]
                        if i == v:
                            # (B_a f)[r', c'] = B_a[r', r] delta_{c, c'}
                            for rp in range(b.dimvec[j]):
                                x = bmap[rp, r]
                                if x:
                                    idx = woffs[ai] + rp * a.dimvec[i] + c
                                    w[idx] = fld.add(w[idx], x)
                        if j == v:
                            # -(f A_a)[r, c'] = -A_a[c, c']
                            for cp in range(a.dimvec[i]):
                                x = amap[c, cp]
                                if x:
                                    idx = woffs[ai] + r * a.dimvec[i] + cp
                                    w[idx] = fld.sub(w[idx], x)
                    image_vectors.append(tuple(w))
        basis_rows, leading = echelonize(fld, image_vectors, wdim)
        comp = [w for w in range(wdim) if w not in set(leading)]
        size = self.q ** len(comp)
        if size > self.budget:
            raise EnumerationBudgetError(size, self.budget, f"Ext transversal q^{len(comp)}")
        out = []
        for coeffs in _iproduct(range(self.q), repeat=len(comp)):
            w = [0] * wdim
            for idx, cf in zip(comp, coeffs):
                w[idx] = cf
            mats = []
            for ai, (s, t) in enumerate(self.quiver.arrows):
                seg = w[woffs[ai] : woffs[ai + 1]]
                mats.append(Mat(fld, b.dimvec[t], a.dimvec[s], bytes(seg)))
            out.append(tuple(mats))
        return out

    def ext_dim(self, a: Rep, b: Rep) -> int:
        return self.hom_dim(a, b) - self.euler(a.dimvec, b.dimvec)

    def middle_term(self, a: Rep, b: Rep, cocycle: Sequence[Mat]) -> Rep:
        """Middle of the extension of a by b given by the cocycle.

        Components are b_v (+) a_v with differential [[B, e], [0, A]];
        the zero cocycle gives the direct sum b (+) a.
        """
        dv = tuple(x + y for x, y in zip(b.dimvec, a.dimvec))
        maps = []
        for ai, (s, t) in enumerate(self.quiver.arrows):
            maps.append(
                block_matrix(
                    self.field,
                    [[b.maps[ai], cocycle[ai]], [None, a.maps[ai]]],
                    [b.dimvec[t], a.dimvec[t]],
                    [b.dimvec[s], a.dimvec[s]],
                )
            )
        return Rep(self.quiver, self.field, dv, maps)

    def ext_middle_counts(self, la: IsoLabel, lb: IsoLabel) -> dict[IsoLabel, int]:
        """|Ext^1(A, B)_C| for every middle class C, in one sweep."""
        key = (la, lb)
        with self._lock:
            if key in self._ext_counts:
                return self._ext_counts[key]
        cached = self._cache_get(("extmid", la.render(), lb.render()))
        if cached is not None:
            counts = {IsoLabel.parse(k): int(v) for k, v in cached.items()}
        else:
            a, b = self.rep_of(la), self.rep_of(lb)
            counts = {}
            for cocycle in self.ext_transversal(a, b):
                mid = self.label_of(self.middle_term(a, b, cocycle))
                counts[mid] = counts.get(mid, 0) + 1
            self._cache_put(
                ("extmid", la.render(), lb.render()),
                {k.render(): v for k, v in counts.items()},
            )
        with self._lock:
            self._ext_counts[key] = counts
        return counts

    def ext_count_with_middle(self, la: IsoLabel, lb: IsoLabel, lc: IsoLabel) -> int:
        if tuple(x + y for x, y in zip(la.dimvec, lb.dimvec)) != lc.dimvec:
            return 0
        return self.ext_middle_counts(la, lb).get(lc, 0)

    # ------------------------------------------------------------------
    # registry

    def _orbit_table(self, dimvec: tuple) -> _OrbitTable:
        dimvec = tuple(dimvec)
        with self._lock:
            tab = self._orbits.get(dimvec)
        if tab is not None:
            return tab
        tab = self._build_orbits(dimvec)
        with self._lock:
            self._orbits.setdefault(dimvec, tab)
            return self._orbits[dimvec]

    def _build_orbits(self, dimvec: tuple) -> _OrbitTable:
        fld = self.field
        q = self.q
        shapes = [(dimvec[t], dimvec[s]) for s, t in self.quiver.arrows]
        sizes = [r * c for r, c in shapes]
        total = sum(sizes)
        count = q**total
        if count > self.budget:
            raise EnumerationBudgetError(count, self.budget, f"registry for dimvec {dimvec}: q^{total}")
        gens = self._glgens(dimvec)
        lookup: dict[bytes, int] = {}
        reps: list[bytes] = []
        orbit_sizes: list[int] = []
        for tup in _iproduct(range(q), repeat=total):
            seed = bytes(tup)
            if seed in lookup:
                continue
            idx = len(reps)
            reps.append(seed)
            queue = [seed]
            lookup[seed] = idx
            size = 1
            while queue:
                cur = queue.pop()
                for v, g, ginv in gens:
                    nxt = bytearray(cur)
                    off = 0
                    for ai, (s, t) in enumerate(self.quiver.arrows):
                        r, c = shapes[ai]
                        if s != v and t != v:
                            off += sizes[ai]
                            continue
                        blk = bytes(cur[off : off + sizes[ai]])
                        if t == v:
                            blk = _backend.matmul(g.entries, r, r, blk, c, fld.tables)
                        if s == v:
                            blk = _backend.matmul(blk, r, c, ginv.entries, c, fld.tables)
                        nxt[off : off + sizes[ai]] = blk
                        off += sizes[ai]
                    key = bytes(nxt)
                    if key not in lookup:
                        lookup[key] = idx
                        queue.append(key)
                        size += 1
            orbit_sizes.append(size)
        return _OrbitTable(lookup, reps, orbit_sizes)

    def _glgens(self, dimvec: tuple) -> list[tuple[int, Mat, Mat]]:
        """Generators of the product of GL_{d_v}: transvections plus one
        primitive scaling per vertex."""
        fld = self.field
        gens = []
        for v, d in enumerate(dimvec):
            if d == 0:
                continue
            if self.q > 2:
                g = fld.multiplicative_generator()
                m = bytearray(Mat.identity(fld, d).entries)
                m[0] = g
                mg = Mat(fld, d, d, bytes(m))
                mi = bytearray(Mat.identity(fld, d).entries)
                mi[0] = fld.inv(g)
                gens.append((v, mg, Mat(fld, d, d, bytes(mi))))
            for i in range(d):
                for j in range(d):
                    if i == j:
                        continue
                    m = bytearray(Mat.identity(fld, d).entries)
                    m[i * d + j] = 1
                    minv = bytearray(Mat.identity(fld, d).entries)
                    minv[i * d + j] = fld.neg(1)
                    gens.append((v, Mat(fld, d, d, bytes(m)), Mat(fld, d, d, bytes(minv))))
        return gens

    def label_of(self, rep: Rep) -> IsoLabel:
        tab = self._orbit_table(rep.dimvec)
        return IsoLabel(rep.dimvec, tab.lookup[rep.entries_key()])

    def rep_of(self, label: IsoLabel) -> Rep:
        tab = self._orbit_table(label.dimvec)
        seed = tab.reps[label.index]
        mats = []
        off = 0
        for s, t in self.quiver.arrows:
            r, c = label.dimvec[t], label.dimvec[s]
            mats.append(Mat(self.field, r, c, seed[off : off + r * c]))
            off += r * c
        return Rep(self.quiver, self.field, label.dimvec, mats)

    def orbit_size(self, label: IsoLabel) -> int:
        return self._orbit_table(label.dimvec).sizes[label.index]

    def classes(self, dimvec: Sequence[int]) -> list[IsoLabel]:
        dimvec = tuple(dimvec)
        tab = self._orbit_table(dimvec)
        return [IsoLabel(dimvec, i) for i in range(len(tab.reps))]

    def dimvecs_up_to(self, bound: int) -> list[tuple]:
        out = []
        n = self.quiver.n
        for total in range(bound + 1):
            out.extend(
                dv
                for dv in sorted(_compositions(total, n))
            )
        return out

    def classes_up_to(self, bound: int) -> list[IsoLabel]:
        """Registry of all classes with total dimension <= bound."""
        out = []
        for dv in self.dimvecs_up_to(bound):
            out.extend(self.classes(dv))
        return out

    def zero_label(self) -> IsoLabel:
        return self.label_of(self.zero_rep())

    # ------------------------------------------------------------------
    # minimal resolutions

    def radical_echelon(self, rep: Rep, v: int):
        """Echelonized basis of the radical at v (incoming arrow images)."""
        cols = []
        for ai, (s, t) in enumerate(self.quiver.arrows):
            if t != v:
                continue
            m = rep.maps[ai]
            for c in range(m.cols):
                cols.append(tuple(m[r, c] for r in range(m.rows)))
        return echelonize(self.field, cols, rep.dimvec[v])

    def _apply_path(self, rep: Rep, path: tuple, vec):
        for ai in path:
            vec = rep.maps[ai].apply(vec)
        return vec

    def minimal_resolution(self, label_or_rep) -> Resolution:
        label = (
            label_or_rep if isinstance(label_or_rep, IsoLabel) else self.label_of(label_or_rep)
        )
        with self._lock:
            if label in self._resolutions:
                return self._resolutions[label]
        a = self.rep_of(label)
        res = self._minimal_resolution_impl(a)
        with self._lock:
            self._resolutions.setdefault(label, res)
            return self._resolutions[label]

    def _minimal_resolution_impl(self, a: Rep) -> Resolution:
        fld = self.field
        nq = self.quiver.n
        if a.is_zero():
            zero = self.zero_rep()
            return Resolution(zero, zero, tuple(Mat.zeros(fld, 0, 0) for _ in range(nq)), (0,) * nq, (0,) * nq)
        # projective cover: tops and lifts
        lifts: list[list[tuple]] = []
        qmult = []
        for v in range(nq):
            rows, leading = self.radical_echelon(a, v)
            comp = [c for c in range(a.dimvec[v]) if c not in set(leading)]
            lifts.append([tuple(1 if i == c else 0 for i in range(a.dimvec[v])) for c in comp])
            qmult.append(len(comp))
        qrep = self.rep_from_mult(qmult)
        # basis items of qrep at each vertex, in direct-sum order
        items: list[list[tuple]] = [[] for _ in range(nq)]
        for v in range(nq):
            for copy in range(qmult[v]):
                for p, end in self.proj_basis(v):
                    items[end].append((v, copy, p))
        gmats = []
        for j in range(nq):
            cols = []
            for (v, copy, p) in items[j]:
                cols.append(self._apply_path(a, p, lifts[v][copy]))
            m = bytearray(a.dimvec[j] * len(cols))
            for ci, col in enumerate(cols):
                for r, x in enumerate(col):
                    m[r * len(cols) + ci] = x
            gmats.append(Mat(fld, a.dimvec[j], len(cols), bytes(m)))
        for j in range(nq):
            if gmats[j].rank() != a.dimvec[j]:
                raise AssertionError("projective cover is not surjective")
        # kernel subrepresentation
        kbases = []
        for j in range(nq):
            _, kb = rank_and_kernel(gmats[j])
            kbases.append(kb)
        pdim = tuple(len(kb) for kb in kbases)
        pmaps = []
        for ai, (s, t) in enumerate(self.quiver.arrows):
            qa = qrep.maps[ai]
            cols = []
            if kbases[t]:
                kt = Mat(
                    fld,
                    qrep.dimvec[t],
                    len(kbases[t]),
                    bytes(
                        kbases[t][c][r]
                        for r in range(qrep.dimvec[t])
                        for c in range(len(kbases[t]))
                    ),
                )
            for vec in kbases[s]:
                img = qa.apply(vec)
                if not kbases[t]:
                    if any(img):
                        raise AssertionError("kernel not closed under arrow maps")
                    continue
                sol = solve(kt, img)
                if sol is None:
                    raise AssertionError("kernel not closed under arrow maps")
                cols.append(sol[0])
            m = bytearray(pdim[t] * pdim[s])
            for ci, col in enumerate(cols):
                for r, x in enumerate(col):
                    m[r * pdim[s] + ci] = x
            pmaps.append(Mat(fld, pdim[t], pdim[s], bytes(m)))
        prep = Rep(self.quiver, fld, pdim, pmaps)
        incl = []
        for j in range(nq):
            m = bytearray(qrep.dimvec[j] * pdim[j])
            for ci, vec in enumerate(kbases[j]):
                for r, x in enumerate(vec):
                    m[r * pdim[j] + ci] = x
            incl.append(Mat(fld, qrep.dimvec[j], pdim[j], bytes(m)))
        # minimality: the kernel must land in the radical of Q
        for j in range(nq):
            rows, leading = self.radical_echelon(qrep, j)
            for vec in kbases[j]:
                if any(reduce_mod(fld, rows, leading, vec)):
                    raise AssertionError("resolution not minimal: kernel meets a top")
        pmult = self.proj_mult_from_dimvec(pdim)
        if pmult is None:
            raise AssertionError("kernel of a projective cover must be projective")
        return Resolution(prep, qrep, tuple(incl), pmult, tuple(qmult))

    def proj_mult_from_dimvec(self, dimvec: Sequence[int]) -> Optional[tuple]:
        """Multiplicities m with dimvec = sum m_v dim P_v, or None.

        The projective dimension vectors form a unitriangular system in
        topological order, so the solution is unique when it exists.
        """
        pdims = self.proj_dimvecs()
        rem = list(dimvec)
        mult = [0] * self.quiver.n
        for v in self.quiver.topo_order:
            m = rem[v]
            if m < 0:
                return None
            mult[v] = m
            if m:
                for j in range(self.quiver.n):
                    rem[j] -= m * pdims[v][j]
        if any(rem):
            return None
        if any(x < 0 for x in rem):
            return None
        return tuple(mult)

    # ------------------------------------------------------------------
    # persistent cache hooks

    def _cache_get(self, key_parts):
        if self.cache is None:
            return None
        val = self.cache.get(self._cache_key(key_parts))
        if val is None:
            self.cache_stats["misses"] += 1
        else:
            self.cache_stats["hits"] += 1
        return val

    def _cache_put(self, key_parts, value):
        if self.cache is not None:
            self.cache.put(self._cache_key(key_parts), value)

    def _cache_key(self, key_parts):
        return (
            "quiver",
            json.dumps(self.quiver.to_dict(), sort_keys=True),
            self.q,
        ) + tuple(key_parts)


def _flatten_morphism_basis(basis, src_dimvec, tgt_dimvec):
    """Flatten per-vertex morphism matrices for the span kernels.

    Only square vertex blocks participate in invertibility checks; the
    blocks list carries (offset, n) per vertex.
    """
    blocks = []
    off = 0
    for ds, dt in zip(src_dimvec, tgt_dimvec):
        if ds == dt:
            blocks.append((off, ds))
        else:
            blocks.append((off, -1))  # marks non-square; never invertible
        off += ds * dt
    if any(n < 0 for _, n in blocks):
        raise ValueError("morphism blocks must be square for invertibility search")
    length = off
    flat = [b"".join(m.entries for m in mor) for mor in basis]
    return flat, tuple(b for b in blocks if b[1] > 0), length


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
