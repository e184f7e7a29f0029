"""The Hall algebra of a quiver-representation category, its twisted and
extended versions, Green's coproduct and the Hopf pairing.

Basis symbols are pairs ``(IsoLabel, kvec)`` denoting ``[A] * K_alpha`` in
that (fixed normal) order; plain ``[A]`` is ``kvec = 0``. Elements are
finitely supported sums with coefficients in Q(sqrt(q)).

Normalization. The product follows the extension-count convention

    [A] <> [B] = sum_C |Ext^1(A,B)_C| / |Hom(A,B)| . [C],

and the coproduct and Hopf pairing are the Green/Riedtmann forms written
in the same basis:

    Delta([A]) = sum t^{<B,C>} g^A_{B,C} . [B] (x) [C],
    ([A] K_a, [B] K_b) = delta_{A,B} |Aut(A)| t^{(a,b)},

where g^A_{B,C} = |Ext^1(B,C)_A| |Aut(A)| / (|Hom(B,C)| |Aut(B)| |Aut(C)|)
is the classical subobject count (number of subobjects of A isomorphic to
C with quotient isomorphic to B). This triple satisfies the counit axioms
and the adjunction (x * y, z) = (x (x) y, Delta z) exactly; rescaling the
coproduct denominator to 1/|Aut(A)| alone, or inverting the pairing
weight, breaks both (the verification suites demonstrate this).

Coproduct variants: ``plain`` has no K-insertion; ``kplus`` dresses the
left tensor factor with K_{cl C}; ``kminus`` dresses the right factor with
K_{cl B}. The two dressed variants are the coproducts of the positive and
negative halves used by the Drinfeld-double verifier, and are algebra
homomorphisms for the componentwise product; ``plain`` is not.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from hallforge.coeffs import Coeff, CoeffRing, FormalSum
from hallforge.quiverrep import IsoLabel, RepCategory

Symbol = tuple  # (IsoLabel, kvec)

COPRODUCT_VARIANTS = ("plain", "kplus", "kminus")


def _addk(a: Iterable[int], b: Iterable[int]) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


class ExtendedHall:
    """Twisted + extended Hall algebra over a fixed RepCategory."""

    def __init__(self, cat: RepCategory):
        self.cat = cat
        self.ring = CoeffRing(cat.q)
        self._diamond_memo: dict[tuple, list] = {}
        self._zero_k = (0,) * cat.quiver.n

    # ------------------------------------------------------------------
    # element constructors

    def sym(self, label: IsoLabel, kvec=None) -> Symbol:
        return (label, tuple(kvec) if kvec is not None else self._zero_k)

    def element(self, label: IsoLabel, kvec=None) -> FormalSum:
        return FormalSum([(self.sym(label, kvec), self.ring.one)])

    def one(self) -> FormalSum:
        return self.element(self.cat.zero_label())

    def k_element(self, kvec) -> FormalSum:
        return self.element(self.cat.zero_label(), tuple(kvec))

    def is_k_free(self, x: FormalSum) -> bool:
        return all(kvec == self._zero_k for (_, kvec) in x.terms)

    # ------------------------------------------------------------------
    # products

    def diamond_constants(self, la: IsoLabel, lb: IsoLabel) -> list[tuple[IsoLabel, Fraction]]:
        """[A] <> [B] structure constants as exact rationals."""
        key = (la, lb)
        memo = self._diamond_memo
        if key in memo:
            return memo[key]
        counts = self.cat.ext_middle_counts(la, lb)
        hom = self.cat.hom_dim(self.cat.rep_of(la), self.cat.rep_of(lb))
        denom = self.cat.q**hom
        out = [(lc, Fraction(n, denom)) for lc, n in sorted(counts.items())]
        memo[key] = out
        return out

    def diamond(self, x: FormalSum, y: FormalSum) -> FormalSum:
        """Untwisted Hall product; defined on K-free elements."""
        if not (self.is_k_free(x) and self.is_k_free(y)):
            raise ValueError("diamond is defined on K-free elements; use star")
        out = FormalSum()
        for (la, _), cx in x:
            for (lb, _), cy in y:
                c = cx * cy
                for lc, frac in self.diamond_constants(la, lb):
                    out.add_term(self.sym(lc), c * self.ring.from_rational(frac))
        return out

    def star(self, x: FormalSum, y: FormalSum) -> FormalSum:
        """Twisted product on the extended algebra.

        On symbols: [A]K_a * [B]K_b = t^{(a, cl B)} t^{<A,B>}
        sum_C c_C [C] K_{a+b}, K-symbols straightened to normal order.
        """
        cat = self.cat
        out = FormalSum()
        for (la, ka), cx in x:
            for (lb, kb), cy in y:
                tw = cat.sym_euler(ka, lb.dimvec) + cat.euler(la.dimvec, lb.dimvec)
                c = cx * cy * self.ring.tpow(tw)
                knew = _addk(ka, kb)
                for lc, frac in self.diamond_constants(la, lb):
                    out.add_term((lc, knew), c * self.ring.from_rational(frac))
        return out

    # ------------------------------------------------------------------
    # coproduct, counit

    def _splittings(self, la: IsoLabel):
        for db in self.cat.dimvecs_up_to(la.total):
            if any(x > y for x, y in zip(db, la.dimvec)):
                continue
            dc = tuple(y - x for x, y in zip(db, la.dimvec))
            for lb in self.cat.classes(db):
                for lc in self.cat.classes(dc):
                    yield lb, lc

    def coproduct_symbol(self, symbol: Symbol, variant: str = "plain") -> list[tuple[Symbol, Symbol, Coeff]]:
        """Terms of Delta([A] K_g) as (left symbol, right symbol, coeff)."""
        if variant not in COPRODUCT_VARIANTS:
            raise ValueError(f"unknown coproduct variant {variant!r}")
        la, kg = symbol
        cat = self.cat
        aut_a = cat.aut_order(la)
        out = []
        for lb, lc in self._splittings(la):
            cnt = cat.ext_count_with_middle(lb, lc, la)
            if not cnt:
                continue
            hom = cat.hom_dim(cat.rep_of(lb), cat.rep_of(lc))
            g = Fraction(cnt * aut_a, cat.q**hom * cat.aut_order(lb) * cat.aut_order(lc))
            coeff = self.ring.tpow(cat.euler(lb.dimvec, lc.dimvec)) * self.ring.from_rational(g)
            if variant == "plain":
                left, right = (lb, kg), (lc, kg)
            elif variant == "kplus":
                left, right = (lb, _addk(kg, lc.dimvec)), (lc, kg)
            else:
                left, right = (lb, kg), (lc, _addk(kg, lb.dimvec))
            out.append((left, right, coeff))
        return out

    def coproduct(self, x: FormalSum, variant: str = "plain") -> FormalSum:
        """Coproduct as a FormalSum over pairs of symbols.

        The completed tensor product is realized componentwise: each
        graded component of the output is a finite exact sum.
        """
        out = FormalSum()
        for symbol, c in x:
            for left, right, coeff in self.coproduct_symbol(symbol, variant):
                out.add_term((left, right), c * coeff)
        return out

    def counit(self, x: FormalSum) -> Coeff:
        """eps([A] K_a) = delta_{A,0} (and so eps(K_a) = 1)."""
        total = self.ring.zero
        for (la, _), c in x:
            if la.total == 0:
                total = total + c
        return total

    # ------------------------------------------------------------------
    # Hopf pairing

    def pairing_symbols(self, a: Symbol, b: Symbol) -> Coeff:
        (la, ka), (lb, kb) = a, b
        if la != lb:
            return self.ring.zero
        w = self.cat.aut_order(la)
        return self.ring.from_rational(w) * self.ring.tpow(self.cat.sym_euler(ka, kb))

    def pairing(self, x: FormalSum, y: FormalSum) -> Coeff:
        total = self.ring.zero
        for sa, ca in x:
            for sb, cb in y:
                p = self.pairing_symbols(sa, sb)
                if not p.is_zero():
                    total = total + ca * cb * p
        return total

    def pairing_tensor(self, tensor: FormalSum, x: FormalSum, y: FormalSum) -> Coeff:
        """((x (x) y), T) with the componentwise pairing on the product."""
        total = self.ring.zero
        for (left, right), c in tensor:
            pl = self.pairing(x, FormalSum([(left, self.ring.one)]))
            if pl.is_zero():
                continue
            pr = self.pairing(y, FormalSum([(right, self.ring.one)]))
            if pr.is_zero():
                continue
            total = total + c * pl * pr
        return total

    # ------------------------------------------------------------------
    # tensor-square helpers (componentwise star)

    def tensor_star(self, s: FormalSum, t: FormalSum) -> FormalSum:
        out = FormalSum()
        for (l1, r1), c1 in s:
            for (l2, r2), c2 in t:
                left = self.star(FormalSum([(l1, self.ring.one)]), FormalSum([(l2, self.ring.one)]))
                right = self.star(FormalSum([(r1, self.ring.one)]), FormalSum([(r2, self.ring.one)]))
                c = c1 * c2
                for ls, lc in left:
                    for rs, rc in right:
                        out.add_term((ls, rs), c * lc * rc)
        return out

    def coproduct_taus(self, x: FormalSum, first: bool, variant: str = "plain") -> FormalSum:
        """(Delta (x) 1) or (1 (x) Delta) applied to a tensor element."""
        out = FormalSum()
        for (left, right), c in x:
            if first:
                for l2, m2, coeff in self.coproduct_symbol(left, variant):
                    out.add_term((l2, m2, right), c * coeff)
            else:
                for m2, r2, coeff in self.coproduct_symbol(right, variant):
                    out.add_term((left, m2, r2), c * coeff)
        return out

    def grading(self, symbol: Symbol) -> tuple:
        return symbol[0].dimvec
