"""Truncated power series with exact coefficients over Q or Q(zeta_m).

The series here expand infinite products of the shape
prod_{i>=1} (1 - c a^i u^j) through the classical q-exponential identity

    prod_{i>=1} (1 - x a^i) = sum_k (-1)^k a^(k(k+1)/2) x^k / prod_{r<=k} (1 - a^r),

which the test suite verifies against a high-truncation direct product before
anything else relies on it.  On top of that sit the generating series for the
proportion of matrices whose characteristic polynomial has no irreducible
factor of degree <= t, for the full general linear group and for each
determinant coset of the special linear group.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclo import CycNum, CycRing
from .gf import Field, count_irreducibles, residue_class_counts


class Series:
    """Fixed-order truncated power series.

    ``ring`` is None for rational coefficients or a CycRing; arithmetic
    requires matching order and ring.
    """

    __slots__ = ("ring", "coeffs")

    def __init__(self, coeffs, ring=None):
        self.ring = ring
        if ring is None:
            self.coeffs = [Fraction(c) if not isinstance(c, Fraction) else c for c in coeffs]
        else:
            self.coeffs = [ring.coerce(c) for c in coeffs]

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, order, ring=None):
        z = Fraction(0) if ring is None else ring.zero
        return cls([z] * (order + 1), ring)

    @classmethod
    def one(cls, order, ring=None):
        s = cls.zero(order, ring)
        s.coeffs[0] = Fraction(1) if ring is None else ring.one
        return s

    @classmethod
    def geometric(cls, order, ring=None):
        """1/(1 - u)."""
        o = Fraction(1) if ring is None else ring.one
        return cls([o] * (order + 1), ring)

    # -- basics ------------------------------------------------------------

    @property
    def order(self):
        return len(self.coeffs) - 1

    def coeff(self, n):
        return self.coeffs[n]

    def _check(self, other):
        if not isinstance(other, Series):
            raise ValueError("expected a Series")
        if other.order != self.order or other.ring is not self.ring:
            raise ValueError("series order/ring mismatch")

    def __add__(self, other):
        self._check(other)
        return Series([a + b for a, b in zip(self.coeffs, other.coeffs)], self.ring)

    def __sub__(self, other):
        self._check(other)
        return Series([a - b for a, b in zip(self.coeffs, other.coeffs)], self.ring)

    def __mul__(self, other):
        self._check(other)
        n = self.order
        zero = Fraction(0) if self.ring is None else self.ring.zero
        out = [zero] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j in range(n + 1 - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] = out[i + j] + a * b
        return Series(out, self.ring)

    def scale(self, c):
        if self.ring is not None:
            c = self.ring.coerce(c)
        else:
            c = Fraction(c)
        return Series([c * a for a in self.coeffs], self.ring)

    def pow(self, k):
        if k < 0:
            return self.reciprocal().pow(-k)
        result = Series.one(self.order, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def reciprocal(self):
        c0 = self.coeffs[0]
        one = Fraction(1) if self.ring is None else self.ring.one
        if self.ring is None:
            if c0 == 0:
                raise ZeroDivisionError("reciprocal of a non-unit series")
            inv0 = one / c0
        else:
            if c0 != self.ring.one:
                raise ValueError("cyclotomic reciprocal implemented for unit constant term")
            inv0 = one
        n = self.order
        out = [inv0] + [Fraction(0) if self.ring is None else self.ring.zero] * n
        for k in range(1, n + 1):
            acc = None
            for i in range(1, k + 1):
                a = self.coeffs[i]
                if a:
                    term = a * out[k - i]
                    acc = term if acc is None else acc + term
            if acc is not None:
                out[k] = -(inv0 * acc)
        return Series(out, self.ring)

    def to_ring(self, ring):
        if self.ring is not None:
            raise ValueError("already cyclotomic")
        return Series(self.coeffs, ring)

    def rationalize(self):
        """Project a cyclotomic series with rational coefficients back to Q."""
        if self.ring is None:
            return self
        return Series([c.rational for c in self.coeffs])

    def __eq__(self, other):
        return (
            isinstance(other, Series)
            and self.ring is other.ring
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        head = ", ".join(str(c) for c in self.coeffs[:5])
        return f"Series([{head}, ...], order={self.order})"


# ---------------------------------------------------------------------------
# Euler factors.

def euler_base_series(a, c, j, order, ring=None):
    """prod_{i>=1} (1 - c a^i u^j), truncated to the given order.

    ``a`` is a Fraction with |a| < 1; ``c`` is a rational or ring element.
    """
    a = Fraction(a)
    if not -1 < a < 1:
        raise ValueError("need |a| < 1")
    out = Series.one(order, ring)
    if ring is not None:
        c = ring.coerce(c)
    else:
        c = Fraction(c)
    kmax = order // j
    poch = Fraction(1)  # prod_{r<=k} (1 - a^r)
    apow = Fraction(1)  # a^k
    tri = Fraction(1)  # a^(k(k+1)/2)
    cpow = Fraction(1) if ring is None else ring.one
    for k in range(1, kmax + 1):
        apow *= a
        tri *= apow
        poch *= 1 - apow
        cpow = cpow * c
        coeff = Fraction((-1) ** k) * tri / poch
        out.coeffs[j * k] = out.coeffs[j * k] + cpow * coeff
    return out


def euler_factor_series(q, j, m, order):
    """(prod_{i>=1} (1 - u^j q^{-ij}))^m with exact rational coefficients."""
    if q < 2 or j < 1:
        raise ValueError("need q >= 2 and j >= 1")
    base = euler_base_series(Fraction(1, q**j), 1, j, order)
    return base.pow(m)


def euler_direct_product_series(a, c, j, order, imax, ring=None):
    """Truncated prod_{i=1..imax} (1 - c a^i u^j), the cross-check oracle."""
    a = Fraction(a)
    out = Series.one(order, ring)
    if ring is not None:
        c = ring.coerce(c)
    apow = Fraction(1)
    for _ in range(imax):
        apow *= a
        factor = Series.one(order, ring)
        if j <= order:
            factor.coeffs[j] = -(c * apow) if ring is not None else -Fraction(c) * apow
        out = out * factor
    return out


# ---------------------------------------------------------------------------
# No-small-factor generating series.

def gl_no_small_factor_series(q, t, order):
    """Coefficient n is the proportion of GL_n(q) whose characteristic
    polynomial has no irreducible factor of degree <= t."""
    if t < 1:
        raise ValueError("t must be >= 1")
    out = Series.geometric(order)
    for j in range(1, t + 1):
        out = out * euler_factor_series(q, j, count_irreducibles("N", q, j), order)
    return out


def sl_coset_series(q, t, mu, order):
    """Coefficient n (n >= 1) is the proportion, inside the determinant coset
    with det = zeta^mu, of elements with no charpoly factor of degree <= t.

    Computed in Q(zeta_{q-1}) by weighting the determinant-graded refinements
    of the generating series with the characters of the det-class group; the
    result is rational and is returned over Q.  The constant coefficient is
    set to 1 by convention.
    """
    if not 0 <= mu < max(q - 1, 1):
        raise ValueError("coset label out of range")
    F = Field(q)  # also validates that q is a prime power
    if t < 1:
        raise ValueError("t must be >= 1")
    ring = CycRing(q - 1)
    counts = residue_class_counts(F, t)
    total = Series.zero(order, ring)
    for a in range(q - 1):
        if a == 0:
            K = gl_no_small_factor_series(q, t, order).to_ring(ring)
        else:
            K = Series.one(order, ring)
            for j in range(1, t + 1):
                for s in range(q - 1):
                    c = counts.get((j, s), 0)
                    if c:
                        base = euler_base_series(
                            Fraction(1, q**j), ring.zeta_pow(a * s), j, order, ring
                        )
                        K = K * base.pow(c)
        total = total + K.scale(ring.zeta_pow(-a * mu))
    out = total.rationalize()
    out.coeffs[0] = Fraction(1)
    return out


# ---------------------------------------------------------------------------
# Telescoping residue products.  With a nontrivial character weight the full
# product over irreducibles collapses to 1; these builders expose the
# truncated partial products so the collapse can be checked exactly.

def residue_product_series(q, a, order):
    """prod over monic irreducibles phi (nonzero constant term, any degree)
    of (1 - zeta^{a r(phi)} u^{deg phi}), truncated."""
    ring = CycRing(q - 1)
    F = Field(q)
    counts = residue_class_counts(F, order)
    out = Series.one(order, ring)
    for (d, s), c in sorted(counts.items()):
        factor = Series.one(order, ring)
        factor.coeffs[d] = -ring.zeta_pow(a * s)
        out = out * factor.pow(c)
    return out


def unitary_residue_product_series(q0, a, order):
    """Unitary analogue over GF(q0^2): self-conjugate irreducibles contribute
    (1 - omega^{s(phi)} u^deg), conjugate pairs (1 - omega^{s(phi)} u^{2 deg}),
    with omega = zeta_{q0+1}^a."""
    from .gf import conjugate_tilde, irreducibles, unitary_residue

    ring = CycRing(q0 + 1)
    F = Field(q0 * q0)
    out = Series.one(order, ring)
    for d in range(1, order + 1):
        for f in irreducibles(F, d):
            if not f[0]:
                continue
            g = conjugate_tilde(F, q0, f)
            s = unitary_residue(F, q0, f)
            if g == f:
                step = d
            elif f < g:
                step = 2 * d
            else:
                continue
            if step > order:
                continue
            factor = Series.one(order, ring)
            factor.coeffs[step] = -ring.zeta_pow(a * s)
            out = out * factor
    return out
