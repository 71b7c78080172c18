"""Arithmetic in small finite fields and their polynomial rings.

A field GF(q) with q = p^e is capped at q <= 81 so everything runs off
precomputed tables.  A field element is an int code in range(q) whose base-p
digits are the coordinates on the power basis of the modulus, constant digit
first.  For prime fields the code is just the residue.

Polynomials over a field are tuples of element codes, constant coefficient
first, with no trailing zero; () is the zero polynomial.  All polynomial
helpers take the field as first argument.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as _dcfield
from functools import lru_cache

MAX_Q = 81

# Largest number of candidate polynomials we are willing to sieve when a
# count is requested by enumeration.  Keeps q <= 5, j <= 6 enumerable while
# routing larger parameter ranges to the cross-validated closed forms.
DEFAULT_ENUM_CAP = 30_000


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q):
    """Return (p, e) with q = p^e, or raise ValueError."""
    if q < 2:
        raise ValueError(f"q={q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            if not is_prime(p):
                raise ValueError(f"q={q} is not a prime power")
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise ValueError(f"q={q} is not a prime power")
            return p, e
    raise ValueError(f"q={q} is not a prime power")


def mobius(n):
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            result = -result
        d += 1
    if n > 1:
        result = -result
    return result


# ---------------------------------------------------------------------------
# Prime-field polynomial helpers, used only to pick and check the modulus.

def _zp_trim(f):
    i = len(f)
    while i and f[i - 1] == 0:
        i -= 1
    return tuple(f[:i])


def _zp_mod(p, a, b):
    a = list(a)
    db, lead = len(b) - 1, b[-1]
    inv_lead = pow(lead, p - 2, p)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            factor = c * inv_lead % p
            for k in range(db + 1):
                a[i - db + k] = (a[i - db + k] - factor * b[k]) % p
    return _zp_trim(a)


def _zp_irreducible(p, f):
    deg = len(f) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = tail + (1,)
            if len(_zp_mod(p, f, g)) == 0:
                return False
    return True


def _default_modulus(p, e):
    """Lexicographically least monic irreducible of degree e over Z_p."""
    if e == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=e):
        f = tail + (1,)
        if _zp_irreducible(p, f):
            return f
    raise AssertionError("no irreducible modulus found")


# ---------------------------------------------------------------------------

class Field:
    """GF(q), q <= 81, with table-backed arithmetic.

    Instances are interned per (q, modulus); building one computes the full
    multiplication, inverse, Frobenius and discrete-log tables.  ``zeta`` is
    the least primitive element in the constant-first coefficient ordering,
    and ``dlog[x]`` its discrete logarithm table (None at 0).
    """

    _interned = {}

    def __new__(cls, q, modulus=None):
        p, e = prime_power(q)
        if q > MAX_Q:
            raise ValueError(f"q={q} exceeds the table cap {MAX_Q}")
        if modulus is None:
            modulus = _default_modulus(p, e)
        modulus = tuple(c % p for c in modulus)
        key = (q, modulus)
        inst = cls._interned.get(key)
        if inst is not None:
            return inst
        if len(modulus) != e + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree e")
        if not _zp_irreducible(p, modulus):
            raise ValueError(f"modulus {modulus} is reducible over Z_{p}")
        inst = super().__new__(cls)
        inst.p, inst.e, inst.q = p, e, q
        inst.modulus = modulus
        inst._build_tables()
        cls._interned[key] = inst
        return inst

    def __repr__(self):
        return f"Field({self.q})"

    # -- construction ------------------------------------------------------

    def _build_tables(self):
        p, e, q = self.p, self.e, self.q
        self.zero, self.one = 0, 1

        def raw_mul(a, b):
            if e == 1:
                return a * b % p
            av = self.to_vec(a)
            bv = self.to_vec(b)
            prod = [0] * (2 * e - 1)
            for i, ai in enumerate(av):
                if ai:
                    for j, bj in enumerate(bv):
                        prod[i + j] = (prod[i + j] + ai * bj) % p
            rem = _zp_mod(p, prod, self.modulus)
            return self.from_vec(rem + (0,) * (e - len(rem)))

        self.add_t = [[(self._vec_add(a, b)) for b in range(q)] for a in range(q)]
        self.mul_t = [[raw_mul(a, b) for b in range(q)] for a in range(q)]
        self.neg_t = [self._vec_neg(a) for a in range(q)]
        self.frob_t = [self._pow_raw(a, p) for a in range(q)]

        self.zeta = self._least_primitive()
        self.dlog = [None] * q
        exp = [0] * max(q - 1, 1)
        x = 1
        for k in range(q - 1):
            exp[k] = x
            self.dlog[x] = k
            x = self.mul_t[x][self.zeta]
        self.dlog[1] = 0
        self.exp = exp
        self.inv_t = [None] + [exp[(q - 1 - self.dlog[a]) % (q - 1)] for a in range(1, q)]

    def _vec_add(self, a, b):
        p, e = self.p, self.e
        if e == 1:
            return (a + b) % p
        out = 0
        mult = 1
        for _ in range(e):
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def _vec_neg(self, a):
        p, e = self.p, self.e
        if e == 1:
            return (-a) % p
        out = 0
        mult = 1
        for _ in range(e):
            out += ((-a) % p) * mult
            a //= p
            mult *= p
        return out

    def _pow_raw(self, a, k):
        # Only used during table construction, before mul_t is complete for
        # fast paths; relies on mul_t rows already filled for needed args.
        result = 1
        base = a
        while k:
            if k & 1:
                result = self.mul_t[result][base]
            base = self.mul_t[base][base]
            k >>= 1
        return result

    def _least_primitive(self):
        q = self.q
        if q == 2:
            return 1
        target = q - 1
        for a in self._codes_by_vec_order():
            if a == 0:
                continue
            order = 1
            x = a
            while x != 1:
                x = self.mul_t[x][a]
                order += 1
                if order > target:
                    break
            if order == target:
                return a
        raise AssertionError("no primitive element found")

    def _codes_by_vec_order(self):
        return sorted(range(self.q), key=self.to_vec)

    # -- element arithmetic ------------------------------------------------

    def to_vec(self, a):
        p, e = self.p, self.e
        return tuple((a // p**i) % p for i in range(e))

    def from_vec(self, vec):
        p = self.p
        return sum((c % p) * p**i for i, c in enumerate(vec))

    def add(self, a, b):
        return self.add_t[a][b]

    def sub(self, a, b):
        return self.add_t[a][self.neg_t[b]]

    def neg(self, a):
        return self.neg_t[a]

    def mul(self, a, b):
        return self.mul_t[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inversion of 0 in " + repr(self))
        return self.inv_t[a]

    def pow(self, a, k):
        if k < 0:
            return self.pow(self.inv(a), -k)
        result = 1
        base = a
        while k:
            if k & 1:
                result = self.mul_t[result][base]
            base = self.mul_t[base][base]
            k >>= 1
        return result

    def frobenius(self, a, m=1):
        for _ in range(m % self.e if self.e > 1 else 0):
            a = self.frob_t[a]
        return a if self.e > 1 else a

    def minus_one_to(self, k):
        return self.one if k % 2 == 0 or self.p == 2 else self.neg_t[1]

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)


# ---------------------------------------------------------------------------
# Polynomials: tuples of codes, constant first, no trailing zeros.

def pnorm(f):
    i = len(f)
    while i and f[i - 1] == 0:
        i -= 1
    return tuple(f[:i])


def pdeg(f):
    return len(f) - 1


def padd(F, a, b):
    if len(a) < len(b):
        a, b = b, a
    add = F.add_t
    out = list(a)
    for i, c in enumerate(b):
        out[i] = add[out[i]][c]
    return pnorm(out)


def psub(F, a, b):
    neg = F.neg_t
    return padd(F, a, tuple(neg[c] for c in b))


def pscale(F, c, f):
    if c == 0:
        return ()
    row = F.mul_t[c]
    return tuple(row[x] for x in f)


def pmul(F, a, b):
    if not a or not b:
        return ()
    add, mul = F.add_t, F.mul_t
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            row = mul[ai]
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = add[out[i + j]][row[bj]]
    return pnorm(out)


def pdivmod(F, a, b):
    b = pnorm(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(pnorm(a))
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    quot = [0] * max(len(a) - db, 0)
    add, mul, neg = F.add_t, F.mul_t, F.neg_t
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i]
        if c:
            factor = mul[c][inv_lead]
            quot[i - db] = factor
            row = mul[factor]
            for k in range(db + 1):
                a[i - db + k] = add[a[i - db + k]][neg[row[b[k]]]]
    return pnorm(quot), pnorm(a)


def pmod(F, a, b):
    return pdivmod(F, a, b)[1]


def pmonic(F, f):
    f = pnorm(f)
    if not f or f[-1] == 1:
        return f
    return pscale(F, F.inv(f[-1]), f)


def pgcd(F, a, b):
    a, b = pnorm(a), pnorm(b)
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def ppowmod(F, base, k, mod):
    result = (1,)
    base = pmod(F, base, mod)
    while k:
        if k & 1:
            result = pmod(F, pmul(F, result, base), mod)
        base = pmod(F, pmul(F, base, base), mod)
        k >>= 1
    return result


def peval(F, f, x):
    acc = 0
    add, mul = F.add_t, F.mul_t
    for c in reversed(f):
        acc = add[mul[acc][x]][c]
    return acc


def monic_polys(F, d):
    """All monic polynomials of degree d, in constant-first lex order."""
    for tail in itertools.product(range(F.q), repeat=d):
        yield tail + (1,)


def is_irreducible(F, f):
    f = pnorm(f)
    deg = pdeg(f)
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for g in irreducibles(F, d):
            if not pmod(F, f, g):
                return False
    return True


def irreducibles(F, d):
    """Tuple of all monic irreducibles of degree d (cached per field)."""
    cache = getattr(F, "_irr_cache", None)
    if cache is None:
        cache = F._irr_cache = {}
    if d not in cache:
        found = []
        for f in monic_polys(F, d):
            if d == 1 or not any(
                not pmod(F, f, g)
                for dd in range(1, d // 2 + 1)
                for g in irreducibles(F, dd)
            ):
                found.append(f)
        cache[d] = tuple(found)
    return cache[d]


def smallest_irreducible_factor_degree(F, f):
    """Factor-free oracle by trial division; intended for cross-checks."""
    f = pmonic(F, f)
    deg = pdeg(f)
    if deg < 1:
        raise ValueError("need a nonconstant polynomial")
    for d in range(1, deg // 2 + 1):
        for g in irreducibles(F, d):
            if not pmod(F, f, g):
                return d
    return deg


def has_small_degree_factor(F, f, t):
    """Whether f has an irreducible factor of degree <= t.

    Runs a distinct-degree sieve: gcd(f, z^(q^d) - z) is nontrivial exactly
    when f has a factor of degree dividing d, so scanning d = 1..t detects
    precisely the factors of degree <= t.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    f = pmonic(F, f)
    deg = pdeg(f)
    if deg < 1:
        return False
    if t >= deg:
        return True
    h = (0, 1)
    for _ in range(t):
        h = ppowmod(F, h, F.q, f)
        g = pgcd(F, f, psub(F, h, (0, 1)))
        if pdeg(g) >= 1:
            return True
    return False


# ---------------------------------------------------------------------------
# Conjugations on polynomials with nonzero constant term.

def conjugate_star(F, f):
    """phi*(z) = phi(0)^-1 z^n phi(1/z): roots are sent to their inverses."""
    f = pnorm(f)
    if not f or f[0] == 0:
        raise ValueError("star conjugate needs a nonzero constant term")
    c = F.inv(f[0])
    row = F.mul_t[c]
    return tuple(row[x] for x in reversed(f))


def conjugate_tilde(F, q0, f):
    """Conjugate-inverse twist over GF(q0^2): roots go to theta^(-q0).

    F must be the quadratic extension GF(q0^2); the coefficient conjugation
    is the q0-power map.
    """
    if F.q != q0 * q0:
        raise ValueError("field must be GF(q0^2)")
    f = pnorm(f)
    if not f or f[0] == 0:
        raise ValueError("tilde conjugate needs a nonzero constant term")
    sigma = lambda x: F.pow(x, q0)
    c = sigma(F.inv(f[0]))
    row = F.mul_t[c]
    return tuple(row[sigma(x)] for x in reversed(f))


def det_residue(F, f):
    """Discrete log of (-1)^deg * f(0) with respect to F.zeta."""
    f = pnorm(f)
    if not f or f[0] == 0:
        raise ValueError("residue needs a nonzero constant term")
    val = F.mul(F.minus_one_to(pdeg(f)), f[0])
    return F.dlog[val]


def unitary_residue(F, q0, f):
    """Discrete log in the norm-one subgroup of GF(q0^2)*, order q0 + 1.

    The base point is zeta^(q0-1) for the field's primitive zeta.  Defined
    for f with f = tilde(f) via (-1)^deg f(0), otherwise via f(0)*tilde(f)(0);
    both land in the subgroup.
    """
    if F.q != q0 * q0:
        raise ValueError("field must be GF(q0^2)")
    f = pnorm(f)
    if not f or f[0] == 0:
        raise ValueError("residue needs a nonzero constant term")
    if conjugate_tilde(F, q0, f) == pmonic(F, f):
        val = F.mul(F.minus_one_to(pdeg(f)), f[0])
    else:
        val = F.mul(f[0], conjugate_tilde(F, q0, f)[0])
    table = getattr(F, "_norm_one_dlog", None)
    if table is None:
        gen = F.pow(F.zeta, q0 - 1)
        table = {}
        x = 1
        for k in range(q0 + 1):
            table[x] = k
            x = F.mul(x, gen)
        F._norm_one_dlog = table
    if val not in table:
        raise ValueError("value lies outside the norm-one subgroup")
    return table[val]


# ---------------------------------------------------------------------------
# Counting irreducibles of the five flavours.
#
# "N"      monic irreducible of degree j over GF(q), nonzero constant term
# "Nstar"  additionally fixed by the star conjugate
# "Mstar"  unordered pairs {f, f*} with f != f*
# "Ntilde" over GF(q^2), fixed by the tilde conjugate
# "Mtilde" unordered pairs {f, tilde(f)} over GF(q^2) with f != tilde(f)
#
# Enumeration is the ground truth wherever the candidate space fits the cap;
# the closed forms below are validated against it across that whole range and
# extend the counts to parameters where enumeration is impossible.

FAMILIES = ("N", "Nstar", "Mstar", "Ntilde", "Mtilde")


def count_monic_irreducible(q, j):
    """All monic irreducibles of degree j over GF(q), z included."""
    if j == 1:
        return q
    return sum(mobius(r) * q ** (j // r) for r in range(1, j + 1) if j % r == 0) // j


def _count_formula_N(q, j):
    return q - 1 if j == 1 else count_monic_irreducible(q, j)


def _count_formula_Nstar(q, j):
    if j == 1:
        return 2 if q % 2 == 1 else 1
    if j % 2 == 1:
        return 0
    m = j // 2
    total = sum(
        mobius(m // d) * (q**d + 1)
        for d in range(1, m + 1)
        if m % d == 0 and (m // d) % 2 == 1
    )
    if m & (m - 1) == 0:  # powers of two keep the rational points +-1
        total -= 2 if q % 2 == 1 else 1
    return total // j


def _count_formula_Ntilde(q, j):
    if j % 2 == 0:
        return 0
    return sum(mobius(j // d) * (q**d + 1) for d in range(1, j + 1) if j % d == 0) // j


def count_formula(family, q, j):
    if family == "N":
        return _count_formula_N(q, j)
    if family == "Nstar":
        return _count_formula_Nstar(q, j)
    if family == "Mstar":
        return (_count_formula_N(q, j) - _count_formula_Nstar(q, j)) // 2
    if family == "Ntilde":
        return _count_formula_Ntilde(q, j)
    if family == "Mtilde":
        return (_count_formula_N(q * q, j) - _count_formula_Ntilde(q, j)) // 2
    raise ValueError(f"unknown family {family!r}")


def count_enumerated(family, q, j, cap=DEFAULT_ENUM_CAP):
    """Count by explicit enumeration; ValueError when over the cap."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    base = q * q if family in ("Ntilde", "Mtilde") else q
    if base**j > cap:
        raise ValueError(
            f"enumeration space {base}^{j} exceeds cap {cap} for {family}"
        )
    F = Field(base)
    polys = [f for f in irreducibles(F, j) if f[0] != 0]
    if family == "N":
        return len(polys)
    if family in ("Nstar", "Mstar"):
        fixed = sum(1 for f in polys if conjugate_star(F, f) == f)
        return fixed if family == "Nstar" else (len(polys) - fixed) // 2
    fixed = sum(1 for f in polys if conjugate_tilde(F, q, f) == f)
    return fixed if family == "Ntilde" else (len(polys) - fixed) // 2


def _enumerable(base, j, cap):
    """Enumeration needs a constructible base field and a search space
    within the cap; the formulas carry every other parameter."""
    if base > MAX_Q or base**j > cap:
        return False
    try:
        prime_power(base)
    except ValueError:
        return False
    return True


def count_irreducibles(family, q, j, method="auto", cap=DEFAULT_ENUM_CAP):
    if method == "enumeration":
        return count_enumerated(family, q, j, cap)
    if method == "formula":
        return count_formula(family, q, j)
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    base = q * q if family in ("Ntilde", "Mtilde") else q
    if _enumerable(base, j, cap):
        return count_enumerated(family, q, j, cap)
    return count_formula(family, q, j)


@dataclass(frozen=True)
class CountTable:
    """Counts for one family at one q, j = 1..jmax, with provenance per j."""

    family: str
    q: int
    values: dict = _dcfield(default_factory=dict)
    provenance: dict = _dcfield(default_factory=dict)

    @classmethod
    def build(cls, family, q, jmax, method="auto", cap=DEFAULT_ENUM_CAP):
        values, prov = {}, {}
        for j in range(1, jmax + 1):
            base = q * q if family in ("Ntilde", "Mtilde") else q
            if method == "auto":
                use = "enumeration" if _enumerable(base, j, cap) else "formula"
            else:
                use = method
            values[j] = count_irreducibles(family, q, j, method=use, cap=cap)
            prov[j] = use
        return cls(family, q, values, prov)

    def __getitem__(self, j):
        return self.values[j]


def residue_class_counts(F, jmax):
    """Map (j, s) -> number of monic irreducibles of degree j over F with
    nonzero constant term and det_residue s, for j = 1..jmax."""
    counts = {}
    for j in range(1, jmax + 1):
        for f in irreducibles(F, j):
            if f[0] == 0:
                continue
            s = det_residue(F, f)
            counts[(j, s)] = counts.get((j, s), 0) + 1
    return counts
